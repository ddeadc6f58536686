"""Network model for roads whose speed changes over time.

A measured horizon [0, T) is split into K half-open intervals
[tau_k, tau_{k+1}); the same division is shared by every arc. Each arc
carries one speed per interval ("constant" profiles) or one speed per
breakpoint, interpolated linearly inside each interval ("linear"
profiles). Instants at or beyond T are resolved by the graph's extension
policy: "static" freezes the last measured behaviour, "periodic" repeats
the whole pattern with period T.

All times are seconds, lengths are meters, speeds are meters/second.
Graphs are immutable after construction and safe to share between
concurrent queries.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

CONSTANT = "constant"
LINEAR = "linear"
KINDS = (CONSTANT, LINEAR)

STATIC = "static"
PERIODIC = "periodic"
POLICIES = (STATIC, PERIODIC)

# Periodic linear profiles must wrap around smoothly; the first and last
# breakpoint speeds may differ by at most this much (m/s).
SEAM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TimeDivision:
    """Breakpoints 0 = tau_0 < tau_1 < ... < tau_K = T, in seconds."""

    breakpoints: tuple[float, ...]

    def __post_init__(self) -> None:
        points = tuple(float(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", points)
        if len(points) < 2:
            raise ValueError("a time division needs at least one interval")
        if points[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if not all(math.isfinite(b) for b in points):
            raise ValueError("breakpoints must be finite")
        for left, right in zip(points, points[1:]):
            if not left < right:
                raise ValueError("non-increasing breakpoints")

    @property
    def intervals(self) -> int:
        """Number of intervals K."""
        return len(self.breakpoints) - 1

    @property
    def horizon(self) -> float:
        """End of the measured horizon T."""
        return self.breakpoints[-1]


@dataclass(frozen=True)
class SpeedProfile:
    """Per-arc speeds: K values for "constant", K+1 for "linear"."""

    kind: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("profile needs at least one speed")
        for v in values:
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError("non-positive speed")

    def expected_values(self, intervals: int) -> int:
        """How many speeds this kind needs for a K-interval division."""
        return intervals if self.kind == CONSTANT else intervals + 1


@dataclass(frozen=True)
class Arc:
    """Directed road segment with a fixed length and a speed profile."""

    src: int
    dst: int
    length: float
    profile: SpeedProfile

    def __post_init__(self) -> None:
        object.__setattr__(self, "length", float(self.length))
        if self.src == self.dst:
            raise ValueError("self-loop arc")
        if self.src < 0 or self.dst < 0:
            raise ValueError("node id out of range")
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise ValueError("non-positive arc length")


@dataclass(frozen=True)
class TdGraph:
    """Directed network sharing one time division across all arcs.

    Arcs keep their construction order (so external arc indices stay
    stable); adjacency is grouped by source node for scanning.
    """

    nodes: int
    division: TimeDivision
    policy: str
    kind: str
    arcs: tuple[Arc, ...]
    _adjacency: tuple[tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if self.nodes < 1:
            raise ValueError("node count must be at least 1")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown horizon policy {self.policy!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        outgoing: list[list[int]] = [[] for _ in range(self.nodes)]
        for index, arc in enumerate(self.arcs):
            if arc.src >= self.nodes or arc.dst >= self.nodes:
                raise ValueError("node id out of range")
            if arc.profile.kind != self.kind:
                raise ValueError("arc profile kind does not match the graph")
            expected = arc.profile.expected_values(self.division.intervals)
            if len(arc.profile.values) != expected:
                raise ValueError(
                    f"speed count mismatch: expected {expected}, "
                    f"got {len(arc.profile.values)}"
                )
            if (
                self.policy == PERIODIC
                and self.kind == LINEAR
                and abs(arc.profile.values[0] - arc.profile.values[-1])
                > SEAM_TOLERANCE
            ):
                raise ValueError(
                    "periodic linear profile must begin and end at the same speed"
                )
            outgoing[arc.src].append(index)
        object.__setattr__(
            self, "_adjacency", tuple(tuple(ids) for ids in outgoing)
        )

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    def out_arcs(self, node: int) -> tuple[int, ...]:
        """Indices of the arcs leaving ``node``."""
        if not 0 <= node < self.nodes:
            raise ValueError("node id out of range")
        return self._adjacency[node]


def locate_interval(
    division: TimeDivision,
    t: float,
    policy: str = STATIC,
    hint: int | None = None,
) -> int:
    """Index k with tau_k <= t' < tau_{k+1} for the policy-mapped instant.

    Instants at or past the horizon map to the last interval (static) or
    wrap modulo T (periodic). A ``hint`` index is verified with a single
    comparison pair and used when it still brackets the instant; a stale
    hint silently falls back to binary search.
    """
    if t < 0.0:
        raise ValueError("time instant must be non-negative")
    points = division.breakpoints
    last = division.intervals - 1
    if t >= points[-1]:
        if policy == STATIC:
            return last
        if policy != PERIODIC:
            raise ValueError(f"unknown horizon policy {policy!r}")
        t = math.fmod(t, points[-1])
    if hint is not None and 0 <= hint <= last:
        if points[hint] <= t < points[hint + 1]:
            return hint
    return bisect_right(points, t) - 1


def linear_coeffs(
    profile: SpeedProfile, division: TimeDivision, k: int
) -> tuple[float, float]:
    """Slope (m/s^2) and intercept (m/s) of the speed line in interval k."""
    points = division.breakpoints
    t0, t1 = points[k], points[k + 1]
    v0, v1 = profile.values[k], profile.values[k + 1]
    span = t1 - t0
    return (v1 - v0) / span, (v0 * t1 - v1 * t0) / span


def speed_at(graph: TdGraph, arc: Arc, t: float) -> float:
    """Speed on ``arc`` at absolute instant ``t`` under the graph's policy."""
    return profile_speed(arc.profile, graph.division, graph.policy, t)


def profile_speed(
    profile: SpeedProfile, division: TimeDivision, policy: str, t: float
) -> float:
    """Speed of a single profile at instant ``t`` (policy extended)."""
    if t < 0.0:
        raise ValueError("time instant must be non-negative")
    if profile.kind == CONSTANT:
        return profile.values[locate_interval(division, t, policy)]
    points = division.breakpoints
    if t >= points[-1]:
        if policy == STATIC:
            # Frozen continuation: the last measured speed holds after T.
            return profile.values[-1]
        if policy != PERIODIC:
            raise ValueError(f"unknown horizon policy {policy!r}")
        t = math.fmod(t, points[-1])
    k = bisect_right(points, t) - 1
    if t == points[k]:
        # Exact at breakpoints regardless of rounding in the coefficients.
        return profile.values[k]
    slope, intercept = linear_coeffs(profile, division, k)
    return slope * t + intercept
