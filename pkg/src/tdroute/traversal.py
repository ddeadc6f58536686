"""Arc traversal-time procedures.

Crossing an arc can span several speed intervals, so the traversal time
depends on the departure instant. Two families of procedures compute it:

* ``att`` / ``att_linear`` walk the intervals sequentially, consuming the
  remaining distance one interval at a time: O(K) per call. They are the
  reference implementations the fast variants are checked against.
* ``fatt`` / ``bounded_fatt`` / ``l_fatt`` binary-search the arrival
  interval over precomputed per-arc prefix sums of the distance coverable
  in each interval (the :class:`AelTable`): O(log K) per call, or
  O(log Q) when the search window can be bounded.

Departures past the measured horizon follow the graph's policy: under
"static" the remainder is covered at the last measured speed in closed
form; under "periodic" whole repeats of the pattern are skipped in O(1)
using the total distance coverable per period, then one in-period search
runs. Both keep the per-call complexity bounds intact.

Instrumentation: an :class:`OpCounter` tallies ``steps`` (sequential
interval visits) and ``probes`` (arrival-search iterations over the
prefix table: the first-candidate check plus every bisection step).
Constant-time guards such as the horizon-boundary test and period
skipping are not probes.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .model import (
    CONSTANT,
    LINEAR,
    POLICIES,
    STATIC,
    Arc,
    TdGraph,
    TimeDivision,
    linear_coeffs,
    locate_interval,
)

# Below this magnitude (m/s^2) the speed line is treated as flat and the
# traversal time degrades to distance/speed, avoiding cancellation.
FLAT_SLOPE = 1e-12


@dataclass
class OpCounter:
    """Operation tallies used by complexity assertions and the bench."""

    probes: int = 0
    steps: int = 0


@dataclass(frozen=True)
class TraversalResult:
    """Cost of one arc traversal plus the interval the arrival lies in.

    ``arrival_interval`` is the index of departure+cost under the graph's
    policy; feeding it back as the ``hint`` of the next call from the
    arrived node makes that call's interval location O(1).
    """

    cost: float
    arrival_interval: int


@dataclass
class AelTable:
    """Per-arc prefix sums of the distance coverable in each interval.

    ``rows[i][j]`` is the distance covered on arc ``i`` from tau_0 through
    the end of interval ``j``; rows are strictly increasing because speeds
    are strictly positive. ``window_bounds[i]`` caches the smallest valid
    search window for arc ``i`` (see :func:`compute_q`).
    """

    rows: list[list[float]]
    window_bounds: list[int] = field(default_factory=list)


def effective_length(arc: Arc, division: TimeDivision, k: int) -> float:
    """Distance (m) coverable on ``arc`` during interval ``k``."""
    if not 0 <= k < division.intervals:
        raise ValueError(f"interval index {k} out of range")
    points = division.breakpoints
    t0, t1 = points[k], points[k + 1]
    if arc.profile.kind == CONSTANT:
        return arc.profile.values[k] * (t1 - t0)
    slope, intercept = linear_coeffs(arc.profile, division, k)
    return slope * (t1 * t1 - t0 * t0) * 0.5 + intercept * (t1 - t0)


def build_ael(graph: TdGraph) -> AelTable:
    """Prefix-sum every arc's interval distances; O(mK) time and space."""
    rows = []
    for arc in graph.arcs:
        row = [effective_length(arc, graph.division, 0)]
        for k in range(1, graph.division.intervals):
            row.append(row[-1] + effective_length(arc, graph.division, k))
        rows.append(row)
    table = AelTable(rows=rows)
    table.window_bounds = [
        compute_q(arc, table, i) for i, arc in enumerate(graph.arcs)
    ]
    return table


def compute_q(arc: Arc, ael: AelTable, index: int) -> int:
    """Smallest integer Q such that every interval covers >= length/Q.

    Bounds the arrival search of :func:`bounded_fatt` to Q consecutive
    intervals. Computed once per arc at preprocessing time.
    """
    row = ael.rows[index]
    shortest = row[0]
    for j in range(1, len(row)):
        shortest = min(shortest, row[j] - row[j - 1])
    return max(1, math.ceil(arc.length / shortest))


def att(
    arc: Arc,
    division: TimeDivision,
    policy: str,
    tau: float,
    counter: OpCounter | None = None,
) -> TraversalResult:
    """Traversal time by sequential interval scan; O(K) worst case."""
    _require_kind(arc, CONSTANT)
    _require_policy(policy)
    if tau < 0.0:
        raise ValueError("departure instant must be non-negative")
    points = division.breakpoints
    speeds = arc.profile.values
    length = arc.length
    horizon = points[-1]
    last = division.intervals - 1
    t = tau
    if t >= horizon:
        if policy == STATIC:
            return _finish(division, policy, tau, length / speeds[-1])
        t = math.fmod(t, horizon)
    k = locate_interval(division, t, policy)
    if speeds[k] * (points[k + 1] - t) >= length:
        return _finish(division, policy, tau, length / speeds[k])
    remaining = length - speeds[k] * (points[k + 1] - t)
    cursor = k + 1
    while cursor <= last:
        if counter is not None:
            counter.steps += 1
        span = speeds[cursor] * (points[cursor + 1] - points[cursor])
        if span >= remaining:
            cost = (points[cursor] - t) + remaining / speeds[cursor]
            return _finish(division, policy, tau, cost)
        remaining -= span
        cursor += 1
    if policy == STATIC:
        cost = (horizon - t) + remaining / speeds[-1]
        return _finish(division, policy, tau, cost)
    # Periodic: total up one period, skip whole repeats, walk the rest.
    total = 0.0
    for j in range(last + 1):
        if counter is not None:
            counter.steps += 1
        total += speeds[j] * (points[j + 1] - points[j])
    repeats, remaining = divmod(remaining, total)
    cursor = 0
    while cursor < last:
        if counter is not None:
            counter.steps += 1
        span = speeds[cursor] * (points[cursor + 1] - points[cursor])
        if span >= remaining:
            break
        remaining -= span
        cursor += 1
    cost = (
        (horizon - t)
        + repeats * horizon
        + points[cursor]
        + remaining / speeds[cursor]
    )
    return _finish(division, policy, tau, cost)


def fatt(
    arc: Arc,
    ael: AelTable,
    index: int,
    division: TimeDivision,
    policy: str,
    tau: float,
    hint: int | None = None,
    counter: OpCounter | None = None,
) -> TraversalResult:
    """Traversal time via binary search over prefix sums; O(log K)."""
    _require_kind(arc, CONSTANT)
    return _fatt_constant(
        arc, ael.rows[index], division, policy, tau, hint, counter, None
    )


def bounded_fatt(
    arc: Arc,
    ael: AelTable,
    index: int,
    division: TimeDivision,
    policy: str,
    tau: float,
    q: int,
    hint: int | None = None,
    counter: OpCounter | None = None,
) -> TraversalResult:
    """Like :func:`fatt` with the search confined to Q intervals.

    Valid only when every interval of the arc covers at least length/Q,
    which holds exactly when ``q >= compute_q(arc, ...)``; the cached
    per-arc bound makes that an O(1) check.
    """
    _require_kind(arc, CONSTANT)
    if q < 1:
        raise ValueError("window bound must be at least 1")
    if q < ael.window_bounds[index]:
        raise ValueError(
            f"window bound {q} too small: some interval covers less "
            f"than length/{q}"
        )
    return _fatt_constant(
        arc, ael.rows[index], division, policy, tau, hint, counter, q
    )


def att_linear(
    arc: Arc,
    division: TimeDivision,
    policy: str,
    tau: float,
    counter: OpCounter | None = None,
) -> TraversalResult:
    """Sequential scan for linear-speed profiles; O(K) worst case.

    Inside the final interval the remaining distance is converted to time
    by solving the quadratic distance integral in closed form.
    """
    _require_kind(arc, LINEAR)
    _require_policy(policy)
    if tau < 0.0:
        raise ValueError("departure instant must be non-negative")
    points = division.breakpoints
    speeds = arc.profile.values
    length = arc.length
    horizon = points[-1]
    last = division.intervals - 1
    t = tau
    if t >= horizon:
        if policy == STATIC:
            return _finish(division, policy, tau, length / speeds[-1])
        t = math.fmod(t, horizon)
    k = locate_interval(division, t, policy)
    slope, intercept = linear_coeffs(arc.profile, division, k)
    first = _linear_span(slope, intercept, t, points[k + 1])
    if first >= length:
        return _finish(
            division, policy, tau, _travel_time(slope, intercept, t, length)
        )
    remaining = length - first
    cursor = k + 1
    while cursor <= last:
        if counter is not None:
            counter.steps += 1
        span = effective_length(arc, division, cursor)
        if span >= remaining:
            slope, intercept = linear_coeffs(arc.profile, division, cursor)
            cost = (points[cursor] - t) + _travel_time(
                slope, intercept, points[cursor], remaining
            )
            return _finish(division, policy, tau, cost)
        remaining -= span
        cursor += 1
    if policy == STATIC:
        cost = (horizon - t) + remaining / speeds[-1]
        return _finish(division, policy, tau, cost)
    total = 0.0
    for j in range(last + 1):
        if counter is not None:
            counter.steps += 1
        total += effective_length(arc, division, j)
    repeats, remaining = divmod(remaining, total)
    cursor = 0
    while cursor < last:
        if counter is not None:
            counter.steps += 1
        span = effective_length(arc, division, cursor)
        if span >= remaining:
            break
        remaining -= span
        cursor += 1
    slope, intercept = linear_coeffs(arc.profile, division, cursor)
    cost = (
        (horizon - t)
        + repeats * horizon
        + points[cursor]
        + _travel_time(slope, intercept, points[cursor], remaining)
    )
    return _finish(division, policy, tau, cost)


def l_fatt(
    arc: Arc,
    ael: AelTable,
    index: int,
    division: TimeDivision,
    policy: str,
    tau: float,
    hint: int | None = None,
    counter: OpCounter | None = None,
) -> TraversalResult:
    """Binary-search traversal for linear-speed profiles; O(log K)."""
    _require_kind(arc, LINEAR)
    _require_policy(policy)
    if tau < 0.0:
        raise ValueError("departure instant must be non-negative")
    row = ael.rows[index]
    points = division.breakpoints
    speeds = arc.profile.values
    length = arc.length
    horizon = points[-1]
    last = division.intervals - 1
    t = tau
    if t >= horizon:
        if policy == STATIC:
            return _finish(division, policy, tau, length / speeds[-1])
        t = math.fmod(t, horizon)
    k = locate_interval(division, t, policy, hint)
    slope, intercept = linear_coeffs(arc.profile, division, k)
    first = _linear_span(slope, intercept, t, points[k + 1])
    if first >= length:
        return _finish(
            division, policy, tau, _travel_time(slope, intercept, t, length)
        )
    remaining = length - first
    within = row[last] - row[k]
    if remaining <= within:
        stop, consumed = _search_arrival(row, k + 1, remaining, last, counter)
        slope, intercept = linear_coeffs(arc.profile, division, stop)
        cost = (points[stop] - t) + _travel_time(
            slope, intercept, points[stop], remaining - consumed
        )
        return _finish(division, policy, tau, cost)
    if policy == STATIC:
        cost = (horizon - t) + (remaining - within) / speeds[-1]
        return _finish(division, policy, tau, cost)
    repeats, leftover = divmod(remaining - within, row[last])
    stop, consumed = _search_arrival(row, 0, leftover, last, counter)
    slope, intercept = linear_coeffs(arc.profile, division, stop)
    cost = (
        (horizon - t)
        + repeats * horizon
        + points[stop]
        + _travel_time(slope, intercept, points[stop], leftover - consumed)
    )
    return _finish(division, policy, tau, cost)


def interp_piecewise_linear(
    samples: list[tuple[float, float]], tau: float
) -> float:
    """Linear interpolation of (instant, value) samples at ``tau``.

    Kept as the point of comparison for models that store traversal times
    directly: interpolating sampled traversal times is not exact for
    interval-speed networks, which the exact procedures demonstrate.
    """
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    instants = [s[0] for s in samples]
    if any(b <= a for a, b in zip(instants, instants[1:])):
        raise ValueError("samples must be sorted by instant")
    if tau < instants[0] or tau > instants[-1]:
        raise ValueError("instant outside the sampled range")
    k = min(bisect_right(instants, tau) - 1, len(samples) - 2)
    t0, f0 = samples[k]
    t1, f1 = samples[k + 1]
    return (f1 - f0) / (t1 - t0) * (tau - t0) + f0


def _require_kind(arc: Arc, kind: str) -> None:
    if arc.profile.kind != kind:
        raise ValueError(
            f"procedure requires a {kind} profile, got {arc.profile.kind}"
        )


def _require_policy(policy: str) -> None:
    if policy not in POLICIES:
        raise ValueError(f"unknown horizon policy {policy!r}")


def _finish(
    division: TimeDivision, policy: str, tau: float, cost: float
) -> TraversalResult:
    return TraversalResult(cost, locate_interval(division, tau + cost, policy))


def _search_arrival(
    row: list[float],
    start: int,
    a: float,
    hi: int,
    counter: OpCounter | None,
) -> tuple[int, float]:
    """Find the interval j in [start, hi] whose cumulative span holds ``a``.

    ``a`` is the residual distance with the start of interval ``start`` as
    the departure instant. Returns (j, distance consumed before j), i.e.
    the interval satisfying row[j-1]-base <= a <= row[j]-base. The first
    candidate is checked directly before bisecting, so traversals that
    finish in the very next interval cost a single probe.
    """
    base = row[start - 1] if start > 0 else 0.0
    if counter is not None:
        counter.probes += 1
    if a <= row[start] - base:
        return start, 0.0
    lo = start + 1
    while True:
        if counter is not None:
            counter.probes += 1
        mid = (lo + hi) >> 1
        before = row[mid - 1] - base
        if a < before:
            hi = mid - 1
        elif a > row[mid] - base:
            lo = mid + 1
        else:
            return mid, before


def _fatt_constant(
    arc: Arc,
    row: list[float],
    division: TimeDivision,
    policy: str,
    tau: float,
    hint: int | None,
    counter: OpCounter | None,
    window: int | None,
) -> TraversalResult:
    _require_policy(policy)
    if tau < 0.0:
        raise ValueError("departure instant must be non-negative")
    points = division.breakpoints
    speeds = arc.profile.values
    length = arc.length
    horizon = points[-1]
    last = division.intervals - 1
    t = tau
    if t >= horizon:
        if policy == STATIC:
            return _finish(division, policy, tau, length / speeds[-1])
        t = math.fmod(t, horizon)
    k = locate_interval(division, t, policy, hint)
    if speeds[k] * (points[k + 1] - t) >= length:
        return _finish(division, policy, tau, length / speeds[k])
    remaining = length - speeds[k] * (points[k + 1] - t)
    within = row[last] - row[k]
    if remaining <= within:
        hi = last if window is None else min(k + 1 + window, last)
        stop, consumed = _search_arrival(row, k + 1, remaining, hi, counter)
        cost = (points[stop] - t) + (remaining - consumed) / speeds[stop]
        return _finish(division, policy, tau, cost)
    if policy == STATIC:
        cost = (horizon - t) + (remaining - within) / speeds[-1]
        return _finish(division, policy, tau, cost)
    repeats, leftover = divmod(remaining - within, row[last])
    hi = last if window is None else min(window, last)
    stop, consumed = _search_arrival(row, 0, leftover, hi, counter)
    cost = (
        (horizon - t)
        + repeats * horizon
        + points[stop]
        + (leftover - consumed) / speeds[stop]
    )
    return _finish(division, policy, tau, cost)


def _linear_span(slope: float, intercept: float, t0: float, t1: float) -> float:
    """Distance covered between t0 and t1 under speed slope*t+intercept."""
    return slope * (t1 * t1 - t0 * t0) * 0.5 + intercept * (t1 - t0)


def _travel_time(slope: float, intercept: float, start: float, dist: float) -> float:
    """Time to cover ``dist`` departing at ``start`` on a linear speed.

    Solves slope*c^2/2 + (slope*start + intercept)*c = dist for the unique
    positive root, written in the cancellation-free conjugate form
    2*dist / (u + sqrt(u^2 + 2*slope*dist)).
    """
    if dist <= 0.0:
        return 0.0
    speed = slope * start + intercept
    if abs(slope) < FLAT_SLOPE:
        return dist / speed
    disc = speed * speed + 2.0 * slope * dist
    if disc < 0.0:
        raise AssertionError("speed line vanished inside the interval")
    return 2.0 * dist / (speed + math.sqrt(disc))
