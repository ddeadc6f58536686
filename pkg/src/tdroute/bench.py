"""Operation-count benchmark comparing traversal strategies.

Each cell of a sweep builds one two-node graph whose single arc is long
enough (``span`` of the total distance coverable over the horizon) that a
traversal crosses a sizable share of the K intervals, then runs the same
departure instants through every requested strategy. Operation counters
are the primary evidence (deterministic, machine independent): sequential
strategies report interval steps, binary-search strategies report probes.
Wall time is recorded as secondary data.

Every strategy in a cell must produce the same costs (relative tolerance
1e-9) and identical arrival intervals; a mismatch raises
:class:`ChecksumMismatch` so divergent code is never benchmarked.

Cells may run in parallel threads (``TDROUTE_THREADS``); records are
merged in deterministic (K, strategy) order regardless.
"""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .model import CONSTANT, LINEAR, STATIC, Arc, SpeedProfile, TdGraph, TimeDivision
from .routing import ATT, ATT_LINEAR, B_FATT, FATT, L_FATT, STRATEGIES
from .traversal import (
    OpCounter,
    att,
    att_linear,
    bounded_fatt,
    build_ael,
    fatt,
    l_fatt,
)

CSV_HEADER = "strategy,K,n,m,Q,queries,probes,wall_ns"

_LINEAR_STRATEGIES = {ATT_LINEAR, L_FATT}
_SPEED_RANGE = (5.0, 30.0)
# Departures are drawn from the first few percent of the horizon so the
# scan is forced across most of the division.
_DEPARTURE_SPAN = 0.05


class ChecksumMismatch(RuntimeError):
    """Strategies disagreed on a cell's results."""


@dataclass(frozen=True)
class SweepConfig:
    """One benchmark sweep: the K values, strategies, and load per cell."""

    k_values: tuple[int, ...]
    strategies: tuple[str, ...]
    queries: int
    seed: int = 0
    span: float = 0.9
    policy: str = STATIC
    window: int | None = None  # force a uniform Q for b-fatt cells

    def __post_init__(self) -> None:
        if not self.k_values:
            raise ValueError("sweep needs at least one K value")
        if any(k < 2 for k in self.k_values):
            raise ValueError("K must be at least 2")
        if self.queries < 0:
            raise ValueError("query count must be non-negative")
        if not 0.0 < self.span < 1.0:
            raise ValueError("span must be inside (0, 1)")
        if self.window is not None and self.window < 1:
            raise ValueError("window bound must be at least 1")
        unknown = [s for s in self.strategies if s not in STRATEGIES]
        if unknown:
            raise ValueError(f"unknown strategies: {unknown}")
        kinds = {s in _LINEAR_STRATEGIES for s in self.strategies}
        if len(kinds) > 1:
            raise ValueError(
                "cannot mix constant-kind and linear-kind strategies "
                "in one sweep"
            )


@dataclass
class BenchRecord:
    """Measurements for one (strategy, K) cell."""

    strategy: str
    intervals: int
    nodes: int
    arcs: int
    window_bound: int | None
    queries: int
    probes: int
    wall_ns: int
    max_probes_per_query: int = 0

    def csv_row(self) -> str:
        q = "" if self.window_bound is None else str(self.window_bound)
        return (
            f"{self.strategy},{self.intervals},{self.nodes},{self.arcs},"
            f"{q},{self.queries},{self.probes},{self.wall_ns}"
        )


def run_sweep(config: SweepConfig) -> list[BenchRecord]:
    """All cells of the sweep, ordered by (K, strategy position)."""
    threads = _thread_budget()
    ks = sorted(config.k_values)
    if threads <= 1 or len(ks) <= 1:
        cells = [run_cell(k, config) for k in ks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(lambda k: run_cell(k, config), ks))
    return [record for cell in cells for record in cell]


def run_cell(k_intervals: int, config: SweepConfig) -> list[BenchRecord]:
    """One K cell: identical queries through every strategy."""
    rng = random.Random(config.seed * 1_000_003 + k_intervals)
    linear = any(s in _LINEAR_STRATEGIES for s in config.strategies)
    kind = LINEAR if linear else CONSTANT

    division = TimeDivision(tuple(float(i) for i in range(k_intervals + 1)))
    count = k_intervals + (1 if linear else 0)
    speeds = [rng.uniform(*_SPEED_RANGE) for _ in range(count)]
    if linear and config.policy != STATIC:
        speeds[-1] = speeds[0]
    profile = SpeedProfile(kind, tuple(speeds))

    total = _total_span(profile, division, kind)
    length = config.span * total
    if config.window is not None:
        # Shrink the arc until the requested uniform window is valid.
        shortest = _shortest_span(profile, division, kind)
        length = min(length, config.window * shortest * 0.99)
    arc = Arc(0, 1, length, profile)
    graph = TdGraph(2, division, config.policy, kind, (arc,))
    table = build_ael(graph)
    natural_q = table.window_bounds[0]
    q = natural_q if config.window is None else max(config.window, natural_q)

    horizon = division.horizon
    departures = [
        rng.uniform(0.0, _DEPARTURE_SPAN * horizon)
        for _ in range(config.queries)
    ]

    records = []
    reference: list[tuple[float, int]] | None = None
    for strategy in config.strategies:
        counter = OpCounter()
        results: list[tuple[float, int]] = []
        max_per_query = 0
        started = time.perf_counter_ns()
        for tau in departures:
            before = counter.probes + counter.steps
            out = _dispatch(
                strategy, arc, table, graph, tau, q, counter
            )
            max_per_query = max(
                max_per_query, counter.probes + counter.steps - before
            )
            results.append((out.cost, out.arrival_interval))
        wall = time.perf_counter_ns() - started
        if reference is None:
            reference = results
        else:
            _verify(reference, results, k_intervals, strategy)
        records.append(
            BenchRecord(
                strategy=strategy,
                intervals=k_intervals,
                nodes=graph.nodes,
                arcs=graph.arc_count,
                window_bound=q if strategy == B_FATT else None,
                queries=config.queries,
                probes=counter.probes + counter.steps,
                wall_ns=wall,
                max_probes_per_query=max_per_query,
            )
        )
    return records


def to_csv(records: list[BenchRecord]) -> str:
    lines = [CSV_HEADER]
    lines.extend(record.csv_row() for record in records)
    return "\n".join(lines) + "\n"


def _dispatch(strategy, arc, table, graph, tau, q, counter):
    division = graph.division
    policy = graph.policy
    if strategy == ATT:
        return att(arc, division, policy, tau, counter=counter)
    if strategy == FATT:
        return fatt(arc, table, 0, division, policy, tau, counter=counter)
    if strategy == B_FATT:
        return bounded_fatt(
            arc, table, 0, division, policy, tau, q, counter=counter
        )
    if strategy == ATT_LINEAR:
        return att_linear(arc, division, policy, tau, counter=counter)
    return l_fatt(arc, table, 0, division, policy, tau, counter=counter)


def _verify(reference, results, k_intervals, strategy):
    for i, ((want_cost, want_interval), (cost, interval)) in enumerate(
        zip(reference, results)
    ):
        if interval != want_interval or not math.isclose(
            cost, want_cost, rel_tol=1e-9, abs_tol=1e-12
        ):
            raise ChecksumMismatch(
                f"result checksum mismatch at K={k_intervals}, "
                f"strategy={strategy}, query {i}: "
                f"{cost} vs {want_cost}"
            )


def _total_span(profile, division, kind):
    points = division.breakpoints
    if kind == CONSTANT:
        return sum(
            v * (points[i + 1] - points[i])
            for i, v in enumerate(profile.values)
        )
    return sum(
        (profile.values[i] + profile.values[i + 1])
        * 0.5
        * (points[i + 1] - points[i])
        for i in range(division.intervals)
    )


def _shortest_span(profile, division, kind):
    points = division.breakpoints
    if kind == CONSTANT:
        return min(
            v * (points[i + 1] - points[i])
            for i, v in enumerate(profile.values)
        )
    return min(
        (profile.values[i] + profile.values[i + 1])
        * 0.5
        * (points[i + 1] - points[i])
        for i in range(division.intervals)
    )


def _thread_budget() -> int:
    raw = os.environ.get("TDROUTE_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
