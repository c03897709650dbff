"""Orchestration: the iteration loop, deduplication, and brute-force oracles.

Randomness is supplied by Python's Mersenne Twister.  Every iteration owns a
stream seeded by SHA-256 of (master seed, "coloring", iteration index), so
the schedule of colorings depends only on the master seed and the iteration
number, never on how many iterations ran before or on thread placement.
Single-threaded runs with a fixed seed are byte-reproducible.
"""

from __future__ import annotations

import hashlib
import math
import random
import time
from dataclasses import dataclass

from .dp import (DeadlineExceeded, MemoryBudgetExceeded, iteration_count,
                 random_coloring, run_iteration)
from .graph import (Graph, MAX_PATTERN_VERTICES, all_ones_mask,
                    all_pairs_distances, degree_filter)
from .reconstruct import (ALL_MAPPINGS, MODES, OccurrenceSet, reconstruct)
from .treedecomp import decomposition_from_ordering, exact_treewidth, make_nice


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from any printable parts (reproducible everywhere)."""
    text = "/".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def iteration_rng(master_seed: int, index: int) -> random.Random:
    """Independent per-iteration random stream."""
    return random.Random(derive_seed(master_seed, "coloring", index))


@dataclass
class SolveOptions:
    epsilon: float = math.exp(-1)
    max_results: int = 100_000
    mode: str = ALL_MAPPINGS
    seed: int = 0
    iterations_override: int | None = None
    timeout_secs: float = 600.0
    count_only: bool = False
    memory_budget_bytes: int = 24 << 30

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be strictly between 0 and 1")
        if self.max_results < 1:
            raise ValueError("max_results must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"unknown occurrence mode: {self.mode!r}")
        if self.timeout_secs <= 0:
            raise ValueError("timeout must be positive")
        if self.iterations_override is not None and self.iterations_override < 1:
            raise ValueError("iteration override must be at least 1")


@dataclass
class SolveReport:
    width: int = -1
    planned_iterations: int = 0
    iterations: int = 0
    occurrences: int = 0
    decomposition_seconds: float = 0.0
    dp_seconds: float = 0.0
    reconstruction_seconds: float = 0.0
    peak_archive_bytes: int = 0
    timeout_hit: bool = False
    memory_abort: str | None = None

    def lines(self) -> list[str]:
        """key=value rendering for diagnostics output."""
        return [
            f"width={self.width}",
            f"planned_iterations={self.planned_iterations}",
            f"iterations={self.iterations}",
            f"occurrences={self.occurrences}",
            f"decomposition_seconds={self.decomposition_seconds:.3f}",
            f"dp_seconds={self.dp_seconds:.3f}",
            f"reconstruction_seconds={self.reconstruction_seconds:.3f}",
            f"peak_archive_bytes={self.peak_archive_bytes}",
            f"timeout={'true' if self.timeout_hit else 'false'}",
            f"memory_abort={self.memory_abort or 'none'}",
        ]


def solve(g: Graph, f: Graph, mask=None,
          opts: SolveOptions | None = None) -> tuple[OccurrenceSet, SolveReport]:
    """Find occurrences of pattern f in target g.

    Runs the planned number of colorings, deduplicating occurrences across
    iterations, and stops early once the result cap is reached or the
    timeout or memory budget trips (both leave a usable partial report).
    A pattern larger than the target yields an empty result, not an error.
    """
    if opts is None:
        opts = SolveOptions()
    n_f = f.vertex_count
    if n_f == 0:
        raise ValueError("pattern graph is empty")
    if n_f > MAX_PATTERN_VERTICES:
        raise ValueError(
            f"pattern graph too large: {n_f} vertices (limit {MAX_PATTERN_VERTICES})"
        )

    started = time.monotonic()
    deadline = started + opts.timeout_secs
    report = SolveReport()

    mask = degree_filter(g, f, mask if mask is not None else all_ones_mask(g.vertex_count))

    t0 = time.monotonic()
    width, ordering = exact_treewidth(f)
    ntd = make_nice(decomposition_from_ordering(f, ordering))
    dist = all_pairs_distances(f)
    report.decomposition_seconds = time.monotonic() - t0
    report.width = width

    planned = (opts.iterations_override if opts.iterations_override is not None
               else iteration_count(n_f, opts.epsilon))
    report.planned_iterations = planned

    occurrences = OccurrenceSet(opts.mode)
    if n_f > g.vertex_count:
        return occurrences, report

    full_colorset = (1 << n_f) - 1
    limit = opts.max_results if opts.mode == ALL_MAPPINGS else None
    ball_cache: dict = {}

    for index in range(planned):
        if time.monotonic() > deadline:
            report.timeout_hit = True
            break
        coloring = random_coloring(g.vertex_count, n_f, iteration_rng(opts.seed, index))
        t0 = time.monotonic()
        try:
            root_list, archive = run_iteration(
                g, f, ntd, coloring, mask, dist,
                memory_budget=opts.memory_budget_bytes,
                deadline=deadline, ball_cache=ball_cache,
            )
        except DeadlineExceeded:
            report.dp_seconds += time.monotonic() - t0
            report.timeout_hit = True
            break
        except MemoryBudgetExceeded as exc:
            report.dp_seconds += time.monotonic() - t0
            report.memory_abort = str(exc)
            break
        report.dp_seconds += time.monotonic() - t0
        report.iterations = index + 1
        report.peak_archive_bytes = max(
            report.peak_archive_bytes, sum(len(b) for b in archive.values())
        )
        if not root_list.entries:
            continue
        t0 = time.monotonic()
        try:
            answers = reconstruct(
                ntd, ntd.root, [((), full_colorset)], archive, coloring,
                limit=limit, deadline=deadline,
            )
        except DeadlineExceeded:
            report.reconstruction_seconds += time.monotonic() - t0
            report.timeout_hit = True
            break
        capped = False
        for phi in answers[0]:
            if len(occurrences) >= opts.max_results:
                capped = True
                break
            occurrences.add(phi)
        report.reconstruction_seconds += time.monotonic() - t0
        if capped or len(occurrences) >= opts.max_results:
            break

    report.occurrences = len(occurrences)
    return occurrences, report


def _search_order(f: Graph) -> list[int]:
    """Pattern vertices ordered to keep the backtracker anchored: highest
    degree first, then greedily most placed neighbors."""
    n = f.vertex_count
    order: list[int] = []
    placed: set[int] = set()
    while len(order) < n:
        best = None
        for v in range(n):
            if v in placed:
                continue
            anchored = sum(1 for w in f.adjacency[v] if w in placed)
            key = (anchored, f.degree(v), -v)
            if best is None or key > best[0]:
                best = (key, v)
        order.append(best[1])
        placed.add(best[1])
    return order


def brute_force_all(g: Graph, f: Graph) -> OccurrenceSet:
    """All injective edge-preserving mappings of f into g, by backtracking."""
    n_f = f.vertex_count
    result = OccurrenceSet(ALL_MAPPINGS)
    if n_f == 0 or n_f > g.vertex_count:
        return result
    order = _search_order(f)
    assignment: dict[int, int] = {}
    used: set[int] = set()
    neighbor_sets = g.neighbor_sets
    everyone = frozenset(range(g.vertex_count))

    def extend(depth: int):
        if depth == n_f:
            result.add(tuple(assignment[v] for v in range(n_f)))
            return
        v = order[depth]
        anchors = [assignment[w] for w in f.adjacency[v] if w in assignment]
        if anchors:
            candidates = frozenset.intersection(*(neighbor_sets[x] for x in anchors))
        else:
            candidates = everyone
        for x in sorted(candidates):
            if x in used:
                continue
            assignment[v] = x
            used.add(x)
            extend(depth + 1)
            used.remove(x)
            del assignment[v]

    extend(0)
    return result


def brute_force_colorful(g: Graph, f: Graph, coloring) -> OccurrenceSet:
    """brute_force_all restricted to images with pairwise distinct colors."""
    n_f = f.vertex_count
    result = OccurrenceSet(ALL_MAPPINGS)
    for phi in brute_force_all(g, f):
        if len({coloring[x] for x in phi}) == n_f:
            result.add(phi)
    return result
