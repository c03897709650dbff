"""Random-graph benchmarks: the G(n, p) sweep and the treewidth curve.

Both pattern and target are drawn from G(n, p) with per-cell seeds derived
from the master seed and the grid indices, so any cell can be regenerated
in isolation.  Timings are wall-clock and therefore machine-bound; the
generated graphs, occurrence counts, and treewidths are deterministic.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

from .engine import SolveOptions, derive_seed, solve
from .graph import erdos_renyi
from .treedecomp import exact_treewidth

SWEEP_CSV_HEADER = ("pattern_p", "target_p", "seconds", "timeout", "treewidth")
CURVE_CSV_HEADER = ("pattern_p", "mean_treewidth")


@dataclass
class SweepConfig:
    target_n: int = 60
    pattern_n: int = 8
    grid_start: float = 0.0
    grid_stop: float = 1.0
    grid_step: float = 0.1
    iterations: int = 10
    cell_timeout_secs: float = 20.0
    seed: int = 0
    max_results: int = 100_000
    memory_budget_bytes: int = 2 << 30

    def __post_init__(self):
        if self.grid_step <= 0:
            raise ValueError("grid step must be positive")
        if not 0.0 <= self.grid_start <= self.grid_stop <= 1.0:
            raise ValueError("grid must lie within [0, 1]")
        if self.iterations < 1:
            raise ValueError("iteration budget must be at least 1")


@dataclass
class SweepCell:
    pattern_p: float
    target_p: float
    seconds: float
    timeout: bool
    treewidth: int


def probability_grid(start: float, stop: float, step: float) -> list[float]:
    values = []
    i = 0
    while True:
        v = round(start + i * step, 9)
        if v > stop + 1e-9:
            break
        values.append(v)
        i += 1
    return values


def run_sweep(cfg: SweepConfig, csv_path=None, progress=None) -> list[SweepCell]:
    """One solve per grid cell; timeouts are recorded as data, not errors."""
    grid = probability_grid(cfg.grid_start, cfg.grid_stop, cfg.grid_step)
    cells = []
    for qi, pattern_p in enumerate(grid):
        for pi, target_p in enumerate(grid):
            pattern = erdos_renyi(cfg.pattern_n, pattern_p,
                                  derive_seed(cfg.seed, "pattern", qi, pi))
            target = erdos_renyi(cfg.target_n, target_p,
                                 derive_seed(cfg.seed, "target", qi, pi))
            opts = SolveOptions(
                seed=derive_seed(cfg.seed, "solve", qi, pi),
                iterations_override=cfg.iterations,
                timeout_secs=cfg.cell_timeout_secs,
                max_results=cfg.max_results,
                count_only=True,
                memory_budget_bytes=cfg.memory_budget_bytes,
            )
            t0 = time.perf_counter()
            _, report = solve(target, pattern, None, opts)
            seconds = time.perf_counter() - t0
            cell = SweepCell(pattern_p, target_p, seconds,
                             report.timeout_hit, report.width)
            cells.append(cell)
            if progress is not None:
                note = " timeout" if cell.timeout else ""
                abort = " memory-abort" if report.memory_abort else ""
                print(
                    f"cell q={pattern_p:g} p={target_p:g} "
                    f"tw={cell.treewidth} {seconds:.2f}s"
                    f" occurrences={report.occurrences}{note}{abort}",
                    file=progress, flush=True,
                )
    if csv_path is not None:
        _write_sweep_csv(csv_path, cells)
    return cells


def _write_sweep_csv(path, cells: list[SweepCell]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_CSV_HEADER)
        for cell in cells:
            writer.writerow([
                f"{cell.pattern_p:g}", f"{cell.target_p:g}",
                f"{cell.seconds:.3f}", int(cell.timeout), cell.treewidth,
            ])


def treewidth_curve(pattern_n: int = 10, step: float = 0.1, samples: int = 30,
                    seed: int = 0, csv_path=None) -> list[tuple[float, float]]:
    """Mean exact treewidth of G(pattern_n, q) over the probability grid."""
    if pattern_n > 24:
        raise ValueError("treewidth curve supports patterns up to 24 vertices")
    if samples < 1:
        raise ValueError("need at least one sample per grid point")
    rows = []
    for qi, q in enumerate(probability_grid(0.0, 1.0, step)):
        widths = []
        for s in range(samples):
            pattern = erdos_renyi(pattern_n, q, derive_seed(seed, "curve", qi, s))
            widths.append(exact_treewidth(pattern)[0])
        rows.append((q, sum(widths) / len(widths)))
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CURVE_CSV_HEADER)
            for q, mean in rows:
                writer.writerow([f"{q:g}", f"{mean:.4f}"])
    return rows
