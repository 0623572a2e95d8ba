"""Wall-clock timing of single-layer SIR runs on Erdos-Renyi graphs.

For every size ``n`` one G(n, p) graph is generated, then the SIR model is
run ``repetitions`` times with distinct seeds derived from ``seed``. Each
call to :func:`perform_propagation` is timed with ``time.perf_counter_ns``.

Defaults: infection weight 0.2, recovery weight 0.1, no background weight,
90% susceptible and 10% infected at the start (rounded), 20 epochs.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Sequence

from multispread import rng
from multispread.engine import ExperimentConfig, InitialStates, perform_propagation
from multispread.model import LINEAR, CompiledModel, ModelBuilder
from multispread.net import erdos_renyi

INFECTION = 0.2
RECOVERY = 0.1
INFECTED_FRACTION = 0.1
DEFAULT_SIZES = (200, 400, 800)
DEFAULT_P = 0.01
DEFAULT_REPS = 10
DEFAULT_EPOCHS = 20
LAYER = "layer0"


@dataclass(frozen=True)
class TimingRow:
    n: int
    p: float
    repetitions: int
    mean_ms: float
    std_ms: float
    min_ms: float
    max_ms: float

    @classmethod
    def from_timings(cls, n: int, p: float, timings_ms: Sequence[float]) -> "TimingRow":
        return cls(
            n, p, len(timings_ms),
            statistics.fmean(timings_ms),
            statistics.pstdev(timings_ms),
            min(timings_ms),
            max(timings_ms),
        )


CSV_HEADER = [f.name for f in fields(TimingRow)]


def sir_model(infection: float = INFECTION, recovery: float = RECOVERY) -> CompiledModel:
    model = ModelBuilder().add_process(LAYER, ["s", "i", "r"]).compile(None, LINEAR)
    model.set_transition("s", "i", infection)
    model.set_transition("i", "r", recovery)
    return model.freeze()


def sir_initial(n: int, infected_fraction: float = INFECTED_FRACTION) -> dict[str, InitialStates]:
    infected = round(n * infected_fraction)
    return {LAYER: InitialStates({"s": n - infected, "i": infected, "r": 0})}


def time_size(n: int, p: float, repetitions: int, epochs: int, seed: int) -> tuple[list[float], list]:
    """Timings (ms) and logs of ``repetitions`` runs on one G(n, p) graph."""
    graph_seed, *run_seeds = rng.derive_seeds(seed ^ n, repetitions + 1)
    net = erdos_renyi(n, p, graph_seed, layer=LAYER)
    model = sir_model()
    initial = sir_initial(n)
    timings, logs = [], []
    for run_seed in run_seeds:
        config = ExperimentConfig(epochs, run_seed, initial)
        start = time.perf_counter_ns()
        log = perform_propagation(net, model, config)
        timings.append((time.perf_counter_ns() - start) / 1e6)
        logs.append(log)
    return timings, logs


def run_benchmark(sizes: Sequence[int] = DEFAULT_SIZES, p: float = DEFAULT_P, repetitions: int = DEFAULT_REPS,
                  epochs: int = DEFAULT_EPOCHS, seed: int = 0) -> list[TimingRow]:
    sizes = list(sizes)
    if not sizes or any(n < 1 for n in sizes):
        raise ValueError(f"sizes must be positive, got {sizes}")
    if sizes != sorted(sizes):
        raise ValueError(f"sizes must be ascending, got {sizes}")
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if epochs < 0:
        raise ValueError(f"epochs must be >= 0, got {epochs}")
    return [TimingRow.from_timings(n, p, time_size(n, p, repetitions, epochs, seed)[0]) for n in sizes]


def rows_to_csv(rows: Sequence[TimingRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(
            [row.n, repr(row.p), row.repetitions] + [f"{v:.3f}" for v in astuple(row)[3:]]
        )
    return buf.getvalue()


def write_csv(rows: Sequence[TimingRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))


def format_table(rows: Sequence[TimingRow]) -> str:
    lines = [f"{'n':>8} {'p':>8} {'reps':>5} {'mean_ms':>10} {'std_ms':>10} {'min_ms':>10} {'max_ms':>10}"]
    for r in rows:
        lines.append(
            f"{r.n:>8} {r.p:>8g} {r.repetitions:>5} {r.mean_ms:>10.2f} {r.std_ms:>10.2f} "
            f"{r.min_ms:>10.2f} {r.max_ms:>10.2f}"
        )
    return "\n".join(lines)
