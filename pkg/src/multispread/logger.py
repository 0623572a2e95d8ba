"""Per-epoch state counts and the report bundle written after a run."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from multispread.svg import line_chart


@dataclass(frozen=True)
class EpochSnapshot:
    epoch: int
    counts: dict[str, dict[str, int]]


@dataclass
class ExperimentLog:
    processes: dict[str, tuple[str, ...]]
    model_report: str = ""
    network_report: str = ""
    snapshots: list[EpochSnapshot] = field(default_factory=list)
    transitions: int = 0
    final_states: Any = None

    def append(self, snap: EpochSnapshot) -> None:
        expected = len(self.snapshots)
        if snap.epoch != expected:
            raise ValueError(f"snapshot for epoch {snap.epoch} appended at position {expected}")
        self.snapshots.append(snap)

    @property
    def epochs(self) -> int:
        return len(self.snapshots) - 1

    def series(self, process: str) -> dict[str, list[int]]:
        states = self._states(process)
        return {s: [snap.counts[process][s] for snap in self.snapshots] for s in states}

    def _states(self, process: str) -> tuple[str, ...]:
        try:
            return self.processes[process]
        except KeyError:
            raise KeyError(f"unknown process {process!r}") from None


def to_csv(log: ExperimentLog, process: str) -> str:
    states = log._states(process)
    lines = ["epoch," + ",".join(states)]
    for snap in log.snapshots:
        row = snap.counts[process]
        lines.append(f"{snap.epoch}," + ",".join(str(int(row[s])) for s in states))
    return "\n".join(lines) + "\n"


def to_svg(log: ExperimentLog, process: str) -> str:
    return line_chart(
        log.series(process),
        [snap.epoch for snap in log.snapshots],
        title=f"{process}: dynamics of states",
    )


def report_files(log: ExperimentLog) -> list[str]:
    names = [f"{p}_propagation.csv" for p in log.processes]
    names += [f"{p}_dynamics.svg" for p in log.processes]
    return sorted(names + ["model_report.txt", "network_report.txt"])


def write_report(log: ExperimentLog, out_dir: str | Path) -> list[Path]:
    """Write CSVs, text reports and charts; returns the written paths, sorted."""
    if not log.snapshots:
        raise ValueError("cannot report an empty log")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    contents = {"model_report.txt": log.model_report, "network_report.txt": log.network_report}
    for process in log.processes:
        contents[f"{process}_propagation.csv"] = to_csv(log, process)
        contents[f"{process}_dynamics.svg"] = to_svg(log, process)
    written = []
    for name, text in sorted(contents.items()):
        path = out / name
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        written.append(path)
    return written
