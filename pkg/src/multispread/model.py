"""Propagation models over an orthogonal grid of global states.

Each process has an ordered list of local states. A global state is one
local state per process, written with ``.`` between coordinates in process
registration order (``s.n.u``). A transition changes exactly one
coordinate, and only between states that are adjacent in that process's
ordering. Under the ``cyclic`` policy the last and first states of a
process with three or more states are adjacent as well.

Typical use::

    builder = ModelBuilder()
    builder.add_process("ill", ["s", "i", "r"]).add_process("aware", ["n", "a"])
    model = builder.compile(background_weight=0.005, adjacency_policy="linear")
    model.set_transition("s.n", "i.n", 0.4)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

LINEAR = "linear"
CYCLIC = "cyclic"
POLICIES = (LINEAR, CYCLIC)
SEPARATOR = "."
ARROW = "->"


class ModelError(ValueError):
    pass


class DiagonalTransitionError(ModelError):
    pass


class MalformedStateError(ModelError):
    pass


@dataclass(frozen=True)
class ProcessSpec:
    name: str
    states: tuple[str, ...]

    def __post_init__(self):
        _check_token(self.name, "process name")
        if len(self.states) < 2:
            raise ModelError(f"process {self.name!r} needs at least two states, got {list(self.states)}")
        for s in self.states:
            _check_token(s, f"state of process {self.name!r}")
        if len(set(self.states)) != len(self.states):
            raise ModelError(f"process {self.name!r} has duplicate states: {list(self.states)}")


def _check_token(token, what):
    if not isinstance(token, str) or not token:
        raise ModelError(f"{what} must be a non-empty string, got {token!r}")
    bad = [c for c in (SEPARATOR, ">", ",") if c in token]
    if bad or any(c.isspace() for c in token):
        raise ModelError(f"{what} {token!r} contains a forbidden character")


def adjacent_pairs(n_states: int, policy: str) -> list[tuple[int, int]]:
    """Unordered index pairs of neighbouring states."""
    if policy not in POLICIES:
        raise ModelError(f"unknown adjacency policy {policy!r}; expected one of {POLICIES}")
    pairs = [(i, i + 1) for i in range(n_states - 1)]
    if policy == CYCLIC and n_states >= 3:
        pairs.append((0, n_states - 1))
    return pairs


def check_weight(w) -> float:
    try:
        w = float(w)
    except (TypeError, ValueError):
        raise ModelError(f"weight must be a number, got {w!r}") from None
    if not 0.0 <= w <= 1.0:
        raise ModelError(f"weight {w} outside [0, 1]")
    return w


class ModelBuilder:
    def __init__(self):
        self.processes: list[ProcessSpec] = []

    def add_process(self, name: str, states: Sequence[str]) -> "ModelBuilder":
        if any(p.name == name for p in self.processes):
            raise ModelError(f"duplicate process name {name!r}")
        self.processes.append(ProcessSpec(name, tuple(states)))
        return self

    def compile(self, background_weight: float | None = None, adjacency_policy: str = CYCLIC) -> "CompiledModel":
        if not self.processes:
            raise ModelError("no processes registered")
        return CompiledModel(self.processes, adjacency_policy, background_weight)


class CompiledModel:
    """Per-process transition tables over the product grid.

    Weights can be changed with :meth:`set_transition` until :meth:`freeze`
    is called; the engine freezes the model before simulating.
    """

    def __init__(self, processes: Iterable[ProcessSpec], adjacency_policy: str = CYCLIC,
                 background_weight: float | None = None):
        self.processes: tuple[ProcessSpec, ...] = tuple(processes)
        if adjacency_policy not in POLICIES:
            raise ModelError(f"unknown adjacency policy {adjacency_policy!r}; expected one of {POLICIES}")
        self.adjacency_policy = adjacency_policy
        self.background_weight = None if background_weight is None else check_weight(background_weight)
        self._index = {p.name: k for k, p in enumerate(self.processes)}
        self._frozen = False

        base = 0.0 if background_weight is None else self.background_weight
        # tables[k][(src, dst)] -> weight; src/dst are tuples of local-state tokens
        self.tables: list[dict[tuple[tuple[str, ...], tuple[str, ...]], float]] = []
        for k, proc in enumerate(self.processes):
            table = {}
            for state in self.global_states():
                idx = proc.states.index(state[k])
                for i, j in adjacent_pairs(len(proc.states), adjacency_policy):
                    if idx == i:
                        table[(state, _replace(state, k, proc.states[j]))] = base
                    elif idx == j:
                        table[(state, _replace(state, k, proc.states[i]))] = base
            self.tables.append(dict(sorted(table.items())))

    # -- grid ---------------------------------------------------------------

    def process(self, name: str) -> ProcessSpec:
        try:
            return self.processes[self._index[name]]
        except KeyError:
            raise ModelError(f"unknown process {name!r}") from None

    def process_index(self, name: str) -> int:
        self.process(name)
        return self._index[name]

    @property
    def process_names(self) -> list[str]:
        return [p.name for p in self.processes]

    def global_states(self) -> list[tuple[str, ...]]:
        return list(itertools.product(*(p.states for p in self.processes)))

    def n_global_states(self) -> int:
        n = 1
        for p in self.processes:
            n *= len(p.states)
        return n

    def allowed_transitions(self, process: str | None = None) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
        if process is not None:
            return list(self.tables[self.process_index(process)])
        return [key for table in self.tables for key in table]

    # -- state text ---------------------------------------------------------

    def parse_state(self, text: str) -> tuple[str, ...]:
        if not isinstance(text, str):
            raise MalformedStateError(f"global state must be text, got {text!r}")
        coords = tuple(text.split(SEPARATOR))
        if len(coords) != len(self.processes):
            raise MalformedStateError(
                f"global state {text!r} has {len(coords)} coordinates, expected {len(self.processes)}"
            )
        for proc, token in zip(self.processes, coords):
            if token not in proc.states:
                raise MalformedStateError(f"unknown state {token!r} for process {proc.name!r} in {text!r}")
        return coords

    @staticmethod
    def format_state(state: Sequence[str]) -> str:
        return SEPARATOR.join(state)

    def parse_transition(self, text: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
        src, sep, dst = text.partition(ARROW)
        if not sep:
            raise MalformedStateError(f"transition {text!r} must look like 'src{ARROW}dst'")
        return self.parse_state(src.strip()), self.parse_state(dst.strip())

    # -- weights ------------------------------------------------------------

    def _owner(self, src, dst) -> int:
        """Index of the process a (src, dst) pair would belong to; raises when illegal."""
        changed = [k for k in range(len(src)) if src[k] != dst[k]]
        if not changed:
            raise ModelError(f"{self.format_state(src)} -> {self.format_state(dst)} does not change any state")
        if len(changed) > 1:
            names = [self.processes[k].name for k in changed]
            raise DiagonalTransitionError(
                f"diagonal transition {self.format_state(src)}{ARROW}{self.format_state(dst)}: "
                f"changes several processes at once ({', '.join(names)}); "
                "only transitions along a single process axis are allowed"
            )
        k = changed[0]
        if (src, dst) not in self.tables[k]:
            raise ModelError(
                f"{self.format_state(src)}{ARROW}{self.format_state(dst)}: states "
                f"{src[k]!r} and {dst[k]!r} are not adjacent in process {self.processes[k].name!r} "
                f"under the {self.adjacency_policy} policy"
            )
        return k

    def check_transition(self, source: str, target: str) -> int:
        """Validate a transition given as text; returns the owning process index."""
        return self._owner(self.parse_state(source), self.parse_state(target))

    def set_transition(self, source: str, target: str, w: float) -> None:
        if self._frozen:
            raise ModelError("model is frozen")
        src, dst = self.parse_state(source), self.parse_state(target)
        w = check_weight(w)
        k = self._owner(src, dst)
        self.tables[k][(src, dst)] = w

    def weight(self, source: str, target: str) -> float:
        src, dst = self.parse_state(source), self.parse_state(target)
        for table in self.tables:
            w = table.get((src, dst))
            if w is not None:
                return w
        return 0.0

    def freeze(self) -> "CompiledModel":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def describe(self) -> str:
        lines = [f"processes: {len(self.processes)}"]
        for p in self.processes:
            lines.append(f"  {p.name}: {', '.join(p.states)}")
        bg = "none" if self.background_weight is None else repr(self.background_weight)
        lines += [
            f"adjacency_policy: {self.adjacency_policy}",
            f"background_weight: {bg}",
            f"global_states: {self.n_global_states()}",
            f"allowed_transitions: {sum(len(t) for t in self.tables)}",
            "transitions:",
        ]
        rows = []
        for proc, table in zip(self.processes, self.tables):
            for (src, dst), w in table.items():
                if w != 0.0:
                    rows.append((f"{self.format_state(src)}{ARROW}{self.format_state(dst)}", proc.name, w))
        for text, name, w in sorted(rows):
            lines.append(f"  {text} {w!r} [{name}]")
        return "\n".join(lines) + "\n"


def _replace(state: tuple[str, ...], k: int, token: str) -> tuple[str, ...]:
    return state[:k] + (token,) + state[k + 1:]
