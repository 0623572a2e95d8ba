"""Epoch-based simulation of interacting processes on a multilayer network.

One epoch visits layers in process registration order, members of each
layer in lexicographic order, and the neighbours of each member in
lexicographic order. When a neighbour's local state differs, a Bernoulli
trial is drawn with the weight of moving the node's global state to the
one with that coordinate replaced by the neighbour's state. On success the
node adopts the state immediately (later nodes see it) and stops scanning
neighbours in that layer for this epoch.

Randomness: ``rng.split(seed, 2)`` gives two streams. The first fills
initial states, the second is consumed by Bernoulli trials only, one
uniform per trial, in scan order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from multispread import rng
from multispread.logger import EpochSnapshot, ExperimentLog
from multispread.model import CompiledModel
from multispread.net import MultilayerNetwork

ABSENT = None

# (actor, process index, source global state, target global state, weight)
TransitionHook = Callable[[str, int, tuple, tuple, float], None]


class SimulationError(ValueError):
    pass


@dataclass
class InitialStates:
    """Initial assignment for one process.

    ``counts`` gives the total number of layer members per state, including
    the actors pinned in ``explicit``.
    """

    counts: dict[str, int]
    explicit: dict[str, str] = field(default_factory=dict)


@dataclass
class ExperimentConfig:
    epochs: int
    seed: int
    initial: dict[str, InitialStates]

    def __post_init__(self):
        if int(self.epochs) != self.epochs or self.epochs < 0:
            raise SimulationError(f"epochs must be a non-negative integer, got {self.epochs!r}")


class NodeStateMap:
    """Local state of every actor in every process; ``None`` marks absence."""

    def __init__(self, model: CompiledModel, states: dict[str, list]):
        self.model = model
        self.states = states

    def get(self, actor: str, process: str):
        return self.states[actor][self.model.process_index(process)]

    def global_state(self, actor: str) -> tuple:
        return tuple(self.states[actor])

    def counts(self, process: str) -> dict[str, int]:
        k = self.model.process_index(process)
        out = {s: 0 for s in self.model.processes[k].states}
        for row in self.states.values():
            if row[k] is not ABSENT:
                out[row[k]] += 1
        return out

    def snapshot(self, epoch: int) -> EpochSnapshot:
        return EpochSnapshot(epoch, {p.name: self.counts(p.name) for p in self.model.processes})

    def copy(self) -> "NodeStateMap":
        return NodeStateMap(self.model, {a: list(row) for a, row in self.states.items()})

    def __eq__(self, other):
        return isinstance(other, NodeStateMap) and self.states == other.states


def check_alignment(net: MultilayerNetwork, model: CompiledModel) -> list[str]:
    """Problems with the one-to-one layer/process name pairing (empty if fine)."""
    problems = []
    layers, procs = set(net.layers), set(model.process_names)
    for name in model.process_names:
        if name not in layers:
            problems.append(f"process {name!r} has no layer of the same name")
    for name in net.layers:
        if name not in procs:
            problems.append(f"layer {name!r} has no process of the same name")
    return problems


def check_initial(net: MultilayerNetwork, model: CompiledModel, spec: Mapping[str, InitialStates]) -> list[str]:
    problems = []
    for name in spec:
        if name not in model.process_names:
            problems.append(f"initial states given for unknown process {name!r}")
    for proc in model.processes:
        if proc.name not in spec:
            problems.append(f"no initial states for process {proc.name!r}")
            continue
        if proc.name not in net.layers:
            continue
        init = spec[proc.name]
        members = net.layers[proc.name].members
        for state, n in init.counts.items():
            if state not in proc.states:
                problems.append(f"{proc.name}: unknown state {state!r}")
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                problems.append(f"{proc.name}: count for {state!r} must be a non-negative integer, got {n!r}")
        total = sum(n for n in init.counts.values() if isinstance(n, int))
        if total != len(members):
            problems.append(
                f"{proc.name}: initial counts sum to {total} but layer {proc.name!r} has {len(members)} members"
            )
        pinned: dict[str, int] = {}
        for actor, state in init.explicit.items():
            if actor not in members:
                problems.append(f"{proc.name}: explicit actor {actor!r} is not a member of layer {proc.name!r}")
            if state not in proc.states:
                problems.append(f"{proc.name}: unknown state {state!r} for actor {actor!r}")
            pinned[state] = pinned.get(state, 0) + 1
        for state, n in pinned.items():
            if n > init.counts.get(state, 0):
                problems.append(f"{proc.name}: {n} actors pinned to {state!r} but its count is {init.counts.get(state, 0)}")
    return problems


def set_initial_states(net: MultilayerNetwork, model: CompiledModel, spec: Mapping[str, InitialStates],
                       seed: int | rng.Stream) -> NodeStateMap:
    """Assign initial local states.

    Pinned actors keep their state. The remaining members of each layer are
    shuffled (starting from sorted order) and filled state by state in the
    process's declared order, up to the requested counts.
    """
    problems = check_alignment(net, model) + check_initial(net, model, spec)
    if problems:
        raise SimulationError("; ".join(problems))
    stream = seed if isinstance(seed, rng.Stream) else rng.split(seed, 2)[0]

    states = {a: [ABSENT] * len(model.processes) for a in net.actors}
    for k, proc in enumerate(model.processes):
        init = spec[proc.name]
        remaining = dict(init.counts)
        for actor, state in init.explicit.items():
            states[actor][k] = state
            remaining[state] -= 1
        free = [a for a in net.layers[proc.name].sorted_members() if a not in init.explicit]
        stream.shuffle(free)
        pos = 0
        for state in proc.states:
            for actor in free[pos:pos + remaining.get(state, 0)]:
                states[actor][k] = state
            pos += remaining.get(state, 0)
    return NodeStateMap(model, states)


class _Scan:
    """Scan order and lookup tables shared by every epoch of a run."""

    def __init__(self, net: MultilayerNetwork, model: CompiledModel):
        self.layers = []
        for k, proc in enumerate(model.processes):
            layer = net.layers[proc.name]
            order = [(v, layer.neighbors(v)) for v in layer.sorted_members()]
            self.layers.append((k, order, model.tables[k]))


def epoch_step(net: MultilayerNetwork, model: CompiledModel, states: NodeStateMap, stream: rng.Stream,
               on_transition: TransitionHook | None = None, _scan: _Scan | None = None) -> int:
    """Run one epoch in place; returns the number of successful transitions."""
    scan = _scan or _Scan(net, model)
    rows = states.states
    draw = stream.random
    fired = 0
    for k, order, table in scan.layers:
        for v, nbrs in order:
            row = rows[v]
            mine = row[k]
            for u in nbrs:
                theirs = rows[u][k]
                if theirs == mine:
                    continue
                src = tuple(row)
                if ABSENT in src:
                    # undefined global state: the trial happens but cannot succeed
                    p = 0.0
                    dst = None
                else:
                    dst = src[:k] + (theirs,) + src[k + 1:]
                    p = table.get((src, dst), 0.0)
                if draw() < p:
                    row[k] = theirs
                    fired += 1
                    if on_transition is not None:
                        on_transition(v, k, src, dst, p)
                    break
    return fired


def perform_propagation(net: MultilayerNetwork, model: CompiledModel, config: ExperimentConfig,
                        on_transition: TransitionHook | None = None) -> ExperimentLog:
    problems = check_alignment(net, model)
    if problems:
        raise SimulationError("; ".join(problems))
    model.freeze()
    init_stream, sim_stream = rng.split(config.seed, 2)
    states = set_initial_states(net, model, config.initial, init_stream)
    scan = _Scan(net, model)

    log = ExperimentLog(
        processes={p.name: p.states for p in model.processes},
        model_report=model.describe(),
        network_report=net.report(),
    )
    log.append(states.snapshot(0))
    for epoch in range(1, config.epochs + 1):
        log.transitions += epoch_step(net, model, states, sim_stream, on_transition, scan)
        log.append(states.snapshot(epoch))
    log.final_states = states
    return log

