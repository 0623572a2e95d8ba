"""Multilayer networks, the mpx text format, and synthetic graphs.

A network is a set of actors plus named layers. Each layer is an undirected
simple graph over a subset of the actors (its members). Edges never cross
layers. Everything is iterated in lexicographic order so that simulations
and reports do not depend on hash order.

Supported mpx subset::

    #TYPE multiplex
    #LAYERS
    ill,UNDIRECTED
    #ACTORS
    a
    #NODES
    a,ill
    #EDGES
    a,b,ill

``#ACTORS`` is optional (actors default to the union of edge endpoints).
``#NODES`` is optional; when absent every actor is a member of every layer,
when present it lists layer membership exhaustively. Lines starting with
``--`` and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from multispread.rng import Stream

SECTIONS = ("#TYPE", "#LAYERS", "#ACTORS", "#NODES", "#EDGES")


class NetworkError(ValueError):
    pass


class MpxParseError(NetworkError):
    def __init__(self, message: str, lineno: int | None = None, line: str | None = None):
        self.lineno = lineno
        self.line = line
        where = f"line {lineno}: " if lineno is not None else ""
        quoted = f" ({line!r})" if line is not None else ""
        super().__init__(f"{where}{message}{quoted}")


def check_token(token: str, what: str = "token") -> str:
    if not isinstance(token, str) or not token:
        raise NetworkError(f"{what} must be a non-empty string, got {token!r}")
    if "," in token or any(c.isspace() for c in token):
        raise NetworkError(f"{what} {token!r} contains a comma or whitespace")
    return token


@dataclass(frozen=True)
class Layer:
    name: str
    members: frozenset[str]
    edges: frozenset[tuple[str, str]]
    _adjacency: Mapping[str, tuple[str, ...]] = field(repr=False, compare=False)

    @classmethod
    def build(cls, name: str, members: Iterable[str], edges: Iterable[tuple[str, str]]) -> "Layer":
        check_token(name, "layer name")
        members = frozenset(members)
        canon = set()
        for a, b in edges:
            if a == b:
                raise NetworkError(f"self-loop on {a!r} in layer {name!r}")
            for end in (a, b):
                if end not in members:
                    raise NetworkError(f"edge endpoint {end!r} is not a member of layer {name!r}")
            canon.add((a, b) if a < b else (b, a))
        adj: dict[str, list[str]] = {m: [] for m in members}
        for a, b in canon:
            adj[a].append(b)
            adj[b].append(a)
        adjacency = {m: tuple(sorted(nbrs)) for m, nbrs in sorted(adj.items())}
        return cls(name, members, frozenset(canon), adjacency)

    def neighbors(self, actor: str) -> tuple[str, ...]:
        try:
            return self._adjacency[actor]
        except KeyError:
            raise NetworkError(f"actor {actor!r} is not a member of layer {self.name!r}") from None

    def sorted_members(self) -> list[str]:
        return list(self._adjacency)

    def degree(self, actor: str) -> int:
        return len(self.neighbors(actor))


class MultilayerNetwork:
    """Immutable multilayer network.

    ``layers`` maps layer name to :class:`Layer`, sorted by name; ``actors``
    is the sorted tuple of actor ids.
    """

    def __init__(self, actors: Iterable[str], layers: Iterable[Layer]):
        actor_set = {check_token(a, "actor id") for a in actors}
        by_name: dict[str, Layer] = {}
        for layer in layers:
            if layer.name in by_name:
                raise NetworkError(f"duplicate layer name {layer.name!r}")
            unknown = layer.members - actor_set
            if unknown:
                raise NetworkError(
                    f"layer {layer.name!r} has members that are not actors: {sorted(unknown)}"
                )
            by_name[layer.name] = layer
        self.actors: tuple[str, ...] = tuple(sorted(actor_set))
        self.layers: dict[str, Layer] = dict(sorted(by_name.items()))

    @classmethod
    def from_edges(
        cls,
        layer_edges: Mapping[str, Iterable[tuple[str, str]]],
        actors: Iterable[str] = (),
        members: Mapping[str, Iterable[str]] | None = None,
    ) -> "MultilayerNetwork":
        """Build a network from per-layer edge lists.

        Without ``members`` every actor belongs to every layer.
        """
        layer_edges = {name: list(edges) for name, edges in layer_edges.items()}
        actor_set = set(actors)
        for edges in layer_edges.values():
            for a, b in edges:
                actor_set.update((a, b))
        if members is not None:
            for ms in members.values():
                actor_set.update(ms)
        layers = []
        for name, edges in layer_edges.items():
            ms = actor_set if members is None else set(members.get(name, ()))
            layers.append(Layer.build(name, ms, edges))
        return cls(actor_set, layers)

    def layer(self, name: str) -> Layer:
        try:
            return self.layers[name]
        except KeyError:
            raise NetworkError(f"unknown layer {name!r}") from None

    def neighbors(self, actor: str, layer: str) -> list[str]:
        return list(self.layer(layer).neighbors(actor))

    def is_node_aligned(self) -> bool:
        full = frozenset(self.actors)
        return all(layer.members == full for layer in self.layers.values())

    def report(self) -> str:
        lines = [f"actors: {len(self.actors)}", f"layers: {len(self.layers)}", "", "layer,members,edges"]
        for layer in self.layers.values():
            lines.append(f"{layer.name},{len(layer.members)},{len(layer.edges)}")
        return "\n".join(lines) + "\n"

    def _key(self):
        return (
            self.actors,
            tuple((l.name, l.members, l.edges) for l in self.layers.values()),
        )

    def __eq__(self, other):
        if not isinstance(other, MultilayerNetwork):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"MultilayerNetwork(actors={len(self.actors)}, "
            f"layers={[(n, len(l.edges)) for n, l in self.layers.items()]})"
        )


# --- mpx ------------------------------------------------------------------


def parse_mpx(text: str) -> MultilayerNetwork:
    section = None
    net_type = None
    layer_names: list[str] = []
    actors: set[str] = set()
    nodes: dict[str, set[str]] | None = None
    edges: dict[str, list[tuple[str, str]]] = {}
    edge_lines: dict[tuple[str, str, str], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("--"):
            continue
        if line.startswith("#"):
            head, _, rest = line.partition(" ")
            head = head.upper()
            if head not in SECTIONS:
                raise MpxParseError(f"unknown section header {head!r}", lineno, raw)
            if head == "#TYPE":
                net_type = rest.strip().lower()
                if net_type != "multiplex":
                    raise MpxParseError(f"unsupported network type {rest.strip()!r}", lineno, raw)
                section = None
                continue
            if rest.strip():
                raise MpxParseError(f"unexpected text after {head}", lineno, raw)
            section = head
            if head == "#NODES" and nodes is None:
                nodes = {}
            continue

        cols = [c.strip() for c in line.split(",")]
        if section is None:
            raise MpxParseError("data row outside of a section", lineno, raw)
        try:
            if section == "#LAYERS":
                if len(cols) != 2:
                    raise MpxParseError("expected 'name,UNDIRECTED'", lineno, raw)
                name, kind = cols
                if kind.upper() != "UNDIRECTED":
                    raise MpxParseError(f"only undirected layers are supported, got {kind!r}", lineno, raw)
                check_token(name, "layer name")
                if name in layer_names:
                    raise MpxParseError(f"duplicate layer {name!r}", lineno, raw)
                layer_names.append(name)
                edges[name] = []
            elif section == "#ACTORS":
                if len(cols) != 1:
                    raise MpxParseError("expected a single actor id", lineno, raw)
                actors.add(check_token(cols[0], "actor id"))
            elif section == "#NODES":
                if len(cols) != 2:
                    raise MpxParseError("expected 'actor,layer'", lineno, raw)
                actor, lname = cols
                if lname not in edges:
                    raise MpxParseError(f"unknown layer {lname!r}", lineno, raw)
                actors.add(check_token(actor, "actor id"))
                nodes.setdefault(lname, set()).add(actor)
            elif section == "#EDGES":
                if len(cols) != 3:
                    raise MpxParseError("expected 'actor1,actor2,layer'", lineno, raw)
                a, b, lname = cols
                if lname not in edges:
                    raise MpxParseError(f"unknown layer {lname!r}", lineno, raw)
                check_token(a, "actor id")
                check_token(b, "actor id")
                if a == b:
                    raise MpxParseError(f"self-loop on {a!r}", lineno, raw)
                key = (min(a, b), max(a, b), lname)
                if key not in edge_lines:
                    edge_lines[key] = lineno
                    edges[lname].append((a, b))
                actors.update((a, b))
        except NetworkError as exc:
            if isinstance(exc, MpxParseError):
                raise
            raise MpxParseError(str(exc), lineno, raw) from None

    if net_type is None and (layer_names or actors):
        raise MpxParseError("missing '#TYPE multiplex' header")
    if nodes is not None:
        for (a, b, lname), lineno in edge_lines.items():
            for end in (a, b):
                if end not in nodes.get(lname, ()):
                    raise MpxParseError(f"edge endpoint {end!r} is not listed as a node of layer {lname!r}", lineno)
    return MultilayerNetwork.from_edges(edges, actors, nodes)


def load_mpx(path: str | Path) -> MultilayerNetwork:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_mpx(fh.read())


def dump_mpx(net: MultilayerNetwork) -> str:
    """Canonical mpx text.

    ``#ACTORS`` is written only when some actor has no edge, ``#NODES`` only
    when some layer does not contain every actor.
    """
    out = ["#TYPE multiplex", "#LAYERS"]
    out += [f"{name},UNDIRECTED" for name in net.layers]
    endpoints = {a for layer in net.layers.values() for e in layer.edges for a in e}
    if any(a not in endpoints for a in net.actors):
        out.append("#ACTORS")
        out += list(net.actors)
    if not net.is_node_aligned():
        out.append("#NODES")
        out += [f"{a},{name}" for a in net.actors for name, l in net.layers.items() if a in l.members]
    out.append("#EDGES")
    rows = [(a, b, name) for name, layer in net.layers.items() for a, b in layer.edges]
    out += [f"{a},{b},{name}" for a, b, name in sorted(rows)]
    return "\n".join(out) + "\n"


def save_mpx(net: MultilayerNetwork, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_mpx(net))


# --- constructors -----------------------------------------------------------


def duplicate_to_layers(edges: Iterable[tuple[str, str]], layer_names: Iterable[str]) -> MultilayerNetwork:
    """Copy one flat edge list into several identically wired layers."""
    layer_names = list(layer_names)
    if not layer_names:
        raise NetworkError("at least one layer name is required")
    if len(set(layer_names)) != len(layer_names):
        raise NetworkError(f"duplicate layer names in {layer_names}")
    edges = list(edges)
    return MultilayerNetwork.from_edges({name: edges for name in layer_names})


def flat_edges(net: MultilayerNetwork, layer: str | None = None) -> list[tuple[str, str]]:
    if layer is None:
        if len(net.layers) != 1:
            raise NetworkError("layer must be named for a network with several layers")
        layer = next(iter(net.layers))
    return sorted(net.layer(layer).edges)


def read_edge_list(path: str | Path) -> list[tuple[str, str]]:
    """Two comma-separated actor ids per line; ``--`` comments allowed."""
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("--"):
                continue
            cols = [c.strip() for c in line.split(",")]
            if len(cols) != 2:
                raise MpxParseError("expected 'actor1,actor2'", lineno, raw.rstrip("\n"))
            edges.append((cols[0], cols[1]))
    return edges


def actor_ids(n: int) -> list[str]:
    # zero padded so lexicographic order equals numeric order
    width = len(str(n - 1)) if n > 1 else 1
    return [str(i).zfill(width) for i in range(n)]


def erdos_renyi(n: int, p: float, seed: int, layer: str = "layer0") -> MultilayerNetwork:
    """G(n, p) in a single layer.

    Pairs (i, j), i < j, are visited in lexicographic index order and each
    consumes one uniform draw from ``Stream(seed)``; the pair is kept when
    the draw is below ``p``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    ids = actor_ids(n)
    rows, cols = np.triu_indices(n, k=1)
    draws = Stream(seed).uniforms(len(rows))
    keep = draws < p
    edges = [(ids[i], ids[j]) for i, j in zip(rows[keep].tolist(), cols[keep].tolist())]
    return MultilayerNetwork(ids, [Layer.build(layer, ids, edges)])
