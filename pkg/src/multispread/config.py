"""Run configuration files (YAML; plain JSON is accepted too).

Example::

    network:
      bundled: lesmis
      layers: [ill, aware, vacc]
    model:
      processes:
        - {name: ill, states: [s, i, r]}
      adjacency_policy: linear
      background_weight: 0.005
      transitions:
        "s.n.u->i.n.u": 0.4
    initial_states:
      ill:
        counts: {s: 65, i: 10, r: 2}
        explicit: {Valjean: i}
    epochs: 50
    seed: 42
    output_dir: report

Network sources (exactly one key besides ``layers``):

* ``mpx: path``
* ``erdos_renyi: {n, p}``, seeded with the top-level ``seed``; optional ``layers``
  copies the generated graph into the named layers
* ``duplicate: {edges_path, layer_names}``
* ``bundled: lesmis`` with ``layers``
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from multispread import net as netmod
from multispread.engine import ExperimentConfig, InitialStates, check_alignment, check_initial
from multispread.model import CompiledModel, ModelBuilder, ModelError, POLICIES, check_weight

BUNDLED_NETWORKS = {"lesmis": "lesmis.mpx"}
BUNDLED_CONFIGS = {"epidemic": "epidemic.yaml"}
NETWORK_SOURCES = ("mpx", "erdos_renyi", "duplicate", "bundled")
TOP_KEYS = {"network", "model", "initial_states", "epochs", "seed", "output_dir"}


class ConfigError(ValueError):
    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(self.diagnostics))


@dataclass
class RunConfig:
    network: netmod.MultilayerNetwork
    model: CompiledModel
    experiment: ExperimentConfig
    output_dir: Path
    source: Path | None = None

    def summary(self) -> dict[str, Any]:
        return {
            "processes": len(self.model.processes),
            "global_states": self.model.n_global_states(),
            "allowed_transitions": len(self.model.allowed_transitions()),
            "layers": {name: len(layer.members) for name, layer in self.network.layers.items()},
            "epochs": self.experiment.epochs,
            "seed": self.experiment.seed,
        }


def data_path(name: str) -> Path:
    return Path(str(resources.files("multispread") / "data" / name))


def bundled_network(name: str) -> netmod.MultilayerNetwork:
    if name not in BUNDLED_NETWORKS:
        raise ConfigError([f"network.bundled: unknown bundled network {name!r}; known: {sorted(BUNDLED_NETWORKS)}"])
    return netmod.load_mpx(data_path(BUNDLED_NETWORKS[name]))


def bundled_config_path(name: str = "epidemic") -> Path:
    return data_path(BUNDLED_CONFIGS[name])


def read_config(path: str | Path) -> dict:
    """Parse the file; raises FileNotFoundError or ConfigError."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"{path}: not valid YAML/JSON: {exc}"]) from None
    if not isinstance(raw, dict):
        raise ConfigError([f"{path}: top level must be a mapping"])
    return raw


def load_config(path: str | Path) -> RunConfig:
    cfg = build_config(read_config(path))
    cfg.source = Path(path)
    return cfg


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def build_config(raw: dict) -> RunConfig:
    """Validate a parsed config tree, collecting every problem before raising."""
    diags: list[str] = []
    for key in sorted(set(raw) - TOP_KEYS):
        diags.append(f"unknown top-level key {key!r}")
    for key in ("network", "model", "initial_states", "epochs", "seed"):
        if key not in raw:
            diags.append(f"missing required key {key!r}")

    epochs = raw.get("epochs", 0)
    if not _is_int(epochs) or epochs < 0:
        diags.append(f"epochs: must be a non-negative integer, got {epochs!r}")
        epochs = 0
    seed = raw.get("seed", 0)
    if not _is_int(seed) or not -(2**63) <= seed < 2**64:
        diags.append(f"seed: must be a 64-bit integer, got {seed!r}")
        seed = 0
    output_dir = raw.get("output_dir", "report")
    if not isinstance(output_dir, str) or not output_dir:
        diags.append(f"output_dir: must be a non-empty path, got {output_dir!r}")
        output_dir = "report"

    network = _build_network(raw.get("network"), seed, diags) if "network" in raw else None
    model = _build_model(raw.get("model"), diags) if "model" in raw else None
    initial = _build_initial(raw.get("initial_states"), diags) if "initial_states" in raw else None

    if network is not None and model is not None:
        diags += [f"alignment: {p}" for p in check_alignment(network, model)]
        if initial is not None:
            diags += [f"initial_states: {p}" for p in check_initial(network, model, initial)]

    if diags:
        raise ConfigError(diags)
    return RunConfig(network, model, ExperimentConfig(epochs, seed, initial), Path(output_dir))


def _build_network(spec, seed, diags) -> netmod.MultilayerNetwork | None:
    if not isinstance(spec, dict):
        diags.append("network: must be a mapping")
        return None
    sources = [k for k in spec if k in NETWORK_SOURCES]
    extra = [k for k in spec if k not in NETWORK_SOURCES and k != "layers"]
    for k in extra:
        diags.append(f"network: unknown key {k!r}")
    if len(sources) != 1:
        diags.append(f"network: exactly one source of {list(NETWORK_SOURCES)} is required, got {sources}")
        return None
    kind = sources[0]
    layers = spec.get("layers")
    if layers is not None and (not isinstance(layers, list) or not all(isinstance(l, str) for l in layers)):
        diags.append("network.layers: must be a list of layer names")
        return None
    try:
        if kind == "mpx":
            if layers is not None:
                diags.append("network.layers: not allowed with an mpx source (layers come from the file)")
            return netmod.load_mpx(spec["mpx"])
        if kind == "bundled":
            if not layers:
                diags.append("network.layers: required for a bundled network")
                return None
            base = bundled_network(spec["bundled"])
            return netmod.duplicate_to_layers(netmod.flat_edges(base), layers)
        if kind == "erdos_renyi":
            er = spec["erdos_renyi"]
            if not isinstance(er, dict) or not _is_int(er.get("n")) or not _is_num(er.get("p")):
                diags.append("network.erdos_renyi: needs integer 'n' and numeric 'p'")
                return None
            g = netmod.erdos_renyi(er["n"], float(er["p"]), seed)
            if layers:
                return netmod.duplicate_to_layers(netmod.flat_edges(g), layers)
            return g
        dup = spec["duplicate"]
        if not isinstance(dup, dict) or "edges_path" not in dup or not isinstance(dup.get("layer_names"), list):
            diags.append("network.duplicate: needs 'edges_path' and a 'layer_names' list")
            return None
        return netmod.duplicate_to_layers(netmod.read_edge_list(dup["edges_path"]), dup["layer_names"])
    except ConfigError as exc:
        diags += exc.diagnostics
    except FileNotFoundError as exc:
        diags.append(f"network.{kind}: file not found: {exc.filename}")
    except (netmod.NetworkError, ValueError) as exc:
        diags.append(f"network.{kind}: {exc}")
    return None


def _build_model(spec, diags) -> CompiledModel | None:
    if not isinstance(spec, dict):
        diags.append("model: must be a mapping")
        return None
    for k in sorted(set(spec) - {"processes", "adjacency_policy", "background_weight", "transitions"}):
        diags.append(f"model: unknown key {k!r}")
    policy = spec.get("adjacency_policy", "cyclic")
    if policy not in POLICIES:
        diags.append(f"model.adjacency_policy: must be one of {list(POLICIES)}, got {policy!r}")
        return None
    background = spec.get("background_weight")
    if background is not None:
        if not _is_num(background):
            diags.append(f"model.background_weight: must be a number or null, got {background!r}")
            return None
        try:
            background = check_weight(background)
        except ModelError as exc:
            diags.append(f"model.background_weight: {exc}")
            return None

    builder = ModelBuilder()
    procs = spec.get("processes")
    if not isinstance(procs, list) or not procs:
        diags.append("model.processes: must be a non-empty list")
        return None
    ok = True
    for i, p in enumerate(procs):
        if not isinstance(p, dict) or not isinstance(p.get("states"), list):
            diags.append(f"model.processes[{i}]: needs 'name' and a 'states' list")
            ok = False
            continue
        try:
            builder.add_process(p.get("name"), [str(s) for s in p["states"]])
        except ModelError as exc:
            diags.append(f"model.processes[{i}]: {exc}")
            ok = False
    if not ok:
        return None
    model = builder.compile(background_weight=background, adjacency_policy=policy)

    transitions = spec.get("transitions") or {}
    if not isinstance(transitions, dict):
        diags.append("model.transitions: must map 'src->dst' to a weight")
        return model
    for text, w in transitions.items():
        if not _is_num(w):
            diags.append(f"model.transitions[{text!r}]: weight must be a number, got {w!r}")
            continue
        try:
            src, dst = model.parse_transition(str(text))
            model.set_transition(model.format_state(src), model.format_state(dst), w)
        except ModelError as exc:
            diags.append(f"model.transitions[{text!r}]: {exc}")
    return model


def _build_initial(spec, diags) -> dict[str, InitialStates] | None:
    if not isinstance(spec, dict):
        diags.append("initial_states: must map process names to {counts, explicit}")
        return None
    out = {}
    for name, entry in spec.items():
        if not isinstance(entry, dict) or not isinstance(entry.get("counts"), dict):
            diags.append(f"initial_states.{name}: needs a 'counts' mapping")
            continue
        for k in sorted(set(entry) - {"counts", "explicit"}):
            diags.append(f"initial_states.{name}: unknown key {k!r}")
        explicit = entry.get("explicit") or {}
        if not isinstance(explicit, dict):
            diags.append(f"initial_states.{name}.explicit: must map actor ids to states")
            explicit = {}
        counts = {str(s): n for s, n in entry["counts"].items()}
        out[str(name)] = InitialStates(counts, {str(a): str(s) for a, s in explicit.items()})
    return out
