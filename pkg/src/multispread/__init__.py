"""Simulation of interacting spreading processes on multilayer networks."""

from multispread.engine import (
    ABSENT,
    ExperimentConfig,
    InitialStates,
    NodeStateMap,
    epoch_step,
    perform_propagation,
    set_initial_states,
)
from multispread.logger import EpochSnapshot, ExperimentLog, to_csv, write_report
from multispread.model import CompiledModel, ModelBuilder
from multispread.net import (
    Layer,
    MultilayerNetwork,
    duplicate_to_layers,
    erdos_renyi,
    load_mpx,
    save_mpx,
)

__version__ = "0.1.0"
