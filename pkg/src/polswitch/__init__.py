"""Circuit-level model of a patch antenna whose polarization is switched by
two PIN diodes in its feed network (linear, right-hand or left-hand circular)."""

from .antenna import PatchSpec, ideal_patch_block, patch_load_block, resonant_frequency
from .components import (
    BranchLineSpec,
    DiodeModel,
    SwitchCircuit,
    SwitchState,
    WilkinsonSpec,
    branchline_block,
    lumped_block,
    switch_block,
    wilkinson_block,
)
from .microstrip import FR4, LineGeometry, Substrate, analyze, synthesize, tline_block
from .netcore import FrequencyGrid, NetworkBlock, cascade, connect, connect_ports, interconnect
from .netlist import default_netlist, load_netlist, parse_netlist
from .polarization import ExcitationPair, Sense, band_extract, polarization_state
from .system import Scenario, SystemNetlist, assemble, run_all, run_sweep
from .touchstone import read_touchstone, write_touchstone

__version__ = "0.1.0"

__all__ = [
    "PatchSpec", "ideal_patch_block", "patch_load_block", "resonant_frequency",
    "BranchLineSpec", "DiodeModel", "SwitchCircuit", "SwitchState", "WilkinsonSpec",
    "branchline_block", "lumped_block", "switch_block", "wilkinson_block",
    "FR4", "LineGeometry", "Substrate", "analyze", "synthesize", "tline_block",
    "FrequencyGrid", "NetworkBlock", "cascade", "connect", "connect_ports", "interconnect",
    "default_netlist", "load_netlist", "parse_netlist",
    "ExcitationPair", "Sense", "band_extract", "polarization_state",
    "Scenario", "SystemNetlist", "assemble", "run_all", "run_sweep",
    "read_touchstone", "write_touchstone",
]
