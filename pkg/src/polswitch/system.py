"""Assembled antenna system: divider -> two PIN switches -> hybrid -> patch.

The feed network is reduced to a 3-port (feed, patch edge x, patch edge y).
Closing it with the patch load gives the input reflection and the waves
incident on both patch edges, from which the polarization follows.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .antenna import PatchSpec, accepted_waves, ideal_patch_block, patch_load_block, resonant_frequency
from .components import (
    PUBLISHED_BRANCHLINE,
    BranchLineSpec,
    SwitchCircuit,
    SwitchState,
    WilkinsonSpec,
    branchline_block,
    switch_block,
    wilkinson_block,
)
from .microstrip import FR4, Substrate
from .netcore import FrequencyGrid, NetworkBlock, interconnect, reflection_db
from .polarization import BandCriterion, BandMetrics, Sense, band_extract, ellipse, sense_from_code

F0 = 2.45e9
MODES = ("ideal", "realized")


class WiringError(ValueError):
    pass


class Scenario(enum.Enum):
    """Diode states per operating mode: (diode 1, diode 2)."""

    ANT1_LP = ("ant1", SwitchState.OFF, SwitchState.OFF, Sense.LINEAR)
    ANT2_RHCP = ("ant2", SwitchState.OFF, SwitchState.ON, Sense.RHCP)
    ANT3_LHCP = ("ant3", SwitchState.ON, SwitchState.OFF, Sense.LHCP)

    def __init__(self, key, diode1, diode2, expected):
        self.key = key
        self.diode1 = diode1
        self.diode2 = diode2
        self.expected = expected

    @classmethod
    def parse(cls, text) -> "Scenario":
        if isinstance(text, cls):
            return text
        t = str(text).strip().lower()
        for s in cls:
            if t in (s.key, s.name.lower()):
                return s
        raise ValueError(f"unknown scenario {text!r}; expected ant1, ant2 or ant3")


@dataclass(frozen=True)
class GridSpec:
    start: float = 2.0e9
    stop: float = 3.0e9
    step: float = 1.0e6

    def build(self) -> FrequencyGrid:
        return FrequencyGrid.from_range(self.start, self.stop, self.step)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``start:stop:step`` in Hz; each field accepts a G/M/k suffix."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        return cls(*(parse_freq(p) for p in parts))


_SUFFIX = {"g": 1e9, "m": 1e6, "k": 1e3}


def parse_freq(text: str) -> float:
    t = text.strip().lower().removesuffix("hz")
    if t and t[-1] in _SUFFIX:
        return float(t[:-1]) * _SUFFIX[t[-1]]
    return float(t)


@dataclass(frozen=True)
class SystemNetlist:
    substrate: Substrate = FR4
    wilkinson: WilkinsonSpec = WilkinsonSpec()
    switch1: SwitchCircuit = field(default_factory=SwitchCircuit)
    switch2: SwitchCircuit = field(default_factory=SwitchCircuit)
    branchline: BranchLineSpec = BranchLineSpec()
    patch: PatchSpec = PatchSpec()
    mode: str = "realized"
    dims_as_published: bool = False
    grid: GridSpec = GridSpec()
    f0: float = F0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def ideal(self) -> bool:
        return self.mode == "ideal"

    def with_mode(self, mode: str) -> "SystemNetlist":
        return replace(self, mode=mode)


@dataclass(frozen=True)
class Assembly:
    """Feed network (ports: feed, edge x, edge y) closed by the patch load."""

    feed: NetworkBlock
    patch: NetworkBlock
    s11: np.ndarray
    incident: np.ndarray  # (F, 2) waves travelling into the patch edges

    @property
    def grid(self) -> FrequencyGrid:
        return self.feed.grid

    def input_block(self) -> NetworkBlock:
        return NetworkBlock(self.grid, self.s11[:, None, None], "system input")


def component_blocks(net: SystemNetlist, scenario: Scenario, grid: FrequencyGrid) -> dict:
    sub = net.substrate
    ideal = net.ideal
    wspec = replace(net.wilkinson, ideal=ideal)
    bspec = replace(net.branchline, ideal=ideal)
    if net.dims_as_published and not ideal:
        bspec = replace(bspec, **PUBLISHED_BRANCHLINE)
    if ideal:
        patch = ideal_patch_block(net.f0, grid, net.patch.r_peak, net.patch.q_total)
    else:
        patch = patch_load_block(net.patch, grid)
    return {
        "wilkinson": wilkinson_block(wspec, sub, grid),
        "switch1": switch_block(net.switch1, scenario.diode1, grid, ideal=ideal),
        "switch2": switch_block(net.switch2, scenario.diode2, grid, ideal=ideal),
        "branchline": branchline_block(bspec, sub, grid),
        "patch": patch,
    }


def feed_network(blocks: dict) -> NetworkBlock:
    """Divider outputs through the switches into hybrid ports 0 and 3."""
    expected = {"wilkinson": 3, "switch1": 2, "switch2": 2, "branchline": 4}
    for name, n in expected.items():
        if blocks[name].n_ports != n:
            raise WiringError(f"{name} must be a {n}-port, got {blocks[name].n_ports}")
    parts = [blocks[k] for k in ("wilkinson", "switch1", "switch2", "branchline")]
    wires = [
        ((0, 1), (1, 0)), ((1, 1), (3, 0)),   # divider out a -> switch 1 -> hybrid input
        ((0, 2), (2, 0)), ((2, 1), (3, 3)),   # divider out b -> switch 2 -> hybrid isolated port
    ]
    return interconnect(parts, wires, [(0, 0), (3, 1), (3, 2)], "feed network")


def close_with_load(feed: NetworkBlock, load: NetworkBlock):
    """Input reflection and load-incident waves for a unit wave at feed port 0."""
    if feed.n_ports != 1 + load.n_ports:
        raise WiringError("load must terminate every non-feed port")
    n = load.n_ports
    s = feed.s
    s_tt, s_t0 = s[:, 1:, 1:], s[:, 1:, 0]
    p = load.s
    eye = np.eye(n)
    b = np.linalg.solve(eye - s_tt @ p, s_t0[..., None])[..., 0]
    s11 = s[:, 0, 0] + np.einsum("fi,fij,fj->f", s[:, 0, 1:], p, b)
    return s11, b


def assemble(net: SystemNetlist, scenario, grid: FrequencyGrid | None = None) -> Assembly:
    scenario = Scenario.parse(scenario)
    grid = grid or net.grid.build()
    blocks = component_blocks(net, scenario, grid)
    feed = feed_network(blocks)
    s11, b = close_with_load(feed, blocks["patch"])
    return Assembly(feed, blocks["patch"], s11, b)


@dataclass(frozen=True)
class SweepResult:
    scenario: Scenario
    mode: str
    freq: np.ndarray
    s11: np.ndarray
    a_x: np.ndarray
    a_y: np.ndarray
    ar_db: np.ndarray
    tilt_deg: np.ndarray
    sense_code: np.ndarray
    patch_s11: np.ndarray

    @property
    def s11_db(self) -> np.ndarray:
        return reflection_db(self.s11)

    @property
    def patch_s11_db(self) -> np.ndarray:
        return reflection_db(self.patch_s11)

    @property
    def senses(self) -> list[Sense]:
        return [sense_from_code(c) for c in self.sense_code]

    def rl_band(self) -> BandMetrics:
        return band_extract(self.freq, self.s11_db, -10.0, BandCriterion.RL_10DB)

    def patch_rl_band(self) -> BandMetrics:
        return band_extract(self.freq, self.patch_s11_db, -10.0, BandCriterion.RL_10DB)

    def ar_band(self) -> BandMetrics:
        return band_extract(self.freq, self.ar_db, 3.0, BandCriterion.AR_3DB)

    def min_s11(self, lo: float = -np.inf, hi: float = np.inf):
        m = (self.freq >= lo) & (self.freq <= hi)
        i = np.flatnonzero(m)[np.argmin(self.s11_db[m])]
        return float(self.freq[i]), float(self.s11_db[i])

    def min_ar(self, lo: float = -np.inf, hi: float = np.inf):
        m = (self.freq >= lo) & (self.freq <= hi)
        i = np.flatnonzero(m)[np.argmin(self.ar_db[m])]
        return float(self.freq[i]), float(self.ar_db[i])

    def summary(self) -> dict:
        rl, ar, prl = self.rl_band(), self.ar_band(), self.patch_rl_band()
        f_s, v_s = self.min_s11()
        f_a, v_a = self.min_ar()
        return {
            "scenario": self.scenario.key,
            "mode": self.mode,
            "points": int(self.freq.size),
            "f_min_s11_hz": f_s,
            "min_s11_db": v_s,
            "f_min_ar_hz": f_a,
            "min_ar_db": v_a,
            "rl10_lo_hz": rl.band_lo,
            "rl10_hi_hz": rl.band_hi,
            "rl10_fractional_bw": rl.fractional_bw,
            "patch_rl10_lo_hz": prl.band_lo,
            "patch_rl10_hi_hz": prl.band_hi,
            "patch_rl10_fractional_bw": prl.fractional_bw,
            "ar3_lo_hz": ar.band_lo,
            "ar3_hi_hz": ar.band_hi,
            "ar3_fractional_bw": ar.fractional_bw,
        }


def _solve_chunk(net, scenario, points):
    a = assemble(net, scenario, FrequencyGrid(points))
    gamma = np.stack([a.patch.s[:, 0, 0], a.patch.s[:, 1, 1]], axis=-1)
    modes = accepted_waves(a.incident, gamma)
    return a.s11, modes, a.patch.s[:, 0, 0]


def run_sweep(net: SystemNetlist, scenario, grid: FrequencyGrid | None = None, workers: int = 1) -> SweepResult:
    """Solve every grid point; ``workers > 1`` splits the grid across threads.

    Each point is solved independently, so the result does not depend on
    the chunking.
    """
    scenario = Scenario.parse(scenario)
    grid = grid or net.grid.build()
    pts = grid.points
    chunks = np.array_split(pts, max(1, min(workers, pts.size)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _solve_chunk(net, scenario, c), chunks))
    else:
        parts = [_solve_chunk(net, scenario, c) for c in chunks]
    s11 = np.concatenate([p[0] for p in parts])
    modes = np.concatenate([p[1] for p in parts])
    patch_s11 = np.concatenate([p[2] for p in parts])
    ar_db, tilt, code = ellipse(modes[:, 0], modes[:, 1])
    return SweepResult(scenario, net.mode, pts.copy(), s11, modes[:, 0], modes[:, 1],
                       ar_db, tilt, code, patch_s11)


def run_all(net: SystemNetlist, grid: FrequencyGrid | None = None, workers: int = 1) -> dict:
    return {s: run_sweep(net, s, grid, workers) for s in Scenario}


def cavity_resonance(net: SystemNetlist) -> float:
    return resonant_frequency(net.patch)
