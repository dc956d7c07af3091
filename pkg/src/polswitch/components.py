"""Feed-network building blocks.

Wilkinson divider, branch-line quadrature hybrid, PIN-diode shunt switch and
single lumped elements.  Dividers and couplers come in an ``ideal`` variant
(textbook S-matrix, frequency independent) and a realized variant assembled
from microstrip sections.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .microstrip import (
    LineGeometry,
    Substrate,
    guided_wavelength,
    synthesize,
    tline_block,
)
from .netcore import (
    ABCDMatrix,
    FrequencyGrid,
    NetworkBlock,
    Z_REF,
    block_from_abcd,
    interconnect,
    tee,
)

SQRT2 = np.sqrt(2.0)


class SwitchState(enum.Enum):
    """Diode bias state.  ON = forward biased = shunt short = path blocked."""

    ON = "on"
    OFF = "off"

    @classmethod
    def parse(cls, text) -> "SwitchState":
        if isinstance(text, cls):
            return text
        return cls(str(text).strip().lower())


@dataclass(frozen=True)
class DiodeModel:
    """Packaged PIN diode: bias-dependent junction plus series package inductance.

    Defaults are typical data-sheet values for a BAR64-02W class part.
    """

    r_on: float = 2.1
    r_off: float = 3000.0
    c_j: float = 0.17e-12
    l_s: float = 0.6e-9

    def __post_init__(self):
        if min(self.r_on, self.r_off, self.c_j, self.l_s) < 0:
            raise ValueError("diode parameters must be >= 0")
        if not self.r_on < self.r_off:
            raise ValueError("r_on must be smaller than r_off")


def diode_admittance(d: DiodeModel, state, f):
    """Admittance of the diode; stays finite where the impedance is an open."""
    state = SwitchState.parse(state)
    w = 2 * np.pi * np.asarray(f, dtype=float)
    zl = 1j * w * d.l_s
    if state is SwitchState.ON:
        z = zl + d.r_on
        if np.any(z == 0):
            raise ValueError("ideal short diode has no finite admittance")
        return 1 / z
    yj = (0.0 if np.isinf(d.r_off) else 1.0 / d.r_off) + 1j * w * d.c_j
    return yj / (1 + zl * yj)


def diode_impedance(d: DiodeModel, state, f):
    """ON: l_s + r_on.  OFF: l_s + (r_off || c_j).  Infinite for an ideal open."""
    state = SwitchState.parse(state)
    w = 2 * np.pi * np.asarray(f, dtype=float)
    zl = 1j * w * d.l_s
    if state is SwitchState.ON:
        return zl + d.r_on
    yj = (0.0 if np.isinf(d.r_off) else 1.0 / d.r_off) + 1j * w * d.c_j
    with np.errstate(divide="ignore"):
        return np.where(yj == 0, complex(np.inf, 0), zl + 1 / np.where(yj == 0, 1, yj))


def series_z_abcd(z) -> ABCDMatrix:
    z = np.asarray(z, dtype=complex)
    return ABCDMatrix(np.ones_like(z), z, np.zeros_like(z), np.ones_like(z))


def shunt_y_abcd(y) -> ABCDMatrix:
    y = np.asarray(y, dtype=complex)
    return ABCDMatrix(np.ones_like(y), np.zeros_like(y), y, np.ones_like(y))


LUMPED_KINDS = ("series_R", "series_L", "series_C", "shunt_R", "shunt_L", "shunt_C")


def lumped_block(kind: str, value: float, grid: FrequencyGrid) -> NetworkBlock:
    """Single R, L or C in series with, or shunted across, the line."""
    if kind not in LUMPED_KINDS:
        raise ValueError(f"unknown element kind {kind!r}; expected one of {LUMPED_KINDS}")
    if value < 0 or (value == 0 and kind != "series_R"):
        raise ValueError(f"{kind} value must be > 0")
    jw = 1j * grid.omega
    place, elem = kind.split("_")
    if elem == "R":
        z = np.full(len(grid), value, dtype=complex)
    elif elem == "L":
        z = jw * value
    else:
        z = 1 / (jw * value)
    m = series_z_abcd(z) if place == "series" else shunt_y_abcd(1 / z)
    return block_from_abcd(m, grid, f"{kind} {value:g}")


@dataclass(frozen=True)
class SwitchCircuit:
    """Shunt PIN switch with its bias network.

    Topology from the input port: series resistor, DC block, shunt node
    (diode to ground, plus the RF choke to the bias supply), DC block.  A
    ``None`` capacitor or choke leaves that element out.
    """

    series_r: float = 45.0
    dc_block_c: float | None = 47e-9
    choke_l: float | None = 22e-9
    diode: DiodeModel = field(default_factory=DiodeModel)

    def __post_init__(self):
        if self.series_r < 0:
            raise ValueError("series_r must be >= 0")
        for v in (self.dc_block_c, self.choke_l):
            if v is not None and v <= 0:
                raise ValueError("capacitor and inductor values must be > 0")


def switch_block(sw: SwitchCircuit, state, grid: FrequencyGrid, ideal: bool = False) -> NetworkBlock:
    """Two-port of the switching circuit in the given bias state.

    ``ideal`` keeps only the series resistor and treats the diode as a
    perfect short (ON) or open (OFF); DC blocks and choke disappear.
    """
    state = SwitchState.parse(state)
    if ideal:
        return ideal_switch_block(sw.series_r, state, grid)
    f = grid.points
    jw = 1j * grid.omega
    y = diode_admittance(sw.diode, state, f)
    if sw.choke_l is not None:
        # bias feed is RF-grounded by its supply decoupling capacitor
        y = y + 1 / (jw * sw.choke_l)
    parts = [series_z_abcd(np.full(len(grid), sw.series_r, dtype=complex))]
    dc = None if sw.dc_block_c is None else series_z_abcd(1 / (jw * sw.dc_block_c))
    if dc is not None:
        parts.append(dc)
    parts.append(shunt_y_abcd(y))
    if dc is not None:
        parts.append(dc)
    m = parts[0]
    for p in parts[1:]:
        m = m @ p
    return block_from_abcd(m, grid, f"switch {state.value}")


def ideal_switch_block(series_r: float, state, grid: FrequencyGrid) -> NetworkBlock:
    state = SwitchState.parse(state)
    if state is SwitchState.OFF:
        m = series_z_abcd(np.full(len(grid), series_r, dtype=complex))
        return block_from_abcd(m, grid, "switch off (ideal)")
    # resistor into a short on the input side, short on the output side
    g_in = (series_r - Z_REF) / (series_r + Z_REF)
    s = np.array([[g_in, 0], [0, -1]], dtype=complex)
    return NetworkBlock(grid, s, "switch on (ideal)")


# -- Wilkinson divider -------------------------------------------------------


@dataclass(frozen=True)
class WilkinsonSpec:
    """Equal-split Wilkinson divider.  Port 0 input, ports 1 and 2 outputs.

    ``arm.l == 0`` means "a quarter guided wavelength at f0".
    """

    f0: float = 2.45e9
    z_sys: float = Z_REF
    arm: LineGeometry = LineGeometry(0.96)
    isolation_r: float = 100.0
    ideal: bool = False

    def __post_init__(self):
        if self.f0 <= 0:
            raise ValueError("f0 must be > 0")


def ideal_wilkinson_s() -> np.ndarray:
    return -1j / SQRT2 * np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]], dtype=complex)


def _quarter_wave(geom: LineGeometry, sub: Substrate, f0: float) -> LineGeometry:
    if geom.l > 0:
        return geom
    return geom.with_length(guided_wavelength(sub, geom, f0) / 4)


def wilkinson_block(spec: WilkinsonSpec, sub: Substrate, grid: FrequencyGrid) -> NetworkBlock:
    if spec.ideal:
        return NetworkBlock(grid, ideal_wilkinson_s(), "wilkinson (ideal)")
    arm = _quarter_wave(spec.arm, sub, spec.f0)
    blocks = [
        tee(grid),                                          # 0 input node
        tline_block(arm, sub, grid, "arm a"),               # 1
        tline_block(arm, sub, grid, "arm b"),               # 2
        tee(grid),                                          # 3 output node a
        tee(grid),                                          # 4 output node b
        lumped_block("series_R", spec.isolation_r, grid),   # 5
    ]
    wires = [
        ((0, 1), (1, 0)), ((0, 2), (2, 0)),
        ((1, 1), (3, 0)), ((2, 1), (4, 0)),
        ((3, 2), (5, 0)), ((4, 2), (5, 1)),
    ]
    return interconnect(blocks, wires, [(0, 0), (3, 1), (4, 1)], "wilkinson")


# -- branch-line coupler -----------------------------------------------------


@dataclass(frozen=True)
class BranchLineSpec:
    """Quadrature hybrid.  Ports: 0 input, 1 through, 2 coupled, 3 isolated.

    Realized arms are synthesized on the substrate from ``z_series`` and
    ``z_shunt`` unless explicit geometries are given.
    """

    f0: float = 2.45e9
    z_sys: float = Z_REF
    z_series: float = Z_REF / SQRT2
    z_shunt: float = Z_REF
    series_arm: LineGeometry | None = None
    shunt_arm: LineGeometry | None = None
    access: LineGeometry | None = None
    ideal: bool = False

    def __post_init__(self):
        if self.f0 <= 0:
            raise ValueError("f0 must be > 0")


# published layout: 0.96 mm x 16.16 mm through arms, 1.84 mm wide branches and
# 1.84 mm x 36 mm access lines
PUBLISHED_BRANCHLINE = dict(
    series_arm=LineGeometry(0.96, 16.16),
    shunt_arm=LineGeometry(1.84),
    access=LineGeometry(1.84, 36.0),
)


def ideal_branchline_s() -> np.ndarray:
    return -1 / SQRT2 * np.array(
        [[0, 1j, 1, 0], [1j, 0, 0, 1], [1, 0, 0, 1j], [0, 1, 1j, 0]], dtype=complex
    )


def branchline_block(spec: BranchLineSpec, sub: Substrate, grid: FrequencyGrid) -> NetworkBlock:
    if spec.ideal:
        return NetworkBlock(grid, ideal_branchline_s(), "branch-line (ideal)")
    series = spec.series_arm or synthesize(spec.z_series, sub)
    shunt = spec.shunt_arm or synthesize(spec.z_shunt, sub)
    series = _quarter_wave(series, sub, spec.f0)
    shunt = _quarter_wave(shunt, sub, spec.f0)
    blocks = [tee(grid) for _ in range(4)] + [
        tline_block(series, sub, grid, "arm 0-1"),  # 4
        tline_block(shunt, sub, grid, "arm 1-2"),   # 5
        tline_block(series, sub, grid, "arm 2-3"),  # 6
        tline_block(shunt, sub, grid, "arm 3-0"),   # 7
    ]
    # corner node k: tee port 0 external, port 1 to the clockwise arm, port 2 to the other
    wires = [
        ((0, 1), (4, 0)), ((1, 2), (4, 1)),
        ((1, 1), (5, 0)), ((2, 2), (5, 1)),
        ((2, 1), (6, 0)), ((3, 2), (6, 1)),
        ((3, 1), (7, 0)), ((0, 2), (7, 1)),
    ]
    net = interconnect(blocks, wires, [(k, 0) for k in range(4)], "branch-line")
    if spec.access is None:
        return net
    feed = tline_block(spec.access, sub, grid, "access")
    return interconnect([net] + [feed] * 4, [((0, k), (k + 1, 1)) for k in range(4)],
                        [(k + 1, 0) for k in range(4)], "branch-line")

