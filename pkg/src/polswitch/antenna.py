"""Circuit model of the dual-fed square patch.

Each of the two orthogonal cavity modes (TM10, TM01) is a parallel RLC
resonator seen from the centre of one edge, behind that edge's matching
line.  The modes share f_res, Q and edge resistance by square symmetry and
do not couple, so the load is a diagonal 2-port.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C0

from .microstrip import (
    FR4,
    LineGeometry,
    Substrate,
    eps_eff_dispersive,
    eps_eff_static,
    ideal_line,
    tline_block,
)
from .netcore import FrequencyGrid, NetworkBlock, Z_REF, cascade_all, impedance_load, interconnect
from .polarization import ExcitationPair


@dataclass(frozen=True)
class PatchSpec:
    """Square patch of edge ``a`` (mm) fed at two edge centres.

    ``approach`` is the 50 ohm line from the feed network, ``transformer``
    the narrow section next to the patch edge.  ``f_res`` overrides the
    cavity-model resonance when given.
    """

    a: float = 27.0
    sub: Substrate = FR4
    q_total: float = 5.0
    r_peak: float = 200.0
    approach: LineGeometry | None = LineGeometry(1.84, 36.0)
    transformer: LineGeometry | None = LineGeometry(0.26, 18.0)
    f_res: float | None = None

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("patch edge must be > 0")
        if self.q_total <= 1:
            raise ValueError("q_total must be > 1")
        if self.r_peak <= 0:
            raise ValueError("r_peak must be > 0")


@dataclass(frozen=True)
class ModeResonator:
    f_res: float
    r_peak: float
    q: float

    def impedance(self, f):
        f = np.asarray(f, dtype=float)
        detune = f / self.f_res - self.f_res / f
        return 1 / (1 / self.r_peak + 1j * self.q / self.r_peak * detune)

    @property
    def lc(self):
        """Equivalent (L, C) of the parallel tank."""
        w0 = 2 * np.pi * self.f_res
        return self.r_peak / (self.q * w0), self.q / (self.r_peak * w0)


def fringing_extension(eps_eff: float, w_over_h: float, h: float) -> float:
    """Hammerstad open-end length extension (same units as ``h``)."""
    u = w_over_h
    return 0.412 * h * (eps_eff + 0.3) * (u + 0.264) / ((eps_eff - 0.258) * (u + 0.8))


def resonant_frequency(spec: PatchSpec, dispersive: bool = True, fringing: bool = True) -> float:
    """TM10 resonance from the cavity model, c / (2 (a + 2 dL) sqrt(eps_eff)).

    The patch is a microstrip line ``a`` wide; at w/h ~ 27 its effective
    permittivity is strongly frequency dependent around 2.5 GHz, so by
    default eps_eff is evaluated at the resonance itself (fixed point).
    ``dispersive=False`` gives the quasi-static value.
    """
    sub = spec.sub
    u = spec.a / sub.h
    ee = float(eps_eff_static(u, sub.eps_r))

    def f_of(ee):
        dl = fringing_extension(ee, u, sub.h) if fringing else 0.0
        return C0 / (2 * (spec.a + 2 * dl) * 1e-3 * np.sqrt(ee))

    f = f_of(ee)
    if not dispersive or sub.eps_r == 1:
        return float(f)
    for _ in range(100):
        ee = float(eps_eff_dispersive(u, sub.eps_r, f, sub.h))
        f_new = f_of(ee)
        if abs(f_new - f) < 1e-3:
            return float(f_new)
        f = f_new
    return float(f)


def mode_resonator(spec: PatchSpec) -> ModeResonator:
    f = spec.f_res if spec.f_res is not None else resonant_frequency(spec)
    return ModeResonator(f, spec.r_peak, spec.q_total)


def port_chain(spec: PatchSpec, grid: FrequencyGrid) -> NetworkBlock:
    """Feed lines of one edge, from the port toward the patch."""
    lines = []
    if spec.approach is not None and spec.approach.l > 0:
        lines.append(tline_block(spec.approach, spec.sub, grid, "approach"))
    if spec.transformer is not None and spec.transformer.l > 0:
        lines.append(tline_block(spec.transformer, spec.sub, grid, "transformer"))
    return cascade_all(*lines) if lines else None


def _terminate(chain: NetworkBlock | None, load: NetworkBlock) -> NetworkBlock:
    if chain is None:
        return load
    return interconnect([chain, load], [((0, 1), (1, 0))], [(0, 0)])


def _diagonal(edge: NetworkBlock, label: str) -> NetworkBlock:
    g = edge.s[:, 0, 0]
    s = np.zeros((len(edge.grid), 2, 2), dtype=complex)
    s[:, 0, 0] = s[:, 1, 1] = g
    return NetworkBlock(edge.grid, s, label)


def patch_load_block(spec: PatchSpec, grid: FrequencyGrid) -> NetworkBlock:
    """2-port load of the two feed edges (port 0: TM10 edge, port 1: TM01 edge)."""
    res = mode_resonator(spec)
    tank = impedance_load(grid, res.impedance(grid.points), "mode")
    return _diagonal(_terminate(port_chain(spec, grid), tank), "patch")


def ideal_patch_block(f0: float, grid: FrequencyGrid, r_peak: float = 200.0, q_total: float = 5.0) -> NetworkBlock:
    """Design-centred patch: resonance at ``f0`` behind an exact quarter-wave
    transformer, so each port is matched at ``f0``."""
    res = ModeResonator(f0, r_peak, q_total)
    tank = impedance_load(grid, res.impedance(grid.points), "mode")
    qw = ideal_line(np.sqrt(Z_REF * r_peak), f0, 90.0, grid, "transformer")
    return _diagonal(_terminate(qw, tank), "patch (ideal)")


def mode_excitations(incident, gamma_port) -> ExcitationPair:
    """Mode amplitudes from the waves incident on the two patch ports.

    Each mode receives the power its port accepts, with the phase of the
    total port voltage; ``gamma_port`` is each port's own reflection.
    """
    a = np.asarray(incident, dtype=complex)
    g = np.asarray(gamma_port, dtype=complex)
    m = accepted_waves(a, g)
    return ExcitationPair(complex(m[0]), complex(m[1]))


def accepted_waves(incident, gamma_port):
    """Vectorized core of :func:`mode_excitations` (last axis = port)."""
    a = np.asarray(incident, dtype=complex)
    g = np.asarray(gamma_port, dtype=complex)
    v = 1 + g
    phase = np.where(np.abs(v) > 0, v / np.where(np.abs(v) > 0, np.abs(v), 1), 1)
    return a * np.sqrt(np.clip(1 - np.abs(g) ** 2, 0, None)) * phase


__all__ = [
    "PatchSpec",
    "ModeResonator",
    "resonant_frequency",
    "fringing_extension",
    "mode_resonator",
    "patch_load_block",
    "ideal_patch_block",
    "mode_excitations",
    "accepted_waves",
]
