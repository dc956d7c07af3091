"""Quasi-static microstrip model (Hammerstad-Jensen) and line two-ports.

Lengths are in millimetres, frequencies in Hz.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C0, physical_constants

from .netcore import ABCDMatrix, FrequencyGrid, NetworkBlock, block_from_abcd

ETA0 = physical_constants["characteristic impedance of vacuum"][0]

W_OVER_H_MIN = 0.05
W_OVER_H_MAX = 20.0


class ValidityError(ValueError):
    """Geometry or target outside the closed-form model's range."""


@dataclass(frozen=True)
class Substrate:
    eps_r: float
    h: float
    tan_d: float = 0.0

    def __post_init__(self):
        if self.eps_r < 1:
            raise ValueError(f"eps_r must be >= 1, got {self.eps_r}")
        if self.h <= 0:
            raise ValueError(f"substrate height must be > 0, got {self.h}")
        if not 0 <= self.tan_d < 0.1:
            raise ValueError(f"tan_d must be in [0, 0.1), got {self.tan_d}")

    def lossless(self) -> "Substrate":
        return Substrate(self.eps_r, self.h, 0.0)


# 1 mm FR-4, eps_r 4.6 as fabricated; loss tangent is a typical value for FR-4
FR4 = Substrate(4.6, 1.0, 0.02)
FR4_LOSSLESS = FR4.lossless()


@dataclass(frozen=True)
class LineGeometry:
    w: float
    l: float = 0.0  # noqa: E741

    def __post_init__(self):
        if self.w <= 0:
            raise ValueError(f"trace width must be > 0, got {self.w}")
        if self.l < 0:
            raise ValueError(f"trace length must be >= 0, got {self.l}")

    def with_length(self, l: float) -> "LineGeometry":  # noqa: E741
        return LineGeometry(self.w, l)


@dataclass(frozen=True)
class LineParams:
    z0: float
    eps_eff: float


def eps_eff_static(u, eps_r):
    """Hammerstad-Jensen effective permittivity for width/height ratio ``u``."""
    u = np.asarray(u, dtype=float)
    a = (
        1
        + np.log((u**4 + (u / 52) ** 2) / (u**4 + 0.432)) / 49
        + np.log(1 + (u / 18.1) ** 3) / 18.7
    )
    b = 0.564 * ((eps_r - 0.9) / (eps_r + 3)) ** 0.053
    return (eps_r + 1) / 2 + (eps_r - 1) / 2 * (1 + 10 / u) ** (-a * b)


def z0_air(u):
    """Characteristic impedance of the strip with the substrate replaced by air."""
    u = np.asarray(u, dtype=float)
    f = 6 + (2 * np.pi - 6) * np.exp(-((30.666 / u) ** 0.7528))
    return ETA0 / (2 * np.pi) * np.log(f / u + np.sqrt(1 + (2 / u) ** 2))


def eps_eff_dispersive(u, eps_r, f, h):
    """Kirschning-Jansen frequency-dependent effective permittivity.

    ``f`` in Hz, ``h`` in mm.  Valid for 0.1 <= u <= 100, eps_r <= 20 and
    f*h <= 13 GHz*mm.
    """
    fn = np.asarray(f, dtype=float) * 1e-9 * h
    ee0 = eps_eff_static(u, eps_r)
    p1 = (
        0.27488
        + (0.6315 + 0.525 / (1 + 0.0157 * fn) ** 20) * u
        - 0.065683 * np.exp(-8.7513 * u)
    )
    p2 = 0.33622 * (1 - np.exp(-0.03442 * eps_r))
    p3 = 0.0363 * np.exp(-4.6 * u) * (1 - np.exp(-((fn / 38.7) ** 4.97)))
    p4 = 1 + 2.751 * (1 - np.exp(-((eps_r / 15.916) ** 8)))
    p = p1 * p2 * ((0.1844 + p3 * p4) * fn) ** 1.5763
    return eps_r - (eps_r - ee0) / (1 + p)


def _check_window(w: float, h: float) -> float:
    u = w / h
    if not W_OVER_H_MIN <= u <= W_OVER_H_MAX:
        raise ValidityError(
            f"w/h = {u:.4g} outside [{W_OVER_H_MIN}, {W_OVER_H_MAX}]"
        )
    return u


def analyze(geom: LineGeometry, sub: Substrate) -> LineParams:
    """Characteristic impedance and effective permittivity of a trace."""
    u = _check_window(geom.w, sub.h)
    ee = float(eps_eff_static(u, sub.eps_r))
    return LineParams(float(z0_air(u)) / np.sqrt(ee), ee)


def synthesize(z0_target: float, sub: Substrate, xtol: float = 1e-4) -> LineGeometry:
    """Trace width (length 0) giving ``z0_target`` on ``sub``, by bisection.

    Stops once the width bracket is below ``xtol`` mm and the impedance is
    within 0.01 ohm of the target.
    """
    if not 15.0 <= z0_target <= 150.0:
        raise ValidityError(f"target {z0_target} ohm outside 15-150 ohm")
    lo, hi = W_OVER_H_MIN * sub.h, W_OVER_H_MAX * sub.h
    z = lambda w: analyze(LineGeometry(w), sub).z0  # noqa: E731
    z_hi_w, z_lo_w = z(lo), z(hi)
    if not z_lo_w <= z0_target <= z_hi_w:
        raise ValidityError(
            f"{z0_target} ohm not reachable: window spans {z_lo_w:.2f}-{z_hi_w:.2f} ohm"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        zm = z(mid)
        if zm > z0_target:
            lo = mid  # too narrow
        else:
            hi = mid
        if hi - lo < xtol and abs(zm - z0_target) < 0.01:
            break
    return LineGeometry(0.5 * (lo + hi))


def guided_wavelength(sub: Substrate, geom: LineGeometry, f: float) -> float:
    """Guided wavelength in mm at frequency ``f``."""
    if np.any(np.asarray(f) <= 0):
        raise ValueError("frequency must be > 0")
    ee = analyze(geom, sub).eps_eff
    return C0 / (f * np.sqrt(ee)) * 1e3


def quarter_wave_length(sub: Substrate, geom: LineGeometry, f0: float) -> float:
    return guided_wavelength(sub, geom, f0) / 4


def dielectric_attenuation(sub: Substrate, eps_eff: float, f) -> np.ndarray:
    """Dielectric loss in Np/m."""
    k0 = 2 * np.pi * np.asarray(f) / C0
    if sub.eps_r == 1:
        fill = 1.0
    else:
        fill = sub.eps_r * (eps_eff - 1) / (sub.eps_r - 1)
    return k0 * fill * sub.tan_d / (2 * np.sqrt(eps_eff))


def line_abcd(z0: float, gamma_l) -> ABCDMatrix:
    """Chain matrix of a uniform line with total propagation ``gamma * l``."""
    ch, sh = np.cosh(gamma_l), np.sinh(gamma_l)
    return ABCDMatrix(ch, z0 * sh, sh / z0, ch)


def tline_block(geom: LineGeometry, sub: Substrate, grid: FrequencyGrid, label: str = "") -> NetworkBlock:
    p = analyze(geom, sub)
    f = grid.points
    beta = 2 * np.pi * f * np.sqrt(p.eps_eff) / C0
    alpha = dielectric_attenuation(sub, p.eps_eff, f) if sub.tan_d > 0 else 0.0
    gl = (alpha + 1j * beta) * geom.l * 1e-3
    return block_from_abcd(line_abcd(p.z0, gl), grid, label or f"tline w={geom.w:g} l={geom.l:g}")


def ideal_line(z0: float, f0: float, degrees: float, grid: FrequencyGrid, label: str = "") -> NetworkBlock:
    """Lossless TEM line of impedance ``z0`` that is ``degrees`` long at ``f0``."""
    theta = np.radians(degrees) * grid.points / f0
    return block_from_abcd(line_abcd(z0, 1j * theta), grid, label or f"line {z0:g} ohm {degrees:g} deg")
