"""Polarization ellipse of two orthogonal mode excitations, and band edges.

Handedness convention: exp(+j*omega*t) time dependence, wave travelling
toward the observer along +z (patch boresight).  With ``a_x`` on the TM10
edge and ``a_y`` on the TM01 edge, Im(conj(a_x) * a_y) > 0 is left-hand.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

AR_CAP_DB = 60.0


class PolarizationError(ValueError):
    pass


class Sense(enum.Enum):
    LINEAR = "LINEAR"
    RHCP = "RHCP"
    LHCP = "LHCP"

    def flipped(self) -> "Sense":
        return {Sense.RHCP: Sense.LHCP, Sense.LHCP: Sense.RHCP}.get(self, self)


@dataclass(frozen=True)
class ExcitationPair:
    a_x: complex
    a_y: complex

    def __post_init__(self):
        if self.a_x == 0 and self.a_y == 0:
            raise PolarizationError("both mode amplitudes are zero")

    def scaled(self, k: complex) -> "ExcitationPair":
        return ExcitationPair(self.a_x * k, self.a_y * k)

    def conjugate(self) -> "ExcitationPair":
        return ExcitationPair(np.conj(self.a_x), np.conj(self.a_y))

    def swapped(self) -> "ExcitationPair":
        return ExcitationPair(self.a_y, self.a_x)

    @property
    def phase_difference_deg(self) -> float:
        return float(np.degrees(np.angle(self.a_y * np.conj(self.a_x))))


@dataclass(frozen=True)
class PolarizationState:
    ar_db: float
    tilt_deg: float
    sense: Sense


def _wrap_tilt(t):
    # into [-90, 90)
    return (np.asarray(t) + 90.0) % 180.0 - 90.0


def ellipse(a_x, a_y):
    """Vectorized axial ratio (dB), tilt (deg) and sense code for mode pairs.

    Sense codes: 0 linear, +1 LHCP, -1 RHCP.
    """
    ax = np.asarray(a_x, dtype=complex)
    ay = np.asarray(a_y, dtype=complex)
    px, py = np.abs(ax) ** 2, np.abs(ay) ** 2
    tot = px + py
    if np.any(tot == 0):
        raise PolarizationError("both mode amplitudes are zero")
    cross = np.conj(ax) * ay
    # |ax|^4 + |ay|^4 + 2|ax|^2|ay|^2 cos(2 delta) = (px - py)^2 + 4 Re(cross)^2
    delta = np.sqrt((px - py) ** 2 + 4 * cross.real**2)
    # (tot - delta)(tot + delta) = 4 Im(cross)^2, so the minor axis never cancels
    im = np.abs(cross.imag)
    with np.errstate(divide="ignore", over="ignore"):
        ar = (tot + delta) / (2 * im)
        ar_db = np.minimum(20 * np.log10(ar), AR_CAP_DB)
    tilt = _wrap_tilt(0.5 * np.degrees(np.arctan2(2 * cross.real, px - py)))
    linear = (ar_db >= AR_CAP_DB) | (im <= 1e-12 * tot)
    code = np.where(linear, 0, np.sign(cross.imag)).astype(int)
    ar_db = np.where(linear, AR_CAP_DB, ar_db)
    return ar_db, tilt, code


_SENSE = {0: Sense.LINEAR, 1: Sense.LHCP, -1: Sense.RHCP}


def sense_from_code(code) -> Sense:
    return _SENSE[int(code)]


def polarization_state(e: ExcitationPair) -> PolarizationState:
    ar_db, tilt, code = ellipse(e.a_x, e.a_y)
    return PolarizationState(float(ar_db), float(tilt), sense_from_code(code))


class BandCriterion(enum.Enum):
    RL_10DB = "RL_10dB"
    AR_3DB = "AR_3dB"


@dataclass(frozen=True)
class BandMetrics:
    band_lo: float
    band_hi: float
    fractional_bw: float
    criterion: BandCriterion | None = None
    bands: tuple = field(default=(), compare=False)

    @property
    def empty(self) -> bool:
        return not self.bands

    @property
    def center(self) -> float:
        return 0.5 * (self.band_lo + self.band_hi)

    @property
    def width(self) -> float:
        return self.band_hi - self.band_lo


def _crossing(f0, v0, f1, v1, thr):
    return f0 + (thr - v0) * (f1 - f0) / (v1 - v0)


def band_extract(freqs, values_db, threshold_db: float, criterion=None) -> BandMetrics:
    """Widest contiguous run where ``values_db < threshold_db``.

    Band edges are interpolated linearly between grid points; a run touching
    the sweep end stops at the end point.  All runs are kept in ``bands``,
    widest first.
    """
    f = np.asarray(freqs, dtype=float)
    v = np.asarray(values_db, dtype=float)
    if f.size < 2 or f.shape != v.shape:
        raise ValueError("need matching frequency/value arrays with >= 2 points")
    if np.any(np.diff(f) <= 0):
        raise ValueError("frequencies must be sorted and distinct")
    below = v < threshold_db
    runs = []
    i, n = 0, f.size
    while i < n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and below[j + 1]:
            j += 1
        lo = f[i] if i == 0 else _crossing(f[i - 1], v[i - 1], f[i], v[i], threshold_db)
        hi = f[j] if j == n - 1 else _crossing(f[j], v[j], f[j + 1], v[j + 1], threshold_db)
        runs.append((float(lo), float(hi)))
        i = j + 1
    if not runs:
        return BandMetrics(float("nan"), float("nan"), 0.0, criterion, ())
    runs.sort(key=lambda r: r[1] - r[0], reverse=True)
    lo, hi = runs[0]
    return BandMetrics(lo, hi, (hi - lo) / (0.5 * (lo + hi)), criterion, tuple(runs))
