"""N-port network algebra on S-parameters.

Every block carries an S-matrix per frequency point, referenced to a fixed
50 ohm system impedance.  Port indices are zero-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Z_REF = 50.0


class NetworkError(ValueError):
    pass


class GridMismatchError(NetworkError):
    pass


class SingularConversionError(NetworkError):
    pass


class JunctionError(NetworkError):
    """Raised when a port join is numerically ill-conditioned."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing list of sweep frequencies in Hz."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=float))
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("frequency grid must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(pts)) or np.any(pts <= 0):
            raise ValueError("frequencies must be finite and > 0")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "points", _frozen(pts))

    @classmethod
    def from_range(cls, start: float, stop: float, step: float) -> "FrequencyGrid":
        """Inclusive ``start:stop:step`` sweep (stop kept when it lands on the step)."""
        if step <= 0 or stop < start:
            raise ValueError("need step > 0 and stop >= start")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        # integer multiples avoid accumulated float drift
        return cls(start + step * np.arange(n))

    @classmethod
    def single(cls, f: float) -> "FrequencyGrid":
        return cls(np.array([f]))

    def __len__(self) -> int:
        return self.points.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrequencyGrid):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.all(self.points == other.points)
        )

    def __hash__(self):
        return hash(self.points.tobytes())

    @property
    def omega(self) -> np.ndarray:
        return 2 * np.pi * self.points

    def index_of(self, f: float) -> int:
        """Index of the grid point nearest to ``f``."""
        return int(np.argmin(np.abs(self.points - f)))


@dataclass(frozen=True, eq=False)
class NetworkBlock:
    """An n-port linear network: one n x n S-matrix per grid point."""

    grid: FrequencyGrid
    s: np.ndarray
    label: str = ""

    def __post_init__(self):
        s = np.asarray(self.s, dtype=complex)
        if s.ndim == 2:
            s = np.broadcast_to(s, (len(self.grid),) + s.shape)
        if s.ndim != 3 or s.shape[1] != s.shape[2]:
            raise NetworkError(f"S array must have shape (F, n, n), got {s.shape}")
        if s.shape[0] != len(self.grid):
            raise NetworkError(
                f"{s.shape[0]} S-matrices for a grid of {len(self.grid)} points"
            )
        if not np.all(np.isfinite(s)):
            raise NetworkError(f"non-finite S-parameters in block {self.label!r}")
        object.__setattr__(self, "s", _frozen(s))

    @property
    def n_ports(self) -> int:
        return self.s.shape[1]

    @property
    def f(self) -> np.ndarray:
        return self.grid.points

    def sij(self, i: int, j: int) -> np.ndarray:
        return self.s[:, i, j]

    def relabel(self, label: str) -> "NetworkBlock":
        return NetworkBlock(self.grid, self.s, label)

    def renumber(self, order) -> "NetworkBlock":
        """Reorder ports; new port ``k`` is old port ``order[k]``."""
        order = list(order)
        if sorted(order) != list(range(self.n_ports)):
            raise NetworkError(f"{order} is not a permutation of the ports")
        return NetworkBlock(self.grid, self.s[:, order][:, :, order], self.label)

    def __repr__(self):
        f = self.grid.points
        return (
            f"NetworkBlock({self.label!r}, {self.n_ports}-port, "
            f"{len(f)} pts {f[0] / 1e9:g}-{f[-1] / 1e9:g} GHz)"
        )


@dataclass(frozen=True)
class ABCDMatrix:
    """Transmission (chain) parameters; entries may be arrays over frequency.

    ``b`` is in ohms, ``c`` in siemens.
    """

    a: np.ndarray | complex
    b: np.ndarray | complex
    c: np.ndarray | complex
    d: np.ndarray | complex

    def as_array(self) -> np.ndarray:
        a, b, c, d = np.broadcast_arrays(*map(np.asarray, (self.a, self.b, self.c, self.d)))
        return np.stack([np.stack([a, b], -1), np.stack([c, d], -1)], -2).astype(complex)

    @classmethod
    def from_array(cls, m: np.ndarray) -> "ABCDMatrix":
        m = np.asarray(m, dtype=complex)
        return cls(m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1])

    def __matmul__(self, other: "ABCDMatrix") -> "ABCDMatrix":
        return ABCDMatrix.from_array(self.as_array() @ other.as_array())

    @property
    def det(self):
        return np.asarray(self.a) * self.d - np.asarray(self.b) * self.c


def abcd_to_s(m: ABCDMatrix, z_ref: float = Z_REF) -> np.ndarray:
    """Convert chain parameters to a 2-port S-matrix of shape (..., 2, 2)."""
    if z_ref <= 0:
        raise ValueError("z_ref must be positive")
    a, b, c, d = (np.asarray(x, dtype=complex) for x in (m.a, m.b, m.c, m.d))
    a, b, c, d = np.broadcast_arrays(a, b, c, d)
    den = a + b / z_ref + c * z_ref + d
    if np.any(np.abs(den) < 1e-15):
        raise SingularConversionError("ABCD to S denominator vanishes")
    s11 = (a + b / z_ref - c * z_ref - d) / den
    s12 = 2 * (a * d - b * c) / den
    s21 = 2 / den
    s22 = (-a + b / z_ref - c * z_ref + d) / den
    return np.stack([np.stack([s11, s12], -1), np.stack([s21, s22], -1)], -2)


def s_to_abcd(s: np.ndarray, z_ref: float = Z_REF) -> ABCDMatrix:
    """Inverse of :func:`abcd_to_s`; ``s`` has shape (..., 2, 2)."""
    s = np.asarray(s, dtype=complex)
    if s.shape[-2:] != (2, 2):
        raise NetworkError("ABCD parameters exist only for 2-ports")
    s11, s12, s21, s22 = s[..., 0, 0], s[..., 0, 1], s[..., 1, 0], s[..., 1, 1]
    if np.any(np.abs(s21) < 1e-15):
        raise SingularConversionError("S21 = 0: no ABCD representation")
    a = ((1 + s11) * (1 - s22) + s12 * s21) / (2 * s21)
    b = z_ref * ((1 + s11) * (1 + s22) - s12 * s21) / (2 * s21)
    c = ((1 - s11) * (1 - s22) - s12 * s21) / (2 * s21 * z_ref)
    d = ((1 - s11) * (1 + s22) + s12 * s21) / (2 * s21)
    return ABCDMatrix(a, b, c, d)


def block_from_abcd(m: ABCDMatrix, grid: FrequencyGrid, label: str = "") -> NetworkBlock:
    s = abcd_to_s(m)
    return NetworkBlock(grid, np.broadcast_to(s, (len(grid), 2, 2)), label)


def _same_grid(*blocks: NetworkBlock) -> FrequencyGrid:
    g = blocks[0].grid
    for b in blocks[1:]:
        if b.grid != g:
            raise GridMismatchError(f"grid of {b.label!r} differs from {blocks[0].label!r}")
    return g


def cascade(left: NetworkBlock, right: NetworkBlock) -> NetworkBlock:
    """Chain two 2-ports: left port 2 feeds right port 1 (ABCD product left @ right)."""
    grid = _same_grid(left, right)
    if left.n_ports != 2 or right.n_ports != 2:
        raise NetworkError("cascade needs two 2-ports; use connect() for n-ports")
    m = s_to_abcd(left.s) @ s_to_abcd(right.s)
    label = f"{left.label}*{right.label}" if left.label or right.label else ""
    return block_from_abcd(m, grid, label)


def cascade_all(*blocks: NetworkBlock) -> NetworkBlock:
    out = blocks[0]
    for b in blocks[1:]:
        out = cascade(out, b)
    return out


def merge(*blocks: NetworkBlock, label: str = "") -> NetworkBlock:
    """Direct sum: one block whose ports are the blocks' ports in order, uncoupled."""
    grid = _same_grid(*blocks)
    n = sum(b.n_ports for b in blocks)
    s = np.zeros((len(grid), n, n), dtype=complex)
    k = 0
    for b in blocks:
        s[:, k:k + b.n_ports, k:k + b.n_ports] = b.s
        k += b.n_ports
    return NetworkBlock(grid, s, label)


def connect_ports(block: NetworkBlock, p: int, q: int) -> NetworkBlock:
    """Join ports ``p`` and ``q`` of one block, leaving an (n-2)-port.

    Remaining ports keep their relative order.  Uses the sub-network growth
    self-connection formula.
    """
    n = block.n_ports
    if p == q or not (0 <= p < n and 0 <= q < n):
        raise NetworkError(f"invalid port pair ({p}, {q}) for a {n}-port")
    if n < 3:
        raise NetworkError("joining the two ports of a 2-port leaves nothing")
    s = block.s
    skk, sll = s[:, p, p], s[:, q, q]
    skl, slk = s[:, p, q], s[:, q, p]
    den = (1 - skl) * (1 - slk) - skk * sll
    if np.any(np.abs(den) < 1e-12):
        raise JunctionError(f"ill-conditioned junction joining ports {p} and {q}")
    sk_ = s[:, p, :][:, None, :]  # S_kj
    sl_ = s[:, q, :][:, None, :]  # S_lj
    s_k = s[:, :, p][:, :, None]  # S_ik
    s_l = s[:, :, q][:, :, None]  # S_il
    num = (
        sk_ * s_l * (1 - slk)[:, None, None]
        + sl_ * s_k * (1 - skl)[:, None, None]
        + sk_ * sll[:, None, None] * s_k
        + sl_ * skk[:, None, None] * s_l
    )
    c = s + num / den[:, None, None]
    keep = [i for i in range(n) if i not in (p, q)]
    return NetworkBlock(block.grid, c[:, keep][:, :, keep], block.label)


def connect(a: NetworkBlock, p: int, b: NetworkBlock, q: int) -> NetworkBlock:
    """Wire port ``p`` of ``a`` to port ``q`` of ``b``.

    Result ports: a's remaining ports, then b's remaining ports.
    """
    joined = merge(a, b)
    return connect_ports(joined, p, a.n_ports + q)


def interconnect(blocks, wires, externals, label: str = "") -> NetworkBlock:
    """Assemble a network from blocks and point-to-point wires.

    ``wires`` and ``externals`` name ports as ``(block_index, port)`` pairs.
    Every port must appear exactly once, either in a wire or as an external
    port; externals fix the port order of the result.
    """
    offsets = np.cumsum([0] + [b.n_ports for b in blocks])
    flat = lambda ref: int(offsets[ref[0]] + ref[1])  # noqa: E731
    seen = [flat(e) for e in externals] + [flat(x) for w in wires for x in w]
    if sorted(seen) != list(range(int(offsets[-1]))):
        raise NetworkError("every port must be used exactly once")
    net = merge(*blocks, label=label)
    alive = list(range(net.n_ports))  # alive[i] = original index of current port i
    for u, v in wires:
        i, j = alive.index(flat(u)), alive.index(flat(v))
        net = connect_ports(net, i, j)
        alive = [x for x in alive if x not in (flat(u), flat(v))]
    return net.renumber([alive.index(flat(e)) for e in externals])


def thru(grid: FrequencyGrid) -> NetworkBlock:
    return NetworkBlock(grid, np.array([[0, 1], [1, 0]], dtype=complex), "thru")


def one_port(grid: FrequencyGrid, gamma, label: str = "") -> NetworkBlock:
    """1-port with reflection coefficient ``gamma`` (scalar or per-frequency)."""
    g = np.broadcast_to(np.asarray(gamma, dtype=complex), (len(grid),))
    return NetworkBlock(grid, g[:, None, None], label)


def impedance_load(grid: FrequencyGrid, z, label: str = "") -> NetworkBlock:
    z = np.asarray(z, dtype=complex)
    return one_port(grid, (z - Z_REF) / (z + Z_REF), label)


def tee(grid: FrequencyGrid) -> NetworkBlock:
    """Ideal lossless 3-way node (all ports at the system impedance)."""
    s = 2.0 / 3.0 * np.ones((3, 3)) - np.eye(3)
    return NetworkBlock(grid, s.astype(complex), "tee")


def reflection_db(gamma) -> np.ndarray:
    """20 log10 |gamma| with a -300 dB floor for exact zeros."""
    mag = np.abs(gamma)
    return 20 * np.log10(np.maximum(mag, 1e-15))


def is_passive(block: NetworkBlock, tol: float = 1e-9) -> bool:
    norms = np.linalg.norm(block.s, ord=2, axis=(1, 2))
    return bool(np.all(norms <= 1 + tol))


def is_reciprocal(block: NetworkBlock, tol: float = 1e-9) -> bool:
    return bool(np.all(np.abs(block.s - np.swapaxes(block.s, 1, 2)) <= tol))


def is_lossless(block: NetworkBlock, tol: float = 1e-9) -> bool:
    s = block.s
    eye = np.eye(block.n_ports)
    return bool(np.all(np.abs(np.conj(np.swapaxes(s, 1, 2)) @ s - eye) <= tol))
