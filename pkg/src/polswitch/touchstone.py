"""Touchstone v1.1 reading and writing (.s1p to .s4p, 50 ohm S-parameters)."""
from __future__ import annotations

import os
import re

import numpy as np

from .netcore import FrequencyGrid, NetworkBlock, Z_REF

OPTION_LINE = "# GHz S MA R 50"

_UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}


class TouchstoneError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {msg}" if where else msg)
        self.lineno = lineno
        self.path = path


class UnsupportedFormatError(TouchstoneError):
    pass


def _fmt(x: float) -> str:
    # 12 significant digits, printed so that re-reading and re-writing is stable
    v = float(f"{x:.12g}")
    return repr(v + 0.0)


def _pairs(s: np.ndarray) -> list[str]:
    mag = np.abs(s)
    ang = np.where(mag == 0, 0.0, np.degrees(np.angle(s)))
    return [f"{_fmt(m)} {_fmt(a)}" for m, a in zip(mag, ang)]


def format_touchstone(block: NetworkBlock, comments=()) -> str:
    n = block.n_ports
    if n not in (1, 2, 3, 4):
        raise UnsupportedFormatError(f"cannot write a {n}-port block")
    lines = [f"! {c}" for c in comments]
    lines.append(OPTION_LINE)
    for k, f in enumerate(block.grid.points):
        s = block.s[k]
        fs = _fmt(f / 1e9)
        if n == 1:
            lines.append(f"{fs} {_pairs(s[0, :1])[0]}")
        elif n == 2:
            # 2-port order is S11 S21 S12 S22
            lines.append(" ".join([fs] + _pairs(s.T.ravel())))
        else:
            for i in range(n):
                row = " ".join(_pairs(s[i]))
                lines.append(f"{fs} {row}" if i == 0 else row)
    return "\n".join(lines) + "\n"


def write_touchstone(block: NetworkBlock, dest, comments=()) -> None:
    """Write ``block`` to a path or text stream."""
    text = format_touchstone(block, comments)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def touchstone_extension(n_ports: int) -> str:
    return f".s{n_ports}p"


def _ports_from_name(name) -> int | None:
    m = re.search(r"\.s(\d+)p$", str(name), re.IGNORECASE)
    return int(m.group(1)) if m else None


def _infer_ports(rows) -> int:
    t1 = len(rows[0][1])
    t2 = len(rows[1][1]) if len(rows) > 1 else None
    if t1 == 3:
        return 1
    if t1 == 7:
        return 3
    if t1 == 9:
        return 4 if t2 == 8 else 2
    raise TouchstoneError(f"cannot infer port count from {t1} columns", rows[0][0])


def parse_touchstone(text: str, n_ports: int | None = None, path=None) -> NetworkBlock:
    unit, fmt, seen_option = 1e9, "MA", False
    rows = []  # (lineno, tokens)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            if seen_option:
                continue  # v1.1: only the first option line counts
            seen_option = True
            toks = line[1:].upper().split()
            i = 0
            while i < len(toks):
                t = toks[i]
                if t in _UNITS:
                    unit = _UNITS[t]
                elif t in ("MA", "DB", "RI"):
                    fmt = t
                elif t in ("Y", "Z", "H", "G"):
                    raise UnsupportedFormatError(f"{t}-parameters not supported", lineno, path)
                elif t == "S":
                    pass
                elif t == "R":
                    if i + 1 >= len(toks):
                        raise TouchstoneError("missing reference resistance", lineno, path)
                    try:
                        r = float(toks[i + 1])
                    except ValueError:
                        raise TouchstoneError(f"bad resistance {toks[i + 1]!r}", lineno, path)
                    if r != Z_REF:
                        raise UnsupportedFormatError(
                            f"reference impedance {r:g} ohm; only 50 ohm supported", lineno, path
                        )
                    i += 1
                else:
                    raise TouchstoneError(f"unknown option {t!r}", lineno, path)
                i += 1
            continue
        if line.startswith("["):
            raise UnsupportedFormatError("Touchstone v2 keywords not supported", lineno, path)
        toks = line.split()
        try:
            vals = [float(t) for t in toks]
        except ValueError as exc:
            raise TouchstoneError(f"non-numeric data: {exc}", lineno, path)
        rows.append((lineno, vals))
    if not rows:
        raise TouchstoneError("no data lines", None, path)

    n = n_ports or _ports_from_name(path) or _infer_ports(rows)
    if n not in (1, 2, 3, 4):
        raise UnsupportedFormatError(f"{n}-port files not supported", None, path)
    per = 1 + 2 * n * n
    flat, where = [], []
    for lineno, vals in rows:
        flat.extend(vals)
        where.extend([lineno] * len(vals))
    if len(flat) % per:
        raise TouchstoneError(
            f"incomplete record: {len(flat) % per} trailing values for a {n}-port",
            where[-1], path,
        )
    recs = np.array(flat).reshape(-1, per)
    freqs = recs[:, 0] * unit
    bad = np.nonzero(np.diff(freqs) <= 0)[0]
    if bad.size:
        raise TouchstoneError("frequencies not strictly increasing", where[(bad[0] + 1) * per], path)
    x, y = recs[:, 1::2], recs[:, 2::2]
    if fmt == "MA":
        vals = x * np.exp(1j * np.radians(y))
    elif fmt == "DB":
        vals = 10 ** (x / 20) * np.exp(1j * np.radians(y))
    else:
        vals = x + 1j * y
    s = vals.reshape(-1, n, n)
    if n == 2:
        s = np.swapaxes(s, 1, 2)
    label = os.path.splitext(os.path.basename(str(path)))[0] if path is not None else ""
    return NetworkBlock(FrequencyGrid(freqs), s, label)


def read_touchstone(source, n_ports: int | None = None) -> NetworkBlock:
    """Read a block from a path or text stream."""
    if hasattr(source, "read"):
        return parse_touchstone(source.read(), n_ports, getattr(source, "name", None))
    with open(source, encoding="ascii", errors="replace") as fh:
        return parse_touchstone(fh.read(), n_ports, source)


def roundtrip(block: NetworkBlock) -> NetworkBlock:
    return parse_touchstone(format_touchstone(block), block.n_ports)


__all__ = [
    "OPTION_LINE",
    "TouchstoneError",
    "UnsupportedFormatError",
    "format_touchstone",
    "parse_touchstone",
    "read_touchstone",
    "write_touchstone",
    "touchstone_extension",
    "roundtrip",
]
