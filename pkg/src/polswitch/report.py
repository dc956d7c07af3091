"""Comparison of sweep results with the published figures, plus structural gates.

Published values are informational; only the structural gates (diode-state
truth table, CP mirror symmetry, passivity) decide the exit status.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .system import Scenario, SweepResult

# minima are searched inside this window so that out-of-band dips are ignored
WINDOW = (2.30e9, 2.60e9)
MIRROR_TOL = 1e-9


class ReportError(ValueError):
    pass


@dataclass(frozen=True)
class Published:
    key: str
    metric: str
    value: float
    unit: str
    source: str


# (key, metric, value, unit, source)
PUBLISHED = tuple(Published(*row) for row in (
    ("lp_min_s11", "LP min S11", -27.7, "dB", "simulated"),
    ("lp_f_min_s11", "LP f at min S11", 2.45, "GHz", "simulated"),
    ("lp_rl_bw", "LP -10 dB bandwidth", 9.5, "%", "simulated"),
    ("lp_rl_bw_alt", "LP -10 dB bandwidth", 8.0, "%", "simulated, measurement comparison"),
    ("cp_min_s11", "CP min S11", -30.4, "dB", "simulated"),
    ("cp_f_min_s11", "CP f at min S11", 2.44, "GHz", "simulated"),
    ("cp_rl_bw", "CP -10 dB bandwidth", 9.0, "%", "simulated"),
    ("cp_rl_bw_alt", "CP -10 dB bandwidth", 8.0, "%", "simulated, measurement comparison"),
    ("cp_min_ar", "CP min AR", 1.0, "dB", "simulated"),
    ("cp_f_min_ar", "CP f at min AR", 2.43, "GHz", "simulated"),
    ("cp_arbw", "CP 3 dB AR bandwidth", 4.5, "%", "simulated"),
    ("ant2_arbw", "Ant2 3 dB AR bandwidth", 3.63, "%", "measured, 2.39-2.48 GHz"),
    ("ant2_ar_lo", "Ant2 AR band low edge", 2.39, "GHz", "measured"),
    ("ant2_ar_hi", "Ant2 AR band high edge", 2.48, "GHz", "measured"),
    ("ant3_arbw", "Ant3 3 dB AR bandwidth", 4.4, "%", "measured, 2.36-2.47 GHz"),
    ("ant3_ar_lo", "Ant3 AR band low edge", 2.36, "GHz", "measured"),
    ("ant3_ar_hi", "Ant3 AR band high edge", 2.47, "GHz", "measured"),
    ("patch_rl_bw", "Patch-port -10 dB bandwidth", 9.0, "%", "q_total calibration target"),
))


def _pct(band) -> float:
    return 100.0 * band.fractional_bw


def _ghz(x) -> float:
    return x / 1e9


def model_values(results: dict) -> dict:
    missing = [s.key for s in Scenario if s not in results]
    if missing:
        raise ReportError(f"missing scenario result(s): {', '.join(missing)}")
    lp, rh, lh = (results[s] for s in Scenario)
    f_lp, v_lp = lp.min_s11(*WINDOW)
    f_cp, v_cp = rh.min_s11(*WINDOW)
    f_ar, v_ar = rh.min_ar(*WINDOW)
    ar2, ar3 = rh.ar_band(), lh.ar_band()
    return {
        "lp_min_s11": v_lp,
        "lp_f_min_s11": _ghz(f_lp),
        "lp_rl_bw": _pct(lp.rl_band()),
        "lp_rl_bw_alt": _pct(lp.rl_band()),
        "cp_min_s11": v_cp,
        "cp_f_min_s11": _ghz(f_cp),
        "cp_rl_bw": _pct(rh.rl_band()),
        "cp_rl_bw_alt": _pct(rh.rl_band()),
        "cp_min_ar": v_ar,
        "cp_f_min_ar": _ghz(f_ar),
        "cp_arbw": _pct(ar2),
        "ant2_arbw": _pct(ar2),
        "ant2_ar_lo": _ghz(ar2.band_lo),
        "ant2_ar_hi": _ghz(ar2.band_hi),
        "ant3_arbw": _pct(ar3),
        "ant3_ar_lo": _ghz(ar3.band_lo),
        "ant3_ar_hi": _ghz(ar3.band_hi),
        "patch_rl_bw": _pct(rh.patch_rl_band()),
    }


def comparison_rows(results: dict) -> list[dict]:
    model = model_values(results)
    rows = []
    for p in PUBLISHED:
        m = model[p.key]
        rows.append({
            "metric": f"{p.metric} ({p.unit})",
            "source": p.source,
            "published": p.value,
            "model": m,
            "delta": m - p.value,
        })
    return rows


@dataclass(frozen=True)
class Gate:
    name: str
    passed: bool
    detail: str


def _f0_index(r: SweepResult, f0: float) -> int:
    return int(np.argmin(np.abs(r.freq - f0)))


def structural_gates(results: dict, f0: float = 2.45e9) -> list[Gate]:
    model_values(results)  # raises on a missing scenario
    gates = []
    got = []
    ok = True
    for s in Scenario:
        r = results[s]
        sense = r.senses[_f0_index(r, f0)]
        got.append(f"{s.key}={sense.value}")
        ok &= sense is s.expected
    gates.append(Gate("truth table", ok, ", ".join(got)))

    rh, lh = results[Scenario.ANT2_RHCP], results[Scenario.ANT3_LHCP]
    d_ar = float(np.max(np.abs(rh.ar_db - lh.ar_db)))
    d_s = float(np.max(np.abs(rh.s11_db - lh.s11_db)))
    flipped = bool(np.all(rh.sense_code == -lh.sense_code))
    gates.append(Gate("CP mirror", d_ar <= MIRROR_TOL and d_s <= MIRROR_TOL and flipped,
                      f"max|dAR|={d_ar:.3g} dB, max|dS11|={d_s:.3g} dB, senses flipped={flipped}"))

    worst = max(float(np.max(np.abs(r.s11))) for r in results.values())
    gates.append(Gate("passivity", worst <= 1 + 1e-12, f"max|S11|={worst:.6f}"))
    return gates


def _fmt(x: float) -> str:
    return "nan" if not np.isfinite(x) else f"{x:.3f}"


def format_report(results: dict, f0: float = 2.45e9) -> str:
    rows = comparison_rows(results)
    w = max(len(r["metric"]) for r in rows)
    ws = max(len(r["source"]) for r in rows)
    mode = next(iter(results.values())).mode
    out = [f"mode: {mode}", ""]
    out.append(f"{'metric':<{w}}  {'source':<{ws}}  {'published':>9}  {'model':>9}  {'delta':>9}")
    for r in rows:
        out.append(f"{r['metric']:<{w}}  {r['source']:<{ws}}  {r['published']:>9.3f}  "
                   f"{_fmt(r['model']):>9}  {_fmt(r['delta']):>9}")
    out += ["", "structural gates:"]
    for g in structural_gates(results, f0):
        out.append(f"  {'PASS' if g.passed else 'FAIL'}  {g.name}: {g.detail}")
    return "\n".join(out) + "\n"


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "source", "published", "model", "delta"])
    for r in rows:
        w.writerow([r["metric"], r["source"], repr(r["published"]), f"{r['model']:.17g}", f"{r['delta']:.17g}"])
    return buf.getvalue()
