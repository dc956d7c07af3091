"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run under pytest (lines are repeated in the terminal summary) or directly:
``python tests/test_acceptance.py``.  Tolerances are fixed below.
"""
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from polswitch.antenna import PatchSpec, ideal_patch_block, patch_load_block, resonant_frequency
from polswitch.cli import main as cli_main
from polswitch.components import (
    BranchLineSpec,
    LUMPED_KINDS,
    SwitchCircuit,
    WilkinsonSpec,
    branchline_block,
    lumped_block,
    switch_block,
    wilkinson_block,
)
from polswitch.microstrip import FR4, FR4_LOSSLESS, LineGeometry, synthesize, tline_block
from polswitch.netcore import (
    FrequencyGrid,
    NetworkBlock,
    abcd_to_s,
    cascade,
    connect_ports,
    is_lossless,
    is_passive,
    is_reciprocal,
    merge,
    s_to_abcd,
    tee,
)
from polswitch.netlist import default_netlist
from polswitch.polarization import band_extract, ellipse
from polswitch.system import Scenario, assemble, run_all
from polswitch.touchstone import format_touchstone, parse_touchstone

F0 = 2.45e9

# criterion 1
W50_PUB, W70_PUB, W_REL_TOL = 1.84, 0.96, 0.10
FAST_S = 1.0
# criterion 2
F_RES_WINDOW = (2.33e9, 2.57e9)
# criterion 3
EXACT_TOL = 1e-6
# criterion 4
OFF_IL_WINDOW_DB = (-4.0, -2.8)
ON_ISO_MAX_DB = -14.0
SW_OFF_ORACLE_DB, SW_ON_ORACLE_DB = -3.326730571771895, -15.033243641922668
ORACLE_TOL_DB = 1e-9
# criterion 5
LP_AR_MIN_DB, LP_BAND = 20.0, (2.38e9, 2.48e9)
CP_AR_AT_F0_MAX_DB = 0.5
MIRROR_TOL = 1e-9
SWEEP_S = 10.0
# criterion 6
S11_BAND = (2.40e9, 2.50e9)
S11_MAX_DB = -15.0
CP_AR_MIN_MAX_DB = 2.0
CP_AR_MIN_WINDOW = (2.38e9, 2.50e9)  # "near 2.43-2.45 GHz"
ARBW_MIN = 0.03
RL_BW_TARGET, RL_BW_TOL = 0.09, 0.03
PUB_LP_S11, PUB_CP_S11, PUB_CP_AR, PUB_ARBW, PUB_BW = -27.7, -30.4, 1.0, 0.045, 0.09
# criterion 7
PASSIVE_TOL = RECIP_TOL = 1e-9
ROUNDTRIP_TOL = 1e-9
N_PAIRS = 1000
REFINE_TOL_HZ = 1e6

LINES = {}


def verdict(cid, title, checks):
    """checks: (label, passed, detail) triples; prints and records one line."""
    ok = all(c[1] for c in checks)
    body = "; ".join(f"{label} {'ok' if p else 'FAILED'} [{d}]" for label, p, d in checks)
    line = f"{'PASS' if ok else 'FAIL'}  C{cid} {title}: {body}"
    LINES[cid] = line
    print(line)
    assert ok, line


def db(x):
    return 20 * np.log10(np.abs(x))


def test_c1_microstrip_synthesis():
    t = time.perf_counter()
    w50 = synthesize(50.0, FR4).w
    w70 = synthesize(70.7, FR4).w
    dt = time.perf_counter() - t
    verdict(1, "microstrip synthesis", [
        ("50 ohm width", abs(w50 - W50_PUB) / W50_PUB <= W_REL_TOL, f"{w50:.4f} mm vs {W50_PUB}"),
        ("70.7 ohm width", abs(w70 - W70_PUB) / W70_PUB <= W_REL_TOL, f"{w70:.4f} mm vs {W70_PUB}"),
        ("runtime", dt < FAST_S, f"{dt * 1e3:.1f} ms"),
    ])


def test_c2_patch_resonance():
    t = time.perf_counter()
    f = resonant_frequency(PatchSpec())
    dt = time.perf_counter() - t
    verdict(2, "patch resonance", [
        ("f_res in window", F_RES_WINDOW[0] <= f <= F_RES_WINDOW[1], f"{f / 1e9:.4f} GHz"),
        ("runtime", dt < FAST_S, f"{dt * 1e3:.1f} ms"),
    ])


def test_c3_ideal_elements():
    g = FrequencyGrid.single(F0)
    w = wilkinson_block(WilkinsonSpec(ideal=True), FR4, g).s[0]
    h = branchline_block(BranchLineSpec(ideal=True), FR4, g).s[0]
    half = 1 / np.sqrt(2)
    dual = h @ np.array([1, 0, 0, 1])
    dphi_w = np.degrees(np.angle(w[2, 0] / w[1, 0]))
    dphi_h = np.degrees(np.angle(h[2, 0] / h[1, 0]))
    dphi_d = np.degrees(np.angle(dual[2] / dual[1]))
    verdict(3, "ideal elements", [
        ("Wilkinson split", abs(abs(w[1, 0]) - half) < EXACT_TOL and abs(abs(w[2, 0]) - half) < EXACT_TOL,
         f"{db(w[1, 0]):.4f}/{db(w[2, 0]):.4f} dB"),
        ("Wilkinson phase", abs(dphi_w) < EXACT_TOL, f"{dphi_w:.2e} deg"),
        ("Wilkinson S23", abs(w[1, 2]) < EXACT_TOL, f"{abs(w[1, 2]):.1e}"),
        ("hybrid split", abs(abs(h[1, 0]) - half) < EXACT_TOL and abs(abs(h[2, 0]) - half) < EXACT_TOL,
         f"{db(h[1, 0]):.4f}/{db(h[2, 0]):.4f} dB"),
        ("hybrid phase", abs(dphi_h + 90) < EXACT_TOL, f"{dphi_h:.6f} deg"),
        ("hybrid S41", abs(h[3, 0]) < EXACT_TOL, f"{abs(h[3, 0]):.1e}"),
        ("dual drive in phase", abs(dphi_d) < EXACT_TOL and abs(abs(dual[1]) - abs(dual[2])) < EXACT_TOL,
         f"{dphi_d:.2e} deg"),
    ])


def test_c4_switch_figures():
    g = FrequencyGrid.single(F0)
    t = time.perf_counter()
    off = db(switch_block(SwitchCircuit(), "off", g).s[0, 1, 0])
    on = db(switch_block(SwitchCircuit(), "on", g).s[0, 1, 0])
    dt = time.perf_counter() - t
    verdict(4, "switch figures", [
        ("OFF insertion loss", OFF_IL_WINDOW_DB[0] <= off <= OFF_IL_WINDOW_DB[1], f"{off:.3f} dB"),
        ("ON isolation", on <= ON_ISO_MAX_DB, f"{on:.3f} dB"),
        ("hand oracle", abs(off - SW_OFF_ORACLE_DB) < ORACLE_TOL_DB and abs(on - SW_ON_ORACLE_DB) < ORACLE_TOL_DB,
         f"diff {abs(off - SW_OFF_ORACLE_DB):.1e}/{abs(on - SW_ON_ORACLE_DB):.1e} dB"),
        ("runtime", dt < FAST_S, f"{dt * 1e3:.1f} ms"),
    ])


def test_c5_ideal_truth_table():
    t = time.perf_counter()
    res = run_all(default_netlist("ideal"))
    dt = time.perf_counter() - t
    lp, rh, lh = (res[s] for s in Scenario)
    band = (lp.freq >= LP_BAND[0]) & (lp.freq <= LP_BAND[1])
    k = int(np.argmin(np.abs(rh.freq - F0)))
    d_ar = float(np.max(np.abs(rh.ar_db - lh.ar_db)))
    d_s = float(np.max(np.abs(rh.s11_db - lh.s11_db)))
    verdict(5, "ideal-mode truth table", [
        ("Ant1 linear", bool(np.all(lp.ar_db[band] >= LP_AR_MIN_DB)), f"min AR {lp.ar_db[band].min():.1f} dB"),
        ("Ant2 RHCP", rh.senses[k].value == "RHCP" and rh.ar_db[k] <= CP_AR_AT_F0_MAX_DB,
         f"{rh.senses[k].value}, AR {rh.ar_db[k]:.2e} dB"),
        ("Ant3 LHCP", lh.senses[k].value == "LHCP" and lh.ar_db[k] <= CP_AR_AT_F0_MAX_DB,
         f"{lh.senses[k].value}, AR {lh.ar_db[k]:.2e} dB"),
        ("mirror", d_ar <= MIRROR_TOL and d_s <= MIRROR_TOL and bool(np.all(rh.sense_code == -lh.sense_code)),
         f"{d_ar:.1e}/{d_s:.1e}"),
        ("runtime", dt < SWEEP_S, f"{dt:.2f} s"),
    ])


def test_c6_realized_reproduction():
    res = run_all(default_netlist("realized"))
    checks = []
    pub = {Scenario.ANT1_LP: PUB_LP_S11, Scenario.ANT2_RHCP: PUB_CP_S11, Scenario.ANT3_LHCP: PUB_CP_S11}
    for s in Scenario:
        f, v = res[s].min_s11(*S11_BAND)
        checks.append((f"{s.key} min S11", v <= S11_MAX_DB,
                       f"{v:.2f} dB @ {f / 1e9:.3f} GHz, published {pub[s]}"))
    rh = res[Scenario.ANT2_RHCP]
    f_ar, v_ar = rh.min_ar()
    checks.append(("CP AR minimum", v_ar <= CP_AR_MIN_MAX_DB and CP_AR_MIN_WINDOW[0] <= f_ar <= CP_AR_MIN_WINDOW[1],
                   f"{v_ar:.2f} dB @ {f_ar / 1e9:.3f} GHz, published {PUB_CP_AR} dB @ 2.43"))
    arbw = rh.ar_band().fractional_bw
    checks.append(("CP ARBW", arbw >= ARBW_MIN, f"{100 * arbw:.2f} %, published {100 * PUB_ARBW:.1f} %"))
    bw = rh.patch_rl_band().fractional_bw
    checks.append(("-10 dB bandwidth (patch port)", abs(bw - RL_BW_TARGET) <= RL_BW_TOL,
                   f"{100 * bw:.2f} %, published {100 * PUB_BW:.0f} %"))
    verdict(6, "realized-mode reproduction", checks)


def _generated_blocks():
    g = FrequencyGrid.from_range(2e9, 3e9, 10e6)
    yield "tee", tee(g), True
    for sub, lossless in ((FR4, False), (FR4_LOSSLESS, True)):
        yield "line", tline_block(LineGeometry(0.96, 17.0), sub, g), lossless
        yield "wilkinson", wilkinson_block(WilkinsonSpec(), sub, g), False
        yield "branch-line", branchline_block(BranchLineSpec(), sub, g), lossless
        yield "branch-line published", branchline_block(BranchLineSpec(
            series_arm=LineGeometry(0.96, 16.16), shunt_arm=LineGeometry(1.84),
            access=LineGeometry(1.84, 36.0)), sub, g), lossless
    yield "wilkinson ideal", wilkinson_block(WilkinsonSpec(ideal=True), FR4, g), False
    yield "branch-line ideal", branchline_block(BranchLineSpec(ideal=True), FR4, g), True
    for kind in LUMPED_KINDS:
        yield kind, lumped_block(kind, 10.0 if kind.endswith("R") else 1e-9 if kind.endswith("L") else 1e-12, g), \
            not kind.endswith("R")
    for st in ("on", "off"):
        for ideal in (False, True):
            yield f"switch {st}", switch_block(SwitchCircuit(), st, g, ideal=ideal), False
    yield "patch", patch_load_block(PatchSpec(), g), False
    yield "patch ideal", ideal_patch_block(F0, g), False
    for mode in ("ideal", "realized"):
        for s in Scenario:
            a = assemble(default_netlist(mode), s, g)
            yield f"feed {mode} {s.key}", a.feed, False
            yield f"system {mode} {s.key}", a.input_block(), False


def test_c7_property_suites():
    checks = []
    blocks = list(_generated_blocks())
    bad_p = [n for n, b, _ in blocks if not is_passive(b, PASSIVE_TOL)]
    bad_r = [n for n, b, _ in blocks if not is_reciprocal(b, RECIP_TOL)]
    bad_u = [n for n, b, lossless in blocks if lossless and not is_lossless(b, PASSIVE_TOL)]
    checks.append(("passivity", not bad_p, f"{len(blocks)} blocks, failing {bad_p}"))
    checks.append(("reciprocity", not bad_r, f"failing {bad_r}"))
    checks.append(("lossless blocks unitary", not bad_u, f"failing {bad_u}"))

    rng = np.random.default_rng(2024)
    g = FrequencyGrid.from_range(1e9, 3e9, 0.1e9)

    def rand2():
        m = rng.normal(size=(len(g), 2, 2)) + 1j * rng.normal(size=(len(g), 2, 2))
        m = m + np.swapaxes(m, 1, 2)
        return NetworkBlock(g, 0.9 * m / np.linalg.norm(m, ord=2, axis=(1, 2))[:, None, None])

    a, b, c = rand2(), rand2(), rand2()
    rt = float(np.max(np.abs(abcd_to_s(s_to_abcd(a.s)) - a.s) / np.maximum(np.abs(a.s), 1e-300)))
    checks.append(("ABCD/S round-trip", rt < ROUNDTRIP_TOL, f"rel {rt:.1e}"))
    sys_block = assemble(default_netlist(), "ant2", FrequencyGrid.from_range(2.3e9, 2.6e9, 5e6)).feed
    first = format_touchstone(sys_block)
    checks.append(("Touchstone idempotent", format_touchstone(parse_touchstone(first, 3)) == first, "second write"))
    assoc = float(np.max(np.abs(cascade(cascade(a, b), c).s - cascade(a, cascade(b, c)).s)))
    checks.append(("cascade associativity", assoc < 1e-9, f"{assoc:.1e}"))
    eqv = float(np.max(np.abs(cascade(a, b).s - connect_ports(merge(a, b), 1, 2).s)))
    checks.append(("connect/cascade", eqv < 1e-9, f"{eqv:.1e}"))

    ax = rng.normal(size=N_PAIRS) + 1j * rng.normal(size=N_PAIRS)
    ay = rng.normal(size=N_PAIRS) + 1j * rng.normal(size=N_PAIRS)
    k = rng.normal(size=N_PAIRS) + 1j * rng.normal(size=N_PAIRS)
    ar0, t0, c0 = ellipse(ax, ay)
    ar1, t1, c1 = ellipse(k * ax, k * ay)
    same_tilt = lambda u, v: bool(np.all(np.abs(np.sin(np.radians(u - v))) < 1e-9))  # noqa: E731
    checks.append(("scale invariance",
                   bool(np.all(np.abs(ar1 - ar0) < 1e-9)) and same_tilt(t1, t0) and bool(np.all(c1 == c0)),
                   f"{N_PAIRS} pairs"))
    ar2, _, c2 = ellipse(np.conj(ax), np.conj(ay))
    checks.append(("conjugation flips sense", bool(np.all(np.abs(ar2 - ar0) < 1e-9)) and bool(np.all(c2 == -c0)),
                   f"{N_PAIRS} pairs"))
    ar3, t3, c3 = ellipse(ay, ax)
    checks.append(("swap keeps AR, tilt -> 90-t",
                   bool(np.all(np.abs(ar3 - ar0) < 1e-9)) and same_tilt(t3, 90 - t0), f"{N_PAIRS} pairs"))
    # stated requirement: the swap also keeps the sense
    kept = int(np.sum(c3 == c0))
    checks.append(("swap keeps sense", kept == N_PAIRS, f"{kept}/{N_PAIRS} pairs keep it"))

    def dip(f):
        x = (f - 2.447e9) / 60e6
        return -25.0 / (1 + x * x)
    coarse, fine = np.arange(2000, 3001) * 1e6, np.arange(20000, 30001) * 1e5
    bc, bf = band_extract(coarse, dip(coarse), -10.0), band_extract(fine, dip(fine), -10.0)
    d = max(abs(bc.band_lo - bf.band_lo), abs(bc.band_hi - bf.band_hi))
    checks.append(("band-edge refinement", d < REFINE_TOL_HZ, f"{d / 1e3:.1f} kHz"))
    verdict(7, "property suites", checks)


def test_c8_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        runs = []
        for i, workers in enumerate((1, 1, 4, 8)):
            out = Path(tmp) / f"run{i}"
            code = cli_main(["simulate", "--scenario", "ant2", "--out", str(out), "--workers", str(workers)])
            runs.append((code, (out / "ant2_realized.csv").read_bytes()))
    same = all(r[1] == runs[0][1] for r in runs)
    verdict(8, "determinism", [
        ("exit codes", all(r[0] == 0 for r in runs), str([r[0] for r in runs])),
        ("byte-identical CSV", same, f"{len(runs)} runs, workers 1/1/4/8, {len(runs[0][1])} bytes"),
    ])


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_c")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
