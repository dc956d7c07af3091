"""Command-line front end.

Exit status: 0 success, 1 a structural gate failed (``report``), 2 usage,
input or file error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .components import switch_block
from .microstrip import LineGeometry, Substrate, analyze, guided_wavelength, synthesize
from .netlist import default_netlist, load_netlist, netlist_to_text
from .report import comparison_rows, format_report, rows_to_csv, structural_gates
from .system import MODES, GridSpec, Scenario, assemble, component_blocks, parse_freq, run_all, run_sweep
from .touchstone import format_touchstone, touchstone_extension

COMPONENTS = ("wilkinson", "branchline", "switch", "patch", "feed", "system")


class CliError(Exception):
    pass


def _fnum(x) -> str:
    return f"{float(x):.17g}"


def sweep_csv(result) -> str:
    lines = ["freq_hz,s11_db,ar_db,sense"]
    for f, s, a, sense in zip(result.freq, result.s11_db, result.ar_db, result.senses):
        lines.append(f"{_fnum(f)},{_fnum(s)},{_fnum(a)},{sense.value}")
    return "\n".join(lines) + "\n"


def summary_text(result) -> str:
    out = []
    for k, v in result.summary().items():
        out.append(f"{k}={v if isinstance(v, str) else _fnum(v)}")
    return "\n".join(out) + "\n"


def _emit(text: str, out_dir, name: str) -> None:
    if out_dir is None:
        sys.stdout.write(text)
        return
    d = Path(out_dir)
    try:
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(f"{d / name}: {exc.strerror}") from None
    print(d / name, file=sys.stderr)


def _netlist(args):
    net = load_netlist(args.netlist) if args.netlist else default_netlist()
    if args.mode:
        net = replace(net, mode=args.mode)
    if args.dims_as_published:
        net = replace(net, dims_as_published=True)
    if args.grid:
        net = replace(net, grid=GridSpec.parse(args.grid))
    return net


def cmd_synth(args) -> int:
    sub = Substrate(args.er, args.h, args.tand)
    geom = synthesize(args.z0, sub)
    p = analyze(geom, sub)
    print(f"width_mm={geom.w:.4f}")
    print(f"w_over_h={geom.w / sub.h:.4f}")
    print(f"z0_ohm={p.z0:.4f}")
    print(f"eps_eff={p.eps_eff:.4f}")
    if args.f:
        lg = guided_wavelength(sub, geom, parse_freq(args.f))
        print(f"lambda_g_mm={lg:.4f}")
        print(f"quarter_wave_mm={lg / 4:.4f}")
    return 0


def cmd_analyze(args) -> int:
    sub = Substrate(args.er, args.h, args.tand)
    geom = LineGeometry(args.w)
    p = analyze(geom, sub)
    print(f"z0_ohm={p.z0:.4f}")
    print(f"eps_eff={p.eps_eff:.4f}")
    if args.f:
        lg = guided_wavelength(sub, geom, parse_freq(args.f))
        print(f"lambda_g_mm={lg:.4f}")
    return 0


def cmd_component(args) -> int:
    if args.format == "csv":
        raise CliError("component output is Touchstone only")
    net = _netlist(args)
    grid = net.grid.build()
    scenario = Scenario.parse(args.scenario or "ant1")
    name = args.name
    if name == "switch":
        sw = net.switch1
        block = switch_block(sw, args.state, grid, ideal=net.ideal)
        name = f"switch_{args.state}"
    elif name == "wilkinson":
        block = component_blocks(net, scenario, grid)["wilkinson"]
    elif name == "branchline":
        block = component_blocks(net, scenario, grid)["branchline"]
    elif name == "patch":
        block = component_blocks(net, scenario, grid)["patch"]
    elif name == "feed":
        block = assemble(net, scenario, grid).feed
        name = f"feed_{scenario.key}"
    else:
        block = assemble(net, scenario, grid).input_block()
        name = f"system_{scenario.key}"
    text = format_touchstone(block, [f"{name} ({net.mode})"])
    _emit(text, args.out, f"{name}_{net.mode}{touchstone_extension(block.n_ports)}")
    return 0


def cmd_simulate(args) -> int:
    if not args.scenario:
        raise CliError("simulate needs --scenario ant1|ant2|ant3")
    net = _netlist(args)
    result = run_sweep(net, args.scenario, workers=args.workers)
    stem = f"{result.scenario.key}_{net.mode}"
    if args.format == "touchstone":
        block = assemble(net, result.scenario).input_block()
        _emit(format_touchstone(block, [stem]), args.out, stem + ".s1p")
    else:
        _emit(sweep_csv(result), args.out, stem + ".csv")
    summary = summary_text(result)
    if args.out is None:
        sys.stderr.write(summary)
    else:
        _emit(summary, args.out, stem + "_summary.txt")
    return 0


def cmd_report(args) -> int:
    net = _netlist(args)
    results = run_all(net, workers=args.workers)
    if args.format == "csv":
        _emit(rows_to_csv(comparison_rows(results)), args.out, f"report_{net.mode}.csv")
    else:
        _emit(format_report(results, net.f0), args.out, f"report_{net.mode}.txt")
    return 0 if all(g.passed for g in structural_gates(results, net.f0)) else 1


def cmd_scenarios(args) -> int:
    print(f"{'scenario':<10}{'diode1':<8}{'diode2':<8}polarization")
    for s in Scenario:
        print(f"{s.key:<10}{s.diode1.name:<8}{s.diode2.name:<8}{s.expected.value}")
    return 0


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("system options")
    g.add_argument("--netlist", help="netlist file (default: built-in system)")
    g.add_argument("--grid", help="sweep as start:stop:step, e.g. 2G:3G:1M")
    g.add_argument("--mode", choices=MODES, help="ideal or realized blocks (default: netlist)")
    g.add_argument("--dims-as-published", action="store_true",
                   help="use the published branch-line layout instead of synthesized arms")
    g.add_argument("--scenario", help="ant1, ant2 or ant3")
    g.add_argument("--out", help="output directory (default: stdout)")
    g.add_argument("--format", choices=("csv", "touchstone"), default=None)
    g.add_argument("--workers", type=int, default=1, help="threads for the sweep")
    return p


def _line_args(p):
    p.add_argument("--er", type=float, default=4.6, help="relative permittivity")
    p.add_argument("--h", type=float, default=1.0, help="substrate height, mm")
    p.add_argument("--tand", type=float, default=0.0, help="loss tangent")
    p.add_argument("--f", help="frequency for the guided wavelength, e.g. 2.45G")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polswitch",
                                     description="Circuit model of a switched-polarization patch antenna.")
    parser.add_argument("--print-default", action="store_true", help="print the default netlist and exit")
    sub = parser.add_subparsers(dest="command")
    common = _common()

    p = sub.add_parser("synth", help="line width for an impedance")
    p.add_argument("--z0", type=float, required=True, help="target impedance, ohm")
    _line_args(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("analyze", help="impedance of a line width")
    p.add_argument("--w", type=float, required=True, help="strip width, mm")
    _line_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("component", parents=[common], help="write one block as Touchstone")
    p.add_argument("name", choices=COMPONENTS)
    p.add_argument("--state", choices=("on", "off"), default="off", help="diode state for 'switch'")
    p.set_defaults(func=cmd_component)

    p = sub.add_parser("simulate", parents=[common], help="sweep one scenario")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", parents=[common], help="all scenarios against published values")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("scenarios", help="print the diode-state table")
    p.set_defaults(func=cmd_scenarios)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_default:
        sys.stdout.write(netlist_to_text(default_netlist()))
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("polswitch: error: a command is required", file=sys.stderr)
        return 2
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"polswitch: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
