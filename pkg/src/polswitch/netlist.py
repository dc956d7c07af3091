"""Plain-text system netlist (INI sections of key = value pairs).

Schema (units in the key names; frequencies accept a G/M/k suffix)::

    [grid]        start, stop, step                      Hz
    [substrate]   eps_r, h_mm, tan_d
    [variant]     mode = realized | ideal
                  dims_as_published = true | false
                  f0                                     design frequency, Hz
    [wilkinson]   arm_w_mm, arm_l_mm (0: quarter wave at f0), isolation_r
    [switch1]     series_r, dc_block_c, choke_l ("none" drops the part),
    [switch2]     r_on, r_off, c_j, l_s                  ohm, F, H
    [branchline]  z_series, z_shunt                      ohm
    [patch]       a_mm, q_total, r_peak, approach_w_mm, approach_l_mm,
                  transformer_w_mm, transformer_l_mm,
                  f_res (empty: cavity model)

Every section and key is optional; missing values take the defaults of
:func:`default_netlist`.  Unknown sections or keys are errors.
"""
from __future__ import annotations

import configparser
from dataclasses import replace

from .antenna import PatchSpec
from .components import BranchLineSpec, DiodeModel, SwitchCircuit, WilkinsonSpec
from .microstrip import FR4, LineGeometry, Substrate
from .system import F0, GridSpec, SystemNetlist, parse_freq


class NetlistError(ValueError):
    pass


_KEYS = {
    "grid": {"start", "stop", "step"},
    "substrate": {"eps_r", "h_mm", "tan_d"},
    "variant": {"mode", "dims_as_published", "f0"},
    "wilkinson": {"arm_w_mm", "arm_l_mm", "isolation_r"},
    "switch1": {"series_r", "dc_block_c", "choke_l", "r_on", "r_off", "c_j", "l_s"},
    "switch2": {"series_r", "dc_block_c", "choke_l", "r_on", "r_off", "c_j", "l_s"},
    "branchline": {"z_series", "z_shunt"},
    "patch": {"a_mm", "q_total", "r_peak", "approach_w_mm", "approach_l_mm",
              "transformer_w_mm", "transformer_l_mm", "f_res"},
}


def default_netlist(mode: str = "realized", dims_as_published: bool = False) -> SystemNetlist:
    """The assembled antenna as built: FR-4, 0.96 mm divider arms, 45 ohm switches."""
    return SystemNetlist(
        substrate=FR4,
        wilkinson=WilkinsonSpec(f0=F0, arm=LineGeometry(0.96)),
        switch1=SwitchCircuit(),
        switch2=SwitchCircuit(),
        branchline=BranchLineSpec(f0=F0),
        patch=PatchSpec(sub=FR4),
        mode=mode,
        dims_as_published=dims_as_published,
    )


def _g(x) -> str:
    return "none" if x is None else repr(float(x))


def netlist_to_text(net: SystemNetlist) -> str:
    p = net.patch
    lines = [
        "; polswitch system netlist",
        "[grid]",
        f"start = {_g(net.grid.start)}",
        f"stop = {_g(net.grid.stop)}",
        f"step = {_g(net.grid.step)}",
        "",
        "[substrate]",
        f"eps_r = {_g(net.substrate.eps_r)}",
        f"h_mm = {_g(net.substrate.h)}",
        f"tan_d = {_g(net.substrate.tan_d)}",
        "",
        "[variant]",
        f"mode = {net.mode}",
        f"dims_as_published = {str(net.dims_as_published).lower()}",
        f"f0 = {_g(net.f0)}",
        "",
        "[wilkinson]",
        f"arm_w_mm = {_g(net.wilkinson.arm.w)}",
        f"arm_l_mm = {_g(net.wilkinson.arm.l)}",
        f"isolation_r = {_g(net.wilkinson.isolation_r)}",
    ]
    for name, sw in (("switch1", net.switch1), ("switch2", net.switch2)):
        d = sw.diode
        lines += [
            "",
            f"[{name}]",
            f"series_r = {_g(sw.series_r)}",
            f"dc_block_c = {_g(sw.dc_block_c)}",
            f"choke_l = {_g(sw.choke_l)}",
            f"r_on = {_g(d.r_on)}",
            f"r_off = {_g(d.r_off)}",
            f"c_j = {_g(d.c_j)}",
            f"l_s = {_g(d.l_s)}",
        ]
    lines += [
        "",
        "[branchline]",
        f"z_series = {_g(net.branchline.z_series)}",
        f"z_shunt = {_g(net.branchline.z_shunt)}",
        "",
        "[patch]",
        f"a_mm = {_g(p.a)}",
        f"q_total = {_g(p.q_total)}",
        f"r_peak = {_g(p.r_peak)}",
        f"approach_w_mm = {_g(p.approach.w)}",
        f"approach_l_mm = {_g(p.approach.l)}",
        f"transformer_w_mm = {_g(p.transformer.w)}",
        f"transformer_l_mm = {_g(p.transformer.l)}",
        f"f_res = {'' if p.f_res is None else _g(p.f_res)}",
    ]
    return "\n".join(lines) + "\n"


def _num(sec, key, default, allow_none=False):
    if key not in sec:
        return default
    raw = sec[key].strip()
    if allow_none and raw.lower() in ("none", ""):
        return None
    try:
        return parse_freq(raw)
    except ValueError:
        raise NetlistError(f"[{sec.name}] {key}: not a number: {raw!r}") from None


def _bool(sec, key, default):
    if key not in sec:
        return default
    try:
        return sec.getboolean(key)
    except ValueError:
        raise NetlistError(f"[{sec.name}] {key}: expected true/false") from None


def _switch(sec, base: SwitchCircuit) -> SwitchCircuit:
    d = base.diode
    diode = DiodeModel(
        r_on=_num(sec, "r_on", d.r_on),
        r_off=_num(sec, "r_off", d.r_off),
        c_j=_num(sec, "c_j", d.c_j),
        l_s=_num(sec, "l_s", d.l_s),
    )
    return SwitchCircuit(
        series_r=_num(sec, "series_r", base.series_r),
        dc_block_c=_num(sec, "dc_block_c", base.dc_block_c, allow_none=True),
        choke_l=_num(sec, "choke_l", base.choke_l, allow_none=True),
        diode=diode,
    )


def parse_netlist(text: str, source: str = "<netlist>") -> SystemNetlist:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise NetlistError(f"{source}: {exc}") from None
    for name in cp.sections():
        if name not in _KEYS:
            raise NetlistError(f"{source}: unknown section [{name}]")
        extra = set(cp[name]) - _KEYS[name]
        if extra:
            raise NetlistError(f"{source}: unknown key(s) in [{name}]: {', '.join(sorted(extra))}")
    empty = {}
    sec = lambda n: cp[n] if cp.has_section(n) else _Empty(n, empty)  # noqa: E731
    net = default_netlist()
    try:
        g = sec("grid")
        grid = GridSpec(_num(g, "start", net.grid.start), _num(g, "stop", net.grid.stop),
                        _num(g, "step", net.grid.step))
        s = sec("substrate")
        sub = Substrate(_num(s, "eps_r", net.substrate.eps_r), _num(s, "h_mm", net.substrate.h),
                        _num(s, "tan_d", net.substrate.tan_d))
        v = sec("variant")
        mode = v.get("mode", net.mode).strip().lower()
        dims = _bool(v, "dims_as_published", net.dims_as_published)
        f0 = _num(v, "f0", net.f0)
        w = sec("wilkinson")
        wil = WilkinsonSpec(
            f0=f0,
            arm=LineGeometry(_num(w, "arm_w_mm", net.wilkinson.arm.w), _num(w, "arm_l_mm", net.wilkinson.arm.l)),
            isolation_r=_num(w, "isolation_r", net.wilkinson.isolation_r),
        )
        b = sec("branchline")
        bl = BranchLineSpec(f0=f0, z_series=_num(b, "z_series", net.branchline.z_series),
                            z_shunt=_num(b, "z_shunt", net.branchline.z_shunt))
        p = sec("patch")
        pd = net.patch
        patch = PatchSpec(
            a=_num(p, "a_mm", pd.a),
            sub=sub,
            q_total=_num(p, "q_total", pd.q_total),
            r_peak=_num(p, "r_peak", pd.r_peak),
            approach=LineGeometry(_num(p, "approach_w_mm", pd.approach.w), _num(p, "approach_l_mm", pd.approach.l)),
            transformer=LineGeometry(_num(p, "transformer_w_mm", pd.transformer.w),
                                     _num(p, "transformer_l_mm", pd.transformer.l)),
            f_res=_num(p, "f_res", pd.f_res, allow_none=True),
        )
        return replace(
            net,
            substrate=sub,
            wilkinson=wil,
            switch1=_switch(sec("switch1"), net.switch1),
            switch2=_switch(sec("switch2"), net.switch2),
            branchline=bl,
            patch=patch,
            mode=mode,
            dims_as_published=dims,
            grid=grid,
            f0=f0,
        )
    except NetlistError:
        raise
    except ValueError as exc:
        raise NetlistError(f"{source}: {exc}") from None


class _Empty(dict):
    def __init__(self, name, d):
        super().__init__(d)
        self.name = name

    def getboolean(self, key):  # pragma: no cover - never reached, keys absent
        raise KeyError(key)


def load_netlist(path) -> SystemNetlist:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise NetlistError(f"{path}: {exc.strerror}") from None
    return parse_netlist(text, str(path))
