import pytest

from polswitch.netlist import NetlistError, default_netlist, load_netlist, netlist_to_text, parse_netlist


def test_default_text_roundtrip():
    net = default_netlist()
    assert parse_netlist(netlist_to_text(net)) == net
    ideal = default_netlist("ideal", dims_as_published=True)
    assert parse_netlist(netlist_to_text(ideal)) == ideal


def test_empty_text_is_default():
    assert parse_netlist("") == default_netlist()


def test_overrides():
    net = parse_netlist("""
[variant]
mode = ideal
[switch2]
choke_l = none
r_on = 1.5
[grid]
step = 5M
[patch]
f_res = 2.45G
""")
    assert net.mode == "ideal"
    assert net.switch2.choke_l is None and net.switch2.diode.r_on == 1.5
    assert net.switch1 == default_netlist().switch1
    assert net.grid.step == 5e6
    assert net.patch.f_res == 2.45e9


@pytest.mark.parametrize("text", [
    "[bogus]\nx = 1\n",
    "[switch1]\nseries = 45\n",
    "[switch1]\nseries_r = lots\n",
    "[variant]\nmode = best\n",
    "[variant]\ndims_as_published = perhaps\n",
    "[substrate]\neps_r = 0.5\n",
    "no section here\n",
])
def test_bad_netlists(text):
    with pytest.raises(NetlistError):
        parse_netlist(text)


def test_load_errors_name_path(tmp_path):
    p = tmp_path / "missing.ini"
    with pytest.raises(NetlistError, match="missing.ini"):
        load_netlist(p)
    p.write_text("[grid]\nstart = x\n")
    with pytest.raises(NetlistError, match="start"):
        load_netlist(p)
