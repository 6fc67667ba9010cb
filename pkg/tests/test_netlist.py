import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memsim.circuit import Ac, DcSweep, Homotopy, Op, Print, Tran
from memsim.netlist import NetlistError, format_netlist, parse_netlist, parse_number

FULL = """* every directive
V1 in gnd vsource dc=1 sin_amp=0.5 sin_freq=1k sin_phase=30 pwl=0,0,1m,1 pwl_period=2m
R1 in mid resistor r=2.2k ; trailing comment
M1 mid 0 memristor f1_switch=2 f2_switch=5 lambda=5
R2 mid 0 rram V0=0.3 v0=2meg
.op
.dc V1 -1 1 10m dir=updown
.tran 1u 1m method=be ic s(M1)=0 gap(R2)=1.7
.ac v1 1 1meg 10
.homotopy V1 -1 1 hmax=0.02 max_samples=500
.print csv out/run
.end
this line is after .end and ignored
"""


def test_basic_example():
    doc = parse_netlist("V1 1 0 vsource dc=1\nR1 1 0 resistor r=1k\n.op")
    assert doc.ok and not doc.diagnostics
    assert len(doc.circuit.instances) == 2 and doc.circuit.analyses == [Op()]
    assert doc.circuit.instances[1].params == {"r": 1000.0}


@pytest.mark.parametrize("text,value", [
    ("2.5meg", 2.5e6), ("1k", 1e3), ("10u", 1e-5), ("3", 3.0), ("1f", 1e-15), ("-2mV", -2e-3),
    (".5n", 5e-10), ("4T", 4e12), ("1G", 1e9), ("7p", 7e-12), ("2MEG", 2e6), ("1e3k", 1e6), ("5ohm", 5.0),
])
def test_numbers(text, value):
    assert parse_number(text) == pytest.approx(value, rel=1e-15)


def test_bad_number():
    with pytest.raises(NetlistError):
        parse_number("k1")


def test_switch_range_message():
    doc = parse_netlist("M1 1 0 memristor f1_switch=7")
    assert not doc.ok
    assert "f1_switch out of range 1..5" in doc.diagnostics[0].message
    assert doc.diagnostics[0].line == 1


def test_full_netlist_parses():
    doc = parse_netlist(FULL)
    assert doc.ok, doc.diagnostics
    c = doc.circuit
    assert [i.name for i in c.instances] == ["V1", "R1", "M1", "R2"]
    assert c.instances[0].nodes == ("in", "0")
    assert c.instances[0].waveform.sin_freq == 1000.0
    assert c.instances[0].waveform.pwl == (0.0, 0.0, 0.001, 1.0)
    assert c.instances[3].params == {"V0": 0.3, "v0": 2e6}
    kinds = [type(a) for a in c.analyses]
    assert kinds == [Op, DcSweep, Tran, Ac, Homotopy, Print]
    assert c.analyses[1].direction == "updown" and c.analyses[1].step == pytest.approx(0.01)
    assert c.analyses[2].ic == {"s(M1)": 0.0, "gap(R2)": 1.7} and c.analyses[2].method == "be"
    assert c.analyses[3].points_per_decade == 10
    assert c.analyses[4].options == {"hmax": 0.02, "max_samples": 500}


def test_round_trip():
    doc = parse_netlist(FULL)
    again = parse_netlist(format_netlist(doc.circuit))
    assert again.ok and again.circuit == doc.circuit
    assert format_netlist(again.circuit) == format_netlist(doc.circuit)


@pytest.mark.parametrize("text,fragment,col", [
    ("V1 1 0 vsource dc=1\nR1 1 0 bogus", "unknown device kind", 8),
    ("R1 1 0 resistor q=3", "unknown parameter", 1),
    ("R1 1 0 resistor r=1\nr1 1 0 resistor r=2", "duplicate instance", 1),
    ("R1 1 0 resistor r=1x3", "bad number", 17),
    ("R1 1 0 resistor 5", "expected key=value", 17),
    ("R1 1 0", "device line needs", 1),
    (".foo", "unknown directive", 1),
    ("V1 1 0 vsource\n.dc V1 0 1", "usage: .dc", 1),
    ("V1 1 0 vsource\n.dc V1 0 1 0", ".dc step must be > 0", 12),
    ("V1 1 0 vsource\n.dc V1 0 1 0.1 dir=sideways", "unknown .dc option", 16),
    ("V1 1 0 vsource\n.tran 0 1", "dt > 0", 1),
    ("V1 1 0 vsource\n.tran 1m 1 method=gear", "unknown .tran option", 12),
    ("V1 1 0 vsource\n.ac V1 0 1k 10", "fstart", 1),
    ("V1 1 0 vsource\n.homotopy V1 1 -1", "lmax > lmin", 1),
    ("V1 1 0 vsource\n.homotopy V1 -1 1 speed=3", "unknown .homotopy option", 19),
    ("V1 1 0 vsource\n.print json x", "usage: .print", 1),
    ("R1 1 0 resistor\n.dc R1 0 1 0.1", "not an independent source", 5),
    ("V1 1 0 vsource pwl=0,1,2", "even number", 1),
    ("R1 1 0 resistor r=-5", "must be > 0", 1),
])
def test_diagnostics(text, fragment, col):
    doc = parse_netlist(text)
    assert not doc.ok
    d = doc.diagnostics[-1]
    assert fragment in d.message
    assert d.column == col
    assert str(d).startswith(f"line {d.line}, col {col}")


def test_comments_and_blank_lines():
    doc = parse_netlist("* title\n\n   ; note\nR1 1 0 resistor ; r=5\nV1 1 0 vsource dc=2\n")
    assert doc.ok and doc.circuit.instances[0].params == {}


def test_case_insensitive_identifiers():
    doc = parse_netlist("V1 N1 0 VSOURCE DC=1\nR1 n1 0 Resistor R=1K\n.OP\n.DC v1 0 1 0.5")
    assert doc.ok
    assert doc.circuit.instances[0].nodes == ("n1", "0") and doc.circuit.instances[0].kind == "vsource"


def test_bytes_input():
    doc = parse_netlist(b"V1 1 0 vsource dc=1\nR1 1 0 resistor\n")
    assert doc.ok and doc.text.startswith("V1")


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=400))
def test_never_raises_on_bytes(data):
    doc = parse_netlist(data)
    assert all(d.line >= 1 and d.column >= 1 for d in doc.diagnostics)


TOKENS = st.sampled_from(["R1", "V1", "M1", "1", "0", "n2", "resistor", "vsource", "memristor", "hys", "r=1k",
                          "dc=1", "f1_switch=3", "pwl=0,0,1,1", ".op", ".dc", ".tran", ".ac", ".homotopy",
                          ".print", "csv", "ic", "s(M1)=0", "method=be", "dir=up", "-1", "1", "1m", "=", "",
                          "1e999", "nan", "x=y=z", "*", ";"])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.lists(TOKENS, max_size=8).map(" ".join), max_size=8).map("\n".join))
def test_never_raises_on_token_soup(text):
    doc = parse_netlist(text)
    if doc.ok:
        again = parse_netlist(format_netlist(doc.circuit))
        assert again.ok and again.circuit == doc.circuit


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=150, deadline=None)
@given(st.floats(1e-3, 1e9), finite, st.lists(st.floats(0, 10), min_size=1, max_size=4, unique=True),
       st.floats(1e-9, 1), st.sampled_from(["be", "trap"]))
def test_round_trip_property(r, dc, ts, dt, method):
    ts = sorted(ts)
    pwl = ",".join(f"{t!r},{t * 2!r}" for t in ts)
    text = (f"V1 a 0 vsource dc={dc!r} pwl={pwl}\nR1 a b resistor r={r!r}\nC1 b 0 capacitor c=1n\n"
            f".tran {dt!r} 1 method={method} ic v(b)={dc!r}\n.dc V1 {-abs(dc)!r} {abs(dc) + 1!r} 0.5\n")
    doc = parse_netlist(text)
    assert doc.ok, doc.diagnostics
    again = parse_netlist(format_netlist(doc.circuit))
    assert again.circuit == doc.circuit
