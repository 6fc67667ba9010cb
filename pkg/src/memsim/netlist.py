"""A small SPICE-flavoured netlist dialect.

    * comment            ; comment
    V1 1 0 vsource dc=1 pwl=0,0,1m,1
    M1 1 0 memristor f1_switch=2 f2_switch=5
    .op
    .dc V1 -1 1 0.01 dir=updown
    .tran 1u 1m method=be ic s(M1)=0
    .ac V1 1 1meg 10
    .homotopy V1 -1 1 hmax=0.02
    .print csv results/run

Identifiers are case-insensitive; node names are stored lower-case and
instance names keep their spelling.  The parser never raises on input
text: every problem becomes a diagnostic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields

from .circuit import GROUND, Ac, Circuit, DcSweep, Homotopy, Instance, Op, Print, SourceWaveform, Tran
from .devices import KINDS, build_device
from .analyses.homotopy import HomotopyOptions

SUFFIXES = {"t": 12, "g": 9, "k": 3, "m": -3, "u": -6, "n": -9, "p": -12, "f": -15}  # decimal exponents
_NUMBER = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([a-zA-Z]*)$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_NODE = re.compile(r"^[A-Za-z0-9_]+$")
GROUND_ALIASES = ("0", "gnd")
WAVEFORM_KEYS = ("dc", "sin_amp", "sin_freq", "sin_phase", "pwl", "pwl_period")
HOMOTOPY_KEYS = {f.name: f.type for f in fields(HomotopyOptions)}


class NetlistError(ValueError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self):
        return f"line {self.line}, col {self.column}: {self.severity}: {self.message}"


@dataclass
class NetlistDocument:
    text: str
    circuit: Circuit
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


def parse_number(tok: str) -> float:
    """SPICE number: 2.5meg, 1k, 10u, 3.3 (trailing unit letters are ignored)."""
    m = _NUMBER.match(tok.strip())
    if not m:
        raise NetlistError(f"bad number {tok!r}")
    mant, suffix = m.group(1), m.group(2).lower()
    exp = 6 if suffix.startswith("meg") else SUFFIXES.get(suffix[:1], 0)
    if not exp:
        return float(mant)
    # scale in decimal so 10u is exactly the double nearest 1e-5
    if "e" in mant.lower():
        base, _, e = mant.lower().partition("e")
        return float(f"{base}e{int(e) + exp}")
    return float(f"{mant}e{exp}")


def _tokens(line: str):
    """(column, token) pairs, 1-based columns."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


def _keyvals(toks, lineno, diags):
    out = {}
    for col, tok in toks:
        if "=" not in tok:
            diags.append(Diagnostic(lineno, col, f"expected key=value, got {tok!r}"))
            continue
        key, _, val = tok.partition("=")
        if not key or not val:
            diags.append(Diagnostic(lineno, col, f"malformed key=value {tok!r}"))
            continue
        out[key] = (col, val)
    return out


def _device(lineno, toks, diags, instances, seen):
    if len(toks) < 4:
        diags.append(Diagnostic(lineno, 1, "device line needs: name node+ node- kind [key=value ...]"))
        return
    (c0, name), (c1, np_), (c2, nn), (c3, kind) = toks[:4]
    if not _NAME.match(name):
        diags.append(Diagnostic(lineno, c0, f"bad instance name {name!r}"))
        return
    for col, node in ((c1, np_), (c2, nn)):
        if not _NODE.match(node):
            diags.append(Diagnostic(lineno, col, f"bad node name {node!r}"))
            return
    kind_l = kind.lower()
    if kind_l not in KINDS:
        diags.append(Diagnostic(lineno, c3, f"unknown device kind {kind!r}; known: {', '.join(KINDS)}"))
        return
    if name.lower() in seen:
        diags.append(Diagnostic(lineno, c0, f"duplicate instance {name!r} (first on line {seen[name.lower()]})"))
        return
    kv = _keyvals(toks[4:], lineno, diags)
    params, wave = {}, {}
    is_source = KINDS[kind_l].source
    for key, (col, val) in kv.items():
        low = key.lower()
        try:
            if is_source and low in WAVEFORM_KEYS:
                if low == "pwl":
                    wave["pwl"] = tuple(parse_number(v) for v in val.split(","))
                else:
                    wave[low] = parse_number(val)
            else:
                params[key] = parse_number(val)
        except NetlistError as exc:
            diags.append(Diagnostic(lineno, col, str(exc)))
            return
    try:
        build_device(kind_l, params)
        waveform = SourceWaveform(**wave) if is_source else None
    except ValueError as exc:
        diags.append(Diagnostic(lineno, c0, f"{name}: {exc}"))
        return
    seen[name.lower()] = lineno
    nodes = tuple(GROUND if n.lower() in GROUND_ALIASES else n.lower() for n in (np_, nn))
    instances.append(Instance(name, kind_l, nodes, params, waveform))


def _numbers(lineno, toks, n, diags, what):
    if len(toks) < n:
        diags.append(Diagnostic(lineno, 1, f"{what}"))
        return None
    try:
        return [parse_number(t) for _, t in toks[:n]]
    except NetlistError as exc:
        col = next(c for c, t in toks[:n] if not _NUMBER.match(t))
        diags.append(Diagnostic(lineno, col, str(exc)))
        return None


def _directive(lineno, toks, diags, analyses, refs):
    col0, word = toks[0]
    word = word.lower()
    rest = toks[1:]
    if word == ".op":
        if rest:
            diags.append(Diagnostic(lineno, rest[0][0], ".op takes no arguments"))
            return
        analyses.append(Op())
    elif word == ".dc":
        if len(rest) < 4:
            diags.append(Diagnostic(lineno, col0, "usage: .dc SRC start stop step [dir=up|down|updown]"))
            return
        nums = _numbers(lineno, rest[1:4], 3, diags, "")
        if nums is None:
            return
        kv = _keyvals(rest[4:], lineno, diags)
        direction = "up"
        for key, (col, val) in kv.items():
            if key.lower() != "dir" or val.lower() not in ("up", "down", "updown"):
                diags.append(Diagnostic(lineno, col, f"unknown .dc option {key}={val}"))
                return
            direction = val.lower()
        if nums[2] <= 0:
            diags.append(Diagnostic(lineno, rest[3][0], ".dc step must be > 0"))
            return
        refs.append((lineno, rest[0][0], rest[0][1]))
        analyses.append(DcSweep(rest[0][1], *nums, direction=direction))
    elif word == ".tran":
        nums = _numbers(lineno, rest, 2, diags, "usage: .tran dt tstop [method=be|trap] [ic name=value ...]")
        if nums is None:
            return
        dt, tstop = nums
        if not (dt > 0 and tstop > 0):
            diags.append(Diagnostic(lineno, col0, ".tran needs dt > 0 and tstop > 0"))
            return
        method, ic = "trap", {}
        in_ic = False
        for col, tok in rest[2:]:
            if tok.lower() == "ic":
                in_ic = True
                continue
            key, eq, val = tok.rpartition("=")
            if not eq or not key:
                diags.append(Diagnostic(lineno, col, f"expected key=value, got {tok!r}"))
                return
            try:
                if in_ic:
                    ic[key] = parse_number(val)
                elif key.lower() == "method" and val.lower() in ("be", "trap"):
                    method = val.lower()
                else:
                    diags.append(Diagnostic(lineno, col, f"unknown .tran option {tok!r}"))
                    return
            except NetlistError as exc:
                diags.append(Diagnostic(lineno, col, str(exc)))
                return
        analyses.append(Tran(dt, tstop, method, ic))
    elif word == ".ac":
        if len(rest) != 4:
            diags.append(Diagnostic(lineno, col0, "usage: .ac SRC fstart fstop pts_per_decade"))
            return
        nums = _numbers(lineno, rest[1:], 3, diags, "")
        if nums is None:
            return
        fstart, fstop, ppd = nums
        if not (0 < fstart <= fstop) or ppd < 1 or ppd != int(ppd):
            diags.append(Diagnostic(lineno, col0, ".ac needs 0 < fstart <= fstop and an integer pts_per_decade >= 1"))
            return
        refs.append((lineno, rest[0][0], rest[0][1]))
        analyses.append(Ac(rest[0][1], fstart, fstop, int(ppd)))
    elif word == ".homotopy":
        if len(rest) < 3:
            diags.append(Diagnostic(lineno, col0, "usage: .homotopy SRC lmin lmax [key=value ...]"))
            return
        nums = _numbers(lineno, rest[1:3], 2, diags, "")
        if nums is None:
            return
        if not nums[1] > nums[0]:
            diags.append(Diagnostic(lineno, col0, ".homotopy needs lmax > lmin"))
            return
        opts = {}
        for key, (col, val) in _keyvals(rest[3:], lineno, diags).items():
            if key not in HOMOTOPY_KEYS:
                diags.append(Diagnostic(lineno, col, f"unknown .homotopy option {key!r}"))
                return
            try:
                v = parse_number(val)
            except NetlistError as exc:
                diags.append(Diagnostic(lineno, col, str(exc)))
                return
            opts[key] = int(v) if HOMOTOPY_KEYS[key] in (int, "int") else v
        try:
            HomotopyOptions(**opts)
        except (TypeError, ValueError) as exc:
            diags.append(Diagnostic(lineno, col0, str(exc)))
            return
        refs.append((lineno, rest[0][0], rest[0][1]))
        analyses.append(Homotopy(rest[0][1], *nums, options=opts))
    elif word == ".print":
        if len(rest) != 2 or rest[0][1].lower() != "csv":
            diags.append(Diagnostic(lineno, col0, "usage: .print csv PATH"))
            return
        analyses.append(Print(rest[1][1]))
    elif word == ".end":
        pass
    else:
        diags.append(Diagnostic(lineno, col0, f"unknown directive {toks[0][1]!r}"))


def parse_netlist(text) -> NetlistDocument:
    """Parse netlist text (str or bytes) into a circuit plus diagnostics."""
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8", errors="replace")
    diags: list[Diagnostic] = []
    instances: list[Instance] = []
    analyses: list = []
    seen: dict[str, int] = {}
    refs: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0]
        if not line.strip() or line.lstrip().startswith("*"):
            continue
        toks = _tokens(line)
        try:
            if toks[0][1].startswith("."):
                if toks[0][1].lower() == ".end":
                    break
                _directive(lineno, toks, diags, analyses, refs)
            else:
                _device(lineno, toks, diags, instances, seen)
        except Exception as exc:  # noqa: BLE001 - the parser reports, never raises
            diags.append(Diagnostic(lineno, 1, f"internal parser error: {exc!r}"))
    sources = {i.name.lower() for i in instances if KINDS[i.kind].source}
    for lineno, col, name in refs:
        if name.lower() not in sources:
            diags.append(Diagnostic(lineno, col, f"{name!r} is not an independent source in this netlist"))
    return NetlistDocument(text, Circuit(instances, analyses), diags)


def _num(v: float) -> str:
    return repr(float(v))


def format_netlist(circuit: Circuit) -> str:
    """Canonical text for ``circuit``; parsing it gives back an equal circuit."""
    lines = []
    for inst in circuit.instances:
        parts = [inst.name, inst.nodes[0], inst.nodes[1], inst.kind]
        parts += [f"{k}={_num(v)}" for k, v in inst.params.items()]
        wf = inst.waveform
        if wf is not None:
            default = SourceWaveform()
            for key in WAVEFORM_KEYS:
                val = getattr(wf, key)
                if val == getattr(default, key):
                    continue
                if key == "pwl":
                    parts.append("pwl=" + ",".join(_num(v) for v in val))
                else:
                    parts.append(f"{key}={_num(val)}")
        lines.append(" ".join(parts))
    for a in circuit.analyses:
        if isinstance(a, Op):
            lines.append(".op")
        elif isinstance(a, DcSweep):
            lines.append(f".dc {a.source} {_num(a.start)} {_num(a.stop)} {_num(a.step)} dir={a.direction}")
        elif isinstance(a, Tran):
            s = f".tran {_num(a.dt)} {_num(a.tstop)} method={a.method}"
            if a.ic:
                s += " ic " + " ".join(f"{k}={_num(v)}" for k, v in a.ic.items())
            lines.append(s)
        elif isinstance(a, Ac):
            lines.append(f".ac {a.source} {_num(a.fstart)} {_num(a.fstop)} {a.points_per_decade}")
        elif isinstance(a, Homotopy):
            opts = " ".join(f"{k}={_num(v) if isinstance(v, float) else v}" for k, v in a.options.items())
            lines.append(f".homotopy {a.source} {_num(a.lmin)} {_num(a.lmax)}" + (f" {opts}" if opts else ""))
        elif isinstance(a, Print):
            lines.append(f".print csv {a.path}")
    return "\n".join(lines) + "\n"


__all__ = ["Diagnostic", "NetlistDocument", "NetlistError", "parse_netlist", "parse_number",
           "format_netlist", "GROUND"]
