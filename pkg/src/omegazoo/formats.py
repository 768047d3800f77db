"""Native JSON and HOA-subset serialisation."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .automaton import BUCHI, COBUCHI, Automaton, AutomatonError, build
from .finite import ClassifierDfa, FiniteAutomaton, make_finite

FINITE = "finite"


class FormatError(AutomatonError):
    pass


# ---------------------------------------------------------------- JSON

def to_json_obj(x, name: str = "") -> dict:
    if isinstance(x, Automaton):
        return {
            "name": x.name,
            "alphabet": list(x.alphabet.letters),
            "states": list(x.state_names),
            "initial": x.state_names[x.initial],
            "acceptance": x.acceptance,
            "transitions": [[x.state_names[t.src], x.alphabet.letters[t.letter],
                             x.state_names[t.dst], t.significant] for t in x.transitions],
        }
    if isinstance(x, ClassifierDfa):
        obj = to_json_obj(x.dfa, name)
        obj["finals"] = {x.dfa.name_of(q): label for q, label in sorted(x.finals.items())}
        return obj
    if isinstance(x, FiniteAutomaton):
        names = [x.name_of(q) for q in range(x.state_count)]
        return {
            "name": name,
            "alphabet": list(x.alphabet.letters),
            "states": names,
            "initial": names[x.initial],
            "acceptance": FINITE,
            "accepting": [names[q] for q in sorted(x.accepting)],
            "transitions": [[names[q], x.alphabet.letters[a], names[d]] for q, a, d in x.transitions()],
        }
    raise FormatError(f"cannot serialise {type(x).__name__}")


def from_json_obj(obj: dict):
    try:
        acceptance = obj["acceptance"]
        letters = obj["alphabet"]
        states = obj["states"]
        initial = obj["initial"]
        trans = obj["transitions"]
    except KeyError as e:
        raise FormatError(f"missing field {e.args[0]!r}") from None
    if acceptance in (BUCHI, COBUCHI):
        for t in trans:
            if len(t) != 4:
                raise FormatError(f"transition {t} must be [src, letter, dst, significant]")
        try:
            return build(obj.get("name", ""), letters, states, initial,
                         [(s, a, d, bool(f)) for s, a, d, f in trans], acceptance, dedupe=False)
        except KeyError as e:
            raise FormatError(f"unknown state {e.args[0]!r}") from None
    if acceptance == FINITE:
        idx = {s: i for i, s in enumerate(states)}
        li = {a: i for i, a in enumerate(letters)}
        try:
            f = make_finite(letters, len(states), idx[initial],
                            [(idx[s], li[a], idx[d]) for s, a, d in trans],
                            [idx[s] for s in obj.get("accepting", [])], states)
            if "finals" in obj:
                return ClassifierDfa(f, {idx[s]: lab for s, lab in obj["finals"].items()})
        except KeyError as e:
            raise FormatError(f"unknown state or letter {e.args[0]!r}") from None
        return f
    raise FormatError(f"unknown acceptance {acceptance!r}")


def dumps_json(x, name: str = "") -> str:
    return json.dumps(to_json_obj(x, name), indent=1)


def loads_json(text: str):
    try:
        return from_json_obj(json.loads(text))
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from None


# ---------------------------------------------------------------- HOA subset

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dumps_hoa(a: Automaton) -> str:
    """HOA v1 with one atomic proposition per letter and one-hot explicit labels."""
    m = len(a.alphabet)
    lines = ["HOA: v1", f"name: {_quote(a.name)}", f"States: {a.state_count}", f"Start: {a.initial}",
             f"AP: {m} " + " ".join(_quote(x) for x in a.alphabet.letters)]
    if a.acceptance == BUCHI:
        lines += ["acc-name: Buchi", "Acceptance: 1 Inf(0)"]
    else:
        lines += ["acc-name: co-Buchi", "Acceptance: 1 Fin(0)"]
    lines.append("--BODY--")
    for q in range(a.state_count):
        lines.append(f"State: {q} {_quote(a.state_names[q])}")
        for t in a.out_edges[q]:
            label = "&".join(str(i) if i == t.letter else f"!{i}" for i in range(m))
            mark = " {0}" if t.significant else ""
            lines.append(f"[{label}] {t.dst}{mark}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|\S+')


def _unquote(s: str) -> str:
    if len(s) < 2 or s[0] != '"' or s[-1] != '"':
        raise FormatError(f"expected a quoted string, got {s}")
    return re.sub(r"\\(.)", r"\1", s[1:-1])


def loads_hoa(text: str) -> Automaton:
    """Parse the subset written by dumps_hoa; anything else is rejected with a diagnostic."""
    header, sep, rest = text.partition("--BODY--")
    if not sep:
        raise FormatError("missing --BODY--")
    body, sep, _ = rest.partition("--END--")
    if not sep:
        raise FormatError("missing --END--")
    fields: dict[str, list[str]] = {}
    for raw in header.splitlines():
        line = raw.strip()
        if not line:
            continue
        key, _, value = line.partition(":")
        key = key.strip()
        if key in fields and key != "Start":
            raise FormatError(f"duplicate header {key}")
        if key == "Start" and key in fields:
            raise FormatError("multiple initial states are outside the supported subset")
        fields[key] = _TOKEN.findall(value)
    if fields.get("HOA") != ["v1"]:
        raise FormatError("only HOA v1 is supported")
    for key in fields:
        if key not in ("HOA", "name", "States", "Start", "AP", "acc-name", "Acceptance",
                       "properties", "tool"):
            raise FormatError(f"header {key!r} is outside the supported subset")
    acc = " ".join(fields.get("Acceptance", []))
    if acc == "1 Inf(0)":
        acceptance = BUCHI
    elif acc == "1 Fin(0)":
        acceptance = COBUCHI
    else:
        raise FormatError(f"acceptance {acc!r} is outside the supported subset")
    try:
        n = int(fields["States"][0])
        start = int(fields["Start"][0])
        ap = fields["AP"]
        m = int(ap[0])
        letters = [_unquote(x) for x in ap[1:]]
    except (KeyError, IndexError, ValueError):
        raise FormatError("States, Start and AP headers are required") from None
    if len(letters) != m:
        raise FormatError("AP count does not match the listed propositions")
    name = _unquote(fields["name"][0]) if "name" in fields else ""
    names = [str(q) for q in range(n)]
    trans = []
    current = None
    for raw in body.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("State:"):
            toks = _TOKEN.findall(line[len("State:"):])
            if not toks:
                raise FormatError("State: needs an index")
            if any(t.startswith("{") for t in toks[1:]):
                raise FormatError("state-based acceptance is outside the supported subset")
            current = int(toks[0])
            if not 0 <= current < n:
                raise FormatError(f"state {current} out of range")
            if len(toks) > 1:
                names[current] = _unquote(toks[1])
            continue
        if current is None:
            raise FormatError("edge before any State: line")
        mt = re.fullmatch(r"\[([^\]]*)\]\s*(\d+)\s*(\{\s*0\s*\})?", line)
        if not mt:
            raise FormatError(f"unsupported edge syntax: {line!r}")
        letter = _letter_of_label(mt.group(1), m)
        dst = int(mt.group(2))
        if not 0 <= dst < n:
            raise FormatError(f"destination {dst} out of range")
        trans.append((current, letter, dst, mt.group(3) is not None))
    if len(set(names)) != n:
        raise FormatError("state names must be distinct")
    return build(name, letters, names, names[start],
                 [(names[s], letters[a], names[d], f) for s, a, d, f in trans], acceptance, dedupe=False)


def _letter_of_label(label: str, m: int) -> int:
    """A conjunction of literals naming exactly one letter positively."""
    positive = []
    for lit in label.split("&"):
        lit = lit.strip()
        neg = lit.startswith("!")
        core = lit[1:] if neg else lit
        if not core.isdigit() or int(core) >= m:
            raise FormatError(f"unsupported label literal {lit!r}")
        if not neg:
            positive.append(int(core))
    if len(positive) != 1:
        raise FormatError(f"label {label!r} must name exactly one letter")
    return positive[0]


# ---------------------------------------------------------------- files

def load_automaton(path: str | Path):
    """Load JSON or HOA by content."""
    text = Path(path).read_text()
    return loads_hoa(text) if text.lstrip().startswith("HOA:") else loads_json(text)


def dump(x, fmt: str, name: str = "") -> str:
    if fmt == "json":
        return dumps_json(x, name)
    if fmt == "hoa":
        if not isinstance(x, Automaton):
            raise FormatError("HOA output needs an ω-automaton")
        return dumps_hoa(x)
    raise FormatError(f"unknown format {fmt!r}")
