"""Versioned JSON documents for chain data and reports.

Integers are written as decimal strings so that arbitrarily large values
survive any JSON reader.  ``dumps_input`` produces a canonical layout (one
generator or edge per line), and ``loads_input(dumps_input(doc))`` gives the
same document back, so canonical files round-trip bit-identically.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import InvalidData
from .hf import HFData

INPUT_FORMAT = "echlab-hf/1"
REPORT_FORMAT = "echlab-report/1"


class ParseError(InvalidData):
    """Input document error with a 1-based line/column position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__([where + message])


@dataclass
class InputDocument:
    p: int
    generators: list  # [(name, grading lift)]
    differential: list  # [(from, to, t_power, coefficient)]
    h1_actions: list = field(default_factory=list)  # [[edge, ...], ...]
    metadata: dict = field(default_factory=dict)
    version: str = INPUT_FORMAT

    def to_hfdata(self) -> HFData:
        names = [n for n, _ in self.generators]
        return HFData.from_edges(names, self.p, dict(self.generators), self.differential, self.h1_actions, self.metadata)

    @classmethod
    def from_hfdata(cls, hf: HFData) -> "InputDocument":
        return cls(
            hf.p,
            [(n, hf.grading[n]) for n in hf.names],
            hf.edges(),
            [hf.edges(a) for a in hf.h1_actions],
            dict(hf.metadata),
        )


# ---------------------------------------------------------------------------
# writing
# ---------------------------------------------------------------------------

def _s(x) -> str:
    return json.dumps(x, ensure_ascii=False)


def _edge(e) -> str:
    f, t, k, c = e
    return "{" + f'"from": {_s(f)}, "to": {_s(t)}, "t_power": {_s(str(k))}, "coefficient": {_s(str(c))}' + "}"


def _block(items: list[str], indent: str) -> str:
    if not items:
        return "[]"
    inner = (",\n").join(indent + "  " + it for it in items)
    return "[\n" + inner + "\n" + indent + "]"


def dumps_input(doc: InputDocument) -> str:
    gens = ["{" + f'"name": {_s(n)}, "grading": {_s(str(g))}' + "}" for n, g in doc.generators]
    lines = [
        "{",
        f'  "format": {_s(doc.version)},',
        f'  "p": {_s(str(doc.p))},',
        f'  "generators": {_block(gens, "  ")},',
        f'  "differential": {_block([_edge(e) for e in doc.differential], "  ")},',
    ]
    acts = [_block([_edge(e) for e in a], "    ") for a in doc.h1_actions]
    lines.append(f'  "h1_actions": {_block(acts, "  ")},')
    lines.append(f'  "metadata": {json.dumps(doc.metadata, ensure_ascii=False, sort_keys=True)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# reading
# ---------------------------------------------------------------------------

def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i] in " \t\r\n":
        i += 1
    return i


def _locate(text: str, path: tuple) -> int:
    """Character offset of the value at ``path`` (keys and list indices)."""
    dec = json.JSONDecoder()
    i = _skip_ws(text, 0)
    for step in path:
        if isinstance(step, int):
            if text[i] != "[":
                return i
            i = _skip_ws(text, i + 1)
            for _ in range(step):
                _, i = dec.raw_decode(text, i)
                i = _skip_ws(text, i)
                i = _skip_ws(text, i + 1)  # comma
        else:
            if text[i] != "{":
                return i
            i = _skip_ws(text, i + 1)
            while text[i] != "}":
                key, i = dec.raw_decode(text, i)
                i = _skip_ws(text, i)
                i = _skip_ws(text, i + 1)  # colon
                if key == step:
                    break
                _, i = dec.raw_decode(text, i)
                i = _skip_ws(text, i)
                if text[i] == ",":
                    i = _skip_ws(text, i + 1)
            else:
                return i
    return i


def _int(value, text, path, what) -> int:
    if isinstance(value, bool):
        value = None
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        s = value.strip()
        body = s[1:] if s[:1] in "+-" else s
        if body.isdigit() and body.isascii():
            return int(s)
    raise ParseError(f"{what} must be an integer (decimal string), got {value!r}", *_position(text, _locate(text, path)))


def loads_input(text: str) -> InputDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None

    def err(msg, path):
        return ParseError(msg, *_position(text, _locate(text, path)))

    if not isinstance(raw, dict):
        raise err("document must be a JSON object", ())
    fmt = raw.get("format")
    if fmt != INPUT_FORMAT:
        raise err(f"unsupported format {fmt!r} (expected {INPUT_FORMAT!r})", ("format",))
    for key in ("p", "generators", "differential"):
        if key not in raw:
            raise err(f"missing field {key!r}", ())
    p = _int(raw["p"], text, ("p",), "p")
    gens = []
    seen = set()
    if not isinstance(raw["generators"], list):
        raise err("generators must be a list", ("generators",))
    for j, g in enumerate(raw["generators"]):
        path = ("generators", j)
        if not isinstance(g, dict) or "name" not in g or "grading" not in g:
            raise err("generator entries need 'name' and 'grading'", path)
        name = g["name"]
        if not isinstance(name, str) or not name:
            raise err("generator name must be a nonempty string", path + ("name",))
        if name in seen:
            raise err(f"duplicate generator name {name!r}", path + ("name",))
        seen.add(name)
        gens.append((name, _int(g["grading"], text, path + ("grading",), "grading")))

    def edges(lst, path0):
        if not isinstance(lst, list):
            raise err("edge list must be a list", path0)
        out = []
        for j, e in enumerate(lst):
            path = path0 + (j,)
            if not isinstance(e, dict) or not {"from", "to", "t_power", "coefficient"} <= set(e):
                raise err("edge entries need 'from', 'to', 't_power' and 'coefficient'", path)
            for end in ("from", "to"):
                if e[end] not in seen:
                    raise err(f"edge references unknown generator {e[end]!r}", path + (end,))
            k = _int(e["t_power"], text, path + ("t_power",), "t_power")
            if k < 0:
                raise err(f"edge {e['from']!r} -> {e['to']!r} has negative t_power {k}", path + ("t_power",))
            c = _int(e["coefficient"], text, path + ("coefficient",), "coefficient")
            out.append((e["from"], e["to"], k, c))
        return out

    diff = edges(raw["differential"], ("differential",))
    acts_raw = raw.get("h1_actions", [])
    if not isinstance(acts_raw, list):
        raise err("h1_actions must be a list", ("h1_actions",))
    acts = [edges(a, ("h1_actions", j)) for j, a in enumerate(acts_raw)]
    meta = raw.get("metadata", {})
    if not isinstance(meta, dict):
        raise err("metadata must be an object", ("metadata",))
    return InputDocument(p, gens, diff, acts, meta, fmt)


def read_input(path) -> InputDocument:
    with open(path, encoding="utf-8") as fh:
        return loads_input(fh.read())


def write_input(path, doc: InputDocument) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_input(doc))


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def group_json(G) -> dict:
    """Group table entry; integers as decimal strings."""
    if isinstance(G, int):
        return {"rank": str(G)}
    return {"rank": str(G.free_rank), "torsion": [str(t) for t in G.torsion]}


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
