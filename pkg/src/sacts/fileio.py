"""Text file formats for monoids and acts.

Monoid file::

    # comment lines start with '#'
    elements: 1 e f 0
    identity: 1
    table:
    1 e f 0
    e e 0 0
    f 0 f 0
    0 0 0 0

Act file, either self-contained or referring to a monoid file::

    monoid: inline            # or: monoid: path/to/file.monoid
    elements: 1 e
    identity: 1
    table:
    1 e
    e e
    carrier: p q
    action:
    1: p q
    e: q q

Action rows are keyed by element name and must appear once per element.
Both readers are strict; both writers emit the canonical layout so that
read(write(x)) == x.
"""

from __future__ import annotations

import os

from .act import Act, validate_act
from .errors import MalformedTable
from .monoid import Monoid, validate_monoid


def _logical_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _take_keyword(lines: list[str], i: int, key: str) -> tuple[str, int]:
    if i >= len(lines):
        raise MalformedTable(f"expected {key!r}, found end of file")
    line = lines[i]
    if not line.startswith(key):
        raise MalformedTable(f"expected {key!r}, found {line!r}")
    return line[len(key):].strip(), i + 1


def _parse_monoid_block(lines: list[str], i: int) -> tuple[Monoid, int]:
    names_text, i = _take_keyword(lines, i, "elements:")
    names = names_text.split()
    if not names:
        raise MalformedTable("empty element list")
    identity, i = _take_keyword(lines, i, "identity:")
    _, i = _take_keyword(lines, i, "table:")
    rows = []
    for _ in names:
        if i >= len(lines):
            raise MalformedTable("table has fewer rows than elements")
        rows.append(lines[i].split())
        i += 1
    return validate_monoid(names, identity, rows), i


def loads_monoid(text: str) -> Monoid:
    lines = _logical_lines(text)
    monoid, i = _parse_monoid_block(lines, 0)
    if i != len(lines):
        raise MalformedTable(f"trailing content: {lines[i]!r}")
    return monoid


def dumps_monoid(m: Monoid) -> str:
    out = [
        "elements: " + " ".join(m.elements),
        "identity: " + m.elements[m.identity],
        "table:",
    ]
    for row in m.table:
        out.append(" ".join(m.elements[x] for x in row))
    return "\n".join(out) + "\n"


def read_monoid(path: str) -> Monoid:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_monoid(fh.read())


def write_monoid(path: str, m: Monoid) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_monoid(m))


def loads_act(text: str, base_dir: str = ".") -> Act:
    lines = _logical_lines(text)
    source, i = _take_keyword(lines, 0, "monoid:")
    if source == "inline":
        monoid, i = _parse_monoid_block(lines, i)
    else:
        monoid = read_monoid(os.path.join(base_dir, source))
    carrier_text, i = _take_keyword(lines, i, "carrier:")
    carrier = carrier_text.split()
    _, i = _take_keyword(lines, i, "action:")
    rows_by_name: dict[str, list[str]] = {}
    for _ in monoid.elements:
        if i >= len(lines):
            raise MalformedTable("action has fewer rows than monoid elements")
        line = lines[i]
        if ":" not in line:
            raise MalformedTable(f"action row needs 'element: points', got {line!r}")
        key, _, rest = line.partition(":")
        key = key.strip()
        if key not in monoid.elements:
            raise MalformedTable(f"action row for unknown element {key!r}")
        if key in rows_by_name:
            raise MalformedTable(f"duplicate action row for {key!r}")
        rows_by_name[key] = rest.split()
        i += 1
    if i != len(lines):
        raise MalformedTable(f"trailing content: {lines[i]!r}")
    rows = [rows_by_name[name] for name in monoid.elements]
    return validate_act(monoid, carrier, rows)


def dumps_act(a: Act) -> str:
    m = a.monoid
    out = ["monoid: inline"]
    out.append(dumps_monoid(m).rstrip("\n"))
    out.append("carrier: " + " ".join(a.carrier))
    out.append("action:")
    for s, name in enumerate(m.elements):
        out.append(f"{name}: " + " ".join(a.carrier[p] for p in a.action[s]))
    return "\n".join(out) + "\n"


def read_act(path: str) -> Act:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_act(fh.read(), base_dir=os.path.dirname(path) or ".")


def write_act(path: str, a: Act) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_act(a))
