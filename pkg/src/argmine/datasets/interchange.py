"""Line-delimited JSON interchange format for corpus splits.

The first line is a header record; each following line is one document::

    {"format": "argmine-interchange", "version": 1, "split": "test", "scheme": "aaec", "meta": {}}
    {"id": "...", "text": "...", "words": [...], "components": [{"start": 0, "end": 3, "label": "Premise"}],
     "relations": [{"source": 0, "target": 1, "label": "Support"}], "scheme": "aaec"}
"""

from __future__ import annotations

import json
from pathlib import Path

from ..io import write_text_atomic
from ..model import ArgumentGraph, Component, Document, Relation, WordSpan
from .corpora import CorpusSplit

FORMAT = "argmine-interchange"
VERSION = 1


class SchemaViolation(ValueError):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def item_record(doc: Document, graph: ArgumentGraph, scheme: str) -> dict:
    return {
        "id": doc.id,
        "text": doc.text,
        "words": list(doc.words),
        "components": [{"start": c.span.start, "end": c.span.end, "label": c.label} for c in graph.components],
        "relations": [{"source": r.source, "target": r.target, "label": r.label} for r in graph.relations],
        "scheme": scheme,
    }


def dumps_split(split: CorpusSplit) -> str:
    header = {"format": FORMAT, "version": VERSION, "split": split.name, "scheme": split.scheme, "meta": split.meta}
    lines = [_dumps(header)] + [_dumps(item_record(d, g, split.scheme)) for d, g in split.items]
    return "\n".join(lines) + "\n"


def write_interchange(split: CorpusSplit, path: str | Path) -> None:
    write_text_atomic(path, dumps_split(split))


def _require(rec: dict, key: str, kind, where: str):
    if key not in rec:
        raise SchemaViolation(f"{where}: missing required field {key!r}")
    if not isinstance(rec[key], kind) or (kind is int and isinstance(rec[key], bool)):
        raise SchemaViolation(f"{where}: field {key!r} has type {type(rec[key]).__name__}")
    return rec[key]


def parse_item(rec: dict, where: str = "record") -> tuple[Document, ArgumentGraph]:
    if not isinstance(rec, dict):
        raise SchemaViolation(f"{where}: not an object")
    doc_id = _require(rec, "id", str, where)
    text = _require(rec, "text", str, where)
    words = _require(rec, "words", list, where)
    comps = []
    for k, c in enumerate(_require(rec, "components", list, where)):
        w = f"{where} component {k}"
        if not isinstance(c, dict):
            raise SchemaViolation(f"{w}: not an object")
        comps.append(Component(WordSpan(_require(c, "start", int, w), _require(c, "end", int, w)),
                               _require(c, "label", str, w)))
    rels = []
    for k, r in enumerate(_require(rec, "relations", list, where)):
        w = f"{where} relation {k}"
        if not isinstance(r, dict):
            raise SchemaViolation(f"{w}: not an object")
        rels.append(Relation(_require(r, "source", int, w), _require(r, "target", int, w),
                             _require(r, "label", str, w)))
    _require(rec, "scheme", str, where)
    try:
        doc = Document(doc_id, text, tuple(words))
    except ValueError as exc:
        raise SchemaViolation(f"{where}: {exc}") from None
    return doc, ArgumentGraph(tuple(comps), tuple(rels))


def loads_split(text: str, where: str = "<string>") -> CorpusSplit:
    lines = text.splitlines()
    if not lines:
        raise SchemaViolation(f"{where}: empty file, header expected")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"{where}:1: {exc}") from None
    if not isinstance(header, dict) or header.get("format") != FORMAT:
        raise SchemaViolation(f"{where}:1: not an {FORMAT} header")
    if header.get("version") != VERSION:
        raise SchemaViolation(f"{where}:1: unsupported version {header.get('version')!r}")
    split = CorpusSplit(_require(header, "split", str, f"{where}:1"), _require(header, "scheme", str, f"{where}:1"),
                        meta=header.get("meta") or {})
    ids = set()
    for n, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"{where}:{n}: {exc}") from None
        doc, graph = parse_item(rec, f"{where}:{n}")
        if rec["scheme"] != split.scheme:
            raise SchemaViolation(f"{where}:{n}: scheme {rec['scheme']!r} differs from header {split.scheme!r}")
        if doc.id in ids:
            raise SchemaViolation(f"{where}:{n}: duplicate id {doc.id!r}")
        ids.add(doc.id)
        split.items.append((doc, graph))
    return split


def read_interchange(path: str | Path) -> CorpusSplit:
    path = Path(path)
    return loads_split(path.read_text(encoding="utf-8"), str(path))
