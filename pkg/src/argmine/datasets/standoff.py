"""Shared helpers for corpora annotated with character offsets."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ..model import RESERVED_TOKENS


class MalformedAnnotation(ValueError):
    pass


class MissingStance(MalformedAnnotation):
    pass


# stand-ins for raw tokens that would collide with the annotation markup
RESERVED_SUBSTITUTES = {"[": "(", "]": ")", "|": "/", "=": "=="}

_LEAD = set("\"'“‘«(<{")
_TRAIL = set("\"'”’».,;:!?)>}")
_CLITIC = re.compile(r"(?i)(n['’]t|['’](?:s|re|ve|ll|d|m))$")
_HYPHEN = re.compile(r"(?<=[^\W\d_])-(?=[^\W\d_])")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


def _peel(text: str, start: int) -> list[Token]:
    head, tail = [], []
    i, j = 0, len(text)
    while i < j and text[i] in _LEAD:
        head.append(Token(text[i], start + i, start + i + 1))
        i += 1
    while j > i and text[j - 1] in _TRAIL:
        tail.append(Token(text[j - 1], start + j - 1, start + j))
        j -= 1
    core: list[Token] = []
    if i < j:
        word = text[i:j]
        m = _CLITIC.search(word)
        if m and m.start() > 0:
            core.append(Token(word[:m.start()], start + i, start + i + m.start()))
            core.append(Token(m.group(0), start + i + m.start(), start + j))
        else:
            pos = i
            for hm in _HYPHEN.finditer(word):
                cut = i + hm.start()
                core.append(Token(text[pos:cut], start + pos, start + cut))
                core.append(Token("-", start + cut, start + cut + 1))
                pos = cut + 1
            core.append(Token(text[pos:j], start + pos, start + j))
    return head + core + tail[::-1]


def pretokenize(text: str, boundaries: set[int] = frozenset()) -> list[Token]:
    """Split raw corpus text into words with spaced-out punctuation.

    Every offset in ``boundaries`` becomes a token boundary, so annotation
    offsets never fall inside a word.
    """
    tokens = []
    for m in re.finditer(r"\S+", text):
        cuts = [m.start()] + sorted(b for b in boundaries if m.start() < b < m.end()) + [m.end()]
        for a, b in zip(cuts, cuts[1:]):
            tokens.extend(_peel(text[a:b], a))
    return tokens


@dataclass
class TokenizedText:
    tokens: list[Token]
    diagnostics: list[str] = field(default_factory=list)

    @property
    def words(self) -> list[str]:
        out = []
        for t in self.tokens:
            out.append(RESERVED_SUBSTITUTES.get(t.text, t.text) if t.text in RESERVED_TOKENS else t.text)
        return out

    def word_span(self, char_start: int, char_end: int, lo: int = 0, hi: int | None = None) -> tuple[int, int]:
        """Word interval for a character range, snapping outward to token boundaries."""
        hi = len(self.tokens) if hi is None else hi
        inside, partial = [], []
        for k in range(lo, hi):
            t = self.tokens[k]
            if t.start >= char_start and t.end <= char_end:
                inside.append(k)
            elif t.start < char_end and char_start < t.end:
                partial.append(k)
        if len(partial) > 1:
            raise MalformedAnnotation(f"offsets {char_start}-{char_end} cut {len(partial)} words")
        if partial:
            self.diagnostics.append(f"snapped offsets {char_start}-{char_end} to word {partial[0]}")
        idx = inside + partial
        if not idx:
            raise MalformedAnnotation(f"offsets {char_start}-{char_end} cover no word")
        return min(idx), max(idx) + 1


def tokenize_with_boundaries(text: str, boundaries: set[int]) -> TokenizedText:
    tt = TokenizedText(pretokenize(text, boundaries))
    for k, t in enumerate(tt.tokens):
        if t.text in RESERVED_TOKENS:
            tt.diagnostics.append(f"word {k}: reserved token {t.text!r} replaced by {RESERVED_SUBSTITUTES[t.text]!r}")
    return tt


@dataclass
class BratEntity:
    id: str
    type: str
    start: int
    end: int
    text: str


@dataclass
class BratRelation:
    id: str
    type: str
    arg1: str
    arg2: str


@dataclass
class BratAttribute:
    id: str
    type: str
    target: str
    value: str | None


@dataclass
class BratDocument:
    name: str
    text: str
    entities: dict[str, BratEntity]
    relations: list[BratRelation]
    attributes: list[BratAttribute]


_ENT = re.compile(r"^(T\d+)\t(\S+) (\d+(?: \d+)*(?:;\d+ \d+)*)\t?(.*)$")
_REL = re.compile(r"^(R\d+)\t(\S+) Arg1:(\S+) Arg2:(\S+)\s*$")
_ATT = re.compile(r"^([AM]\d+)\t(\S+) (\S+)(?: (\S+))?\s*$")


def read_brat(txt_path: Path) -> BratDocument:
    ann_path = txt_path.with_suffix(".ann")
    text = txt_path.read_text(encoding="utf-8")
    entities, relations, attributes = {}, [], []
    for n, line in enumerate(ann_path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        if m := _ENT.match(line):
            offsets = [int(x) for x in re.split(r"[ ;]", m.group(3))]
            entities[m.group(1)] = BratEntity(m.group(1), m.group(2), min(offsets), max(offsets), m.group(4))
        elif m := _REL.match(line):
            relations.append(BratRelation(*m.groups()))
        elif m := _ATT.match(line):
            attributes.append(BratAttribute(*m.groups()))
        else:
            raise MalformedAnnotation(f"{ann_path}:{n}: cannot parse {line!r}")
    return BratDocument(txt_path.stem, text, entities, relations, attributes)
