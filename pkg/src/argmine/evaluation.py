"""Component-F1 and Relation-F1 between predicted and gold argument graphs.

Scores are micro-averaged: true/false positives and false negatives are summed
over documents before precision and recall are taken.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import ArgumentGraph, Document, LabelScheme, WordSpan, map_for_evaluation


class DocumentMismatch(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MatchPolicy:
    span_match: str = "exact"
    threshold: float = 1.0

    def __post_init__(self):
        if self.span_match not in ("exact", "overlap"):
            raise ValueError(f"span_match must be 'exact' or 'overlap', got {self.span_match!r}")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")

    @classmethod
    def parse(cls, text: str) -> "MatchPolicy":
        """``exact`` or ``overlap`` / ``overlap:0.5``."""
        kind, _, thr = text.partition(":")
        if kind == "exact":
            return cls()
        return cls("overlap", float(thr) if thr else 0.5)

    def __str__(self):
        return "exact" if self.span_match == "exact" else f"overlap:{self.threshold:g}"

    def score(self, pred: WordSpan, gold: WordSpan) -> float:
        """Match strength in (0, 1], or 0.0 when the spans do not match."""
        if self.span_match == "exact":
            return 1.0 if pred == gold else 0.0
        ratio = pred.intersection(gold) / max(len(pred), len(gold))
        return ratio if ratio >= self.threshold else 0.0


EXACT = MatchPolicy()
HALF_OVERLAP = MatchPolicy("overlap", 0.5)


@dataclass
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def as_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn,
                "precision": self.precision, "recall": self.recall, "f1": self.f1}


@dataclass
class Scores:
    total: Counts = field(default_factory=Counts)
    per_label: dict[str, Counts] = field(default_factory=dict)

    @property
    def precision(self):
        return self.total.precision

    @property
    def recall(self):
        return self.total.recall

    @property
    def f1(self):
        return self.total.f1

    def _bump(self, label: str, kind: str):
        setattr(self.total, kind, getattr(self.total, kind) + 1)
        c = self.per_label.setdefault(label, Counts())
        setattr(c, kind, getattr(c, kind) + 1)

    def merge(self, other: "Scores") -> None:
        self.total = self.total + other.total
        for k, c in other.per_label.items():
            self.per_label[k] = self.per_label.get(k, Counts()) + c


@dataclass
class RelationScores(Scores):
    per_label_pair: dict[str, Counts] = field(default_factory=dict)

    def merge(self, other: "RelationScores") -> None:
        super().merge(other)
        for k, c in other.per_label_pair.items():
            self.per_label_pair[k] = self.per_label_pair.get(k, Counts()) + c


def greedy_match(weights: dict[tuple[int, int], float]) -> list[tuple[int, int]]:
    """One-to-one matching taking the strongest remaining pair first."""
    used_p, used_g, out = set(), set(), []
    for (p, g), _ in sorted(weights.items(), key=lambda kv: (-kv[1], kv[0])):
        if p not in used_p and g not in used_g:
            used_p.add(p)
            used_g.add(g)
            out.append((p, g))
    return out


def _check_doc(graph: ArgumentGraph, doc: Document | None, which: str):
    if doc is None:
        return
    for c in graph.components:
        if c.span.end > len(doc.words) or c.span.start < 0:
            raise DocumentMismatch(f"{which} span ({c.span.start}, {c.span.end}) outside document {doc.id!r}")


def component_f1(pred: ArgumentGraph, gold: ArgumentGraph, scheme: LabelScheme,
                 policy: MatchPolicy = EXACT, doc: Document | None = None) -> Scores:
    _check_doc(pred, doc, "predicted")
    _check_doc(gold, doc, "gold")
    pred = map_for_evaluation(pred, scheme)
    gold = map_for_evaluation(gold, scheme)
    weights = {}
    for i, p in enumerate(pred.components):
        for j, g in enumerate(gold.components):
            if p.label == g.label:
                w = policy.score(p.span, g.span)
                if w > 0:
                    weights[i, j] = w
    matched = greedy_match(weights)
    hit_p = {i for i, _ in matched}
    hit_g = {j for _, j in matched}
    scores = Scores()
    for i, p in enumerate(pred.components):
        scores._bump(p.label, "tp" if i in hit_p else "fp")
    for j, g in enumerate(gold.components):
        if j not in hit_g:
            scores._bump(g.label, "fn")
    return scores


def relation_f1(pred: ArgumentGraph, gold: ArgumentGraph, scheme: LabelScheme,
                policy: MatchPolicy = EXACT, doc: Document | None = None) -> RelationScores:
    _check_doc(pred, doc, "predicted")
    _check_doc(gold, doc, "gold")
    pred = map_for_evaluation(pred, scheme)
    gold = map_for_evaluation(gold, scheme)
    pc, gc = pred.components, gold.components
    weights = {}
    for i, p in enumerate(pred.relations):
        for j, g in enumerate(gold.relations):
            if p.label != g.label:
                continue
            ws = policy.score(pc[p.source].span, gc[g.source].span)
            wt = policy.score(pc[p.target].span, gc[g.target].span)
            if ws > 0 and wt > 0:
                weights[i, j] = ws + wt
    matched = greedy_match(weights)
    hit_p = {i for i, _ in matched}
    hit_g = {j for _, j in matched}
    scores = RelationScores()

    def bump(comps, rel, kind):
        scores._bump(rel.label, kind)
        pair = f"{comps[rel.source].label}-{comps[rel.target].label}"
        c = scores.per_label_pair.setdefault(pair, Counts())
        setattr(c, kind, getattr(c, kind) + 1)

    for i, r in enumerate(pred.relations):
        bump(pc, r, "tp" if i in hit_p else "fp")
    for j, r in enumerate(gold.relations):
        if j not in hit_g:
            bump(gc, r, "fn")
    return scores


@dataclass
class EvalReport:
    policy: str
    component: Scores
    relation: RelationScores
    documents: list[dict] = field(default_factory=list)

    def summary(self) -> dict:
        def block(s: Scores, extra: dict | None = None):
            d = {"precision": s.precision, "recall": s.recall, "f1": s.f1,
                 "tp": s.total.tp, "fp": s.total.fp, "fn": s.total.fn,
                 "per_label": {k: v.as_dict() for k, v in sorted(s.per_label.items())}}
            if extra is not None:
                d["per_label_pair"] = {k: v.as_dict() for k, v in sorted(extra.items())}
            return d

        return {"policy": self.policy,
                "component": block(self.component),
                "relation": block(self.relation, self.relation.per_label_pair)}

    def headline(self) -> str:
        return f"Component-F1 {100 * self.component.f1:.2f} Relation-F1 {100 * self.relation.f1:.2f}"

    def table(self, per_label: bool = False) -> str:
        rows = [("Component", self.component.total), ("Relation", self.relation.total)]
        if per_label:
            rows += [(f"  C:{k}", v) for k, v in sorted(self.component.per_label.items())]
            rows += [(f"  R:{k}", v) for k, v in sorted(self.relation.per_label.items())]
            rows += [(f"  R:{k}", v) for k, v in sorted(self.relation.per_label_pair.items())]
        width = max(len(r[0]) for r in rows)
        lines = [f"policy: {self.policy}",
                 f"{'':{width}}  {'P':>6} {'R':>6} {'F1':>6} {'tp':>6} {'fp':>6} {'fn':>6}"]
        for name, c in rows:
            lines.append(f"{name:{width}}  {100 * c.precision:6.2f} {100 * c.recall:6.2f} {100 * c.f1:6.2f}"
                         f" {c.tp:6d} {c.fp:6d} {c.fn:6d}")
        lines.append(self.headline())
        return "\n".join(lines)

    def to_jsonl(self) -> str:
        """One record per document followed by a summary record."""
        lines = [json.dumps(d, sort_keys=True) for d in self.documents]
        lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"


def corpus_eval(pairs: Sequence[tuple[ArgumentGraph, ArgumentGraph]], scheme: LabelScheme,
                policy: MatchPolicy = EXACT, ids: Iterable[str] | None = None) -> EvalReport:
    ids = list(ids) if ids is not None else [str(i) for i in range(len(pairs))]
    if len(ids) != len(pairs):
        raise LengthMismatch(f"{len(ids)} ids for {len(pairs)} graph pairs")
    report = EvalReport(str(policy), Scores(), RelationScores())
    for doc_id, (pred, gold) in zip(ids, pairs):
        c = component_f1(pred, gold, scheme, policy)
        r = relation_f1(pred, gold, scheme, policy)
        report.component.merge(c)
        report.relation.merge(r)
        report.documents.append({
            "doc_id": doc_id,
            "component": {"tp": c.total.tp, "fp": c.total.fp, "fn": c.total.fn},
            "relation": {"tp": r.total.tp, "fp": r.total.fp, "fn": r.total.fn},
        })
    return report


def evaluate_documents(preds: Sequence[tuple[Document, ArgumentGraph]],
                       golds: Sequence[tuple[Document, ArgumentGraph]],
                       scheme: LabelScheme, policy: MatchPolicy = EXACT) -> EvalReport:
    """Evaluate two aligned document lists, checking they cover the same texts."""
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions for {len(golds)} gold documents")
    for (pd, _), (gd, _) in zip(preds, golds):
        if pd.id != gd.id or pd.words != gd.words:
            raise DocumentMismatch(f"prediction {pd.id!r} does not match gold document {gd.id!r}")
    return corpus_eval([(p, g) for (_, p), (_, g) in zip(preds, golds)], scheme, policy,
                       ids=[d.id for d, _ in golds])
