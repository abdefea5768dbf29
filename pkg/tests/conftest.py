import json
import os
from pathlib import Path

import pytest

from argmine.model import AAEC, ArgumentGraph, Component, Document, Relation, WordSpan

# The worked example from the argumentatively-annotated text description.
REEF_INPUT = ("For this reason , many marine lives have been endangered , in the extremes part of the reef "
              "become uninhabitable for these marine species . Thus , it is apparent that tourism has "
              "threatened the nature environments .")
REEF_OUTPUT = ("For this reason , [ many marine lives have been endangered , in the extremes part of the reef "
               "become uninhabitable for these marine species | premise | support = tourism has threatened "
               "the nature environments ] . Thus , it is apparent that [ tourism has threatened the nature "
               "environments | claim for ] .")

ESSAY_INPUT = ("Advantages and disadvantages of the prevalent of English With the development of globalization , "
               "English became the dominated language in national trade , conference and many important events . "
               "This phenomenon has aroused a heated discussion in public . Some people claim that the prevalent "
               "of English brings a great number of benefits for people .")
ESSAY_WITH_NONARG = ("Advantages and disadvantages of the prevalent of English With the development of "
                     "globalization , English became the dominated language in national trade , conference and "
                     "many important events . This phenomenon has aroused a heated discussion in public . Some "
                     "people claim that [ the prevalent of English brings a great number of benefits for people "
                     "| claim for ] .")
ESSAY_WITHOUT_NONARG = "[ the prevalent of English brings a great number of benefits for people | claim for ]"


def span_of(doc: Document, phrase: str) -> WordSpan:
    target = phrase.split()
    for s in range(len(doc.words) - len(target) + 1):
        if list(doc.words[s:s + len(target)]) == target:
            return WordSpan(s, s + len(target))
    raise ValueError(phrase)


@pytest.fixture
def reef():
    doc = Document("reef", REEF_INPUT)
    premise = span_of(doc, "many marine lives have been endangered , in the extremes part of the reef become "
                           "uninhabitable for these marine species")
    claim = span_of(doc, "tourism has threatened the nature environments")
    graph = ArgumentGraph((Component(premise, "Premise"), Component(claim, "ClaimFor")),
                          (Relation(0, 1, "Support"),))
    return doc, graph


@pytest.fixture
def essay_opener():
    doc = Document("essay-opener", ESSAY_INPUT)
    span = span_of(doc, "the prevalent of English brings a great number of benefits for people")
    return doc, ArgumentGraph((Component(span, "ClaimFor"),))


# ------------------------------------------------------------------ corpus fixtures in published formats

def write_brat(directory: Path, name: str, text: str, entities, relations=(), attributes=()):
    """entities: (id, type, phrase) located by first occurrence at or after the previous entity."""
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"{name}.txt").write_text(text, encoding="utf-8")
    lines, cursor = [], 0
    for ent_id, etype, phrase in entities:
        start = text.index(phrase, cursor)
        cursor = start + len(phrase)
        lines.append(f"{ent_id}\t{etype} {start} {start + len(phrase)}\t{phrase}")
    for att_id, atype, target, value in attributes:
        lines.append(f"{att_id}\t{atype} {target} {value}")
    for rel_id, rtype, a1, a2 in relations:
        lines.append(f"{rel_id}\t{rtype} Arg1:{a1} Arg2:{a2}\t")
    (directory / f"{name}.ann").write_text("\n".join(lines) + "\n", encoding="utf-8")


AAEC_ESSAY = ("Should students wear uniforms?\n\n"
              "Some argue uniforms are dull. I believe school uniforms help students focus.\n"
              "First, uniforms remove daily distractions, so pupils concentrate better. "
              "Admittedly, they cost money for families.\n"
              "In conclusion, uniforms are worth it.\n")


@pytest.fixture
def aaec_dir(tmp_path):
    root = tmp_path / "ArgumentAnnotatedEssays-2.0"
    brat = root / "brat-project-final"
    for k in range(1, 5):
        write_brat(brat, f"essay{k:03d}", AAEC_ESSAY,
                   [("T1", "MajorClaim", "school uniforms help students focus"),
                    ("T2", "Claim", "uniforms remove daily distractions"),
                    ("T3", "Premise", "pupils concentrate better"),
                    ("T4", "Claim", "they cost money for families"),
                    ("T5", "MajorClaim", "uniforms are worth it")],
                   relations=[("R1", "supports", "T3", "T2")],
                   attributes=[("A1", "Stance", "T2", "For"), ("A2", "Stance", "T4", "Against")])
    (root / "train-test-split.csv").write_text(
        '"ID";"SET"\n"essay001";"TRAIN"\n"essay002";"TRAIN"\n"essay003";"TRAIN"\n"essay004";"TEST"\n',
        encoding="utf-8")
    return root


ABSTRACT = ("Background: We tested drug X in 120 patients. Results: Drug X reduced pain (p<0.01) "
            "but caused nausea in 30% of patients. Conclusion: drug X is effective and well tolerated.")


@pytest.fixture
def abstrct_dir(tmp_path):
    root = tmp_path / "AbstRCT_corpus" / "data"
    for split, names in (("train", ["101", "102", "103"]), ("dev", ["201"]), ("test", ["301", "302"])):
        for name in names:
            write_brat(root / split / f"neoplasm_{split}", name, ABSTRACT,
                       [("T1", "Premise", "Drug X reduced pain (p<0.01)"),
                        ("T2", "Premise", "caused nausea in 30% of patients"),
                        ("T3", "MajorClaim", "drug X is effective and well tolerated")],
                       relations=[("R1", "Support", "T1", "T3"), ("R2", "Partial-Attack", "T2", "T3"),
                                  ("R3", "Support", "T2", "T1")])
    # train folder also carrying a dev abstract
    write_brat(root / "train" / "neoplasm_train", "201", ABSTRACT,
               [("T1", "Claim", "drug X is effective and well tolerated")])
    return root.parent


CDCP_TEXT = ("I have had debts removed from my report. The credit reporting agencies don't automatically "
             "remove old debts. They should be required to do so. See http://example.org/a=b for details.")


@pytest.fixture
def cdcp_dir(tmp_path):
    root = tmp_path / "cdcp"
    props = ["I have had debts removed from my report.",
             "The credit reporting agencies don't automatically remove old debts.",
             "They should be required to do so.",
             "See http://example.org/a=b for details."]
    offsets, cursor = [], 0
    for p in props:
        s = CDCP_TEXT.index(p, cursor)
        offsets.append([s, s + len(p)])
        cursor = s + len(p)
    ann = {"prop_offsets": offsets, "prop_labels": ["testimony", "value", "policy", "reference"],
           "reasons": [[[0, 0], 1], [[2, 2], 1]], "evidences": [[[3, 3], 2]], "url": {}}
    for split, n in (("train", 20), ("test", 5)):
        d = root / split
        d.mkdir(parents=True)
        for k in range(n):
            name = f"{split[0]}{k:04d}"
            (d / f"{name}.txt").write_text(CDCP_TEXT, encoding="utf-8")
            (d / f"{name}.ann.json").write_text(json.dumps(ann), encoding="utf-8")
    return root


def corpus_path(env: str) -> Path | None:
    value = os.environ.get(env)
    return Path(value) if value and Path(value).exists() else None


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (k.split("-")[0], k)):
        terminalreporter.write_line(results[key])
