import random

from hypothesis import given, settings, strategies as st

from argmine import encode, EncodeOptions, parse_and_align, tolerant_parse
from argmine.align import AlignmentParams
from argmine.model import AAEC, ABSTRCT, CDCP, ArgumentGraph, Component, Document, Relation, WordSpan
from argmine.parse import recover_spans
from argmine.synthetic import random_pair

from conftest import ESSAY_WITHOUT_NONARG, REEF_OUTPUT, span_of
from oracles import best_window


def kinds(diags):
    return [d.kind for d in diags]


def test_reef_blocks():
    blocks, diags = tolerant_parse(REEF_OUTPUT, AAEC)
    assert diags == []
    assert [(b.label, len(b.rel_clauses)) for b in blocks] == [("Premise", 1), ("ClaimFor", 0)]
    rel, target = blocks[0].rel_clauses[0]
    assert rel == "support"
    assert " ".join(target) == "tourism has threatened the nature environments"


def test_empty_generation():
    assert tolerant_parse("", AAEC) == ([], [])
    report = parse_and_align("", Document("d", "a b c"), AAEC)
    assert report.graph == ArgumentGraph()
    assert report.diagnostics == []


def test_unknown_component_label():
    blocks, diags = tolerant_parse("[ a b | bogus label ]", AAEC)
    assert blocks == []
    assert kinds(diags) == ["UnknownComponentLabel"]


def test_malformed_brackets_do_not_raise():
    for text in ("] a [", "[ a | premise", "[ | premise ]", "[ a b ]", "[ a | premise | support ]", "| = ] ["):
        blocks, diags = tolerant_parse(text, AAEC)
        assert diags, text


def test_reef_round_trip(reef):
    doc, g = reef
    report = parse_and_align(REEF_OUTPUT, doc, AAEC)
    assert report.graph.same_as(g)
    assert report.graph.relations == (Relation(0, 1, "Support"),)
    assert report.unresolved_targets == 0


def test_essay_opener_without_nonargumentative(essay_opener):
    doc, g = essay_opener
    assert parse_and_align(ESSAY_WITHOUT_NONARG, doc, AAEC).graph == g


def test_verbatim_copy_identity_one():
    rng = random.Random(7)
    for _ in range(20):
        doc, g = random_pair(rng, ABSTRCT)
        blocks, _ = tolerant_parse(encode(doc, g, ABSTRCT, EncodeOptions(True)).text, ABSTRCT)
        cands, diags = recover_spans(blocks, doc, AlignmentParams())
        assert [c.identity for c in cands] == [1.0] * len(g.components)
        assert [c.span for c in cands] == [c.span for c in g.components]


def test_synonym_substitution():
    doc = Document("s", "we think that the old bridge must be repaired soon , says the mayor .")
    gold = span_of(doc, "the old bridge must be repaired soon")
    k = len(gold)
    text = "we think that [ the old bridge should be repaired soon | claim ] , says the mayor ."
    report = parse_and_align(text, doc, ABSTRCT)
    blocks, _ = tolerant_parse(text, ABSTRCT)
    cands, _ = recover_spans(blocks, doc, AlignmentParams())
    (window, hits), = [best_window(blocks[0].span_words, doc.words)]
    assert WordSpan(*window) == gold == cands[0].span
    assert cands[0].identity == (k - 1) / k == hits / k
    assert report.graph.components == (Component(gold, "Claim"),)


def test_hallucinated_block_dropped():
    doc = Document("h", "drugs reduce pain in most patients .")
    text = "[ drugs reduce pain | claim ] in most patients . [ zorp blick quux | evidence ]"
    report = parse_and_align(text, doc, ABSTRCT)
    _, hits = best_window(["zorp", "blick", "quux"], doc.words)
    assert hits / 3 < AlignmentParams().min_span_identity
    assert [c.label for c in report.graph.components] == ["Claim"]
    assert report.dropped_blocks == 1
    assert "UnalignedSpan" in kinds(report.diagnostics) or "LowSpanIdentity" in kinds(report.diagnostics)


def test_duplicate_text_target_picks_nearest():
    doc = Document("dup", "it is cheap . x y z . it is cheap . so buy it now .")
    first, second = WordSpan(0, 3), WordSpan(8, 11)
    src = span_of(doc, "so buy it now")
    text = "[ it is cheap | evidence ] [ it is cheap | evidence ] [ so buy it now | claim | support = it is cheap ]"
    g = parse_and_align(text, doc, ABSTRCT).graph
    assert [c.span for c in g.components] == [first, second, src]
    assert g.relations == (Relation(2, 1, "Support"),)
    assert src.distance(second) < src.distance(first)


def test_target_matching_nothing_is_unresolved():
    doc = Document("u", "pain drops . we recommend it .")
    text = "[ pain drops | evidence | support = totally unrelated words here ] [ we recommend it | claim ]"
    report = parse_and_align(text, doc, ABSTRCT)
    assert report.graph.relations == ()
    assert report.unresolved_targets == 1


def test_fuzzy_target():
    doc = Document("f", "pain drops quickly . we recommend it .")
    text = "[ pain drops quickly | evidence | support = we recommend this ] [ we recommend it | claim ]"
    report = parse_and_align(text, doc, ABSTRCT)
    assert report.graph.relations == (Relation(0, 1, "Support"),)
    assert "FuzzyTarget" in kinds(report.diagnostics)


ADS_SENTENCE = ("the advertising expenses lead to a higher product price and some of them express fake information , "
                "creating information asymmetry between consumers and companies")
ADS_DOC = Document("ads", f"Admittedly , {ADS_SENTENCE} . However , its merits still outweigh these downsides .")
ADS_XL = (f"[ {ADS_SENTENCE} | premise | support = advertisements have no downsides ] "
          f"[ its merits still outweigh these downsides | premise | attack = {ADS_SENTENCE} ]")


def test_erroneous_model_output():
    report = parse_and_align(ADS_XL, ADS_DOC, AAEC)
    g = report.graph
    assert [(c.label, " ".join(ADS_DOC.span_words(c.span))) for c in g.components] == [
        ("Premise", ADS_SENTENCE), ("Premise", "its merits still outweigh these downsides")]
    # the support target names no generated component, the attack target does
    assert g.relations == (Relation(1, 0, "Attack"),)
    assert report.unresolved_targets == 1


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "[", "]", "|", "=", "\n", "premise", "claim for", "support", "value"]),
                max_size=40).map(" ".join), st.sampled_from([AAEC, ABSTRCT, CDCP]))
def test_total_on_arbitrary_text(text, scheme):
    doc = Document("t", "a b a b premise claim a")
    report = parse_and_align(text, doc, scheme)
    spans = [c.span for c in report.graph.components]
    assert all(0 <= s.start < s.end <= len(doc.words) for s in spans)
    assert all(not a.overlaps(b) for a, b in zip(spans, spans[1:]))
    assert spans == sorted(spans)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200), st.sampled_from([AAEC, ABSTRCT, CDCP]))
def test_total_on_unicode(text, scheme):
    parse_and_align(text, Document("t", "x y z"), scheme)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_identity_monotone_under_substitution(seed):
    rng = random.Random(seed)
    doc, g = random_pair(rng, CDCP, max_components=3)
    if not g.components:
        return
    comp = rng.choice(g.components)
    span_words = list(doc.span_words(comp.span))
    order = list(range(len(span_words)))
    rng.shuffle(order)
    previous = 1.0
    for k in range(len(order) + 1):
        words = [f"zz{i}" if i in order[:k] else w for i, w in enumerate(span_words)]
        text = " ".join(doc.words[:comp.span.start] + ("[",) + tuple(words) + ("|", "fact", "]")
                        + doc.words[comp.span.end:])
        blocks, _ = tolerant_parse(text, CDCP)
        trailing = doc.words[comp.span.end:]
        cands, _ = recover_spans(blocks, doc, AlignmentParams(min_span_identity=0.0), trailing)
        identity = cands[0].identity if cands else 0.0
        assert identity <= previous + 1e-12
        previous = identity


def test_cycle_kept_and_reported():
    doc = Document("c", "a b c d e f")
    report = parse_and_align("[ a b | value | reasons = d e ] c [ d e | fact | reasons = a b ]", doc, CDCP)
    assert len(report.graph.relations) == 2
    assert [d.detail.split(":")[0] for d in report.diagnostics] == ["cycle detected"]


def test_extra_parent_under_single_parent_scheme_reported():
    doc = Document("m", "x y . z w . q r")
    text = "[ x y | premise | support = z w | support = q r ] [ z w | claim for ] [ q r | claim for ]"
    report = parse_and_align(text, doc, AAEC)
    assert len(report.graph.relations) == 2
    assert "StructureViolation" in kinds(report.diagnostics)
