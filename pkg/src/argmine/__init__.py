"""Argument mining as text-to-text generation.

Encode argument graphs as bracket-annotated text, parse generated text back
into graphs by aligning it to the source document, and score predictions with
Component-F1 and Relation-F1.
"""

from .align import AlignmentParams, nw_align
from .codec import AugmentedText, EncodeOptions, ReservedTokenInInput, SchemeMismatch, encode, expected_token_savings
from .evaluation import EXACT, HALF_OVERLAP, EvalReport, MatchPolicy, component_f1, corpus_eval, relation_f1
from .model import (AAEC, ABSTRCT, CDCP, SCHEMES, ArgumentGraph, Component, Document, LabelScheme, Relation,
                    WordSpan, get_scheme, map_for_evaluation, validate_graph)
from .parse import ParseReport, parse_and_align, recover_spans, resolve_targets, tolerant_parse

__all__ = [
    "AAEC", "ABSTRCT", "CDCP", "EXACT", "HALF_OVERLAP", "SCHEMES",
    "AlignmentParams", "ArgumentGraph", "AugmentedText", "Component", "Document", "EncodeOptions",
    "EvalReport", "LabelScheme", "MatchPolicy", "ParseReport", "Relation", "ReservedTokenInInput",
    "SchemeMismatch", "WordSpan",
    "component_f1", "corpus_eval", "encode", "expected_token_savings", "get_scheme", "map_for_evaluation",
    "nw_align", "parse_and_align", "recover_spans", "relation_f1", "resolve_targets", "tolerant_parse",
    "validate_graph",
]
