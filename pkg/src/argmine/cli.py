"""Command line entry point: ``argmine ingest|encode|run|parse|eval|stats``.

Every option can also be set in a YAML config file passed with ``--config``;
flags given on the command line win.  Example::

    scheme: cdcp
    encode:
      include_nonargumentative: false
      multi_parent_repr: serial
    alignment:
      match_score: 1
      mismatch_score: -1
      gap_score: -1
      min_span_identity: 0.5
    match_policy: exact
    jobs: 4
    backend:
      kind: http
      endpoint_url: http://localhost:8080/generate
      response_path: generated_text
      max_concurrent_requests: 8

Exit status is 0 on success, 1 for invalid data or configuration and 2 for
I/O or backend failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .align import AlignmentParams
from .backend import BackendConfig, BackendError, GenerationRequest, build_backend
from .codec import EncodeError, EncodeOptions, encode
from .datasets import (INGESTERS, MalformedAnnotation, SchemaViolation, compute_stats, read_interchange,
                       target_lengths, write_interchange)
from .datasets.corpora import CorpusSplit
from .evaluation import DocumentMismatch, LengthMismatch, MatchPolicy, evaluate_documents
from .io import read_jsonl, write_jsonl, write_text_atomic
from .model import get_scheme
from .parse import parse_and_align

log = logging.getLogger("argmine")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scheme: str | None = None
    encode: EncodeOptions = EncodeOptions()
    alignment: AlignmentParams = AlignmentParams()
    match_policy: MatchPolicy = MatchPolicy()
    backend: dict = field(default_factory=lambda: {"kind": "gold_echo"})
    jobs: int = 1
    max_output_words: int = 1024

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        if not path:
            return cls()
        try:
            raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        known = {"scheme", "encode", "alignment", "match_policy", "backend", "jobs", "max_output_words"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        try:
            return cls(
                scheme=raw.get("scheme"),
                encode=EncodeOptions(**(raw.get("encode") or {})),
                alignment=AlignmentParams(**(raw.get("alignment") or {})),
                match_policy=MatchPolicy.parse(str(raw.get("match_policy", "exact"))),
                backend=dict(raw.get("backend") or {"kind": "gold_echo"}),
                jobs=int(raw.get("jobs", 1)),
                max_output_words=int(raw.get("max_output_words", 1024)),
            )
        except TypeError as exc:
            raise ConfigError(f"{path}: {exc}") from None


def _load_split(path: str, cfg: RunConfig) -> CorpusSplit:
    split = read_interchange(path)
    if cfg.scheme and cfg.scheme != split.scheme:
        raise ConfigError(f"{path} uses scheme {split.scheme!r} but the config asks for {cfg.scheme!r}")
    return split


def _apply_encode_flags(cfg: RunConfig, args) -> EncodeOptions:
    opts = cfg.encode
    if getattr(args, "include_nonargumentative", None) is not None:
        opts = EncodeOptions(args.include_nonargumentative, opts.multi_parent_repr)
    if getattr(args, "multi_parent_repr", None):
        opts = EncodeOptions(opts.include_nonargumentative, args.multi_parent_repr)
    return opts


def cmd_ingest(args, cfg: RunConfig) -> int:
    kwargs: dict[str, Any] = {}
    if args.corpus == "aaec":
        kwargs["granularity"] = args.granularity
    if args.seed is not None and args.corpus in ("aaec", "cdcp"):
        kwargs["seed"] = args.seed
    corpus = INGESTERS[args.corpus](args.path, **kwargs)
    out = Path(args.out)
    for name, split in corpus.splits.items():
        write_interchange(split, out / f"{name}.jsonl")
    if corpus.diagnostics:
        write_text_atomic(out / "diagnostics.txt", "\n".join(corpus.diagnostics) + "\n")
        log.info("%d ingestion diagnostics written to %s", len(corpus.diagnostics), out / "diagnostics.txt")
    sizes = "/".join(str(len(corpus.splits[n])) for n in ("train", "dev", "test"))
    print(f"{args.corpus}: {compute_stats(corpus.items()).line()}; train/dev/test {sizes}")
    return 0


def cmd_encode(args, cfg: RunConfig) -> int:
    split = _load_split(args.input, cfg)
    scheme = get_scheme(split.scheme)
    opts = _apply_encode_flags(cfg, args)
    records = [{"doc_id": d.id, "input_text": " ".join(d.words), "target_text": encode(d, g, scheme, opts).text}
               for d, g in split.items]
    write_jsonl(args.out, records)
    print(f"encoded {len(records)} documents to {args.out}")
    return 0


def cmd_run(args, cfg: RunConfig) -> int:
    split = _load_split(args.input, cfg)
    scheme = get_scheme(split.scheme)
    backend_cfg = dict(cfg.backend)
    for key in ("kind", "endpoint_url", "replay_path"):
        if getattr(args, key, None):
            backend_cfg[key] = getattr(args, key)
    if backend_cfg.get("kind") != "http":
        backend_cfg.pop("endpoint_url", None)
    bcfg = BackendConfig.from_dict(backend_cfg)
    backend = build_backend(bcfg, gold={d.id: (d, g) for d, g in split.items}, scheme=scheme,
                            opts=_apply_encode_flags(cfg, args))
    reqs = [GenerationRequest(d.id, " ".join(d.words), cfg.max_output_words) for d, _ in split.items]
    outputs = backend.generate_many(reqs)
    write_jsonl(args.out, [{"doc_id": r.doc_id, "output": o} for r, o in zip(reqs, outputs)])
    print(f"generated {len(outputs)} outputs with the {bcfg.kind} backend to {args.out}")
    return 0


def _parse_one(job):
    text, doc, scheme_name, params = job
    return parse_and_align(text, doc, get_scheme(scheme_name), params)


def cmd_parse(args, cfg: RunConfig) -> int:
    split = _load_split(args.input, cfg)
    generations = {}
    for rec in read_jsonl(args.generations):
        text = rec.get("output", rec.get("target_text"))
        if "doc_id" not in rec or text is None:
            raise SchemaViolation(f"{args.generations}: records need 'doc_id' and 'output' (or 'target_text')")
        generations[str(rec["doc_id"])] = str(text)
    missing = [d.id for d, _ in split.items if d.id not in generations]
    if missing:
        raise LengthMismatch(f"{len(missing)} documents have no generation, e.g. {missing[0]!r}")
    jobs = [(generations[d.id], d, split.scheme, cfg.alignment) for d, _ in split.items]
    n_jobs = args.jobs or cfg.jobs
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            reports = list(pool.map(_parse_one, jobs, chunksize=16))
    else:
        reports = [_parse_one(j) for j in jobs]
    pred = CorpusSplit(split.name, split.scheme, [(d, r.graph) for (d, _), r in zip(split.items, reports)],
                       dict(split.meta, predicted=True))
    write_interchange(pred, args.out)
    totals = {"documents": len(reports), "dropped_blocks": 0, "unresolved_targets": 0, "diagnostics": {}}
    per_doc = []
    for (d, _), r in zip(split.items, reports):
        s = r.summary()
        totals["dropped_blocks"] += s["dropped_blocks"]
        totals["unresolved_targets"] += s["unresolved_targets"]
        for k, v in s["diagnostics"].items():
            totals["diagnostics"][k] = totals["diagnostics"].get(k, 0) + v
        per_doc.append({"doc_id": d.id, **s, "details": [[x.kind, x.detail] for x in r.diagnostics]})
    totals["diagnostics"] = dict(sorted(totals["diagnostics"].items()))
    if args.report:
        write_jsonl(args.report, per_doc + [{"summary": totals}])
    print(json.dumps(totals, sort_keys=True))
    return 0


def cmd_eval(args, cfg: RunConfig) -> int:
    pred = read_interchange(args.pred)
    gold = _load_split(args.gold, cfg)
    if pred.scheme != gold.scheme:
        raise ConfigError(f"prediction scheme {pred.scheme!r} differs from gold scheme {gold.scheme!r}")
    policy = MatchPolicy.parse(args.policy) if args.policy else cfg.match_policy
    by_id = {d.id: (d, g) for d, g in pred.items}
    missing = [d.id for d, _ in gold.items if d.id not in by_id]
    if missing:
        raise LengthMismatch(f"{len(missing)} gold documents have no prediction, e.g. {missing[0]!r}")
    report = evaluate_documents([by_id[d.id] for d, _ in gold.items], gold.items, get_scheme(gold.scheme), policy)
    print(report.table(per_label=args.per_label))
    if args.report:
        write_text_atomic(args.report, report.to_jsonl())
    return 0


def cmd_stats(args, cfg: RunConfig) -> int:
    for path in args.input:
        split = _load_split(path, cfg)
        scheme = get_scheme(split.scheme)
        stats = compute_stats(split.items)
        lengths = target_lengths(split.items, scheme, cfg.encode.multi_parent_repr)
        print(f"{path}: {stats.line()}")
        print(f"  mean target words: {lengths.mean_words_with_nonarg:.1f} with nonargumentative spans, "
              f"{lengths.mean_words_without_nonarg:.1f} without "
              f"({100 * lengths.ratio:.2f}% of full length, reduction {100 * (1 - lengths.ratio):.2f}%)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="argmine", description=__doc__.split("\n")[0])
    ap.add_argument("--config", help="YAML run configuration")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def encode_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--include-nonargumentative", dest="include_nonargumentative", action="store_true",
                       default=None, help="keep words outside components in the target text")
        g.add_argument("--eliminate-nonargumentative", dest="include_nonargumentative", action="store_false",
                       help="drop words outside components (default)")
        p.add_argument("--multi-parent-repr", choices=("repeated", "serial"))

    p = sub.add_parser("ingest", help="convert a corpus to interchange files and print its statistics")
    p.add_argument("corpus", choices=sorted(INGESTERS))
    p.add_argument("path")
    p.add_argument("--out", required=True, help="output directory for train/dev/test .jsonl")
    p.add_argument("--granularity", choices=("essay", "paragraph"), default="essay")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("encode", help="write {doc_id, input_text, target_text} training pairs")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    encode_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("run", help="generate annotated text for every document with a backend")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--backend", dest="kind", choices=("gold_echo", "replay", "http"))
    p.add_argument("--endpoint", dest="endpoint_url")
    p.add_argument("--replay", dest="replay_path")
    encode_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("parse", help="parse generations back into predicted graphs")
    p.add_argument("input", help="interchange file with the source documents")
    p.add_argument("--generations", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write per-document parse diagnostics here")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="Component-F1 and Relation-F1 of predictions against gold")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--policy", help="exact (default) or overlap[:threshold]")
    p.add_argument("--per-label", action="store_true")
    p.add_argument("--report")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="corpus statistics and target-length savings")
    p.add_argument("input", nargs="+")
    p.set_defaults(func=cmd_stats)
    return ap


VALIDATION_ERRORS = (ConfigError, SchemaViolation, MalformedAnnotation, EncodeError, DocumentMismatch,
                     LengthMismatch, KeyError, ValueError)
IO_ERRORS = (OSError, BackendError)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.load(args.config)
        return args.func(args, cfg)
    except IO_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VALIDATION_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
