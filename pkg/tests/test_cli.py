import subprocess
import sys

import pytest

from argmine.cli import main
from argmine.codec import EncodeOptions, encode
from argmine.datasets import CorpusSplit, read_interchange, write_interchange
from argmine.io import read_jsonl, write_jsonl
from argmine.model import ABSTRCT, CDCP
from argmine.synthetic import random_corpus


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cdcp_split(tmp_path):
    path = tmp_path / "gold.jsonl"
    write_interchange(CorpusSplit("test", CDCP.name, random_corpus(5, CDCP, 30)), path)
    return path


def pipeline(capsys, tmp, gold, *encode_flags):
    assert run(capsys, "run", gold, "--out", tmp / "gen.jsonl", *encode_flags)[0] == 0
    assert run(capsys, "parse", gold, "--generations", tmp / "gen.jsonl", "--out", tmp / "pred.jsonl",
               "--report", tmp / "parse.jsonl")[0] == 0
    return run(capsys, "eval", "--pred", tmp / "pred.jsonl", "--gold", gold, "--report", tmp / "eval.jsonl")


def test_gold_echo_pipeline(capsys, tmp_path, cdcp_split):
    for flags in ((), ("--include-nonargumentative",), ("--multi-parent-repr", "repeated")):
        code, out, _ = pipeline(capsys, tmp_path, cdcp_split, *flags)
        assert code == 0
        assert "Component-F1 100.00 Relation-F1 100.00" in out
    summary = read_jsonl(tmp_path / "eval.jsonl")[-1]["summary"]
    assert summary["relation"]["f1"] == 1.0


def test_ingest_encode_parse_round_trip(capsys, tmp_path, abstrct_dir):
    out = tmp_path / "abstrct"
    code, text, _ = run(capsys, "ingest", "abstrct", abstrct_dir, "--out", out)
    assert code == 0
    assert "components" in text and "train/dev/test 3/1/2" in text
    assert run(capsys, "encode", out / "test.jsonl", "--out", tmp_path / "enc.jsonl")[0] == 0
    records = read_jsonl(tmp_path / "enc.jsonl")
    assert set(records[0]) == {"doc_id", "input_text", "target_text"}
    assert run(capsys, "parse", out / "test.jsonl", "--generations", tmp_path / "enc.jsonl",
               "--out", tmp_path / "pred.jsonl")[0] == 0
    assert read_interchange(tmp_path / "pred.jsonl").items == read_interchange(out / "test.jsonl").items


def test_ingest_aaec_paragraphs(capsys, tmp_path, aaec_dir):
    code, text, _ = run(capsys, "ingest", "aaec", aaec_dir, "--out", tmp_path / "a", "--granularity", "paragraph",
                        "--seed", 3)
    assert code == 0
    assert "20 components, 4 relations, 0 multi-parent" in text


def test_stats(capsys, tmp_path, cdcp_split):
    code, out, _ = run(capsys, "stats", cdcp_split)
    assert code == 0
    assert "nonargumentative" in out and "mean target words" in out


def test_replay_and_jobs(capsys, tmp_path, cdcp_split):
    run(capsys, "encode", cdcp_split, "--out", tmp_path / "enc.jsonl")
    write_jsonl(tmp_path / "replay.jsonl", [{"doc_id": r["doc_id"], "output": r["target_text"]}
                                            for r in read_jsonl(tmp_path / "enc.jsonl")])
    assert run(capsys, "run", cdcp_split, "--out", tmp_path / "gen.jsonl", "--backend", "replay",
               "--replay", tmp_path / "replay.jsonl")[0] == 0
    assert run(capsys, "parse", cdcp_split, "--generations", tmp_path / "gen.jsonl", "--out", tmp_path / "p.jsonl",
               "--jobs", 2)[0] == 0
    assert read_interchange(tmp_path / "p.jsonl").items == read_interchange(cdcp_split).items


def test_config_file(capsys, tmp_path, cdcp_split):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("scheme: cdcp\nencode:\n  include_nonargumentative: true\nmatch_policy: overlap:0.5\n")
    assert run(capsys, "--config", cfg, "encode", cdcp_split, "--out", tmp_path / "enc.jsonl")[0] == 0
    doc, graph = read_interchange(cdcp_split).items[0]
    expected = encode(doc, graph, CDCP, EncodeOptions(include_nonargumentative=True)).text
    assert read_jsonl(tmp_path / "enc.jsonl")[0]["target_text"] == expected
    code, out, _ = run(capsys, "--config", cfg, "eval", "--pred", cdcp_split, "--gold", cdcp_split)
    assert code == 0 and "policy: overlap:0.5" in out
    bad = tmp_path / "bad.yaml"
    bad.write_text("scheme: aaec\n")
    code, _, err = run(capsys, "--config", bad, "stats", cdcp_split)
    assert code == 1 and "scheme" in err
    bad.write_text("colour: blue\n")
    assert run(capsys, "--config", bad, "stats", cdcp_split)[0] == 1


def test_exit_codes(capsys, tmp_path, cdcp_split):
    code, _, err = run(capsys, "stats", tmp_path / "missing.jsonl")
    assert code == 2 and err.startswith("error:")
    (tmp_path / "junk.jsonl").write_text('{"format": "something-else"}\n')
    assert run(capsys, "stats", tmp_path / "junk.jsonl")[0] == 1
    other = tmp_path / "other.jsonl"
    write_interchange(CorpusSplit("test", ABSTRCT.name, random_corpus(1, ABSTRCT, 3)), other)
    assert run(capsys, "eval", "--pred", other, "--gold", cdcp_split)[0] == 1
    write_jsonl(tmp_path / "gen.jsonl", [{"doc_id": "nope", "output": ""}])
    assert run(capsys, "parse", cdcp_split, "--generations", tmp_path / "gen.jsonl",
               "--out", tmp_path / "p.jsonl")[0] == 1
    code, _, err = run(capsys, "run", cdcp_split, "--out", tmp_path / "g.jsonl", "--backend", "http",
                       "--endpoint", "http://127.0.0.1:9/none")
    assert code == 2


def test_deterministic_outputs(capsys, tmp_path, cdcp_split):
    blobs = []
    for k in range(2):
        d = tmp_path / f"r{k}"
        d.mkdir()
        pipeline(capsys, d, cdcp_split)
        blobs.append([(d / n).read_bytes() for n in ("gen.jsonl", "pred.jsonl", "parse.jsonl", "eval.jsonl")])
    assert blobs[0] == blobs[1]


def test_console_entry_point(tmp_path, cdcp_split):
    proc = subprocess.run([sys.executable, "-m", "argmine.cli", "stats", str(cdcp_split)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "nonargumentative" in proc.stdout
