"""End-to-end tests for the command-line interface."""

from __future__ import annotations

import json

import pytest

from spellvar.cli import main
from spellvar.corpus import read_pairs_tsv
from spellvar.crf import load_model


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_corpus(tmp_path, records, name="corpus.jsonl"):
    return write_lines(tmp_path / name, [json.dumps(r) for r in records])


def read_truth(path):
    return {
        tuple(line.split("\t"))
        for line in path.read_text(encoding="utf-8").splitlines()
        if line
    }


@pytest.fixture()
def baseline_corpus(tmp_path):
    return write_corpus(tmp_path, [
        {"word": "aye", "definition": 'scottish way of saying "yes"'},
        {"word": "inet", "definition": "short for 'internet'"},
        {"word": "plain", "definition": "nothing to extract here"},
    ])


class TestExtractBaseline:
    def test_writes_pairs_trace_and_manifest(self, tmp_path, baseline_corpus, capsys):
        out = tmp_path / "out"
        code = main(["extract", "--method", "baseline",
                     "--corpus", str(baseline_corpus), "--out", str(out)])
        assert code == 0
        pairs = read_pairs_tsv(out / "pairs.tsv")
        assert {(p.informal, p.formal) for p in pairs} == {("aye", "yes"), ("inet", "internet")}
        trace = [json.loads(line) for line in (out / "trace.jsonl").open(encoding="utf-8")]
        assert len(trace) == 10
        assert sum(r["matches"] for r in trace) == 2
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "extract"
        assert manifest["outputs"] == ["pairs.tsv", "trace.jsonl"]
        assert "wrote 2 pairs" in capsys.readouterr().out

    def test_missing_method(self, tmp_path, baseline_corpus):
        code = main(["extract", "--corpus", str(baseline_corpus),
                     "--out", str(tmp_path / "out")])
        assert code == 1

    def test_malformed_corpus_is_a_data_error(self, tmp_path, capsys):
        bad = write_lines(tmp_path / "bad.jsonl", ["{not json"])
        code = main(["extract", "--method", "baseline",
                     "--corpus", str(bad), "--out", str(tmp_path / "out")])
        assert code == 2
        assert "line 1" in capsys.readouterr().err

    def test_unknown_flag(self, tmp_path, baseline_corpus):
        code = main(["extract", "--method", "baseline", "--corpus", str(baseline_corpus),
                     "--out", str(tmp_path / "out"), "--bogus"])
        assert code == 1


@pytest.fixture(scope="module")
def planted(tmp_path_factory):
    out = tmp_path_factory.mktemp("planted")
    code = main(["gen-synthetic", "--kind", "bootstrap", "--out", str(out),
                 "--entries", "80", "--n-pairs", "12", "--n-seeds", "3",
                 "--n-traps", "2", "--seed", "0"])
    assert code == 0
    return out


class TestExtractBootstrap:
    def test_recovers_planted_pairs(self, tmp_path, planted):
        out = tmp_path / "out"
        code = main(["extract", "--method", "bootstrap",
                     "--corpus", str(planted / "corpus.jsonl"),
                     "--seeds", str(planted / "seeds.tsv"), "--out", str(out)])
        assert code == 0
        truth = read_truth(planted / "truth.tsv")
        extracted = {(p.informal, p.formal) for p in read_pairs_tsv(out / "pairs.tsv")}
        assert extracted
        assert extracted <= truth

    def test_reruns_are_byte_identical(self, tmp_path, planted):
        outputs = []
        for name in ("first", "second"):
            out = tmp_path / name
            code = main(["extract", "--method", "bootstrap",
                         "--corpus", str(planted / "corpus.jsonl"),
                         "--seeds", str(planted / "seeds.tsv"), "--out", str(out)])
            assert code == 0
            outputs.append(out)
        for name in ("pairs.tsv", "trace.jsonl"):
            first = (outputs[0] / name).read_bytes()
            second = (outputs[1] / name).read_bytes()
            assert first == second

    def test_zero_iterations_yields_no_pairs(self, tmp_path, planted):
        out = tmp_path / "out"
        code = main(["extract", "--method", "bootstrap", "--iterations", "0",
                     "--corpus", str(planted / "corpus.jsonl"),
                     "--seeds", str(planted / "seeds.tsv"), "--out", str(out)])
        assert code == 0
        assert read_pairs_tsv(out / "pairs.tsv") == []

    def test_missing_seeds_file_names_path(self, tmp_path, planted, capsys):
        ghost = tmp_path / "no-such-seeds.tsv"
        code = main(["extract", "--method", "bootstrap",
                     "--corpus", str(planted / "corpus.jsonl"),
                     "--seeds", str(ghost), "--out", str(tmp_path / "out")])
        assert code == 1
        assert str(ghost) in capsys.readouterr().err

    def test_out_of_range_alpha(self, tmp_path, planted, capsys):
        code = main(["extract", "--method", "bootstrap", "--alpha", "0.2",
                     "--corpus", str(planted / "corpus.jsonl"),
                     "--seeds", str(planted / "seeds.tsv"),
                     "--out", str(tmp_path / "out")])
        assert code == 1
        assert "0.7" in capsys.readouterr().err


@pytest.fixture(scope="module")
def staged(tmp_path_factory):
    out = tmp_path_factory.mktemp("staged")
    code = main(["gen-synthetic", "--kind", "selftrain", "--out", str(out), "--seed", "0"])
    assert code == 0
    return out


class TestExtractSelftrain:
    def test_end_to_end(self, tmp_path, staged):
        out = tmp_path / "out"
        code = main(["extract", "--method", "selftrain",
                     "--corpus", str(staged / "unlabeled.jsonl"),
                     "--gold-corpus", str(staged / "gold.jsonl"),
                     "--gold-tags", str(staged / "gold.tags"),
                     "--l1", "0.02", "--l2", "0.03", "--out", str(out)])
        assert code == 0
        truth = read_truth(staged / "truth.tsv")
        pairs = read_pairs_tsv(out / "pairs.tsv")
        assert pairs
        assert {(p.informal, p.formal) for p in pairs} <= truth
        for pair in pairs:
            assert pair.method == "crf"
            assert pair.score > 0.9
        model = load_model(out / "model.json")
        assert model.window == 3

    def test_gold_tag_mismatch_is_a_data_error(self, tmp_path, staged, capsys):
        truncated = tmp_path / "gold.tags"
        blocks = (staged / "gold.tags").read_text(encoding="utf-8").split("\n\n")
        truncated.write_text("\n\n".join(blocks[:3]), encoding="utf-8")
        code = main(["extract", "--method", "selftrain",
                     "--corpus", str(staged / "unlabeled.jsonl"),
                     "--gold-corpus", str(staged / "gold.jsonl"),
                     "--gold-tags", str(truncated), "--out", str(tmp_path / "out")])
        assert code == 2
        assert "tag blocks" in capsys.readouterr().err


@pytest.fixture()
def eval_inputs(tmp_path):
    pairs = write_lines(tmp_path / "pairs.tsv", [
        "informal\tformal\tscore\tmethod\torigin\tentry_id",
        "inf0\tfrm0\t1.0\tbaseline\tr\te1",
        "inf1\tfrm1\t1.0\tbaseline\tr\te2",
    ])
    embeddings = write_lines(tmp_path / "vectors.txt", [
        "inf0 1 0 0",
        "frm0 1 0 0",
        "inf1 0 1 0",
        "frm1 0 1 0",
        "bg0 0 0 1",
        "bg1 0.5 0.5 0",
    ])
    vocab = write_lines(tmp_path / "vocab.txt", ["frm0", "frm1"])
    return pairs, embeddings, vocab


class TestEval:
    def test_identical_vectors_rank_first(self, tmp_path, eval_inputs, capsys):
        pairs, embeddings, vocab = eval_inputs
        out = tmp_path / "out"
        code = main(["eval", "--pairs", str(pairs), "--embeddings", str(embeddings),
                     "--formal-vocab", str(vocab), "--ks", "1,3", "--out", str(out)])
        assert code == 0
        summary = json.loads((out / "00_vectors.summary.json").read_text(encoding="utf-8"))
        assert summary["matched_pairs"] == 2
        assert summary["accuracy"]["1"] == 1.0
        report_lines = (out / "00_vectors.report.tsv").read_text(encoding="utf-8").splitlines()
        assert report_lines[0] == "informal\tformal\trank\tnote"
        assert report_lines[1].split("\t")[2] == "1"
        assert "accuracy@1=1.0000" in capsys.readouterr().out

    def test_two_embedding_files_two_reports(self, tmp_path, eval_inputs):
        pairs, embeddings, vocab = eval_inputs
        second = tmp_path / "other.txt"
        second.write_text(embeddings.read_text(encoding="utf-8"), encoding="utf-8")
        out = tmp_path / "out"
        code = main(["eval", "--pairs", str(pairs),
                     "--embeddings", str(embeddings), str(second),
                     "--formal-vocab", str(vocab), "--out", str(out)])
        assert code == 0
        assert (out / "00_vectors.summary.json").is_file()
        assert (out / "01_other.summary.json").is_file()
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["outputs"]) == 4

    def test_bad_embedding_line_is_a_data_error(self, tmp_path, eval_inputs, capsys):
        pairs, _, vocab = eval_inputs
        broken = write_lines(tmp_path / "broken.txt", ["a 1 0", "b 1 oops"])
        code = main(["eval", "--pairs", str(pairs), "--embeddings", str(broken),
                     "--formal-vocab", str(vocab), "--out", str(tmp_path / "out")])
        assert code == 2
        assert "line 2" in capsys.readouterr().err

    def test_unmatched_vocab_is_a_data_error(self, tmp_path, eval_inputs, capsys):
        pairs, embeddings, _ = eval_inputs
        empty_vocab = write_lines(tmp_path / "empty.txt", ["unrelated"])
        code = main(["eval", "--pairs", str(pairs), "--embeddings", str(embeddings),
                     "--formal-vocab", str(empty_vocab), "--out", str(tmp_path / "out")])
        assert code == 2
        assert "no evaluable pairs" in capsys.readouterr().err

    def test_missing_pairs_option(self, tmp_path, eval_inputs):
        _, embeddings, vocab = eval_inputs
        code = main(["eval", "--embeddings", str(embeddings),
                     "--formal-vocab", str(vocab), "--out", str(tmp_path / "out")])
        assert code == 1

    def test_unparseable_ks(self, tmp_path, eval_inputs, capsys):
        pairs, embeddings, vocab = eval_inputs
        code = main(["eval", "--pairs", str(pairs), "--embeddings", str(embeddings),
                     "--formal-vocab", str(vocab), "--ks", "1,two",
                     "--out", str(tmp_path / "out")])
        assert code == 1
        assert "--ks" in capsys.readouterr().err


@pytest.fixture()
def correlate_inputs(tmp_path):
    intrinsic = write_lines(tmp_path / "intrinsic.tsv", [
        "name\ttop1\ttop20",
        "a\t0.1\t0.5",
        "b\t0.2\t0.6",
        "c\t0.4\t0.9",
    ])
    extrinsic = write_lines(tmp_path / "extrinsic.tsv", [
        "name\tval_acc",
        "a\t0.1",
        "b\t0.2",
        "c\t0.4",
    ])
    return intrinsic, extrinsic


class TestCorrelate:
    def test_identical_column_correlates_perfectly(self, tmp_path, correlate_inputs, capsys):
        intrinsic, extrinsic = correlate_inputs
        out = tmp_path / "out"
        code = main(["correlate", "--intrinsic", str(intrinsic),
                     "--extrinsic", str(extrinsic), "--keys", "name",
                     "--out", str(out)])
        assert code == 0
        output = capsys.readouterr().out
        assert "top1 x val_acc: r=+1.0000" in output
        grid = (out / "correlations.tsv").read_text(encoding="utf-8").splitlines()
        assert grid[0] == "intrinsic\textrinsic\tpearson_r"
        values = {tuple(line.split("\t")[:2]): float(line.split("\t")[2]) for line in grid[1:]}
        assert values[("top1", "val_acc")] == pytest.approx(1.0)

    def test_disjoint_keys_is_a_data_error(self, tmp_path, correlate_inputs, capsys):
        intrinsic, _ = correlate_inputs
        other = write_lines(tmp_path / "other.tsv", [
            "name\tval_acc", "x\t0.1", "y\t0.2",
        ])
        code = main(["correlate", "--intrinsic", str(intrinsic),
                     "--extrinsic", str(other), "--keys", "name",
                     "--out", str(tmp_path / "out")])
        assert code == 2
        assert "join" in capsys.readouterr().err

    def test_unknown_key_column(self, tmp_path, correlate_inputs, capsys):
        intrinsic, extrinsic = correlate_inputs
        code = main(["correlate", "--intrinsic", str(intrinsic),
                     "--extrinsic", str(extrinsic), "--keys", "ghost",
                     "--out", str(tmp_path / "out")])
        assert code == 1
        assert "ghost" in capsys.readouterr().err


class TestAnnotate:
    def test_writes_conllu(self, tmp_path, baseline_corpus):
        out = tmp_path / "out"
        code = main(["annotate", "--corpus", str(baseline_corpus), "--out", str(out)])
        assert code == 0
        blocks = (out / "annotated.conllu").read_text(encoding="utf-8").strip().split("\n\n")
        assert len(blocks) == 3
        first_row = blocks[0].splitlines()[0].split("\t")
        assert len(first_row) == 10
        assert first_row[1] == "scottish"


class TestConfigFile:
    def test_config_supplies_options(self, tmp_path, baseline_corpus):
        out = tmp_path / "out"
        config = write_lines(tmp_path / "run.ini", [
            "[extract]",
            "method = baseline",
            f"corpus = {baseline_corpus}",
            f"out = {out}",
        ])
        assert main(["extract", "--config", str(config)]) == 0
        assert (out / "pairs.tsv").is_file()

    def test_flags_override_config(self, tmp_path, planted):
        out = tmp_path / "out"
        config = write_lines(tmp_path / "run.ini", [
            "[extract]",
            "method = bootstrap",
            f"corpus = {planted / 'corpus.jsonl'}",
            f"seeds = {planted / 'seeds.tsv'}",
            f"out = {out}",
            "iterations = 8",
        ])
        assert main(["extract", "--config", str(config), "--iterations", "0"]) == 0
        assert read_pairs_tsv(out / "pairs.tsv") == []

    def test_unknown_config_key(self, tmp_path, baseline_corpus, capsys):
        config = write_lines(tmp_path / "run.ini", [
            "[extract]",
            "method = baseline",
            f"corpus = {baseline_corpus}",
            f"out = {tmp_path / 'out'}",
            "shenanigans = yes",
        ])
        assert main(["extract", "--config", str(config)]) == 1
        assert "shenanigans" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        code = main(["extract", "--config", str(tmp_path / "ghost.ini")])
        assert code == 1


class TestTopLevel:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0
        assert "spellvar" in capsys.readouterr().out

    def test_no_subcommand_is_a_usage_error(self):
        assert main([]) == 1

    def test_gen_synthetic_needs_valid_kind(self, tmp_path):
        code = main(["gen-synthetic", "--kind", "nonsense", "--out", str(tmp_path)])
        assert code == 1
