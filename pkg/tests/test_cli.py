"""CLI contract: subcommand behavior, exit codes, config merging, composition."""

import json

import pytest

from airwrite.classifier import load_templates
from airwrite.cli import main
from airwrite.trace_io import read_trace


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def synth_file(tmp_path, name, *argv):
    path = str(tmp_path / name)
    assert main(["synth", "--out", path, *argv]) == 0
    return path


class TestSynth:
    def test_letter_trace_parses_and_segments(self, tmp_path, capsys):
        path = synth_file(tmp_path, "a.jsonl", "--letter", "a")
        trace = read_trace(path)
        assert len(trace) > 200
        assert trace[0].t_us == 0

    def test_seeded_noise_is_reproducible(self, tmp_path):
        first = synth_file(tmp_path, "n1.jsonl", "--letter", "b", "--noise", "0.3", "--seed", "9")
        second = synth_file(tmp_path, "n2.jsonl", "--letter", "b", "--noise", "0.3", "--seed", "9")
        assert open(first, "rb").read() == open(second, "rb").read()

    def test_word_flag(self, tmp_path, capsys):
        code, out, _ = run(capsys, "synth", "--word", "hi", "--gap-ms", "800")
        assert code == 0
        assert len(out.splitlines()) > 400

    def test_letter_and_word_are_mutually_exclusive(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["synth", "--letter", "a", "--word", "hi"])
        assert exc.value.code == 2

    def test_one_of_letter_or_word_is_required(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["synth"])
        assert exc.value.code == 2

    def test_unknown_letter_is_a_usage_error(self, capsys):
        code, _, err = run(capsys, "synth", "--letter", "@")
        assert code == 2
        assert "no stroke path" in err


class TestPipeline:
    def test_classifies_each_session(self, tmp_path, capsys, alphabet_template_file):
        path = synth_file(tmp_path, "q.jsonl", "--letter", "q")
        code, out, _ = run(
            capsys, "pipeline", "--trace", path, "--templates", alphabet_template_file
        )
        assert code == 0
        records = [json.loads(line) for line in out.splitlines()]
        assert len(records) == 1
        assert records[0]["kind"] == "session"
        assert records[0]["v"] == 1
        assert records[0]["prediction"]["letter"] == "q"
        assert len(records[0]["trace"]["x"]) == records[0]["samples"]

    def test_no_trace_flag_drops_the_arrays(self, tmp_path, capsys):
        path = synth_file(tmp_path, "c.jsonl", "--letter", "c")
        code, out, _ = run(capsys, "pipeline", "--trace", path, "--no-trace")
        record = json.loads(out.splitlines()[0])
        assert code == 0
        assert "trace" not in record
        assert "prediction" not in record  # no templates given

    def test_report_savings_appends_a_ledger_record(self, tmp_path, capsys):
        path = synth_file(tmp_path, "word.jsonl", "--word", "cake")
        code, out, _ = run(capsys, "pipeline", "--trace", path, "--report-savings", "--no-trace")
        assert code == 0
        records = [json.loads(line) for line in out.splitlines()]
        assert [r["kind"] for r in records] == ["session"] * 4 + ["savings"]
        ledger = records[-1]
        assert ledger["gated_count"] < ledger["continuous_count"]
        assert 0 < ledger["savings_percent"] < 100

    def test_output_file_is_deterministic(self, tmp_path):
        trace = synth_file(tmp_path, "k.jsonl", "--letter", "k", "--noise", "0.2", "--seed", "3")
        out1, out2 = str(tmp_path / "r1.jsonl"), str(tmp_path / "r2.jsonl")
        assert main(["pipeline", "--trace", trace, "--out", out1]) == 0
        assert main(["pipeline", "--trace", trace, "--out", out2]) == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_corrupt_line_is_cited(self, tmp_path, capsys):
        good = synth_file(tmp_path, "ok.jsonl", "--letter", "a")
        lines = open(good).read().splitlines()
        bad = tmp_path / "bad.jsonl"
        bad.write_text("\n".join([lines[0], lines[1], '{"t_us": "oops"}', *lines[2:]]) + "\n")
        code, _, err = run(capsys, "pipeline", "--trace", str(bad))
        assert code == 3
        assert "line 3" in err

    def test_empty_input_is_zero_sessions(self, tmp_path, capsys):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        code, out, _ = run(capsys, "pipeline", "--trace", str(empty))
        assert code == 0
        assert out == ""

    def test_missing_trace_file_is_a_data_error(self, capsys):
        code, _, err = run(capsys, "pipeline", "--trace", "/nonexistent/trace.jsonl")
        assert code == 3
        assert "error" in err


class TestConfigMerging:
    def test_config_file_applies(self, tmp_path, capsys):
        trace = synth_file(tmp_path, "a.jsonl", "--letter", "a")
        config = tmp_path / "strict.toml"
        config.write_text("threshold = 50.0\n")
        code, out, _ = run(capsys, "pipeline", "--trace", trace, "--config", str(config))
        assert code == 0
        assert out == ""  # nothing exceeds 50 m/s^2

    def test_flags_beat_the_config_file(self, tmp_path, capsys):
        trace = synth_file(tmp_path, "a.jsonl", "--letter", "a")
        config = tmp_path / "strict.toml"
        config.write_text("threshold = 50.0\n")
        code, out, _ = run(
            capsys,
            "pipeline", "--trace", trace, "--config", str(config),
            "--threshold", "1.0", "--no-trace",
        )
        assert code == 0
        assert len(out.splitlines()) == 1

    def test_unknown_config_key_is_a_usage_error(self, tmp_path, capsys):
        trace = synth_file(tmp_path, "a.jsonl", "--letter", "a")
        config = tmp_path / "typo.toml"
        config.write_text("treshold = 1.0\n")
        code, _, err = run(capsys, "pipeline", "--trace", trace, "--config", str(config))
        assert code == 2
        assert "unknown config keys" in err

    def test_filter_weights_flag_parses_comma_list(self, tmp_path, capsys):
        trace = synth_file(tmp_path, "a.jsonl", "--letter", "a")
        code, out, _ = run(
            capsys, "pipeline", "--trace", trace, "--filter-weights", "1,1,1", "--no-trace"
        )
        assert code == 0
        assert len(out.splitlines()) == 1

    def test_invalid_band_fraction_is_a_usage_error(self, tmp_path, capsys):
        trace = synth_file(tmp_path, "a.jsonl", "--letter", "a")
        code, _, err = run(capsys, "pipeline", "--trace", trace, "--band-fraction", "1.5")
        assert code == 2


class TestTrainAndClassify:
    def test_train_creates_and_updates_the_store(self, tmp_path, capsys):
        trace = synth_file(tmp_path, "a.jsonl", "--letter", "a")
        store_path = str(tmp_path / "templates.json")
        code, _, err = run(capsys, "train", "--letter", "a", "--trace", trace, "--templates", store_path)
        assert code == 0
        assert "1/26 trained" in err
        store = load_templates(store_path)
        assert store.missing() == [l for l in store.alphabet if l != "a"]

    def test_training_on_a_two_session_trace_fails(self, tmp_path, capsys):
        trace = synth_file(tmp_path, "ab.jsonl", "--word", "ab")
        store_path = str(tmp_path / "templates.json")
        code, _, err = run(capsys, "train", "--letter", "a", "--trace", trace, "--templates", store_path)
        assert code == 3
        assert "one writing session" in err

    def test_classify_round_trip(self, tmp_path, capsys, alphabet_template_file):
        trace = synth_file(tmp_path, "g.jsonl", "--letter", "g")
        code, out, _ = run(
            capsys, "classify", "--trace", trace, "--templates", alphabet_template_file
        )
        assert code == 0
        result = json.loads(out)
        assert result["letter"] == "g"
        assert len(result["ranked"]) == 26

    def test_classify_without_enough_templates_fails(self, tmp_path, capsys):
        trace = synth_file(tmp_path, "a.jsonl", "--letter", "a")
        store_path = str(tmp_path / "partial.json")
        assert main(["train", "--letter", "a", "--trace", trace, "--templates", store_path]) == 0
        capsys.readouterr()
        code, _, err = run(capsys, "classify", "--trace", trace, "--templates", store_path)
        assert code == 3
        assert "missing templates" in err


class TestEval:
    def test_tiny_noise_free_run_is_perfect(self, capsys):
        code, out, err = run(
            capsys,
            "eval", "--letters", "ab", "--trials", "1", "--noise", "0",
            "--format", "csv", "--seed", "7",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "actual,a,b"
        assert lines[-1] == "mean,100.0%"
        assert "mean accuracy: 100.0%" in err

    def test_letters_flag_is_required(self):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--trials", "1"])
        assert exc.value.code == 2


def test_help_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for command in ("synth", "pipeline", "train", "classify", "eval", "serve"):
        assert command in out
