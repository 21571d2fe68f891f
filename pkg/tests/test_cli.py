import json

import pytest

from insight.cli import main
from insight.config import load_config
from insight.errors import ConfigError
from insight.synth import CLONE_QUERY, SHOWCASE_ANSWER_ID, SHOWCASE_TOP3, demo_corpus, write_dump


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    dump = root / "dump"
    bundle = demo_corpus()
    write_dump(dump, bundle)
    (root / "query.java").write_text(CLONE_QUERY, encoding="utf-8")
    index = root / "index"
    code = main(["--index", str(index), "ingest", "--input", str(dump)])
    assert code == 0
    return root


def test_ingest_prints_summary(workspace, capsys):
    out_index = workspace / "index2"
    assert main(["--index", str(out_index), "ingest", "--input", str(workspace / "dump")]) == 0
    out = capsys.readouterr().out
    assert "questions  31" in out
    assert "answers    31" in out
    assert "comments   359" in out
    assert "segments   61" in out
    assert "discarded  6/67" in out
    # the crafted dump discards a high-single-digit share of blocks
    assert "(9.0%)" in out


def test_ingest_missing_input_exit_2(tmp_path, capsys):
    assert main(["--index", str(tmp_path / "i"), "ingest", "--input", str(tmp_path / "empty")]) == 2
    assert "input not found" in capsys.readouterr().err


def test_rank_explain_tsv(workspace, capsys):
    code = main(
        ["--index", str(workspace / "index"), "rank", "--answer-id", str(SHOWCASE_ANSWER_ID), "--explain"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "id\tP\tWC\tR\tCR\tS\tfrequency"
    assert len(lines) == 6  # five vote-filtered comments
    first = lines[1].split("\t")
    assert first[0] == "301" and first[1] == "8"


def test_rank_json(workspace, capsys):
    code = main(
        ["--index", str(workspace / "index"), "rank", "--answer-id", str(SHOWCASE_ANSWER_ID), "--json"]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema_version"] == 1
    assert [e["comment_id"] for e in payload["recommendation"]] == list(SHOWCASE_TOP3)


def test_rank_unknown_answer_exit_2(workspace, capsys):
    assert main(["--index", str(workspace / "index"), "rank", "--answer-id", "31337"]) == 2


def test_rank_dump_graph(workspace, tmp_path):
    dot = tmp_path / "graph.dot"
    code = main(
        [
            "--index", str(workspace / "index"),
            "rank", "--answer-id", str(SHOWCASE_ANSWER_ID), "--dump-graph", str(dot), "--json",
        ]
    )
    assert code == 0
    text = dot.read_text()
    assert text.startswith("digraph") and '"305" -> "301";' in text


def test_recommend_json_schema(workspace, capsys):
    code = main(
        [
            "--index", str(workspace / "index"),
            "recommend", "--code", str(workspace / "query.java"), "--json",
        ]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "ok"
    top = payload["matches"][0]
    assert top["segment_id"] == f"{SHOWCASE_ANSWER_ID}:0"
    assert top["answer_url_id"] == SHOWCASE_ANSWER_ID
    assert [c["id"] for c in top["comments"]] == list(SHOWCASE_TOP3)
    assert {"P", "WC", "R", "CR", "S"} <= set(top["comments"][0]["scores"])


def test_recommend_without_index_exit_3(workspace, tmp_path, capsys):
    code = main(
        ["--index", str(tmp_path / "absent"), "recommend", "--code", str(workspace / "query.java")]
    )
    assert code == 3
    assert "ingest" in capsys.readouterr().err  # remediation hint


def test_recommend_missing_code_file_exit_2(workspace):
    code = main(
        ["--index", str(workspace / "index"), "recommend", "--code", str(workspace / "nope.java")]
    )
    assert code == 2


def test_eval_table2_report(workspace, tmp_path, capsys):
    out = tmp_path / "report.tsv"
    code = main(
        [
            "--index", str(workspace / "index"),
            "eval", "--gold", str(workspace / "dump" / "gold.csv"), "--sets", "table2",
            "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 16  # header + 3 metric rows x 5 heuristic sets
    assert lines[1].startswith("P\tretrieved")
    assert lines[-1].startswith("P+CR+R+WC+S\tmrr")


def test_eval_bad_gold_exit_2(workspace, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,C9,java\n")
    assert main(["--index", str(workspace / "index"), "eval", "--gold", str(bad)]) == 2


def test_topics_report(workspace, tmp_path):
    out = tmp_path / "topics.tsv"
    code = main(
        [
            "--index", str(workspace / "index"),
            "topics", "--domain", "java", "--k", "2", "--iterations", "150",
            "--seed", "7", "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "rank\ttopic_id\tdoc_frequency\ttop_words"
    assert len(lines) >= 2


def test_topics_k_too_large_exit_2(workspace):
    code = main(["--index", str(workspace / "index"), "topics", "--domain", "java", "--k", "5000"])
    assert code == 2


def test_commands_deterministic(workspace, capsys):
    outputs = []
    for _ in range(2):
        main(["--index", str(workspace / "index"), "recommend",
              "--code", str(workspace / "query.java"), "--json"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


# -- configuration ---------------------------------------------------------------


def test_config_file_and_override(tmp_path):
    cfg_file = tmp_path / "insight.cfg"
    cfg_file.write_text("tau = 0.5\ntop_k = 2\nheuristics = P,R\ndamping = 0.9\n")
    cfg = load_config(cfg_file)
    assert cfg.tau == 0.5
    assert cfg.ranker.top_k == 2
    assert cfg.ranker.enabled_heuristics == ("P", "R")
    assert cfg.pagerank.damping == 0.9
    cfg = load_config(cfg_file, overrides={"tau": "0.7"})
    assert cfg.tau == 0.7


def test_env_overrides_paths(tmp_path):
    cfg = load_config(env={"INSIGHT_INDEX_DIR": str(tmp_path / "envidx")})
    assert cfg.index_dir == tmp_path / "envidx"


def test_cli_flag_beats_env(monkeypatch, tmp_path, workspace, capsys):
    monkeypatch.setenv("INSIGHT_INDEX_DIR", str(tmp_path / "wrong"))
    code = main(["--index", str(workspace / "index"), "rank",
                 "--answer-id", str(SHOWCASE_ANSWER_ID), "--json"])
    assert code == 0


def test_unknown_config_key(tmp_path):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("tau = 0.5\nwat = 1\n")
    with pytest.raises(ConfigError):
        load_config(cfg_file)


def test_config_range_validation(tmp_path):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("tau = 1.5\n")
    with pytest.raises(ConfigError):
        load_config(cfg_file)
    cfg_file.write_text("damping = 0\n")
    with pytest.raises(ConfigError):
        load_config(cfg_file)


def test_sentiment_provider_flag(workspace, capsys):
    code = main(
        ["--index", str(workspace / "index"), "rank", "--answer-id", str(SHOWCASE_ANSWER_ID),
         "--sentiment-provider", "neutral", "--explain"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()[1:]
    assert all(line.split("\t")[5] == "0" for line in lines)
