"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
per-criterion lines immediately).
"""
import json
import random
import subprocess
import sys
import time
from collections import Counter
from contextlib import contextmanager

import pytest

from insight.graphrank import CommentGraph, PageRankConfig, pagerank
from insight.ranker import RankerConfig, Recommender, fuse_and_select, rank_per_heuristic
from insight.refine import refine_comment
from insight.synth import (
    CLONE_QUERY,
    SHOWCASE_ANSWER_ID,
    SHOWCASE_TOP3,
    demo_corpus,
    write_dump,
)
from insight.textproc import cosine_similarity
from insight.topics import TopicModelConfig, fit_lda

from test_eval import positions_index_and_gold
from test_ranker import _scores, oracle_fuse
from test_topics import planted_corpus, topic_purity


@contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print(f"criterion {number:02d} ({name}): FAIL")
        raise
    print(f"criterion {number:02d} ({name}): PASS")


def _cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "insight.cli", *args],
        cwd=cwd, capture_output=True, text=True, timeout=120,
    )


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("acceptance")
    write_dump(root / "dump", demo_corpus())
    (root / "query.java").write_text(CLONE_QUERY, encoding="utf-8")
    result = _cli(["--index", "index", "ingest", "--input", "dump"], cwd=root)
    assert result.returncode == 0, result.stderr
    return root


# 10 hand-built graphs, each at most 6 nodes
HAND_GRAPHS = [
    ([1], set()),
    ([1, 2], {(1, 2), (2, 1)}),
    ([1, 2], {(1, 2)}),
    ([1, 2, 3], {(1, 2), (2, 1), (2, 3), (3, 2)}),
    ([1, 2, 3], {(1, 2), (2, 3), (3, 1)}),
    ([1, 2, 3, 4, 5], {(2, 1), (3, 1), (4, 1), (5, 1)}),  # star in
    ([1, 2, 3, 4, 5], {(1, 2), (1, 3), (1, 4), (1, 5)}),  # star out
    ([1, 2, 3, 4], {(u, v) for u in (1, 2, 3, 4) for v in (1, 2, 3, 4) if u != v}),
    ([1, 2, 3, 4, 5], {(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)}),  # ring
    ([1, 2, 3, 4, 5, 6], {(1, 2), (2, 1), (2, 3), (3, 4), (4, 2), (5, 2), (1, 6)}),
]


def power_iteration_oracle(graph, d=0.85, iterations=1000):
    incoming = {n: [] for n in graph.nodes}
    for u, v in graph.edges:
        incoming[v].append(u)
    scores = {n: 1.0 for n in graph.nodes}
    for _ in range(iterations):
        scores = {
            n: (1 - d) + d * sum(scores[u] / graph.out_degree[u] for u in incoming[n])
            for n in graph.nodes
        }
    return scores


def test_c01_link_equation_fidelity():
    with criterion(1, "link-equation fidelity on hand graphs"):
        cfg = PageRankConfig(damping=0.85, epsilon=1e-10, max_iterations=3000)
        start = time.perf_counter()
        for nodes, edges in HAND_GRAPHS:
            graph = CommentGraph.from_edges(nodes, edges)
            scores = pagerank(graph, cfg)
            oracle = power_iteration_oracle(graph)
            incoming = {n: [u for u, v in graph.edges if v == n] for n in graph.nodes}
            for n in graph.nodes:
                residual = abs(
                    scores[n]
                    - ((1 - cfg.damping) + cfg.damping * sum(
                        scores[u] / graph.out_degree[u] for u in incoming[n]
                    ))
                )
                assert residual < 1e-5
                assert abs(scores[n] - oracle[n]) < 1e-6
        assert time.perf_counter() - start < 1.0


def test_c02_trivial_pagerank_anchors():
    with criterion(2, "trivial anchors: isolated node and two-cycle"):
        isolated = pagerank(CommentGraph.from_edges([1], set()), PageRankConfig(damping=0.85))
        assert isolated[1] == 1.0 - 0.85  # exact
        cycle = pagerank(CommentGraph.from_edges([1, 2], {(1, 2), (2, 1)}))
        assert cycle[1] == 1.0 and cycle[2] == 1.0  # exact


def test_c03_showcase_reproduction(showcase_index):
    with criterion(3, "showcase thread returns its three insightful comments"):
        start = time.perf_counter()
        recommendation = Recommender(showcase_index).recommend_for_answer(SHOWCASE_ANSWER_ID)
        elapsed = time.perf_counter() - start
        assert tuple(recommendation.comment_ids()) == SHOWCASE_TOP3
        assert elapsed < 1.0


def test_c04_ablation_trend(labeled_index, labeled_bundle):
    with criterion(4, "full heuristic set beats popularity alone on C4 recall"):
        from insight.evaluate import GoldLabel, TABLE2_SETS, evaluate

        gold = [GoldLabel(c, cat, d) for c, cat, d in labeled_bundle.gold_rows]
        insight_gold = [g for g in gold if g.category in ("C3", "C4")]
        assert len(labeled_index.answers) == 30
        assert len(insight_gold) >= 40
        start = time.perf_counter()
        report = evaluate(labeled_index, gold, "table2")
        elapsed = time.perf_counter() - start
        full, pop = TABLE2_SETS[-1], TABLE2_SETS[0]
        deltas = []
        for domain in ("java", "android", "csharp"):
            delta = report.cell(full, domain, "C4").recall - report.cell(pop, domain, "C4").recall
            assert delta >= 0.0
            deltas.append(delta)
        assert sum(deltas) / len(deltas) >= 0.0
        assert elapsed < 5.0


def test_c05_metric_correctness():
    with criterion(5, "MRR equals 11/24 on the positions fixture"):
        from insight.evaluate import TABLE2_SETS, evaluate

        index, gold = positions_index_and_gold()
        report = evaluate(index, gold, [TABLE2_SETS[-1]])
        cell = report.cell(TABLE2_SETS[-1], "java", "C4")
        assert abs(cell.mrr - 11 / 24) <= 1e-12
        assert cell.retrieved == 3 and cell.gold_total == 4  # hand count
        assert cell.recall == 3 / 4


def test_c06_fusion_oracle():
    with criterion(6, "fusion equals exhaustive enumeration on 200 random instances"):
        rng = random.Random(987654)
        cfg = RankerConfig()
        agreements = 0
        for _ in range(200):
            ids = rng.sample(range(1, 500), 8)
            scores = [
                _scores(
                    cid,
                    p=rng.randint(0, 10),
                    wc=rng.randint(0, 60),
                    r=rng.randint(0, 10) / 10.0,
                    cr=rng.randint(15, 300) / 100.0,
                    s=rng.randint(-4, 4),
                )
                for cid in ids
            ]
            got = fuse_and_select(rank_per_heuristic(scores, cfg), scores, cfg)
            if [(e.comment_id, e.frequency) for e in got] == oracle_fuse(scores, cfg):
                agreements += 1
        assert agreements == 200


def test_c07_cosine_properties():
    with criterion(7, "cosine symmetry, bounds, scaling, and the 0.5 example"):
        assert cosine_similarity({"x": 1, "y": 1}, {"x": 1, "z": 1}) == 0.5
        rng = random.Random(4321)
        vocabulary = [f"w{i}" for i in range(10)]
        for _ in range(500):
            a = Counter({w: rng.randint(1, 30) for w in rng.sample(vocabulary, rng.randint(1, 6))})
            b = Counter({w: rng.randint(1, 30) for w in rng.sample(vocabulary, rng.randint(1, 6))})
            ab = cosine_similarity(a, b)
            assert ab == cosine_similarity(b, a)
            assert 0.0 <= ab <= 1.0
            c = rng.randint(2, 9)
            assert cosine_similarity(a, {w: c * n for w, n in b.items()}) == ab


def test_c08_refinement(rules):
    with criterion(8, "pronoun rewrite example verbatim; idempotent on 500 comments"):
        text = (
            "You should not use the IV like this. For a given two messages, they "
            "should not have been encrypted with the same Key and same IV"
        )
        want = (
            "One should not use the IV like this. For a given two messages, they "
            "should not have been encrypted with the same Key and same IV"
        )
        assert refine_comment(text, rules) == want
        texts = [row["Text"] for row in demo_corpus().comment_rows]
        sample = (texts + [f"@{t[:5]} won't fix 3 of `{t[:3]}`? {t}" for t in texts]) * 2
        assert len(sample) >= 500
        for comment in sample[:500]:
            once = refine_comment(comment, rules)
            assert refine_comment(once, rules) == once


def test_c09_planted_topic_recovery():
    with criterion(9, "LDA recovers two planted topics (purity >= 0.9 over 5 seeds)"):
        corpus = planted_corpus(n_docs=100, doc_len=15)
        start = time.perf_counter()
        purities = []
        for seed in range(5):
            model = fit_lda(corpus, TopicModelConfig(num_topics=2, iterations=1000, seed=seed))
            assert (model.sweep_totals == model.num_tokens).all()  # conserved every sweep
            purities.append(topic_purity(model))
        elapsed = time.perf_counter() - start
        assert sum(purities) / len(purities) >= 0.9
        assert elapsed < 30.0


def test_c10_end_to_end_recommend(workspace):
    with criterion(10, "recommend returns the clone's segment and three refined comments"):
        start = time.perf_counter()
        result = _cli(
            ["--index", "index", "recommend", "--code", "query.java", "--json"], cwd=workspace
        )
        elapsed = time.perf_counter() - start
        assert result.returncode == 0, result.stderr
        payload = json.loads(result.stdout)
        assert payload["status"] == "ok"
        top = payload["matches"][0]
        assert top["segment_id"] == f"{SHOWCASE_ANSWER_ID}:0"
        comments = top["comments"]
        assert len(comments) == 3
        assert [c["id"] for c in comments] == list(SHOWCASE_TOP3)
        assert comments[2]["text_refined"].startswith("One may need to call setSoftInputMode")
        assert elapsed < 2.0


def test_c11_determinism(workspace, tmp_path):
    with criterion(11, "every command is bit-identical across two seeded runs"):
        index_files = ("questions.jsonl", "answers.jsonl", "segments.jsonl",
                       "comments.jsonl", "manifest.json")
        for run in ("r1", "r2"):
            result = _cli(["--index", run, "ingest", "--input", "dump"], cwd=workspace)
            assert result.returncode == 0, result.stderr
        for name in index_files:
            assert (workspace / "r1" / name).read_bytes() == (workspace / "r2" / name).read_bytes()

        commands = [
            ["--index", "index", "rank", "--answer-id", str(SHOWCASE_ANSWER_ID), "--explain"],
            ["--index", "index", "rank", "--answer-id", str(SHOWCASE_ANSWER_ID), "--json"],
            ["--index", "index", "recommend", "--code", "query.java", "--json"],
            ["--index", "index", "eval", "--gold", "dump/gold.csv", "--sets", "table2"],
            ["--index", "index", "topics", "--domain", "java", "--k", "2",
             "--iterations", "300", "--seed", "7"],
        ]
        for args in commands:
            first = _cli(args, cwd=workspace)
            second = _cli(args, cwd=workspace)
            assert first.returncode == 0, first.stderr
            assert first.stdout == second.stdout
