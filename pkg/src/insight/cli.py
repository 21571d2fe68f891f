"""Command-line interface: ingest, recommend, rank, eval, topics.

Exit codes: 0 success, 1 internal error, 2 bad input, 3 missing or
invalid index.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import AppConfig, load_config
from .errors import (
    ConfigError,
    IndexUnavailableError,
    InputError,
    InsightError,
    InvalidTargetError,
    NotFoundError,
)
from .ingest import CorpusIndex, ingest_dump
from .ranker import Recommender

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_BAD_INPUT = 2
EXIT_NO_INDEX = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="insight",
        description="Mine and recommend insightful review comments for code segments.",
    )
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--index", help="index directory (overrides config)")
    parser.add_argument("--data-dir", help="directory with stop/keyword/lexicon files")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a dump directory and build the index")
    p.add_argument("--input", required=True, help="directory with Posts.xml/Comments.xml or *.jsonl")
    p.add_argument("--profile", choices=("none", "api-study", "gold-style"), default=None)

    p = sub.add_parser("recommend", help="recommend comments for a query code segment")
    p.add_argument("--code", required=True, help="file containing the query code")
    p.add_argument("--domain", help="restrict matches to one domain tag (java/android/c#)")
    p.add_argument("--top-n", type=int, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("rank", help="rank one indexed answer's comments")
    p.add_argument("--answer-id", type=int, required=True)
    p.add_argument("--segment", type=int, default=0, help="segment ordinal within the answer")
    p.add_argument("--explain", action="store_true", help="print the per-comment score table")
    p.add_argument("--dump-graph", metavar="PATH", help="write the interaction network as DOT")
    p.add_argument("--sentiment-provider", default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("eval", help="evaluate rankings against gold labels")
    p.add_argument("--gold", required=True, help="CSV of comment_id,category,domain")
    p.add_argument("--sets", default="table2", help="heuristic-set preset (table2/full/popularity)")
    p.add_argument("--out", help="write the report TSV here instead of stdout")
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("topics", help="LDA topic report for one domain's code segments")
    p.add_argument("--domain", required=True)
    p.add_argument("--k", type=int, default=None, help="number of topics")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="write the report TSV here instead of stdout")
    return parser


def _app_config(args: argparse.Namespace) -> AppConfig:
    overrides = {}
    if args.index:
        overrides["index_dir"] = args.index
    if args.data_dir:
        overrides["data_dir"] = args.data_dir
    if getattr(args, "profile", None):
        overrides["profile"] = args.profile
    if getattr(args, "tau", None) is not None:
        overrides["tau"] = str(args.tau)
    if getattr(args, "top_n", None) is not None:
        overrides["top_n"] = str(args.top_n)
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = str(args.jobs)
    if getattr(args, "sentiment_provider", None):
        overrides["sentiment_provider"] = args.sentiment_provider
    if getattr(args, "k", None) is not None:
        overrides["topic_k"] = str(args.k)
    if getattr(args, "beta", None) is not None:
        overrides["topic_beta"] = str(args.beta)
    if getattr(args, "iterations", None) is not None:
        overrides["topic_iterations"] = str(args.iterations)
    if getattr(args, "seed", None) is not None:
        overrides["topic_seed"] = str(args.seed)
    return load_config(args.config, overrides=overrides)


def _load_index(cfg: AppConfig) -> CorpusIndex:
    return CorpusIndex.load(cfg.index_dir)


def _recommender(index: CorpusIndex, cfg: AppConfig) -> Recommender:
    return Recommender(
        index,
        cfg.ranker,
        cfg.pagerank,
        data_dir=cfg.data_dir,
        sentiment_provider=cfg.sentiment_provider,
    )


def cmd_ingest(args: argparse.Namespace) -> int:
    cfg = _app_config(args)
    summary = ingest_dump(args.input, cfg.index_dir, cfg.profile, data_dir=cfg.data_dir)
    print(f"index written to {cfg.index_dir}")
    print(f"  questions  {summary.questions}")
    print(f"  answers    {summary.answers}")
    print(f"  comments   {summary.comments}")
    print(f"  segments   {summary.segments}")
    print(
        f"  discarded  {summary.segments_discarded}/{summary.segments_seen}"
        f" code blocks ({summary.discarded_pct:.1f}%)"
    )
    if summary.orphan_answers:
        print(f"  orphan answers skipped: {summary.orphan_answers}")
    if summary.malformed_rows:
        print(f"  malformed rows skipped: {summary.malformed_rows}")
    return EXIT_OK


def cmd_recommend(args: argparse.Namespace) -> int:
    from .matcher import SegmentMatcher, recommend_for_code
    from .refine import load_rules

    cfg = _app_config(args)
    code_path = Path(args.code)
    if not code_path.exists():
        raise InputError(f"input not found: {code_path}")
    query = code_path.read_text(encoding="utf-8")
    index = _load_index(cfg)
    matcher = SegmentMatcher(
        index, tau=cfg.tau, top_n=cfg.top_n, data_dir=cfg.data_dir, use_tfidf=cfg.use_tfidf
    )
    result = recommend_for_code(
        query, matcher, _recommender(index, cfg), load_rules(cfg.data_dir), domain=args.domain
    )
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "status": result.status,
            "matches": [
                {
                    "segment_id": m.match.segment_id,
                    "similarity": m.match.similarity,
                    "answer_url_id": m.match.answer_id,
                    "question_title": m.match.question_title,
                    "comments": [
                        {
                            "id": c.comment_id,
                            "text_refined": c.text_refined,
                            "frequency": c.frequency,
                            "scores": {
                                "P": c.scores.popularity,
                                "WC": c.scores.word_count,
                                "R": c.scores.relevance,
                                "CR": c.scores.comment_rank,
                                "S": c.scores.sentiment,
                            },
                        }
                        for c in m.comments
                    ],
                }
                for m in result.matches
            ],
        }
        print(json.dumps(payload, sort_keys=True))
        return EXIT_OK
    if not result.matches:
        print(result.status)
        return EXIT_OK
    for m in result.matches:
        print(f"match {m.match.segment_id}  similarity={m.match.similarity:.3f}  "
              f"answer={m.match.answer_id}  {m.match.question_title}")
        for i, c in enumerate(m.comments, start=1):
            print(f"  {i}. [{c.comment_id}] {c.text_refined}")
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    cfg = _app_config(args)
    index = _load_index(cfg)
    recommender = _recommender(index, cfg)
    if args.dump_graph:
        graph = recommender.interaction_graph(args.answer_id)
        Path(args.dump_graph).write_text(graph.to_dot(), encoding="utf-8")
        print(f"graph written to {args.dump_graph}")
    if args.explain:
        scores, frequency = recommender.heuristic_table(args.answer_id, args.segment)
        print("id\tP\tWC\tR\tCR\tS\tfrequency")
        for s in sorted(scores, key=lambda s: s.comment_id):
            print(
                f"{s.comment_id}\t{s.popularity}\t{s.word_count}\t{s.relevance:.4f}"
                f"\t{s.comment_rank:.4f}\t{s.sentiment}\t{frequency[s.comment_id]}"
            )
        return EXIT_OK
    recommendation = recommender.recommend_for_answer(args.answer_id, args.segment)
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "answer_id": recommendation.answer_id,
            "segment_id": recommendation.segment_id,
            "recommendation": [
                {"comment_id": e.comment_id, "frequency": e.frequency, "tie_break": e.tie_break}
                for e in recommendation.entries
            ],
        }
        print(json.dumps(payload, sort_keys=True))
        return EXIT_OK
    if not recommendation.entries:
        print("no comment survives the vote filter")
        return EXIT_OK
    for i, entry in enumerate(recommendation.entries, start=1):
        comment = index.get_comment(entry.comment_id)
        print(f"{i}. [{entry.comment_id}] freq={entry.frequency}  {comment.text}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    from .evaluate import evaluate, load_gold

    cfg = _app_config(args)
    index = _load_index(cfg)
    gold = load_gold(args.gold)
    report = evaluate(
        index,
        gold,
        args.sets,
        ranker_cfg=cfg.ranker,
        pagerank_cfg=cfg.pagerank,
        data_dir=cfg.data_dir,
        sentiment_provider=cfg.sentiment_provider,
        jobs=cfg.effective_jobs(),
    )
    tsv = report.to_tsv()
    if args.out:
        Path(args.out).write_text(tsv, encoding="utf-8")
        print(f"report written to {args.out}")
    else:
        print(tsv, end="")
    return EXIT_OK


def cmd_topics(args: argparse.Namespace) -> int:
    from .topics import build_api_corpus, fit_lda, rank_topics, report_tsv

    cfg = _app_config(args)
    index = _load_index(cfg)
    corpus = build_api_corpus(index, args.domain, cfg.data_dir)
    if not corpus.documents:
        raise InputError(f"no documents for domain {args.domain!r} in the index")
    model = fit_lda(corpus, cfg.topics)
    rows = rank_topics(model)
    tsv = report_tsv(rows)
    if args.out:
        Path(args.out).write_text(tsv, encoding="utf-8")
        print(f"report written to {args.out}")
    else:
        print(tsv, end="")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "recommend": cmd_recommend,
    "rank": cmd_rank,
    "eval": cmd_eval,
    "topics": cmd_topics,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except IndexUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_INDEX
    except (InputError, ConfigError, NotFoundError, InvalidTargetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except InsightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - the CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
