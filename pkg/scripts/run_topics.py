#!/usr/bin/env python3
"""Fit a topic model per domain on the bundled corpus and print the reports.

The bundled corpus is tiny, so the defaults here use a small K; on a real
dump use the CLI with K up to 150.
"""
import argparse

from insight.ingest import build_index
from insight.synth import demo_corpus
from insight.topics import TopicModelConfig, build_api_corpus, fit_lda, rank_topics, report_tsv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--iterations", type=int, default=500)
    parser.add_argument("--seed", type=int, default=13)
    args = parser.parse_args()

    bundle = demo_corpus()
    index, _ = build_index(bundle.post_rows, bundle.comment_rows, "api-study")
    for domain in ("java", "android", "csharp"):
        corpus = build_api_corpus(index, domain)
        cfg = TopicModelConfig(num_topics=args.k, iterations=args.iterations, seed=args.seed)
        model = fit_lda(corpus, cfg)
        print(f"== {domain}: {len(corpus.documents)} documents, "
              f"{len(model.vocabulary)} vocabulary ==")
        print(report_tsv(rank_topics(model)))


if __name__ == "__main__":
    main()
