#!/usr/bin/env python3
"""Heuristic ablation experiment on the bundled labeled corpus.

Builds the thirty-answer gold corpus in memory, evaluates the incremental
heuristic ladder and prints the recall/MRR report plus the popularity-only
vs. all-five comparison for bug/concern comments.
"""
import argparse

from insight.evaluate import TABLE2_SETS, GoldLabel, evaluate
from insight.ingest import build_index
from insight.synth import labeled_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", help="write the TSV report here")
    args = parser.parse_args()

    bundle = labeled_corpus()
    index, summary = build_index(bundle.post_rows, bundle.comment_rows, "api-study")
    gold = [GoldLabel(cid, cat, dom) for cid, cat, dom in bundle.gold_rows]
    print(f"corpus: {summary.answers} answers, {summary.comments} comments, "
          f"{len(gold)} gold labels")
    report = evaluate(index, gold, "table2")
    tsv = report.to_tsv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(tsv)
        print(f"report written to {args.out}")
    else:
        print(tsv, end="")

    pop, full = TABLE2_SETS[0], TABLE2_SETS[-1]
    for domain in ("java", "android", "csharp"):
        a = report.cell(pop, domain, "C4")
        b = report.cell(full, domain, "C4")
        print(f"{domain:8s} C4 recall: P alone {a.recall:.2%} -> all five {b.recall:.2%}")


if __name__ == "__main__":
    main()
