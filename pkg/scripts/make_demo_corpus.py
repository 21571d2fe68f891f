#!/usr/bin/env python3
"""Write the bundled demo corpus as a dump directory.

Creates posts.jsonl, comments.jsonl, gold.csv and a query file, ready for:

    python scripts/make_demo_corpus.py demo
    insight --index demo/index ingest --input demo
    insight --index demo/index recommend --code demo/query.java
"""
import argparse
from pathlib import Path

from insight.synth import CLONE_QUERY, demo_corpus, write_dump


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", nargs="?", default="demo", help="output directory")
    args = parser.parse_args()
    out = Path(args.out)
    bundle = demo_corpus()
    write_dump(out, bundle)
    (out / "query.java").write_text(CLONE_QUERY, encoding="utf-8")
    print(f"wrote {out}/posts.jsonl ({len(bundle.post_rows)} rows)")
    print(f"wrote {out}/comments.jsonl ({len(bundle.comment_rows)} rows)")
    print(f"wrote {out}/gold.csv ({len(bundle.gold_rows)} labels)")
    print(f"wrote {out}/query.java")


if __name__ == "__main__":
    main()
