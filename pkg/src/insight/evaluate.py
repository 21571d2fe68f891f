"""Recall / mean-reciprocal-rank evaluation against gold comment labels.

Gold labels carry a closed category taxonomy: C1 clarification question,
C2 code documentation, C3 tips & complementary information, C4 bugs,
concerns & limitations, C5 strength statement, C6 miscellaneous,
C7 non-informative.  Only C3 and C4 (the insightful categories) are
evaluated.  For every answer holding gold comments the ranker produces its
top-K recommendation once per heuristic set; a gold comment counts as
retrieved when it appears there.  Recall uses the per-domain gold pool as
denominator; reciprocal rank is 1/position of the first gold hit (0 on a
miss) and MRR averages it over answers.
"""
from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputError
from .graphrank import PageRankConfig
from .ingest import CorpusIndex
from .ranker import HEURISTICS, RankerConfig, Recommender

log = logging.getLogger(__name__)

CATEGORIES = ("C1", "C2", "C3", "C4", "C5", "C6", "C7")
INSIGHT_CATEGORIES = ("C3", "C4")

#: Incremental heuristic-set ladder used by the ablation report.
TABLE2_SETS: tuple[tuple[str, ...], ...] = (
    ("P",),
    ("P", "R"),
    ("P", "R", "CR"),
    ("P", "R", "CR", "WC"),
    ("P", "CR", "R", "WC", "S"),
)

HEURISTIC_SET_PRESETS: dict[str, tuple[tuple[str, ...], ...]] = {
    "table2": TABLE2_SETS,
    "full": (HEURISTICS,),
    "popularity": (("P",),),
}

_DOMAIN_ORDER = ("java", "android", "csharp")


@dataclass(frozen=True)
class GoldLabel:
    comment_id: int
    category: str
    domain: str


def load_gold(path: str | Path) -> list[GoldLabel]:
    """Read gold labels from CSV rows ``comment_id,category,domain``."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"gold file not found: {path}")
    labels: list[GoldLabel] = []
    seen: set[int] = set()
    duplicates = 0
    with path.open("r", encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (row[0].strip().startswith("#")):
                continue
            if lineno == 1 and row[0].strip().lower() == "comment_id":
                continue
            if len(row) != 3:
                raise InputError(f"{path}:{lineno}: expected comment_id,category,domain")
            raw_id, category, domain = (c.strip() for c in row)
            try:
                comment_id = int(raw_id)
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: bad comment id {raw_id!r}") from exc
            if category not in CATEGORIES:
                raise InputError(
                    f"{path}:{lineno}: unknown category {category!r}; expected C1..C7"
                )
            if comment_id in seen:
                duplicates += 1
                continue
            seen.add(comment_id)
            labels.append(GoldLabel(comment_id=comment_id, category=category, domain=domain.lower()))
    if duplicates:
        log.warning("%s: dropped %d duplicate gold rows", path, duplicates)
    return labels


@dataclass
class EvalCell:
    heuristics: tuple[str, ...]
    domain: str
    category: str
    retrieved: int
    gold_total: int
    recall: float
    mrr: float
    answers: int


@dataclass
class EvalReport:
    cells: list[EvalCell] = field(default_factory=list)
    skipped_gold: int = 0

    def cell(self, heuristics: Sequence[str], domain: str, category: str) -> EvalCell | None:
        key = tuple(heuristics)
        for c in self.cells:
            if c.heuristics == key and c.domain == domain and c.category == category:
                return c
        return None

    def domains(self) -> list[str]:
        present = {c.domain for c in self.cells}
        ordered = [d for d in _DOMAIN_ORDER if d in present]
        ordered += sorted(present - set(ordered))
        return ordered

    def to_tsv(self) -> str:
        domains = self.domains()
        sets = []
        for c in self.cells:
            if c.heuristics not in sets:
                sets.append(c.heuristics)
        header = ["heuristics", "metric"]
        for d in domains:
            for cat in INSIGHT_CATEGORIES:
                header.append(f"{d}:{cat}")
        for cat in INSIGHT_CATEGORIES:
            header.append(f"avg:{cat}")
        lines = ["\t".join(header)]
        for hs in sets:
            label = "+".join(hs)
            rows = {"retrieved": [label, "retrieved"], "recall": [label, "recall"], "mrr": [label, "mrr"]}
            per_cat_recalls: dict[str, list[float]] = {c: [] for c in INSIGHT_CATEGORIES}
            per_cat_mrrs: dict[str, list[float]] = {c: [] for c in INSIGHT_CATEGORIES}
            for d in domains:
                for cat in INSIGHT_CATEGORIES:
                    cell = self.cell(hs, d, cat)
                    if cell is None:
                        for row in rows.values():
                            row.append("-")
                        continue
                    rows["retrieved"].append(f"{cell.retrieved}/{cell.gold_total}")
                    rows["recall"].append(f"{cell.recall:.4f}")
                    rows["mrr"].append(f"{cell.mrr:.4f}")
                    per_cat_recalls[cat].append(cell.recall)
                    per_cat_mrrs[cat].append(cell.mrr)
            for cat in INSIGHT_CATEGORIES:
                rows["retrieved"].append("-")
                recalls = per_cat_recalls[cat]
                mrrs = per_cat_mrrs[cat]
                rows["recall"].append(f"{sum(recalls) / len(recalls):.4f}" if recalls else "-")
                rows["mrr"].append(f"{sum(mrrs) / len(mrrs):.4f}" if mrrs else "-")
            for metric in ("retrieved", "recall", "mrr"):
                lines.append("\t".join(rows[metric]))
        return "\n".join(lines) + "\n"


def resolve_heuristic_sets(name_or_sets) -> tuple[tuple[str, ...], ...]:
    if isinstance(name_or_sets, str):
        try:
            return HEURISTIC_SET_PRESETS[name_or_sets]
        except KeyError:
            raise InputError(
                f"unknown heuristic-set preset {name_or_sets!r}; "
                f"available: {', '.join(sorted(HEURISTIC_SET_PRESETS))}"
            ) from None
    return tuple(tuple(s) for s in name_or_sets)


def evaluate(
    index: CorpusIndex,
    gold: Iterable[GoldLabel],
    heuristic_sets="table2",
    *,
    ranker_cfg: RankerConfig | None = None,
    pagerank_cfg: PageRankConfig | None = None,
    data_dir: str | Path | None = None,
    sentiment_provider: str = "lexicon",
    segment_ordinal: int = 0,
    jobs: int = 1,
) -> EvalReport:
    """Run the ranker over every gold-labeled answer, once per heuristic set.

    The vote filter is heuristic-set independent, so all sets score the
    same candidate pools.
    """
    sets = resolve_heuristic_sets(heuristic_sets)
    base_cfg = ranker_cfg or RankerConfig()
    report = EvalReport()

    # gold comments resolved against the index; unknown ids are skipped
    located: list[tuple[GoldLabel, int]] = []
    for label in gold:
        if label.category not in INSIGHT_CATEGORIES:
            continue
        comment = index.get_comment(label.comment_id)
        if comment is None:
            log.warning("gold comment %d not found in index; skipped", label.comment_id)
            report.skipped_gold += 1
            continue
        located.append((label, comment.post_id))
    answer_ids = sorted({aid for _, aid in located})
    if not answer_ids:
        return report

    by_domain_cat: dict[tuple[str, str], list[tuple[GoldLabel, int]]] = {}
    for label, aid in located:
        by_domain_cat.setdefault((label.domain, label.category), []).append((label, aid))

    for hs in sets:
        cfg = RankerConfig(
            vote_filter_min=base_cfg.vote_filter_min,
            per_list_depth=base_cfg.per_list_depth,
            top_k=base_cfg.top_k,
            enabled_heuristics=hs,
            min_words=base_cfg.min_words,
        )
        recommender = Recommender(
            index,
            cfg,
            pagerank_cfg,
            data_dir=data_dir,
            sentiment_provider=sentiment_provider,
        )

        def recommend(aid: int) -> list[int]:
            return recommender.recommend_for_answer(aid, segment_ordinal).comment_ids()

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                recommended = dict(zip(answer_ids, pool.map(recommend, answer_ids)))
        else:
            recommended = {aid: recommend(aid) for aid in answer_ids}

        for (domain, category), members in sorted(by_domain_cat.items()):
            retrieved = 0
            per_answer_gold: dict[int, list[int]] = {}
            for label, aid in members:
                per_answer_gold.setdefault(aid, []).append(label.comment_id)
                if label.comment_id in recommended[aid]:
                    retrieved += 1
            reciprocal_ranks = []
            for aid, gold_ids in sorted(per_answer_gold.items()):
                positions = [
                    recommended[aid].index(cid) + 1 for cid in gold_ids if cid in recommended[aid]
                ]
                reciprocal_ranks.append(1.0 / min(positions) if positions else 0.0)
            report.cells.append(
                EvalCell(
                    heuristics=hs,
                    domain=domain,
                    category=category,
                    retrieved=retrieved,
                    gold_total=len(members),
                    recall=retrieved / len(members),
                    mrr=sum(reciprocal_ranks) / len(reciprocal_ranks),
                    answers=len(per_answer_gold),
                )
            )
    return report
