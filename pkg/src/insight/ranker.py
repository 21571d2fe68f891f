"""Five-heuristic comment ranking: filter, score, rank, fuse, select.

For one answer's discussion the pipeline drops comments below the vote
threshold, scores the survivors on popularity (P), word count (WC),
relevance to the target code segment (R), comment rank in the interaction
network (CR) and sentiment (S), builds one ranked list per heuristic, and
finally selects the comments that appear in the most per-heuristic top
lists.  Sentiment ranks ascending (negative sentiment flags bugs and
concerns); the other four rank descending.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .errors import ConfigError, InvalidTargetError, NotFoundError
from .graphrank import PageRankConfig, build_interaction_network, pagerank
from .ingest import CodeSegment, CorpusIndex, DiscussionComment
from .sentiment import get_scorer
from .textproc import StopLists, cosine_similarity, domain_for_tags, load_stop_lists, tokenize

HEURISTICS = ("P", "WC", "R", "CR", "S")


@dataclass
class RankerConfig:
    vote_filter_min: int = 1
    per_list_depth: int = 5
    top_k: int = 3
    enabled_heuristics: tuple[str, ...] = HEURISTICS
    min_words: int = 0  # optional extra filter, off by default

    def __post_init__(self) -> None:
        self.enabled_heuristics = tuple(self.enabled_heuristics)
        unknown = set(self.enabled_heuristics) - set(HEURISTICS)
        if unknown or not self.enabled_heuristics:
            raise ConfigError(f"enabled_heuristics must be a non-empty subset of {HEURISTICS}")
        if len(set(self.enabled_heuristics)) != len(self.enabled_heuristics):
            raise ConfigError("enabled_heuristics contains duplicates")
        if self.per_list_depth < 1:
            raise ConfigError("per_list_depth must be >= 1")
        if not 1 <= self.top_k <= self.per_list_depth * len(self.enabled_heuristics):
            raise ConfigError(
                f"top_k must be in [1, {self.per_list_depth * len(self.enabled_heuristics)}]"
            )


@dataclass
class HeuristicScores:
    comment_id: int
    popularity: int
    word_count: int
    relevance: float
    comment_rank: float
    sentiment: int

    def value(self, heuristic: str):
        return {
            "P": self.popularity,
            "WC": self.word_count,
            "R": self.relevance,
            "CR": self.comment_rank,
            "S": self.sentiment,
        }[heuristic]


@dataclass
class RecommendationEntry:
    comment_id: int
    frequency: int
    tie_break: str


@dataclass
class RankedRecommendation:
    answer_id: int
    segment_id: str
    entries: list[RecommendationEntry] = field(default_factory=list)

    def comment_ids(self) -> list[int]:
        return [e.comment_id for e in self.entries]


def filter_by_votes(
    comments: Sequence[DiscussionComment], cfg: RankerConfig
) -> list[DiscussionComment]:
    """Keep comments with at least ``vote_filter_min`` up-votes, in order."""
    kept = [c for c in comments if c.score >= cfg.vote_filter_min]
    if cfg.min_words > 0:
        kept = [c for c in kept if len(c.text.split()) >= cfg.min_words]
    return kept


def score_all(
    candidates: Sequence[DiscussionComment],
    segment: CodeSegment,
    *,
    stop: StopLists,
    sentiment_scorer: Callable[[str], int],
    pagerank_cfg: PageRankConfig | None = None,
) -> list[HeuristicScores]:
    """Compute the five heuristic scores for every candidate comment."""
    graph = build_interaction_network(candidates)
    comment_rank = pagerank(graph, pagerank_cfg)
    scores = []
    for c in candidates:
        scores.append(
            HeuristicScores(
                comment_id=c.id,
                popularity=c.score,
                word_count=len(c.text.split()),
                relevance=cosine_similarity(tokenize(c.text, "prose", stop), segment.tokens),
                comment_rank=comment_rank.get(c.id, 0.0),
                sentiment=sentiment_scorer(c.text),
            )
        )
    return scores


def rank_per_heuristic(
    scores: Sequence[HeuristicScores], cfg: RankerConfig
) -> dict[str, list[int]]:
    """One ranked comment-id list per enabled heuristic, truncated to depth.

    S ranks ascending, the rest descending; ties break on ascending id.
    """
    lists: dict[str, list[int]] = {}
    for h in cfg.enabled_heuristics:
        if h == "S":
            key = lambda s: (s.sentiment, s.comment_id)
        else:
            key = lambda s, h=h: (-s.value(h), s.comment_id)
        ranked = sorted(scores, key=key)
        lists[h] = [s.comment_id for s in ranked[: cfg.per_list_depth]]
    return lists


def fuse_and_select(
    lists: Mapping[str, Sequence[int]],
    scores: Sequence[HeuristicScores],
    cfg: RankerConfig,
) -> list[RecommendationEntry]:
    """Pick the top-K comments by how many per-heuristic lists contain them.

    Frequency ties break on higher popularity, then higher relevance, then
    lower comment id.
    """
    member_sets = [set(ids) for ids in lists.values()]
    frequency = {s.comment_id: sum(s.comment_id in m for m in member_sets) for s in scores}
    ordered = sorted(
        scores,
        key=lambda s: (-frequency[s.comment_id], -s.popularity, -s.relevance, s.comment_id),
    )
    entries = []
    for s in ordered[: cfg.top_k]:
        entries.append(
            RecommendationEntry(
                comment_id=s.comment_id,
                frequency=frequency[s.comment_id],
                tie_break=f"P={s.popularity};R={s.relevance:.4f}",
            )
        )
    return entries


class Recommender:
    """Rank one answer's discussion against one of its code segments."""

    def __init__(
        self,
        index: CorpusIndex,
        cfg: RankerConfig | None = None,
        pagerank_cfg: PageRankConfig | None = None,
        *,
        data_dir: str | Path | None = None,
        sentiment_scorer: Callable[[str], int] | None = None,
        sentiment_provider: str = "lexicon",
    ) -> None:
        self.index = index
        self.cfg = cfg or RankerConfig()
        self.pagerank_cfg = pagerank_cfg or PageRankConfig()
        self._data_dir = data_dir
        self._stop_cache: dict[str, StopLists] = {}
        self.sentiment_scorer = sentiment_scorer or get_scorer(sentiment_provider, data_dir)

    def _stop_for(self, answer_id: int) -> StopLists:
        question = self.index.questions.get(self.index.answers[answer_id].question_id)
        domain = domain_for_tags(question.tags if question else [])
        if domain not in self._stop_cache:
            self._stop_cache[domain] = load_stop_lists(domain, self._data_dir)
        return self._stop_cache[domain]

    def _target_segment(self, answer_id: int, segment_ordinal: int) -> CodeSegment:
        answer = self.index.answers.get(answer_id)
        if answer is None:
            raise NotFoundError(f"answer {answer_id} is not in the index")
        if not answer.segments:
            raise InvalidTargetError(f"answer {answer_id} has no code segments")
        if not 0 <= segment_ordinal < len(answer.segments):
            raise InvalidTargetError(
                f"answer {answer_id} has no segment #{segment_ordinal} "
                f"(has {len(answer.segments)})"
            )
        return answer.segments[segment_ordinal]

    def candidates(self, answer_id: int) -> list[DiscussionComment]:
        return filter_by_votes(self.index.answer_comments(answer_id), self.cfg)

    def heuristic_table(
        self, answer_id: int, segment_ordinal: int = 0
    ) -> tuple[list[HeuristicScores], dict[int, int]]:
        """Scores plus fusion frequencies for every candidate (for --explain)."""
        segment = self._target_segment(answer_id, segment_ordinal)
        candidates = self.candidates(answer_id)
        if not candidates:
            return [], {}
        scores = score_all(
            candidates,
            segment,
            stop=self._stop_for(answer_id),
            sentiment_scorer=self.sentiment_scorer,
            pagerank_cfg=self.pagerank_cfg,
        )
        lists = rank_per_heuristic(scores, self.cfg)
        member_sets = [set(ids) for ids in lists.values()]
        frequency = {s.comment_id: sum(s.comment_id in m for m in member_sets) for s in scores}
        return scores, frequency

    def recommend_for_answer(self, answer_id: int, segment_ordinal: int = 0) -> RankedRecommendation:
        segment = self._target_segment(answer_id, segment_ordinal)
        candidates = self.candidates(answer_id)
        recommendation = RankedRecommendation(answer_id=answer_id, segment_id=segment.id)
        if not candidates:
            return recommendation
        scores = score_all(
            candidates,
            segment,
            stop=self._stop_for(answer_id),
            sentiment_scorer=self.sentiment_scorer,
            pagerank_cfg=self.pagerank_cfg,
        )
        lists = rank_per_heuristic(scores, self.cfg)
        recommendation.entries = fuse_and_select(lists, scores, self.cfg)
        return recommendation

    def interaction_graph(self, answer_id: int):
        return build_interaction_network(self.candidates(answer_id))
