"""Find indexed code segments similar to a query segment and recommend
their top discussion comments, refined for use as code comments.

Similarity is token-multiset cosine over split identifiers, which is a good
proxy here: segments shared between projects and Q&A answers are mostly
verbatim or identifier-renamed copies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import InputError
from .ingest import CorpusIndex
from .ranker import HeuristicScores, RankedRecommendation, Recommender
from .refine import RefinementRules, load_rules, refine_comment
from .textproc import (
    StopLists,
    cosine_similarity,
    load_stop_lists,
    resolve_domain,
    tokenize,
    weighted_cosine,
)

DEFAULT_TAU = 0.3
DEFAULT_TOP_N = 5

NO_MATCH_STATUS = "no similar segment"


@dataclass
class SegmentMatch:
    segment_id: str
    similarity: float
    answer_id: int
    ordinal: int
    question_title: str


@dataclass
class RecommendedComment:
    comment_id: int
    text_refined: str
    frequency: int
    scores: HeuristicScores


@dataclass
class MatchRecommendation:
    match: SegmentMatch
    comments: list[RecommendedComment]


@dataclass
class CodeRecommendation:
    status: str
    matches: list[MatchRecommendation] = field(default_factory=list)


class SegmentMatcher:
    def __init__(
        self,
        index: CorpusIndex,
        *,
        tau: float = DEFAULT_TAU,
        top_n: int = DEFAULT_TOP_N,
        data_dir: str | Path | None = None,
        use_tfidf: bool = False,
    ) -> None:
        if not 0.0 <= tau <= 1.0:
            raise InputError(f"tau must be in [0, 1], got {tau}")
        self.index = index
        self.tau = tau
        self.top_n = top_n
        self._data_dir = data_dir
        self._stop_cache: dict[str, StopLists] = {}
        self._idf: Mapping[str, float] | None = self._build_idf() if use_tfidf else None

    def _build_idf(self) -> dict[str, float]:
        doc_freq: dict[str, int] = {}
        n_segments = 0
        for answer in self.index.answers.values():
            for segment in answer.segments:
                n_segments += 1
                for token in segment.tokens:
                    doc_freq[token] = doc_freq.get(token, 0) + 1
        return {t: math.log(1.0 + n_segments / df) for t, df in doc_freq.items()}

    def _stop_for(self, domain: str) -> StopLists:
        if domain not in self._stop_cache:
            self._stop_cache[domain] = load_stop_lists(domain, self._data_dir)
        return self._stop_cache[domain]

    def _domain_answers(self, domain: str | None):
        for aid in sorted(self.index.answers):
            answer = self.index.answers[aid]
            if domain is not None:
                question = self.index.questions.get(answer.question_id)
                tags = {t.lower() for t in (question.tags if question else [])}
                wanted = resolve_domain(domain)
                aliases = {wanted, "c#"} if wanted == "csharp" else {wanted}
                if not tags & aliases:
                    continue
            yield answer

    def match_segments(
        self,
        query_code: str,
        domain: str | None = None,
        top_n: int | None = None,
        tau: float | None = None,
    ) -> list[SegmentMatch]:
        """Indexed segments with cosine similarity >= tau, best first."""
        tau = self.tau if tau is None else tau
        top_n = self.top_n if top_n is None else top_n
        if not 0.0 <= tau <= 1.0:
            raise InputError(f"tau must be in [0, 1], got {tau}")
        stop = self._stop_for(domain or "java")
        query_tokens = tokenize(query_code, "code", stop)
        if not query_tokens:
            raise InputError("query code produced no indexable tokens")
        matches = []
        for answer in self._domain_answers(domain):
            question = self.index.questions.get(answer.question_id)
            title = question.title if question else ""
            for segment in answer.segments:
                if self._idf is not None:
                    similarity = weighted_cosine(query_tokens, segment.tokens, self._idf)
                else:
                    similarity = cosine_similarity(query_tokens, segment.tokens)
                if similarity >= tau:
                    matches.append(
                        SegmentMatch(
                            segment_id=segment.id,
                            similarity=similarity,
                            answer_id=answer.id,
                            ordinal=segment.ordinal,
                            question_title=title,
                        )
                    )
        matches.sort(key=lambda m: (-m.similarity, m.segment_id))
        return matches[:top_n]


def recommend_for_code(
    query_code: str,
    matcher: SegmentMatcher,
    recommender: Recommender,
    rules: RefinementRules | None = None,
    *,
    domain: str | None = None,
    top_n: int | None = None,
    tau: float | None = None,
) -> CodeRecommendation:
    """Full pipeline for a query segment: match, rank, refine."""
    rules = rules or load_rules()
    matches = matcher.match_segments(query_code, domain=domain, top_n=top_n, tau=tau)
    if not matches:
        return CodeRecommendation(status=NO_MATCH_STATUS)
    result = CodeRecommendation(status="ok")
    for match in matches:
        recommendation: RankedRecommendation = recommender.recommend_for_answer(
            match.answer_id, match.ordinal
        )
        scores, _ = recommender.heuristic_table(match.answer_id, match.ordinal)
        by_id = {s.comment_id: s for s in scores}
        comments = []
        for entry in recommendation.entries:
            comment = recommender.index.get_comment(entry.comment_id)
            comments.append(
                RecommendedComment(
                    comment_id=entry.comment_id,
                    text_refined=refine_comment(comment.text, rules),
                    frequency=entry.frequency,
                    scores=by_id[entry.comment_id],
                )
            )
        result.matches.append(MatchRecommendation(match=match, comments=comments))
    return result
