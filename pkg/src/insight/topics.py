"""LDA topic analysis of per-answer API-token documents.

Each accepted answer in a domain becomes one document holding the split
API tokens of its code segments (keywords and punctuation removed).  A
collapsed Gibbs sampler fits K topics with a symmetric document prior of
1/K and a small word-smoothing prior, then topics are filtered by
prominence and ranked by topic-document frequency: the number of documents
listing the topic among their top topics.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, InputError
from .ingest import CorpusIndex
from .textproc import load_stop_lists, resolve_domain, tokenize

log = logging.getLogger(__name__)


@dataclass
class TopicModelConfig:
    num_topics: int = 150
    beta: float = 0.006
    iterations: int = 1000
    words_per_topic: int = 6
    top_topics_per_doc: int = 5
    seed: int = 13

    def __post_init__(self) -> None:
        if self.num_topics < 1:
            raise ConfigError("num_topics must be >= 1")
        if self.beta <= 0.0:
            raise ConfigError("beta must be > 0")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if self.words_per_topic < 1 or self.top_topics_per_doc < 1:
            raise ConfigError("words_per_topic and top_topics_per_doc must be >= 1")

    @property
    def alpha(self) -> float:
        """Symmetric document-topic prior: each component is 1/K."""
        return 1.0 / self.num_topics


@dataclass
class ApiCorpus:
    documents: list[tuple[int, list[str]]]
    domain: str


@dataclass
class TopicModel:
    vocabulary: list[str]
    doc_ids: list[int]
    topic_word_counts: np.ndarray  # K x V
    doc_topic_counts: np.ndarray  # D x K
    topic_totals: np.ndarray  # K
    assignments: np.ndarray  # one topic id per token instance
    sweep_totals: np.ndarray  # total token assignments after each sweep
    config: TopicModelConfig

    @property
    def num_tokens(self) -> int:
        return int(self.assignments.shape[0])

    def topic_shares(self) -> np.ndarray:
        """Each topic's share of all token assignments (the prominence
        used by the report's threshold filter)."""
        total = self.topic_totals.sum()
        if total == 0:
            return np.zeros_like(self.topic_totals, dtype=float)
        return self.topic_totals / total

    def top_words(self, topic: int, n: int | None = None) -> list[str]:
        n = self.config.words_per_topic if n is None else n
        counts = self.topic_word_counts[topic]
        order = sorted(
            (w for w in range(len(self.vocabulary)) if counts[w] > 0),
            key=lambda w: (-counts[w], self.vocabulary[w]),
        )
        return [self.vocabulary[w] for w in order[:n]]

    def doc_topic_distribution(self) -> np.ndarray:
        """Smoothed per-document topic distributions; rows sum to one."""
        alpha = self.config.alpha
        k = self.config.num_topics
        counts = self.doc_topic_counts.astype(float) + alpha
        return counts / (self.doc_topic_counts.sum(axis=1, keepdims=True) + k * alpha)


@dataclass
class TopicRank:
    rank: int
    topic_id: int
    doc_frequency: int
    top_words: list[str]


def build_api_corpus(
    index: CorpusIndex, domain: str, data_dir: str | Path | None = None
) -> ApiCorpus:
    """One document per accepted answer tagged with the domain.

    Documents hold the split code-segment tokens with keywords and
    punctuation removed; answers with no tokens are dropped.
    """
    wanted = resolve_domain(domain)
    aliases = {wanted, "c#"} if wanted == "csharp" else {wanted}
    stop = load_stop_lists(wanted, data_dir)
    documents = []
    for aid in sorted(index.answers):
        answer = index.answers[aid]
        if not answer.is_accepted:
            continue
        question = index.questions.get(answer.question_id)
        tags = {t.lower() for t in (question.tags if question else [])}
        if not tags & aliases:
            continue
        tokens: list[str] = []
        for segment in answer.segments:
            counts = segment.tokens or tokenize(segment.raw_text, "code", stop)
            for token in sorted(counts):
                tokens.extend([token] * counts[token])
        if tokens:
            documents.append((aid, tokens))
    return ApiCorpus(documents=documents, domain=wanted)


def fit_lda(corpus: ApiCorpus, cfg: TopicModelConfig | None = None) -> TopicModel:
    """Fit LDA by collapsed Gibbs sampling; deterministic given the seed."""
    cfg = cfg or TopicModelConfig()
    if not corpus.documents:
        raise InputError("cannot fit a topic model on an empty corpus")
    vocabulary = sorted({t for _, tokens in corpus.documents for t in tokens})
    if cfg.num_topics > len(vocabulary):
        raise ConfigError(
            f"num_topics ({cfg.num_topics}) exceeds vocabulary size ({len(vocabulary)})"
        )
    word_index = {w: i for i, w in enumerate(vocabulary)}
    doc_ids = []
    flat_docs = []
    flat_words = []
    for d, (aid, tokens) in enumerate(corpus.documents):
        doc_ids.append(aid)
        for t in tokens:
            flat_docs.append(d)
            flat_words.append(word_index[t])
    from ._gibbs import run_gibbs  # deferred: importing numba is slow

    z, ndk, nkw, nk, sweep_totals = run_gibbs(
        np.asarray(flat_docs, dtype=np.int64),
        np.asarray(flat_words, dtype=np.int64),
        len(corpus.documents),
        len(vocabulary),
        cfg.num_topics,
        cfg.alpha,
        cfg.beta,
        cfg.iterations,
        cfg.seed,
    )
    return TopicModel(
        vocabulary=vocabulary,
        doc_ids=doc_ids,
        topic_word_counts=nkw,
        doc_topic_counts=ndk,
        topic_totals=nk,
        assignments=z,
        sweep_totals=sweep_totals,
        config=cfg,
    )


def rank_topics(model: TopicModel, cfg: TopicModelConfig | None = None) -> list[TopicRank]:
    """Filter low-prominence topics and rank by topic-document frequency.

    Topics whose share of token assignments falls below ``beta`` are
    dropped; each document then contributes its ``top_topics_per_doc``
    most-assigned surviving topics, and topics sort by how many documents
    list them.
    """
    cfg = cfg or model.config
    shares = model.topic_shares()
    surviving = [t for t in range(model.config.num_topics) if shares[t] >= cfg.beta]
    if not surviving:
        log.warning("no topic reaches the prominence threshold %.4f", cfg.beta)
        return []
    frequency = {t: 0 for t in surviving}
    for d in range(len(model.doc_ids)):
        counts = model.doc_topic_counts[d]
        listed = sorted(
            (t for t in surviving if counts[t] > 0),
            key=lambda t: (-counts[t], t),
        )[: cfg.top_topics_per_doc]
        for t in listed:
            frequency[t] += 1
    ordered = sorted(surviving, key=lambda t: (-frequency[t], t))
    return [
        TopicRank(rank=i + 1, topic_id=t, doc_frequency=frequency[t], top_words=model.top_words(t))
        for i, t in enumerate(ordered)
    ]


def report_tsv(rows: Sequence[TopicRank]) -> str:
    lines = ["rank\ttopic_id\tdoc_frequency\ttop_words"]
    for row in rows:
        lines.append(f"{row.rank}\t{row.topic_id}\t{row.doc_frequency}\t{' '.join(row.top_words)}")
    return "\n".join(lines) + "\n"
