"""Lexicon-based sentence sentiment on a -2..+2 scale, summed per comment.

A comment is split into sentences; each sentence gets an integer class from
-2 (very negative) to +2 (very positive) by summing lexicon valences (sign
flipped when a negator appears in the three preceding tokens) and bucketing
the raw sum.  The per-comment score is the sum of its sentence classes.

Any callable mapping comment text to an integer can replace this scorer;
ranking depends only on the integer (see PROVIDERS).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

from .errors import InputError
from .textproc import DATA_DIR, split_code_spans

DEFAULT_NEGATORS = frozenset({"not", "no", "never"})

#: |raw| thresholds for the +-1 and +-2 buckets.
WEAK_THRESHOLD = 1
STRONG_THRESHOLD = 4

#: How many preceding tokens a negator can flip.
NEGATION_WINDOW = 3

_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")
_WORD = re.compile(r"[a-z]+")
_NT = re.compile(r"n['’]t\b")


@dataclass(frozen=True)
class SentimentLexicon:
    entries: Mapping[str, int]
    negators: frozenset[str] = DEFAULT_NEGATORS


@dataclass
class CommentSentiment:
    sentence_scores: list[int]
    total: int


def load_lexicon(path: str | Path | None = None) -> SentimentLexicon:
    """Read a word<TAB>valence lexicon file (valences in [-5, 5])."""
    path = Path(path) if path is not None else DATA_DIR / "sentiment_lexicon.txt"
    entries: dict[str, int] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            word, valence = line.split("\t")
            value = int(valence)
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: expected 'word<TAB>valence', got {line!r}") from exc
        if not word or abs(value) > 5:
            raise InputError(f"{path}:{lineno}: bad lexicon entry {line!r}")
        entries[word.lower()] = value
    return SentimentLexicon(entries=entries)


def split_sentences(text: str) -> list[str]:
    """Split on ``.``/``!``/``?`` followed by whitespace or end of text.

    Backtick code spans are opaque: terminators inside them never split.
    """
    if not text:
        return []
    shielded: list[str] = []
    spans: list[str] = []
    for chunk, is_code in split_code_spans(text):
        if is_code:
            shielded.append(f"\x00{len(spans)}\x00")
            spans.append(chunk)
        else:
            shielded.append(chunk)
    sentences = []
    for part in _SENTENCE_BREAK.split("".join(shielded)):
        part = re.sub(r"\x00(\d+)\x00", lambda m: spans[int(m.group(1))], part).strip()
        if part:
            sentences.append(part)
    return sentences


def _words(sentence: str) -> list[str]:
    return _WORD.findall(_NT.sub(" not", sentence.lower()))


def score_sentence(sentence: str, lex: SentimentLexicon) -> int:
    """Score one sentence into {-2, -1, 0, +1, +2}."""
    words = _words(sentence)
    raw = 0
    for i, word in enumerate(words):
        valence = lex.entries.get(word)
        if valence is None:
            continue
        window = words[max(0, i - NEGATION_WINDOW):i]
        if any(w in lex.negators for w in window):
            valence = -valence
        raw += valence
    if raw <= -STRONG_THRESHOLD:
        return -2
    if raw <= -WEAK_THRESHOLD:
        return -1
    if raw >= STRONG_THRESHOLD:
        return 2
    if raw >= WEAK_THRESHOLD:
        return 1
    return 0


def score_comment(text: str, lex: SentimentLexicon) -> CommentSentiment:
    scores = [score_sentence(s, lex) for s in split_sentences(text)]
    return CommentSentiment(sentence_scores=scores, total=sum(scores))


def make_scorer(lex: SentimentLexicon) -> Callable[[str], int]:
    return lambda text: score_comment(text, lex).total


def _lexicon_provider(data_dir: str | Path | None = None) -> Callable[[str], int]:
    path = None if data_dir is None else Path(data_dir) / "sentiment_lexicon.txt"
    return make_scorer(load_lexicon(path))


def _neutral_provider(data_dir: str | Path | None = None) -> Callable[[str], int]:
    return lambda text: 0


#: Named sentiment scorer factories, selectable via --sentiment-provider.
PROVIDERS: dict[str, Callable[..., Callable[[str], int]]] = {
    "lexicon": _lexicon_provider,
    "neutral": _neutral_provider,
}


def get_scorer(name: str, data_dir: str | Path | None = None) -> Callable[[str], int]:
    try:
        factory = PROVIDERS[name]
    except KeyError:
        raise InputError(
            f"unknown sentiment provider {name!r}; available: {', '.join(sorted(PROVIDERS))}"
        ) from None
    return factory(data_dir)
