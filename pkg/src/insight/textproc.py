"""Shared text machinery: identifier splitting, tokenization, stop-token
filtering and term-frequency cosine similarity.

No stemming is applied in either mode; identifiers and prose words are kept
verbatim (lowercased) so exact API names stay searchable.
"""
from __future__ import annotations

import math
import re
import string
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigError

DATA_DIR = Path(__file__).resolve().parent / "data"

#: Domains with a bundled programming-keyword list.
KNOWN_DOMAINS = ("java", "android", "csharp")

#: Tag spellings that map onto a keyword-list domain.
DOMAIN_ALIASES = {
    "java": "java",
    "android": "android",
    "csharp": "csharp",
    "c#": "csharp",
    "c-sharp": "csharp",
}

TokenMultiset = Counter

_RAW_TOKEN = re.compile(r"[A-Za-z0-9_.]+")
_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z])(?=[A-Z])")
_SEPARATORS = re.compile(r"[_0-9]+")
_CODE_SPAN = re.compile(r"``.*?``|`[^`]*`", re.S)


@dataclass(frozen=True)
class StopLists:
    """Token sets removed during tokenization; membership is lowercase."""

    english_stop_words: frozenset[str]
    programming_keywords: frozenset[str]
    punctuation_tokens: frozenset[str]


def _read_token_file(path: Path) -> frozenset[str]:
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def resolve_domain(name: str) -> str:
    key = name.strip().lower()
    if key in DOMAIN_ALIASES:
        return DOMAIN_ALIASES[key]
    raise ConfigError(
        f"unknown domain {name!r}; expected one of: {', '.join(KNOWN_DOMAINS)}"
    )


def domain_for_tags(tags: Iterable[str]) -> str:
    """Pick the keyword-list domain for a question's tags (java fallback)."""
    tagset = {t.strip().lower() for t in tags}
    for candidate in ("android", "c#", "csharp", "java"):
        if candidate in tagset:
            return DOMAIN_ALIASES[candidate]
    return "java"


def load_stop_lists(domain: str = "java", data_dir: str | Path | None = None) -> StopLists:
    """Load the stop-word and per-domain keyword files.

    ``data_dir`` overrides the bundled lists; files are one token per line.
    """
    base = Path(data_dir) if data_dir is not None else DATA_DIR
    domain = resolve_domain(domain)
    return StopLists(
        english_stop_words=_read_token_file(base / "stopwords_en.txt"),
        programming_keywords=_read_token_file(base / f"keywords_{domain}.txt"),
        punctuation_tokens=frozenset(string.punctuation),
    )


def split_identifier(token: str) -> list[str]:
    """Split an identifier into searchable subtokens, all lowercased.

    Dotted tokens split on ``.``; each part splits further at lower-to-upper
    camel-case boundaries and on underscores/digits.  The part itself (with
    separators dropped) is also emitted so the exact name stays searchable:

    ``java.util.HashMap`` -> ``["java", "util", "hashmap", "hash", "map"]``
    """
    out: list[str] = []
    for part in token.split("."):
        if not part:
            continue
        subs: list[str] = []
        for chunk in _SEPARATORS.split(part):
            if chunk:
                subs.extend(p.lower() for p in _CAMEL_BOUNDARY.sub("\x00", chunk).split("\x00"))
        whole = re.sub(r"[^a-z0-9]", "", part.lower())
        if any(c.isalpha() for c in whole) and not (len(subs) == 1 and subs[0] == whole):
            out.append(whole)
        out.extend(subs)
    return out


def tokenize(text: str, mode: str, stop: StopLists) -> Counter:
    """Turn text into a lowercase token multiset.

    Splits on non-alphanumeric characters (keeping ``.`` and ``_`` inside
    raw tokens so identifiers survive intact), applies :func:`split_identifier`
    to every raw token, then drops stop words, programming keywords (code
    mode only), punctuation tokens and single-character tokens.  Digit runs
    never become tokens.
    """
    if mode not in ("code", "prose"):
        raise ValueError(f"mode must be 'code' or 'prose', got {mode!r}")
    keywords = stop.programming_keywords if mode == "code" else frozenset()
    counts: Counter = Counter()
    for raw in _RAW_TOKEN.findall(text):
        raw = raw.strip("._")
        if not raw:
            continue
        for tok in split_identifier(raw):
            if len(tok) <= 1:
                continue
            if tok in stop.english_stop_words or tok in keywords or tok in stop.punctuation_tokens:
                continue
            counts[tok] += 1
    return counts


def _reduced(counts: Mapping[str, int]) -> Mapping[str, int]:
    # Dividing counts by their gcd makes cosine bit-identical under uniform
    # scaling of one side.
    values = list(counts.values())
    if not values or not all(isinstance(v, int) for v in values):
        return counts
    g = 0
    for v in values:
        g = math.gcd(g, v)
    if g <= 1:
        return counts
    return {t: v // g for t, v in counts.items()}


def cosine_similarity(a: Mapping[str, int], b: Mapping[str, int]) -> float:
    """Cosine of two term-frequency multisets, in [0, 1]; 0 if either is empty."""
    if not a or not b:
        return 0.0
    ra, rb = _reduced(a), _reduced(b)
    if len(rb) < len(ra):
        ra, rb = rb, ra
    dot = sum(v * rb.get(t, 0) for t, v in ra.items())
    if dot == 0:
        return 0.0
    norm_sq = sum(v * v for v in ra.values()) * sum(v * v for v in rb.values())
    return min(1.0, dot / math.sqrt(norm_sq))


def weighted_cosine(a: Mapping[str, int], b: Mapping[str, int], weights: Mapping[str, float]) -> float:
    """Cosine with per-token weights (the optional tf-idf route)."""
    if not a or not b:
        return 0.0
    wa = {t: v * weights.get(t, 1.0) for t, v in a.items()}
    wb = {t: v * weights.get(t, 1.0) for t, v in b.items()}
    dot = sum(v * wb.get(t, 0.0) for t, v in wa.items())
    if dot == 0.0:
        return 0.0
    norm_sq = sum(v * v for v in wa.values()) * sum(v * v for v in wb.values())
    return min(1.0, dot / math.sqrt(norm_sq))


def split_code_spans(text: str) -> list[tuple[str, bool]]:
    """Split text into (chunk, is_code) pieces around backtick spans."""
    parts: list[tuple[str, bool]] = []
    last = 0
    for m in _CODE_SPAN.finditer(text):
        if m.start() > last:
            parts.append((text[last:m.start()], False))
        parts.append((m.group(0), True))
        last = m.end()
    if last < len(text):
        parts.append((text[last:], False))
    return parts
