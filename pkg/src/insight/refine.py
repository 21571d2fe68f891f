"""Turn a selected raw discussion comment into a formal code comment.

Applied in order, all outside backtick code spans (spans stay byte-identical):

1. delete ``@Name`` tokens plus an immediately following comma,
2. expand spoken contractions ("can't" -> "can not"), case-preserving,
3. replace personal/possessive pronouns with objective words ("you" -> "one"),
4. spell out standalone integers 0-999 ("3" -> "three").

Words embedded in identifier-looking context (camelCase, dotted, snake_case,
call syntax, emails) are never rewritten, so inline code survives even
without backticks.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .errors import InputError
from .textproc import DATA_DIR, split_code_spans

_MENTION = re.compile(r"(?<![\w.\-])@[A-Za-z][\w.\-]*,?[ \t]*")
# A standalone integer: not glued to word chars, identifiers, decimals,
# ranges or @-handles on either side.
_NUMBER = re.compile(r"(?<![\w.\-@])(\d{1,3})(?![\w\-@])(?!\.\w)")

_UNITS = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
]
_TENS = ["", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"]


@dataclass(frozen=True)
class RefinementRules:
    pronoun_map: dict[str, str]
    contraction_map: dict[str, str]


def _read_pairs(path: Path) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            key, value = line.split("\t")
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: expected 'word<TAB>replacement'") from exc
        pairs[key.lower()] = value
    return pairs


def load_rules(data_dir: str | Path | None = None) -> RefinementRules:
    base = (Path(data_dir) if data_dir is not None else DATA_DIR) / "refine"
    return RefinementRules(
        pronoun_map=_read_pairs(base / "pronouns.txt"),
        contraction_map=_read_pairs(base / "contractions.txt"),
    )


def number_to_words(n: int) -> str:
    """English words for integers 0-999."""
    if not 0 <= n <= 999:
        raise ValueError(f"number out of range: {n}")
    if n < 20:
        return _UNITS[n]
    if n < 100:
        tens, unit = divmod(n, 10)
        return _TENS[tens] + ("-" + _UNITS[unit] if unit else "")
    hundreds, rest = divmod(n, 100)
    words = _UNITS[hundreds] + " hundred"
    return words + (" " + number_to_words(rest) if rest else "")


def _match_case(replacement: str, original: str) -> str:
    if original[:1].isupper():
        return replacement[:1].upper() + replacement[1:]
    return replacement


@lru_cache(maxsize=None)
def _contraction_pattern(contraction: str) -> re.Pattern:
    return re.compile(
        r"\b" + re.escape(contraction).replace(r"'", "['’]") + r"\b",
        re.IGNORECASE,
    )


@lru_cache(maxsize=None)
def _pronoun_pattern(words: tuple[str, ...]) -> re.Pattern:
    alternation = "|".join(sorted(map(re.escape, words), key=len, reverse=True))
    # Whole words only; skip dotted/call/contraction/@-glued contexts
    # (camelCase and snake_case never match because \b needs a non-word char).
    return re.compile(
        rf"(?<![\w.@])\b({alternation})\b(?!['’]?\w)(?!\.\w)(?![(@])",
        re.IGNORECASE,
    )


def _strip_mentions(chunk: str) -> str:
    # To a fixpoint: removing "@Name " can glue a leftover "@" onto the next
    # word and form a new mention, which a single pass would leave behind.
    while True:
        stripped = _MENTION.sub("", chunk)
        if stripped == chunk:
            return stripped
        chunk = stripped


def refine_comment(text: str, rules: RefinementRules) -> str:
    out: list[str] = []
    pronouns = _pronoun_pattern(tuple(sorted(rules.pronoun_map)))
    for chunk, is_code in split_code_spans(text):
        if is_code:
            out.append(chunk)
            continue
        chunk = _strip_mentions(chunk)
        for contraction, expansion in rules.contraction_map.items():
            chunk = _contraction_pattern(contraction).sub(
                lambda m, e=expansion: _match_case(e, m.group(0)), chunk
            )
        # .get with fallback: IGNORECASE can match exotic casings (e.g. U+0130)
        # whose lower() is not a map key; leave those alone.
        chunk = pronouns.sub(
            lambda m: _match_case(
                rules.pronoun_map.get(m.group(1).lower(), m.group(1)), m.group(1)
            ),
            chunk,
        )
        chunk = _NUMBER.sub(lambda m: number_to_words(int(m.group(1))), chunk)
        out.append(chunk)
    return "".join(out)
