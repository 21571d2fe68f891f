import string
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from insight.errors import ConfigError
from insight.textproc import (
    cosine_similarity,
    domain_for_tags,
    load_stop_lists,
    resolve_domain,
    split_code_spans,
    split_identifier,
    tokenize,
)

# -- split_identifier -------------------------------------------------------


def test_split_dotted_identifier():
    assert split_identifier("java.util.HashMap") == ["java", "util", "hashmap", "hash", "map"]


def test_split_single_letter():
    assert split_identifier("x") == ["x"]


def test_split_long_camel_case():
    assert split_identifier("setOnFocusChangeListener") == [
        "setonfocuschangelistener", "set", "on", "focus", "change", "listener",
    ]


def test_split_snake_case_emits_whole():
    assert split_identifier("parse_args") == ["parseargs", "parse", "args"]


def test_split_digits_are_boundaries_and_dropped():
    assert split_identifier("sha256sum") == ["sha256sum", "sha", "sum"]
    assert split_identifier("42") == []
    assert split_identifier("2.3") == []


_camel_part = st.lists(
    st.text(alphabet="abcdefghij", min_size=1, max_size=5), min_size=1, max_size=4
).map(lambda parts: parts[0] + "".join(p.capitalize() for p in parts[1:]))


@given(_camel_part)
def test_camel_subtokens_concatenate_back(part):
    subs = split_identifier(part)
    whole = subs[1:] if len(subs) > 1 else subs
    assert "".join(whole) == part.lower()


# -- tokenize ---------------------------------------------------------------


def test_tokenize_code_removes_keywords_and_short_tokens(stop_java):
    assert dict(tokenize("if (x) { return count; }", "code", stop_java)) == {"count": 1}


def test_tokenize_prose_stop_words_only(stop_java):
    assert dict(tokenize("the the the", "prose", stop_java)) == {}


def test_tokenize_prose_splits_identifiers(stop_java):
    got = dict(tokenize("drawableMap contains the image", "prose", stop_java))
    assert got == {"drawablemap": 1, "drawable": 1, "map": 1, "contains": 1, "image": 1}


def test_tokenize_prose_keeps_keywords(stop_java):
    # keyword removal applies to code only
    assert tokenize("return early", "prose", stop_java)["return"] == 1
    assert "return" not in tokenize("return early", "code", stop_java)


def test_tokenize_rejects_unknown_mode(stop_java):
    with pytest.raises(ValueError):
        tokenize("x", "words", stop_java)


@given(st.lists(st.sampled_from(["fooBar", "baz.qux", "alpha", "the", "if", "x", "count42"]), max_size=12))
def test_tokenize_order_independent(stop_java, words):
    direct = tokenize(" ".join(words), "code", stop_java)
    reversed_ = tokenize(" ".join(reversed(words)), "code", stop_java)
    assert direct == reversed_


# -- cosine similarity ------------------------------------------------------


def test_cosine_identical_multisets():
    a = Counter({"alpha": 2, "beta": 3})
    assert cosine_similarity(a, a) == 1.0


def test_cosine_disjoint_vocabularies():
    assert cosine_similarity({"alpha": 1}, {"beta": 4}) == 0.0


def test_cosine_half_overlap_exact():
    assert cosine_similarity({"x": 1, "y": 1}, {"x": 1, "z": 1}) == 0.5


def test_cosine_empty_side():
    assert cosine_similarity({}, {"x": 1}) == 0.0
    assert cosine_similarity({"x": 1}, {}) == 0.0


_multiset = st.dictionaries(
    st.text(alphabet="abcdef", min_size=1, max_size=3),
    st.integers(min_value=1, max_value=40),
    max_size=8,
)


@given(_multiset, _multiset)
def test_cosine_symmetric_and_bounded(a, b):
    ab = cosine_similarity(a, b)
    assert ab == cosine_similarity(b, a)
    assert 0.0 <= ab <= 1.0


@given(_multiset, _multiset, st.integers(min_value=1, max_value=9))
def test_cosine_scaling_invariant_exactly(a, b, c):
    scaled = {t: v * c for t, v in b.items()}
    assert cosine_similarity(a, scaled) == cosine_similarity(a, b)


# -- misc -------------------------------------------------------------------


def test_domain_resolution():
    assert resolve_domain("C#") == "csharp"
    assert domain_for_tags(["java", "android"]) == "android"
    assert domain_for_tags(["c#", "linq"]) == "csharp"
    assert domain_for_tags(["python"]) == "java"
    with pytest.raises(ConfigError):
        resolve_domain("cobol")


def test_stop_lists_have_expected_members(stop_java):
    assert "the" in stop_java.english_stop_words
    assert "while" in stop_java.programming_keywords
    assert set(string.punctuation) <= set(stop_java.punctuation_tokens)


def test_split_code_spans_round_trip():
    text = "see `foo. bar` ok. done `x`"
    parts = split_code_spans(text)
    assert "".join(chunk for chunk, _ in parts) == text
    assert [chunk for chunk, is_code in parts if is_code] == ["`foo. bar`", "`x`"]
