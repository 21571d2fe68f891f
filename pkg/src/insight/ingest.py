"""Parse Q&A data-dump rows into the domain model and persist an index.

Input is either the public data-dump XML row schema (``Posts.xml`` /
``Comments.xml``, one ``<row .../>`` per line) or JSON-lines files with the
same attribute names (``posts.jsonl`` / ``comments.jsonl``), which keeps
fixtures hand-writable.  The resulting index is written as JSON-lines plus a
manifest and is immutable once built.
"""
from __future__ import annotations

import hashlib
import html.parser
import json
import logging
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import IndexUnavailableError, InputError
from .textproc import StopLists, domain_for_tags, load_stop_lists, tokenize

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

#: Characters counted as "code-like" by the false-positive filter.
CODE_CHARS = frozenset(';{}()=<>[].&|+-*/"')

FILTER_PROFILES = ("none", "api-study", "gold-style")


# --------------------------------------------------------------------------
# domain records


@dataclass
class QuestionRecord:
    id: int
    title: str
    view_count: int
    tags: list[str]
    body_html: str


@dataclass
class CodeSegment:
    id: str
    answer_id: int
    ordinal: int
    raw_text: str
    line_count: int
    tokens: Counter = field(default_factory=Counter)


@dataclass
class AnswerRecord:
    id: int
    question_id: int
    is_accepted: bool
    score: int
    body_html: str
    segments: list[CodeSegment] = field(default_factory=list)


@dataclass
class DiscussionComment:
    id: int
    post_id: int
    author_id: int
    author_display_name: str
    text: str
    score: int
    sequence_index: int


# --------------------------------------------------------------------------
# row parsing


def _to_int(value, default: int | None = None) -> int | None:
    if value is None or value == "":
        return default
    try:
        return int(value)
    except (TypeError, ValueError):
        return default


def parse_tags(raw: str) -> list[str]:
    """Parse dump tag syntax: ``<java><android>`` or ``|java|android|``."""
    if not raw:
        return []
    if "<" in raw:
        import re

        return [t.lower() for t in re.findall(r"<([^<>]+)>", raw)]
    if "|" in raw:
        return [t.lower() for t in raw.split("|") if t]
    return [t.lower() for t in raw.replace(",", " ").split()]


@dataclass
class PostParseResult:
    questions: list[QuestionRecord]
    answers: list[AnswerRecord]
    malformed_rows: int = 0
    orphan_answers: int = 0


def parse_posts(rows: Iterable[Mapping[str, object]]) -> PostParseResult:
    """Turn post rows into question/answer records.

    An answer is accepted iff its Id equals its parent's AcceptedAnswerId;
    answers whose ParentId resolves to no ingested question are dropped as
    orphans.  Rows without a usable Id/PostTypeId are skipped and counted.
    """
    questions: dict[int, QuestionRecord] = {}
    accepted_of: dict[int, int | None] = {}
    pending: list[tuple[int, int | None, int, str]] = []
    malformed = 0
    for row in rows:
        pid = _to_int(row.get("Id"))
        ptype = _to_int(row.get("PostTypeId"))
        if pid is None or ptype is None:
            malformed += 1
            continue
        if ptype == 1:
            questions[pid] = QuestionRecord(
                id=pid,
                title=str(row.get("Title", "") or ""),
                view_count=max(0, _to_int(row.get("ViewCount"), 0)),
                tags=parse_tags(str(row.get("Tags", "") or "")),
                body_html=str(row.get("Body", "") or ""),
            )
            accepted_of[pid] = _to_int(row.get("AcceptedAnswerId"))
        elif ptype == 2:
            pending.append(
                (pid, _to_int(row.get("ParentId")), _to_int(row.get("Score"), 0), str(row.get("Body", "") or ""))
            )
        # other post types (wiki, tag info, ...) are ignored
    answers = []
    orphans = 0
    for pid, parent, score, body in pending:
        if parent is None or parent not in questions:
            orphans += 1
            continue
        answers.append(
            AnswerRecord(
                id=pid,
                question_id=parent,
                is_accepted=accepted_of.get(parent) == pid,
                score=score,
                body_html=body,
            )
        )
    if malformed:
        log.warning("skipped %d malformed post rows", malformed)
    questions_list = sorted(questions.values(), key=lambda q: q.id)
    answers.sort(key=lambda a: a.id)
    return PostParseResult(questions_list, answers, malformed, orphans)


@dataclass
class CommentParseResult:
    comments: list[DiscussionComment]
    malformed_rows: int = 0


def parse_comments(rows: Iterable[Mapping[str, object]]) -> CommentParseResult:
    """Turn comment rows into records grouped per post.

    Within one post the records are ordered by ascending comment Id, which
    stands in for posting order, and get a contiguous ``sequence_index``.
    A missing Score means zero votes.
    """
    per_post: dict[int, list[tuple[int, Mapping[str, object]]]] = {}
    malformed = 0
    for row in rows:
        cid = _to_int(row.get("Id"))
        post = _to_int(row.get("PostId"))
        if cid is None or post is None:
            malformed += 1
            continue
        per_post.setdefault(post, []).append((cid, row))
    comments: list[DiscussionComment] = []
    for post in sorted(per_post):
        for seq, (cid, row) in enumerate(sorted(per_post[post], key=lambda item: item[0])):
            comments.append(
                DiscussionComment(
                    id=cid,
                    post_id=post,
                    author_id=_to_int(row.get("UserId"), -1),
                    author_display_name=str(row.get("UserDisplayName", "") or ""),
                    text=str(row.get("Text", "") or ""),
                    score=max(0, _to_int(row.get("Score"), 0)),
                    sequence_index=seq,
                )
            )
    if malformed:
        log.warning("skipped %d malformed comment rows", malformed)
    return CommentParseResult(comments, malformed)


# --------------------------------------------------------------------------
# code-segment extraction


class _CodeBlockParser(html.parser.HTMLParser):
    """Collect the inner text of <pre><code> blocks, in document order."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.blocks: list[str] = []
        self._pre_depth = 0
        self._capturing = False
        self._buffer: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag == "pre":
            self._pre_depth += 1
        elif tag == "code" and self._pre_depth > 0 and not self._capturing:
            self._capturing = True
            self._buffer = []

    def handle_endtag(self, tag):
        if tag == "pre":
            self._pre_depth = max(0, self._pre_depth - 1)
        elif tag == "code" and self._capturing:
            self._capturing = False
            self.blocks.append("".join(self._buffer))

    def handle_data(self, data):
        if self._capturing:
            self._buffer.append(data)


def extract_code_blocks(body_html: str) -> list[str]:
    """Inner text of every ``<pre><code>`` block; inline ``<code>`` is ignored."""
    parser = _CodeBlockParser()
    try:
        parser.feed(body_html)
        parser.close()
    except Exception:  # parser is already lenient; keep whatever was collected
        log.warning("best-effort HTML scan: body could not be fully parsed")
    return parser.blocks


@dataclass
class SegmentFilterConfig:
    """Thresholds for discarding non-code <pre><code> blocks."""

    min_lines: int = 2
    min_code_char_ratio: float = 0.02
    min_identifier_token_share: float = 0.10


def count_lines(text: str) -> int:
    return sum(1 for line in text.splitlines() if line.strip())


def _looks_like_identifier(token: str) -> bool:
    import re

    return bool(
        re.search(r"[a-z][A-Z]", token)
        or re.search(r"\w_\w", token)
        or re.search(r"\w\.\w", token)
        or token.endswith("()")
    )


def is_false_positive(block: str, cfg: SegmentFilterConfig | None = None) -> bool:
    """True when a <pre><code> block does not look like code.

    A block is rejected if it has fewer than ``min_lines`` non-empty lines,
    or if its code-character ratio is below ``min_code_char_ratio`` while
    fewer than ``min_identifier_token_share`` of its whitespace tokens look
    like identifiers.
    """
    cfg = cfg or SegmentFilterConfig()
    if count_lines(block) < cfg.min_lines:
        return True
    ratio = sum(1 for c in block if c in CODE_CHARS) / max(1, len(block))
    if ratio >= cfg.min_code_char_ratio:
        return False
    tokens = block.split()
    if not tokens:
        return True
    identifier_share = sum(1 for t in tokens if _looks_like_identifier(t)) / len(tokens)
    return identifier_share < cfg.min_identifier_token_share


def extract_code_segments(
    body_html: str,
    answer_id: int = 0,
    filter_cfg: SegmentFilterConfig | None = None,
    stop: StopLists | None = None,
) -> list[CodeSegment]:
    """Extract the code segments of one answer body, in document order.

    Ordinals are assigned after false-positive filtering; tokens are computed
    only when stop lists are supplied.
    """
    segments = []
    for raw in extract_code_blocks(body_html):
        if is_false_positive(raw, filter_cfg):
            continue
        ordinal = len(segments)
        segments.append(
            CodeSegment(
                id=f"{answer_id}:{ordinal}",
                answer_id=answer_id,
                ordinal=ordinal,
                raw_text=raw,
                line_count=count_lines(raw),
                tokens=tokenize(raw, "code", stop) if stop is not None else Counter(),
            )
        )
    return segments


# --------------------------------------------------------------------------
# the index


@dataclass
class FilterThresholds:
    min_view_count: int = 500
    min_segment_lines: int = 3
    min_comment_count: int = 10
    min_total_code_lines: int = 10
    gold_candidate_min_score: int = 5


@dataclass
class CorpusIndex:
    questions: dict[int, QuestionRecord] = field(default_factory=dict)
    answers: dict[int, AnswerRecord] = field(default_factory=dict)
    comments: dict[int, list[DiscussionComment]] = field(default_factory=dict)
    profile: str = "none"
    dump_hash: str = ""
    thresholds: FilterThresholds = field(default_factory=FilterThresholds)

    def answer_comments(self, answer_id: int) -> list[DiscussionComment]:
        return self.comments.get(answer_id, [])

    def get_comment(self, comment_id: int) -> DiscussionComment | None:
        if not hasattr(self, "_comment_lookup"):
            self._comment_lookup = {
                c.id: c for thread in self.comments.values() for c in thread
            }
        return self._comment_lookup.get(comment_id)

    def gold_candidates(self) -> set[int]:
        """Comment ids marked as gold candidates under the gold-style profile."""
        if self.profile != "gold-style":
            return set()
        threshold = self.thresholds.gold_candidate_min_score
        return {
            c.id
            for thread in self.comments.values()
            for c in thread
            if c.score >= threshold
        }

    def counts(self) -> dict[str, int]:
        return {
            "questions": len(self.questions),
            "answers": len(self.answers),
            "segments": sum(len(a.segments) for a in self.answers.values()),
            "comments": sum(len(t) for t in self.comments.values()),
        }

    # -- persistence --------------------------------------------------------

    def save(self, index_dir: str | Path) -> None:
        index_dir = Path(index_dir)
        index_dir.mkdir(parents=True, exist_ok=True)
        _write_jsonl(
            index_dir / "questions.jsonl",
            (
                {
                    "Id": q.id,
                    "Title": q.title,
                    "ViewCount": q.view_count,
                    "Tags": q.tags,
                    "Body": q.body_html,
                }
                for q in sorted(self.questions.values(), key=lambda q: q.id)
            ),
        )
        _write_jsonl(
            index_dir / "answers.jsonl",
            (
                {
                    "Id": a.id,
                    "QuestionId": a.question_id,
                    "IsAccepted": a.is_accepted,
                    "Score": a.score,
                    "Body": a.body_html,
                }
                for a in sorted(self.answers.values(), key=lambda a: a.id)
            ),
        )
        _write_jsonl(
            index_dir / "segments.jsonl",
            (
                {
                    "Id": s.id,
                    "AnswerId": s.answer_id,
                    "Ordinal": s.ordinal,
                    "RawText": s.raw_text,
                    "LineCount": s.line_count,
                    "Tokens": dict(sorted(s.tokens.items())),
                }
                for a in sorted(self.answers.values(), key=lambda a: a.id)
                for s in a.segments
            ),
        )
        _write_jsonl(
            index_dir / "comments.jsonl",
            (
                {
                    "Id": c.id,
                    "PostId": c.post_id,
                    "UserId": c.author_id,
                    "UserDisplayName": c.author_display_name,
                    "Text": c.text,
                    "Score": c.score,
                    "SequenceIndex": c.sequence_index,
                }
                for post in sorted(self.comments)
                for c in self.comments[post]
            ),
        )
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "dump_hash": self.dump_hash,
            "filter_profile": self.profile,
            "counts": self.counts(),
        }
        (index_dir / "manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, index_dir: str | Path) -> "CorpusIndex":
        index_dir = Path(index_dir)
        manifest_path = index_dir / "manifest.json"
        if not manifest_path.exists():
            raise IndexUnavailableError(
                f"no index at {index_dir} (missing manifest.json); run `insight ingest` first"
            )
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
            index = cls(
                profile=manifest.get("filter_profile", "none"),
                dump_hash=manifest.get("dump_hash", ""),
            )
            for row in _read_jsonl(index_dir / "questions.jsonl"):
                index.questions[row["Id"]] = QuestionRecord(
                    id=row["Id"],
                    title=row["Title"],
                    view_count=row["ViewCount"],
                    tags=list(row["Tags"]),
                    body_html=row["Body"],
                )
            for row in _read_jsonl(index_dir / "answers.jsonl"):
                index.answers[row["Id"]] = AnswerRecord(
                    id=row["Id"],
                    question_id=row["QuestionId"],
                    is_accepted=row["IsAccepted"],
                    score=row["Score"],
                    body_html=row["Body"],
                )
            for row in _read_jsonl(index_dir / "segments.jsonl"):
                index.answers[row["AnswerId"]].segments.append(
                    CodeSegment(
                        id=row["Id"],
                        answer_id=row["AnswerId"],
                        ordinal=row["Ordinal"],
                        raw_text=row["RawText"],
                        line_count=row["LineCount"],
                        tokens=Counter(row["Tokens"]),
                    )
                )
            for row in _read_jsonl(index_dir / "comments.jsonl"):
                index.comments.setdefault(row["PostId"], []).append(
                    DiscussionComment(
                        id=row["Id"],
                        post_id=row["PostId"],
                        author_id=row["UserId"],
                        author_display_name=row["UserDisplayName"],
                        text=row["Text"],
                        score=row["Score"],
                        sequence_index=row["SequenceIndex"],
                    )
                )
        except (KeyError, ValueError, OSError) as exc:
            raise IndexUnavailableError(f"index at {index_dir} is unreadable: {exc}") from exc
        for a in index.answers.values():
            a.segments.sort(key=lambda s: s.ordinal)
        for thread in index.comments.values():
            thread.sort(key=lambda c: c.sequence_index)
        return index


def _write_jsonl(path: Path, rows: Iterable[Mapping[str, object]]) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def _read_jsonl(path: Path) -> Iterator[dict]:
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


# --------------------------------------------------------------------------
# corpus filters


def apply_corpus_filters(
    index: CorpusIndex, profile: str, thresholds: FilterThresholds | None = None
) -> CorpusIndex:
    """Return a new index restricted to answers passing the profile's filters.

    ``api-study`` keeps answers whose question was viewed at least
    ``min_view_count`` times, that have a segment of at least
    ``min_segment_lines`` lines and at least ``min_comment_count`` comments.
    ``gold-style`` additionally requires ``min_total_code_lines`` total code
    lines and marks comments scoring ``gold_candidate_min_score`` or more as
    gold candidates.  ``none`` keeps everything.
    """
    if profile not in FILTER_PROFILES:
        raise InputError(f"unknown filter profile {profile!r}; expected one of {FILTER_PROFILES}")
    th = thresholds or FilterThresholds()

    def keep(answer: AnswerRecord) -> bool:
        if profile == "none":
            return True
        question = index.questions.get(answer.question_id)
        if question is None or question.view_count < th.min_view_count:
            return False
        if not any(s.line_count >= th.min_segment_lines for s in answer.segments):
            return False
        if len(index.answer_comments(answer.id)) < th.min_comment_count:
            return False
        if profile == "gold-style":
            if sum(s.line_count for s in answer.segments) < th.min_total_code_lines:
                return False
        return True

    kept_answers = {aid: a for aid, a in index.answers.items() if keep(a)}
    if profile == "none":
        kept_questions = dict(index.questions)
    else:
        referenced = {a.question_id for a in kept_answers.values()}
        kept_questions = {qid: q for qid, q in index.questions.items() if qid in referenced}
    kept_comments = {aid: list(index.comments.get(aid, [])) for aid in kept_answers}
    return CorpusIndex(
        questions=kept_questions,
        answers=kept_answers,
        comments=kept_comments,
        profile=profile,
        dump_hash=index.dump_hash,
        thresholds=th,
    )


# --------------------------------------------------------------------------
# the ingestion pipeline


@dataclass
class IngestSummary:
    questions: int = 0
    answers: int = 0
    comments: int = 0
    segments: int = 0
    segments_seen: int = 0
    segments_discarded: int = 0
    orphan_answers: int = 0
    malformed_rows: int = 0
    dropped_comments: int = 0

    @property
    def discarded_pct(self) -> float:
        if self.segments_seen == 0:
            return 0.0
        return 100.0 * self.segments_discarded / self.segments_seen


def build_index(
    post_rows: Iterable[Mapping[str, object]],
    comment_rows: Iterable[Mapping[str, object]],
    profile: str = "api-study",
    *,
    thresholds: FilterThresholds | None = None,
    segment_filter: SegmentFilterConfig | None = None,
    data_dir: str | Path | None = None,
    dump_hash: str = "",
) -> tuple[CorpusIndex, IngestSummary]:
    """Assemble and filter an index from already-loaded rows."""
    posts = parse_posts(post_rows)
    parsed_comments = parse_comments(comment_rows)
    summary = IngestSummary(
        orphan_answers=posts.orphan_answers,
        malformed_rows=posts.malformed_rows + parsed_comments.malformed_rows,
    )

    index = CorpusIndex(dump_hash=dump_hash)
    for q in posts.questions:
        index.questions[q.id] = q
    stop_cache: dict[str, StopLists] = {}
    for a in posts.answers:
        question = index.questions[a.question_id]
        domain = domain_for_tags(question.tags)
        if domain not in stop_cache:
            stop_cache[domain] = load_stop_lists(domain, data_dir)
        blocks = extract_code_blocks(a.body_html)
        summary.segments_seen += len(blocks)
        a.segments = extract_code_segments(a.body_html, a.id, segment_filter, stop_cache[domain])
        summary.segments_discarded += len(blocks) - len(a.segments)
        index.answers[a.id] = a
    for c in parsed_comments.comments:
        if c.post_id in index.answers:
            index.comments.setdefault(c.post_id, []).append(c)
        else:
            summary.dropped_comments += 1

    filtered = apply_corpus_filters(index, profile, thresholds)
    counts = filtered.counts()
    summary.questions = counts["questions"]
    summary.answers = counts["answers"]
    summary.comments = counts["comments"]
    summary.segments = counts["segments"]
    return filtered, summary


def _iter_xml_rows(path: Path) -> Iterator[dict]:
    """Yield attribute dicts for each ``<row .../>`` line, skipping bad rows."""
    bad = 0
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line.startswith("<row"):
                continue
            try:
                yield dict(ET.fromstring(line).attrib)
            except ET.ParseError:
                bad += 1
    if bad:
        log.warning("%s: skipped %d unparseable rows", path.name, bad)


def _load_rows(input_dir: Path, xml_name: str, jsonl_name: str) -> tuple[list[dict], Path]:
    xml_path = input_dir / xml_name
    jsonl_path = input_dir / jsonl_name
    if xml_path.exists():
        return list(_iter_xml_rows(xml_path)), xml_path
    if jsonl_path.exists():
        return list(_read_jsonl(jsonl_path)), jsonl_path
    raise InputError(f"input not found: neither {xml_path} nor {jsonl_path} exists")


def ingest_dump(
    input_dir: str | Path,
    index_dir: str | Path,
    profile: str = "api-study",
    *,
    thresholds: FilterThresholds | None = None,
    segment_filter: SegmentFilterConfig | None = None,
    data_dir: str | Path | None = None,
) -> IngestSummary:
    """Read a dump directory, build the filtered index and persist it."""
    input_dir = Path(input_dir)
    post_rows, posts_path = _load_rows(input_dir, "Posts.xml", "posts.jsonl")
    comment_rows, comments_path = _load_rows(input_dir, "Comments.xml", "comments.jsonl")
    digest = hashlib.sha256()
    digest.update(posts_path.read_bytes())
    digest.update(comments_path.read_bytes())
    index, summary = build_index(
        post_rows,
        comment_rows,
        profile,
        thresholds=thresholds,
        segment_filter=segment_filter,
        data_dir=data_dir,
        dump_hash=digest.hexdigest(),
    )
    index.save(index_dir)
    return summary
