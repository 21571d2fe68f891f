"""Hand-built synthetic discussion corpora for demos and evaluation.

Real data dumps are tens of gigabytes, so the package bundles two small,
fully deterministic corpora in dump-row form:

* :func:`demo_thread` -- one widely-viewed Android answer with an eleven
  comment discussion, including ``@user`` replies, suitable for showing the
  whole pipeline end to end.
* :func:`labeled_corpus` -- thirty answers across java/android/c# with
  gold category labels, built so that popularity alone misses a chunk of
  the bug-report comments that the combined heuristics recover.

Rows carry the dump attribute names (Id, PostTypeId, Body, ...) and can be
written to ``posts.jsonl`` / ``comments.jsonl`` for the CLI.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from html import escape
from pathlib import Path

SHOWCASE_QUESTION_ID = 101
SHOWCASE_ANSWER_ID = 201

#: Comment ids of the showcase discussion, in posting order.
SHOWCASE_COMMENT_IDS = tuple(range(301, 312))

#: The three comments the full pipeline should surface, best first.
SHOWCASE_TOP3 = (307, 311, 301)

SHOWCASE_SEGMENT = """\
final AlertDialog dialog = builder.create();
input.setOnFocusChangeListener(new View.OnFocusChangeListener() {
    @Override
    public void onFocusChange(View v, boolean hasFocus) {
        if (hasFocus) {
            dialog.getWindow().setSoftInputMode(
                WindowManager.LayoutParams.SOFT_INPUT_STATE_ALWAYS_VISIBLE);
        }
    }
});
dialog.show();"""

#: An identifier-renamed copy of the showcase segment, as found in project code.
CLONE_QUERY = """\
final AlertDialog alertDialog = alert.create();
etName.setOnFocusChangeListener(new OnFocusChangeListener(){
        @Override
        public void onFocusChange(View arg0, boolean hasFocus) {
            if (hasFocus) {
                alertDialog.getWindow().setSoftInputMode(
                                WindowManager.LayoutParams.SOFT_INPUT_STATE_ALWAYS_VISIBLE);
            }
        }

    });
    alertDialog.show();"""

_SHOWCASE_COMMENTS = [
    # (score, author, text)
    (8, "Stephen", "You may need to call setSoftInputMode on the window before the dialog is "
                   "shown, otherwise the keyboard does not appear on some older devices."),
    (0, "Guido", "Thanks, this is exactly what I needed!"),
    (2, "Mike", "Works for me on Android 2.3 with a DialogFragment, thanks."),
    (0, "Ana", "+1 nice answer."),
    (3, "tidbeck", "@Stephen, right, but the dialog must be created before you can call "
                   "getWindow() on it. Calling it earlier just returns null and the code crashes."),
    (0, "Piotr", "Any update on this?"),
    (23, "Arne", "If the keyboard still does not show up, make sure the EditText inside the "
                 "dialog is focusable and call requestFocus() on it before the dialog is shown. "
                 "SOFT_INPUT_STATE_ALWAYS_VISIBLE only works while a view in the dialog window "
                 "actually holds focus."),
    (0, "Lena", "Same here."),
    (0, "Tom", "See the edited answer below."),
    (0, "Raj", "I copied this snippet into my project."),
    (10, "Priya", "Be careful: this approach is broken when the dialog is recreated after a "
                  "rotation. onFocusChange never fires a second time, so the keyboard does not "
                  "appear again until one dismisses and reopens the dialog."),
]


@dataclass
class CorpusBundle:
    post_rows: list[dict] = field(default_factory=list)
    comment_rows: list[dict] = field(default_factory=list)
    gold_rows: list[tuple[int, str, str]] = field(default_factory=list)
    expected: dict[str, int] = field(default_factory=dict)

    def merge(self, other: "CorpusBundle") -> "CorpusBundle":
        return CorpusBundle(
            post_rows=self.post_rows + other.post_rows,
            comment_rows=self.comment_rows + other.comment_rows,
            gold_rows=self.gold_rows + other.gold_rows,
            expected={
                k: self.expected.get(k, 0) + other.expected.get(k, 0)
                for k in set(self.expected) | set(other.expected)
            },
        )


def _answer_body(intro: str, main_code: str, side_code: str, prose_block: str | None = None) -> str:
    parts = [
        f"<p>{escape(intro)}</p>",
        f"<pre><code>{escape(main_code)}</code></pre>",
        "<p>You can also do it the short way:</p>",
        f"<pre><code>{escape(side_code)}</code></pre>",
    ]
    if prose_block is not None:
        parts.append(f"<pre><code>{escape(prose_block)}</code></pre>")
    return "\n".join(parts)


def _user_id(name: str) -> int:
    return 9000 + (sum(ord(c) for c in name) % 900)


def demo_thread() -> CorpusBundle:
    """The showcase soft-keyboard discussion: 11 comments, 5 with votes."""
    bundle = CorpusBundle()
    body = (
        "<p>Use an AlertDialog and ask for the soft input when the field gains focus:</p>"
        f"<pre><code>{escape(SHOWCASE_SEGMENT)}</code></pre>"
    )
    bundle.post_rows.append(
        {
            "Id": SHOWCASE_QUESTION_ID,
            "PostTypeId": 1,
            "Title": "How do you show the soft keyboard automatically when focus is on an EditText?",
            "ViewCount": 131000,
            "Tags": "<android><soft-keyboard>",
            "AcceptedAnswerId": SHOWCASE_ANSWER_ID,
            "Body": "<p>The keyboard should open as soon as the dialog shows.</p>",
        }
    )
    bundle.post_rows.append(
        {
            "Id": SHOWCASE_ANSWER_ID,
            "PostTypeId": 2,
            "ParentId": SHOWCASE_QUESTION_ID,
            "Score": 175,
            "Body": body,
        }
    )
    for cid, (score, author, text) in zip(SHOWCASE_COMMENT_IDS, _SHOWCASE_COMMENTS):
        bundle.comment_rows.append(
            {
                "Id": cid,
                "PostId": SHOWCASE_ANSWER_ID,
                "Score": score,
                "Text": text,
                "UserId": _user_id(author),
                "UserDisplayName": author,
            }
        )
    bundle.gold_rows = [(307, "C3", "android"), (311, "C4", "android")]
    bundle.expected = {
        "questions": 1,
        "answers": 1,
        "comments": len(_SHOWCASE_COMMENTS),
        "segments": 1,
        "segments_seen": 1,
        "segments_discarded": 0,
    }
    return bundle


# --------------------------------------------------------------------------
# the thirty-answer labeled corpus

_PROSE_BLOCK = (
    "First make a backup of the whole folder\n"
    "then restart the service from the control panel\n"
    "and watch the log output for a minute or two"
)

_DOMAINS = {
    "java": {
        "tags": "<java><file-io>",
        "title": "How do I read a text file into a String?",
        "view_base": 1200,
        "intro": "Read the file line by line and collect the content:",
        "main": (
            "File file = new File(dirName, fileName);\n"
            "if (!file.exists()) {\n"
            "    return null;\n"
            "}\n"
            "BufferedReader reader = new BufferedReader(new FileReader(file));\n"
            "StringBuilder builder = new StringBuilder();\n"
            "String line;\n"
            "while ((line = reader.readLine()) != null) {\n"
            "    builder.append(line);\n"
            "    builder.append('\\n');\n"
            "}\n"
            "reader.close();\n"
            "return builder.toString();"
        ),
        "side": (
            "Path path = Paths.get(dirName, fileName);\n"
            "byte[] bytes = Files.readAllBytes(path);\n"
            "return new String(bytes, StandardCharsets.UTF_8);"
        ),
        "gold_a": (
            "There is a subtle bug here: readLine drops the line terminators, so the "
            "reconstructed string is wrong whenever the file does not end with a newline. "
            "Worse, when an exception is thrown inside the loop the BufferedReader is never "
            "closed and the FileReader leaks. Wrap the close call in a finally block."
        ),
        "runner_a": (
            "Tip: use a try with resources statement for the FileReader and the "
            "BufferedReader so both get closed automatically, and pass "
            "StandardCharsets.UTF_8 explicitly instead of relying on the platform default "
            "encoding."
        ),
        "gold_b": (
            "This is broken for large files: the StringBuilder doubles its buffer and the "
            "whole content ends up in memory twice, which crashes with OutOfMemoryError. "
            "readLine also drops the terminators, so the output is wrong. Stream the file "
            "instead of collecting it."
        ),
        "f1_b": (
            "Does readLine keep the original line separators when the input file uses "
            "carriage returns?"
        ),
        "f2_b": (
            "@marta the StringBuilder grows on every append, but the reader dominates the "
            "cost for small inputs."
        ),
        "gold_c": (
            "Careful, readLine blocks forever when the stream never closes, and the loop "
            "spins on a broken connection without any timeout."
        ),
        "gold_d": (
            "You should call reader.close() inside a finally block, otherwise the file "
            "handle leaks when append throws midway."
        ),
    },
    "android": {
        "tags": "<android><sqlite>",
        "title": "How to load database rows into a ListView?",
        "view_base": 2500,
        "intro": "Query the table, collect the titles and hand them to an adapter:",
        "main": (
            "SQLiteDatabase db = helper.getReadableDatabase();\n"
            "Cursor cursor = db.query(TABLE_NOTES, columns, null, null, null, null, sortOrder);\n"
            "ArrayList<String> titles = new ArrayList<String>();\n"
            "while (cursor.moveToNext()) {\n"
            "    String title = cursor.getString(cursor.getColumnIndex(COLUMN_TITLE));\n"
            "    titles.add(title);\n"
            "}\n"
            "cursor.close();\n"
            "ArrayAdapter<String> adapter = new ArrayAdapter<String>(context, layoutId, titles);\n"
            "listView.setAdapter(adapter);"
        ),
        "side": (
            "IntentFilter filter = new IntentFilter(ACTION_SYNC_DONE);\n"
            "registerReceiver(syncReceiver, filter);\n"
            "requestSync(account, authority, extras);"
        ),
        "gold_a": (
            "There is a bug in this loop: getColumnIndex returns minus one when "
            "COLUMN_TITLE is missing and getString then crashes with an "
            "IndexOutOfBoundsException. Use getColumnIndexOrThrow instead, and move the "
            "cursor.close() into a finally block or the Cursor leaks on every exception."
        ),
        "runner_a": (
            "Tip: run the query on a background thread with a CursorLoader and swap the "
            "adapter data in onLoadFinished, the UI stays responsive for big tables that way."
        ),
        "gold_b": (
            "This leaks the Cursor whenever query throws, and calling moveToNext on the UI "
            "thread blocks the whole app for large tables. It also crashes after a rotation "
            "because the adapter keeps a stale context. Use a loader and close everything in "
            "a finally block."
        ),
        "f1_b": (
            "Does moveToNext start before the first row, or does the cursor skip the initial "
            "position here?"
        ),
        "f2_b": (
            "@marta the adapter copies the titles list anyway, so the cursor can close right "
            "after the loop."
        ),
        "gold_c": (
            "Careful: registerReceiver here leaks the receiver after onPause and the sync "
            "fires twice on rotation."
        ),
        "gold_d": (
            "You should also call cursor.close() in onDestroy, otherwise the CursorWindow "
            "leaks when the activity is recreated."
        ),
    },
    "csharp": {
        "tags": "<c#><linq>",
        "title": "How to count grouped CSV values with LINQ?",
        "view_base": 900,
        "intro": "Group the first column and count per key:",
        "main": (
            "var lines = File.ReadAllLines(path);\n"
            "var counts = lines\n"
            "    .Where(line => !string.IsNullOrEmpty(line))\n"
            "    .Select(line => line.Split(','))\n"
            "    .GroupBy(parts => parts[0])\n"
            "    .ToDictionary(group => group.Key, group => group.Count());\n"
            "foreach (var pair in counts.OrderByDescending(p => p.Value))\n"
            "{\n"
            "    Console.WriteLine(\"{0}: {1}\", pair.Key, pair.Value);\n"
            "}"
        ),
        "side": (
            "using (var stream = new StreamReader(path))\n"
            "{\n"
            "    return stream.ReadToEnd();\n"
            "}"
        ),
        "gold_a": (
            "This is wrong for quoted fields: Split on a comma breaks any value containing "
            "an embedded comma, so the GroupBy counts are wrong and the ToDictionary call "
            "throws on duplicate keys when two lines differ only by quoting. Use a real CSV "
            "parser instead."
        ),
        "runner_a": (
            "Tip: ReadLines streams lazily while ReadAllLines loads the whole file at once, "
            "switching saves a lot of memory for big inputs, and "
            "StringSplitOptions.RemoveEmptyEntries drops the blank fields for free."
        ),
        "gold_b": (
            "ToDictionary crashes with an ArgumentException when two groups share a key "
            "after trimming, and ReadAllLines fails on files locked by another process. "
            "Both failures stay silent until production. Guard the GroupBy with a key "
            "selector that trims consistently."
        ),
        "f1_b": (
            "Does GroupBy preserve the first appearance order of the keys in this query?"
        ),
        "f2_b": (
            "@marta the Split call allocates per line, but the dictionary lookup dominates "
            "for short files."
        ),
        "gold_c": (
            "Careful: OrderByDescending buffers the whole sequence, so the memory doubles "
            "right before the loop."
        ),
        "gold_d": (
            "You should dispose the enumerator from ReadLines with a using block, otherwise "
            "the file handle leaks when the loop exits early."
        ),
    },
}

_AUTHORS = (
    "stefan", "maria", "collin", "priya", "tomas", "marta",
    "elena", "jakob", "nadia", "oscar", "irene", "sofia",
)

_CHATTER = (
    "Thanks, this helped a lot!",
    "+1",
    "Same problem here.",
    "Any update on this?",
    "Glad it helped.",
    "It compiles now.",
    "See the edited answer.",
    "Got it working now.",
    "Same here.",
    "Finally works on my machine.",
)


def _thread(bundle: CorpusBundle, qid: int, domain: str, j: int,
            comments: list[tuple[int, str, str]], golds: list[tuple[int, str]],
            prose: bool) -> None:
    aid = qid + 1
    materials = _DOMAINS[domain]
    bundle.post_rows.append(
        {
            "Id": qid,
            "PostTypeId": 1,
            "Title": materials["title"],
            "ViewCount": materials["view_base"] + 37 * j,
            "Tags": materials["tags"],
            "AcceptedAnswerId": aid,
            "Body": "<p>Looking for the idiomatic way to do this.</p>",
        }
    )
    bundle.post_rows.append(
        {
            "Id": aid,
            "PostTypeId": 2,
            "ParentId": qid,
            "Score": 40 + j,
            "Body": _answer_body(
                materials["intro"],
                materials["main"],
                materials["side"],
                _PROSE_BLOCK if prose else None,
            ),
        }
    )
    for seq, (score, author, text) in enumerate(comments, start=1):
        cid = aid * 100 + seq
        bundle.comment_rows.append(
            {
                "Id": cid,
                "PostId": aid,
                "Score": score,
                "Text": text,
                "UserId": _user_id(author),
                "UserDisplayName": author,
            }
        )
    for seq, category in golds:
        bundle.gold_rows.append((aid * 100 + seq, category, domain))
    bundle.expected["questions"] += 1
    bundle.expected["answers"] += 1
    bundle.expected["comments"] += len(comments)
    bundle.expected["segments"] += 2
    bundle.expected["segments_seen"] += 3 if prose else 2
    bundle.expected["segments_discarded"] += 1 if prose else 0


def labeled_corpus() -> CorpusBundle:
    """Thirty gold-labeled answers; see the module docstring for the design."""
    bundle = CorpusBundle(
        expected={
            "questions": 0,
            "answers": 0,
            "comments": 0,
            "segments": 0,
            "segments_seen": 0,
            "segments_discarded": 0,
        }
    )
    for di, domain in enumerate(("java", "android", "csharp")):
        spec = _DOMAINS[domain]
        a = _AUTHORS
        c = _CHATTER
        for j in range(10):
            qid = 1000 + di * 1000 + j * 10
            prose = j in (0, 5)
            if j < 4:  # top-voted bug report plus a tip right behind it
                comments = [
                    (0, a[0], c[0]),
                    (9, a[1], spec["gold_a"]),
                    (0, a[2], c[1]),
                    (8, a[3], spec["runner_a"]),
                    (0, a[4], c[2]),
                    (3, a[5], "Works for me, thanks!"),
                    (0, a[6], c[3]),
                    (1, a[7], "Does this handle the empty case too?"),
                    (0, a[8], c[4]),
                    (0, a[9], c[5]),
                    (0, a[10], c[6]),
                    (0, a[11], c[7]),
                ]
                golds = [(2, "C4"), (4, "C3")]
            elif j < 6:  # top-voted tip
                comments = [
                    (2, a[0], "Works like a charm, thanks!"),
                    (7, a[1], spec["gold_d"]),
                    (0, a[2], c[1]),
                    (3, a[3], "Great, exactly what I was looking for."),
                    (0, a[4], c[2]),
                    (1, a[5], "Is the second snippet faster for small files?"),
                    (0, a[6], c[3]),
                    (0, a[7], c[8]),
                    (0, a[8], c[5]),
                    (0, a[9], c[9]),
                    (0, a[10], c[6]),
                ]
                golds = [(2, "C3")]
            elif j < 9:  # bug report buried under grateful chatter
                comments = [
                    (9, a[0], "Thanks, works great!"),
                    (0, a[1], c[1]),
                    (8, a[2], "Awesome, this is perfect!"),
                    (0, a[3], c[4]),
                    (7, a[4], "Nice one, saved my day. Thanks!"),
                    (2, "marta", spec["gold_b"]),
                    (0, a[6], c[2]),
                    (6, a[7], "Best answer here, thanks a lot!"),
                    (1, a[8], spec["f1_b"]),
                    (0, a[9], c[3]),
                    (1, a[10], spec["f2_b"]),
                    (0, a[11], c[5]),
                ]
                golds = [(6, "C4")]
            else:  # insightful but unvoted: stays unretrievable
                comments = [
                    (2, a[0], c[0]),
                    (0, a[1], spec["gold_c"]),
                    (1, a[2], "Works for me."),
                    (0, a[3], c[2]),
                    (0, a[4], c[3]),
                    (1, a[5], "Does it also work on the latest version?"),
                    (0, a[6], c[8]),
                    (0, a[7], c[5]),
                    (0, a[8], c[6]),
                    (0, a[9], c[9]),
                ]
                golds = [(2, "C4")]
            _thread(bundle, qid, domain, j, comments, golds, prose)
    return bundle


def demo_corpus() -> CorpusBundle:
    """Showcase thread plus the labeled corpus, as one dump."""
    return demo_thread().merge(labeled_corpus())


# --------------------------------------------------------------------------
# writers


def write_dump(directory: str | Path, bundle: CorpusBundle) -> None:
    """Write posts.jsonl / comments.jsonl / gold.csv for the CLI."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with (directory / "posts.jsonl").open("w", encoding="utf-8") as fh:
        for row in bundle.post_rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")
    with (directory / "comments.jsonl").open("w", encoding="utf-8") as fh:
        for row in bundle.comment_rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")
    with (directory / "gold.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["comment_id", "category", "domain"])
        writer.writerows(bundle.gold_rows)
