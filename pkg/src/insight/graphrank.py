"""Per-answer comment interaction networks and their PageRank scores.

Nodes are the vote-filtered comments of one answer.  Edges come from the
posting sequence (consecutive comments influence each other, both ways) and
from ``@user`` references, which point from the reply back to the referenced
author's most recent earlier comment: the stimulus of the exchange.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

from .errors import ConfigError

if TYPE_CHECKING:  # pragma: no cover
    from .ingest import DiscussionComment

_MENTION = re.compile(r"(?<![\w.\-])@([A-Za-z][\w.\-]*)")

#: Minimum shared prefix for an @-name to match a display name.
MIN_NAME_PREFIX = 3


@dataclass
class PageRankConfig:
    damping: float = 0.85
    epsilon: float = 1e-6
    max_iterations: int = 100

    def __post_init__(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ConfigError(f"damping must be in (0, 1), got {self.damping}")
        if self.epsilon <= 0.0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass
class CommentGraph:
    """Directed interaction network over one answer's filtered comments."""

    nodes: list[int]
    edges: set[tuple[int, int]]
    out_degree: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_edges(cls, nodes: Sequence[int], edges: set[tuple[int, int]]) -> "CommentGraph":
        node_set = set(nodes)
        if len(node_set) != len(nodes):
            raise ValueError("duplicate node ids")
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u not in node_set or v not in node_set:
                raise ValueError(f"edge ({u}, {v}) references a non-member node")
        out_degree = {n: 0 for n in nodes}
        for u, _ in edges:
            out_degree[u] += 1
        return cls(nodes=list(nodes), edges=set(edges), out_degree=out_degree)

    def to_dot(self) -> str:
        lines = ["digraph comments {"]
        for n in self.nodes:
            lines.append(f'  "{n}";')
        for u, v in sorted(self.edges):
            lines.append(f'  "{u}" -> "{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _names_match(mention: str, display_name: str) -> bool:
    # Case-insensitive prefix match, spaces removed from the display name;
    # either side may be the truncated one.
    m = mention.lower()
    d = display_name.replace(" ", "").lower()
    if min(len(m), len(d)) < MIN_NAME_PREFIX:
        return False
    return m.startswith(d) or d.startswith(m)


def build_interaction_network(comments: Sequence["DiscussionComment"]) -> CommentGraph:
    """Build the interaction network over one answer's vote-filtered comments.

    ``comments`` must already be vote-filtered and in posting order.
    """
    ordered = sorted(comments, key=lambda c: c.sequence_index)
    edges: set[tuple[int, int]] = set()
    for a, b in zip(ordered, ordered[1:]):
        edges.add((a.id, b.id))
        edges.add((b.id, a.id))
    for i, comment in enumerate(ordered):
        for mention in _MENTION.findall(comment.text):
            mention = mention.strip("._-")
            target = None
            for earlier in reversed(ordered[:i]):
                if earlier.author_display_name and _names_match(mention, earlier.author_display_name):
                    target = earlier
                    break
            if target is not None and target.id != comment.id:
                edges.add((comment.id, target.id))
    return CommentGraph.from_edges([c.id for c in ordered], edges)


def pagerank(graph: CommentGraph, cfg: PageRankConfig | None = None) -> dict[int, float]:
    """Iterate ``PR(A) = (1 - d) + d * sum(PR(T) / C(T))`` to convergence.

    Every node starts at 1.0; iteration stops when the largest per-node
    change drops below ``epsilon`` or after ``max_iterations`` sweeps.
    Dangling nodes contribute no mass.  Scores are not normalized, so every
    converged score is at least ``1 - d``.
    """
    cfg = cfg or PageRankConfig()
    if not graph.nodes:
        return {}
    incoming: dict[int, list[int]] = {n: [] for n in graph.nodes}
    for u, v in graph.edges:
        incoming[v].append(u)
    d = cfg.damping
    scores = {n: 1.0 for n in graph.nodes}
    for _ in range(cfg.max_iterations):
        # math.fsum keeps the result independent of contribution order, so
        # relabeling nodes permutes scores bit-identically.
        new = {
            n: (1.0 - d) + d * math.fsum(scores[u] / graph.out_degree[u] for u in incoming[n])
            for n in graph.nodes
        }
        delta = max(abs(new[n] - scores[n]) for n in graph.nodes)
        scores = new
        if delta < cfg.epsilon:
            break
    return scores
