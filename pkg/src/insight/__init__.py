"""Mining engine for insightful review comments on code segments.

Ingests Q&A data-dump rows, ranks discussion comments with five
heuristics (popularity, word count, relevance, comment rank, sentiment),
recommends the top comments for a code segment, and ships an LDA-based
topic analysis of code-segment corpora.
"""

__version__ = "0.1.0"
