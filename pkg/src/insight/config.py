"""Flat key=value configuration with environment and CLI overrides.

Precedence, lowest to highest: built-in defaults, config file, ``INSIGHT_*``
environment variables (paths only), command-line flags.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import ConfigError
from .graphrank import PageRankConfig
from .ranker import HEURISTICS, RankerConfig
from .topics import TopicModelConfig

ENV_PREFIX = "INSIGHT_"


@dataclass
class AppConfig:
    index_dir: Path = Path("index")
    data_dir: Path | None = None
    profile: str = "api-study"
    jobs: int = 0  # 0 means one worker per logical core
    sentiment_provider: str = "lexicon"
    tau: float = 0.3
    top_n: int = 5
    use_tfidf: bool = False
    ranker: RankerConfig = field(default_factory=RankerConfig)
    pagerank: PageRankConfig = field(default_factory=PageRankConfig)
    topics: TopicModelConfig = field(default_factory=TopicModelConfig)

    def effective_jobs(self) -> int:
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}")


def _parse_heuristics(raw: str) -> tuple[str, ...]:
    parts = tuple(p.strip().upper() for p in raw.split(",") if p.strip())
    unknown = set(parts) - set(HEURISTICS)
    if unknown:
        raise ConfigError(f"unknown heuristics {sorted(unknown)}; expected subset of {HEURISTICS}")
    return parts


#: key -> (target section, attribute, parser)
_KEYS = {
    "index_dir": ("app", "index_dir", Path),
    "data_dir": ("app", "data_dir", Path),
    "profile": ("app", "profile", str),
    "jobs": ("app", "jobs", int),
    "sentiment_provider": ("app", "sentiment_provider", str),
    "tau": ("app", "tau", float),
    "top_n": ("app", "top_n", int),
    "use_tfidf": ("app", "use_tfidf", _parse_bool),
    "vote_filter_min": ("ranker", "vote_filter_min", int),
    "per_list_depth": ("ranker", "per_list_depth", int),
    "top_k": ("ranker", "top_k", int),
    "heuristics": ("ranker", "enabled_heuristics", _parse_heuristics),
    "min_words": ("ranker", "min_words", int),
    "damping": ("pagerank", "damping", float),
    "epsilon": ("pagerank", "epsilon", float),
    "max_iterations": ("pagerank", "max_iterations", int),
    "topic_k": ("topics", "num_topics", int),
    "topic_beta": ("topics", "beta", float),
    "topic_iterations": ("topics", "iterations", int),
    "topic_seed": ("topics", "seed", int),
    "words_per_topic": ("topics", "words_per_topic", int),
    "top_topics_per_doc": ("topics", "top_topics_per_doc", int),
}


def parse_config_file(path: str | Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def load_config(
    config_path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, str] | None = None,
) -> AppConfig:
    """Build the application config from file, environment and overrides."""
    env = os.environ if env is None else env
    raw: dict[str, str] = {}
    if config_path is not None:
        raw.update(parse_config_file(config_path))
    for key in ("index_dir", "data_dir"):
        env_value = env.get(ENV_PREFIX + key.upper())
        if env_value:
            raw[key] = env_value
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})

    sections: dict[str, dict] = {"app": {}, "ranker": {}, "pagerank": {}, "topics": {}}
    for key, value in raw.items():
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        section, attr, parser = _KEYS[key]
        try:
            sections[section][attr] = parser(value) if isinstance(value, str) else value
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc

    cfg = AppConfig(
        ranker=RankerConfig(**sections["ranker"]),
        pagerank=PageRankConfig(**sections["pagerank"]),
        topics=TopicModelConfig(**sections["topics"]),
        **sections["app"],
    )
    if not 0.0 <= cfg.tau <= 1.0:
        raise ConfigError(f"tau must be in [0, 1], got {cfg.tau}")
    if cfg.top_n < 1:
        raise ConfigError("top_n must be >= 1")
    if cfg.jobs < 0:
        raise ConfigError("jobs must be >= 0")
    return cfg
