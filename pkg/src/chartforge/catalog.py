"""Loaders for the bundled theme, lexicon, and trend catalogs.

Catalogs are static TSV package data regenerated by scripts/build_catalogs.py.
Loading is cached; each loaded catalog carries a content digest so dataset
provenance can pin the exact catalog version a record was sampled from.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .model import ChartType, Theme, TrendFamily, TrendTag


class CatalogEmpty(ValueError):
    pass


class CatalogMalformed(ValueError):
    pass


@dataclass(frozen=True)
class ThemeCatalog:
    themes: tuple[Theme, ...]
    lexicon: dict[str, tuple[str, ...]]  # topic -> nouns
    digest: str

    def nouns_for(self, topic: str) -> tuple[str, ...]:
        try:
            return self.lexicon[topic]
        except KeyError:
            raise CatalogMalformed(f"topic {topic!r} has no lexicon entry") from None


@dataclass(frozen=True)
class TrendCatalog:
    tags: tuple[TrendTag, ...]
    digest: str

    def applicable_to(self, chart_type: ChartType, series_len: int) -> tuple[TrendTag, ...]:
        return tuple(
            t for t in self.tags if chart_type in t.applicable and t.min_len <= series_len
        )


def _read_asset(name: str) -> str:
    text = resources.files("chartforge").joinpath("catalogs", name).read_text("utf-8")
    if not text.strip():
        raise CatalogEmpty(f"catalog asset {name} is empty")
    return text


def _digest(*texts: str) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode("utf-8"))
    return h.hexdigest()[:16]


@lru_cache(maxsize=1)
def load_theme_catalog() -> ThemeCatalog:
    theme_text = _read_asset("themes.tsv")
    lex_text = _read_asset("lexicon.tsv")

    themes = []
    for lineno, line in enumerate(theme_text.splitlines(), 1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise CatalogMalformed(f"themes.tsv line {lineno}: expected 2 fields")
        themes.append(Theme(topic=parts[0], phrase=parts[1]))

    lexicon: dict[str, list[str]] = {}
    for lineno, line in enumerate(lex_text.splitlines(), 1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise CatalogMalformed(f"lexicon.tsv line {lineno}: expected 2 fields")
        lexicon.setdefault(parts[0], []).append(parts[1])

    for theme in themes:
        if theme.topic not in lexicon:
            raise CatalogMalformed(f"theme topic {theme.topic!r} missing from lexicon")
    return ThemeCatalog(
        themes=tuple(themes),
        lexicon={k: tuple(v) for k, v in lexicon.items()},
        digest=_digest(theme_text, lex_text),
    )


@lru_cache(maxsize=1)
def load_trend_catalog() -> TrendCatalog:
    text = _read_asset("trends.tsv")
    tags = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split("\t")
        if len(parts) != 4:
            raise CatalogMalformed(f"trends.tsv line {lineno}: expected 4 fields")
        trend_id, family_s, types_s, params_s = parts
        try:
            family = TrendFamily(family_s)
        except ValueError:
            raise CatalogMalformed(
                f"trends.tsv line {lineno}: unknown family {family_s!r}"
            ) from None
        try:
            types = frozenset(ChartType(t) for t in types_s.split(","))
        except ValueError:
            raise CatalogMalformed(f"trends.tsv line {lineno}: bad chart type") from None
        params = dict(json.loads(params_s))
        min_len = int(params.pop("min_len", 2))
        tags.append(
            TrendTag(id=trend_id, family=family, applicable=types, min_len=min_len, params=params)
        )
    ids = [t.id for t in tags]
    if len(ids) != len(set(ids)):
        raise CatalogMalformed("duplicate trend ids")
    return TrendCatalog(tags=tuple(tags), digest=_digest(text))
