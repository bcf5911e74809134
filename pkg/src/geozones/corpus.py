"""Normalized (latitude, longitude, text) corpus and its filters.

Stored documents become flat corpus records; keyword, bounding-box and
dedup filters run before clustering. Text is reference material for
filtering only, never part of any distance computation.
"""

from __future__ import annotations

import csv
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError
from .geo import GeoPoint
from .store import StoredDocument, has_coordinates

KEYWORD_MODES = ("any", "all")
DEFAULT_KEYWORDS = ("Medellín", "Fiesta", "4sq.com")


@dataclass(frozen=True)
class CorpusRecord:
    position: GeoPoint
    text: str
    origin: str  # "tweet" | "photo"
    source_doc_id: int


@dataclass(frozen=True)
class BoundingBox:
    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float

    def __post_init__(self):
        if self.min_lat > self.max_lat or self.min_lon > self.max_lon:
            raise ConfigError(
                f"degenerate bounding box: lat [{self.min_lat}, {self.max_lat}], "
                f"lon [{self.min_lon}, {self.max_lon}]"
            )

    def contains(self, point: GeoPoint) -> bool:
        """Closed-interval containment: boundary points are inside."""
        return (
            self.min_lat <= point.lat_deg <= self.max_lat
            and self.min_lon <= point.lon_deg <= self.max_lon
        )


# Covers the Aburra and San Nicolas valleys around Medellin.
DEFAULT_STUDY_AREA = BoundingBox(min_lat=5.90, max_lat=6.60, min_lon=-75.80, max_lon=-75.10)


@dataclass(frozen=True)
class KeywordQuery:
    terms: tuple[str, ...]
    mode: str = "any"

    def __post_init__(self):
        if not self.terms or any(not t.strip() for t in self.terms):
            raise ConfigError("keyword query needs at least one non-blank term")
        if self.mode not in KEYWORD_MODES:
            raise ConfigError(f"keyword mode must be one of {KEYWORD_MODES}, got {self.mode!r}")


def fold_text(text: str) -> str:
    """Accent-insensitive, case-insensitive comparison key.

    NFD decomposition with combining marks stripped, then casefold, so
    'Medellín' and 'medellin' compare equal.
    """
    decomposed = unicodedata.normalize("NFD", text)
    stripped = "".join(ch for ch in decomposed if unicodedata.category(ch) != "Mn")
    return stripped.casefold()


def normalize(doc: StoredDocument) -> CorpusRecord | None:
    """Flatten a stored document into a corpus record.

    Documents without coordinates are dropped (None), not errors. Tweets
    contribute their message text; photos contribute their name.
    """
    if not has_coordinates(doc):
        return None
    if doc.collection == "tweet":
        inner = doc.body["coordinates"]["coordinates"]
        position = GeoPoint(inner["latitude"], inner["longitude"])
        text = doc.body["text"]
    else:
        geo = doc.body["geo"]
        position = GeoPoint(geo["latitude"], geo["longitude"])
        text = doc.body["name"]
    return CorpusRecord(position=position, text=text, origin=doc.collection, source_doc_id=doc.doc_id)


def filter_keywords(records: Iterable[CorpusRecord], query: KeywordQuery) -> list[CorpusRecord]:
    """Keep records whose folded text contains the query terms (substring)."""
    folded_terms = [fold_text(t) for t in query.terms]
    combine = any if query.mode == "any" else all
    kept = []
    for record in records:
        haystack = fold_text(record.text)
        if combine(term in haystack for term in folded_terms):
            kept.append(record)
    return kept


def filter_bbox(
    records: Iterable[CorpusRecord], box: BoundingBox
) -> tuple[list[CorpusRecord], list[CorpusRecord]]:
    """Partition records into (inside, purged) by closed-interval containment."""
    inside, purged = [], []
    for record in records:
        (inside if box.contains(record.position) else purged).append(record)
    return inside, purged


def dedupe(records: Iterable[CorpusRecord]) -> list[CorpusRecord]:
    """Drop exact duplicates by (position, text, origin), keeping the first."""
    seen = set()
    kept = []
    for record in records:
        key = (record.position.lat_deg, record.position.lon_deg, record.text, record.origin)
        if key in seen:
            continue
        seen.add(key)
        kept.append(record)
    return kept


CSV_HEADER = ("lat", "lon", "text", "origin", "source_doc_id")


def write_corpus_csv(records: Sequence[CorpusRecord], path) -> None:
    """Write the corpus interchange CSV (RFC-4180 quoting, decimal points)."""
    with open(Path(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow([repr(r.position.lat_deg), repr(r.position.lon_deg), r.text, r.origin, r.source_doc_id])


def read_corpus_csv(path) -> list[CorpusRecord]:
    with open(Path(path), "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != CSV_HEADER:
            raise ConfigError(f"unexpected corpus CSV header: {header}")
        return [
            CorpusRecord(
                position=GeoPoint(float(lat), float(lon)),
                text=text,
                origin=origin,
                source_doc_id=int(doc_id),
            )
            for lat, lon, text, origin, doc_id in reader
        ]
