"""End-to-end pipeline: store scan -> corpus -> clustering -> coverage -> GeoJSON."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .clustering import (
    NOISE,
    DbscanConfig,
    Labeling,
    XMeansConfig,
    dbscan,
    format_cluster_report,
    xmeans,
)
from .corpus import (
    DEFAULT_KEYWORDS,
    DEFAULT_STUDY_AREA,
    BoundingBox,
    CorpusRecord,
    KeywordQuery,
    dedupe,
    filter_bbox,
    filter_keywords,
    normalize,
)
from .coverage import DEFAULT_VERTEX_COUNT, CoverageSummary, coverage_circle, summarize
from .errors import EmptyCorpusError
from .export import export_geojson, write_geojson
from .geo import DEFAULT_EARTH, EarthModel
from .store import DocumentStore


@dataclass(frozen=True)
class PipelineConfig:
    store_dir: str
    bbox: BoundingBox = DEFAULT_STUDY_AREA
    keywords: KeywordQuery = KeywordQuery(terms=DEFAULT_KEYWORDS)
    xmeans: XMeansConfig = XMeansConfig(k_min=10, k_max=10)
    dbscan: DbscanConfig = DbscanConfig()
    vertex_count: int = DEFAULT_VERTEX_COUNT
    output_path: str | None = None
    include_members: bool = False
    workers: int = 1
    earth: EarthModel = DEFAULT_EARTH


@dataclass
class PipelineResult:
    document: dict
    report: str
    summaries: list[CoverageSummary]
    records: list[CorpusRecord]  # the clustered (non-noise) corpus records
    labeling: Labeling
    purged: list[CorpusRecord]
    noise: list[CorpusRecord]


def build_corpus(store: DocumentStore, keywords: KeywordQuery, bbox: BoundingBox):
    """Scan, normalize and filter the store into (records, purged)."""
    records = []
    for collection in ("tweet", "photo"):
        for doc in store.scan(collection, geo_only=True):
            record = normalize(doc)
            if record is not None:
                records.append(record)
    records = filter_keywords(records, keywords)
    inside, purged = filter_bbox(records, bbox)
    return dedupe(inside), purged


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Execute the full zone-mining pipeline against one store directory.

    Raises EmptyCorpusError when no records survive filtering (or when
    density clustering marks everything as noise).
    """
    with DocumentStore(cfg.store_dir, read_only=True) as store:
        records, purged = build_corpus(store, cfg.keywords, cfg.bbox)
    if not records:
        raise EmptyCorpusError("empty corpus: no records survived filtering")

    positions = [r.position for r in records]
    noise_labeling = dbscan(positions, cfg.dbscan, cfg.earth, workers=cfg.workers)
    kept = [r for r, label in zip(records, noise_labeling.labels) if label != NOISE]
    noise = [r for r, label in zip(records, noise_labeling.labels) if label == NOISE]
    if not kept:
        raise EmptyCorpusError("empty corpus: density clustering labeled every record as noise")

    labeling = xmeans([r.position for r in kept], cfg.xmeans)
    summaries = summarize(labeling, [r.position for r in kept], cfg.earth)
    circles = [
        coverage_circle(s.centroid, s.radius_km, cfg.vertex_count, cfg.earth) for s in summaries
    ]
    members = [(int(label), record) for record, label in zip(kept, labeling.labels)]
    document = export_geojson(
        summaries,
        circles,
        members,
        include_members=cfg.include_members,
        query_terms=cfg.keywords.terms,
    )
    report = format_cluster_report(labeling.centroids)
    if cfg.output_path is not None:
        write_geojson(document, Path(cfg.output_path))
    return PipelineResult(
        document=document,
        report=report,
        summaries=summaries,
        records=kept,
        labeling=labeling,
        purged=purged,
        noise=noise,
    )
