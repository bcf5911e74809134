"""geozones: mine geotagged social-media records into zones of interest.

Pipeline: ingest tweet/photo payloads -> file-backed document store ->
normalized (lat, lon, text) corpus -> density-based noise removal ->
X-means clustering -> per-cluster coverage circles -> GeoJSON.
"""

from .clustering import (
    NOISE,
    Centroid,
    DbscanConfig,
    KMeansConfig,
    Labeling,
    XMeansConfig,
    centroid_of,
    dbscan,
    format_cluster_report,
    kmeans,
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
    read_corpus_csv,
    write_corpus_csv,
)
from .coverage import (
    CoverageCircle,
    CoverageSummary,
    coverage_circle,
    coverage_radius,
    point_of_means,
    summarize,
)
from .errors import (
    ConfigError,
    CoordinateError,
    EmptyCorpusError,
    ParseError,
    SchemaError,
    StorageError,
    ZoneError,
)
from .export import export_geojson, write_geojson
from .geo import (
    EARTH_RADIUS_KM,
    DistanceKm,
    EarthModel,
    GeoPoint,
    degrees_to_radians,
    destination_point,
    haversine_distance,
)
from .ingest import (
    PhotoRecord,
    PhotoSearchPage,
    RawPhotoGeo,
    RawPhotoStub,
    RawTweet,
    ReplaySummary,
    parse_photo_geo,
    parse_photo_search,
    parse_tweet,
    replay_source,
)
from .pipeline import PipelineConfig, PipelineResult, build_corpus, run_pipeline
from .store import DocumentStore, StoredDocument, StoreStats, photo_body, tweet_body

__version__ = "0.1.0"
