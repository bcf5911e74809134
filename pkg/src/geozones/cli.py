"""Command-line interface: ingest fixtures, cluster, summarize, export zones."""

from __future__ import annotations

import argparse
import os
import sys

from .clustering import DbscanConfig, KMeansConfig, XMeansConfig
from .corpus import DEFAULT_KEYWORDS, BoundingBox, KeywordQuery
from .errors import EmptyCorpusError, ZoneError
from .ingest import ReplaySummary, replay_source
from .pipeline import PipelineConfig, run_pipeline
from .store import DocumentStore, StoreStats, photo_body, tweet_body

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EMPTY_CORPUS = 2


def _add_common_options(parser: argparse.ArgumentParser):
    parser.add_argument("--store", required=True, help="store directory")
    parser.add_argument(
        "--keyword",
        action="append",
        dest="keywords",
        metavar="TERM",
        help=f"filter term, repeatable (default: {', '.join(DEFAULT_KEYWORDS)})",
    )
    parser.add_argument("--keyword-mode", choices=("any", "all"), default="any")
    parser.add_argument(
        "--bbox",
        nargs=4,
        type=float,
        metavar=("MIN_LAT", "MAX_LAT", "MIN_LON", "MAX_LON"),
        default=(5.90, 6.60, -75.80, -75.10),
        help="study-area bounding box (closed intervals)",
    )
    parser.add_argument("--k-min", type=int, default=10)
    parser.add_argument("--k-max", type=int, default=10)
    parser.add_argument("--eps-km", type=float, default=5.0, help="density neighborhood radius")
    parser.add_argument("--min-pts", type=int, default=5, help="density core threshold")
    parser.add_argument("--seed", type=int, default=0, help="clustering seed (ZONE_SEED overrides)")
    parser.add_argument("--restarts", type=int, default=8)
    parser.add_argument("--max-iterations", type=int, default=100)
    parser.add_argument("--tolerance", type=float, default=1e-7)
    parser.add_argument("--vertex-count", type=int, default=64)
    parser.add_argument("--workers", type=int, default=1)


def _seed_from_env(args) -> int:
    env = os.environ.get("ZONE_SEED")
    if env is None:
        return args.seed
    try:
        seed = int(env)
    except ValueError:
        raise ZoneError(f"ZONE_SEED must be a decimal unsigned integer, got {env!r}")
    if seed < 0:
        raise ZoneError(f"ZONE_SEED must be non-negative, got {seed}")
    return seed


def _pipeline_config(args, output_path=None, include_members=False) -> PipelineConfig:
    min_lat, max_lat, min_lon, max_lon = args.bbox
    inner = KMeansConfig(
        k=1,
        max_iterations=args.max_iterations,
        tolerance=args.tolerance,
        seed=_seed_from_env(args),
        restarts=args.restarts,
    )
    return PipelineConfig(
        store_dir=args.store,
        bbox=BoundingBox(min_lat=min_lat, max_lat=max_lat, min_lon=min_lon, max_lon=max_lon),
        keywords=KeywordQuery(terms=tuple(args.keywords or DEFAULT_KEYWORDS), mode=args.keyword_mode),
        xmeans=XMeansConfig(k_min=args.k_min, k_max=args.k_max, inner=inner),
        dbscan=DbscanConfig(eps_km=args.eps_km, min_pts=args.min_pts),
        vertex_count=args.vertex_count,
        output_path=output_path,
        include_members=include_members,
        workers=args.workers,
    )


def ingest_command(input_dir, kind: str, store_dir, out=None) -> StoreStats:
    """Replay a fixture directory into the store; returns final store stats."""
    out = out if out is not None else sys.stdout
    with DocumentStore(store_dir) as store:
        for item in replay_source(input_dir, kind):
            if isinstance(item, ReplaySummary):
                for name, reason in item.failures:
                    print(f"skipped {name}: {reason}", file=sys.stderr)
                print(f"parsed {item.parsed} record(s), skipped {item.skipped} file(s)", file=out)
            elif kind == "tweet":
                store.put("tweet", tweet_body(item))
            else:
                store.put("photo", photo_body(item))
        stats = store.stats()
    print(f"store now holds {stats.tweet_count} tweet(s), {stats.photo_count} photo(s)", file=out)
    return stats


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geozones",
        description="Mine geotagged social-media records into zones of interest.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse a fixture directory into the store")
    p_ingest.add_argument("--input", required=True, help="directory of payload files")
    p_ingest.add_argument("--kind", required=True, choices=("tweet", "photo"))
    p_ingest.add_argument("--store", required=True, help="store directory")

    p_cluster = sub.add_parser("cluster", help="cluster the corpus and print the report")
    _add_common_options(p_cluster)

    p_coverage = sub.add_parser("coverage", help="cluster and print per-cluster coverage")
    _add_common_options(p_coverage)

    p_export = sub.add_parser("export", help="cluster and write the zone GeoJSON")
    _add_common_options(p_export)
    p_export.add_argument("--output", required=True, help="GeoJSON output path")
    p_export.add_argument("--include-members", action="store_true")

    p_pipeline = sub.add_parser("pipeline", help="full run: report plus GeoJSON")
    _add_common_options(p_pipeline)
    p_pipeline.add_argument("--output", required=True, help="GeoJSON output path")
    p_pipeline.add_argument("--include-members", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR

    try:
        if args.command == "ingest":
            ingest_command(args.input, args.kind, args.store)
            return EXIT_OK

        output = getattr(args, "output", None)
        include_members = getattr(args, "include_members", False)
        cfg = _pipeline_config(args, output_path=output, include_members=include_members)
        result = run_pipeline(cfg)

        if args.command in ("cluster", "pipeline"):
            print(result.report)
        if args.command == "coverage":
            print(result.report)
            for s in result.summaries:
                print(
                    f"Cluster {s.cluster_id}: radius_km={s.radius_km!r} "
                    f"mean=({s.point_of_means.lat_deg!r}, {s.point_of_means.lon_deg!r}) "
                    f"distant=({s.distant_point.lat_deg!r}, {s.distant_point.lon_deg!r})"
                )
        if output is not None:
            print(f"wrote {output}", file=sys.stderr)
        return EXIT_OK
    except EmptyCorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_CORPUS
    except ZoneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
