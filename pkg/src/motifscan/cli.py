"""Command-line interface.

Four subcommands share one JSON run config: scan writes the ranked
listing (results.csv + full-precision results.json), evaluate writes
the metrics table, histogram bins a finished scan's similarities, and
export-null dumps the calibration null. Exit codes: 0 success, 1 usage
or configuration error, 2 backend/model failure, 3 empty or invalid
corpus.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import engine, reports
from .config import ConfigError, load_run_config
from .dataset import ImageDecodeError, ManifestError
from .embedding import BackendModelError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BACKEND = 2
EXIT_CORPUS = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this CLI reserves 2 for backend failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="motifscan", description=__doc__.splitlines()[0])
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", required=True, help="run config JSON")
    shared.add_argument("--output", help="output directory (overrides config)")
    shared.add_argument("--backend", help="narrow scorers to this backend")
    shared.add_argument("--mechanism", type=int, choices=(1, 2, 3), help="null mechanism")
    shared.add_argument("--k", type=int, help="ranking cutoff for matches@K")
    shared.add_argument("--threads", type=int, help="worker pool size")
    shared.add_argument(
        "--dump-keypoints", action="store_true",
        help="also write keypoints.json (keypoint backends, scan only)",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in ("scan", "evaluate", "histogram", "export-null"):
        commands.add_parser(name, parents=[shared])
    return parser


def cmd_scan(config, args) -> int:
    t0 = time.perf_counter()
    result = engine.scan_corpus(config)
    outdir = config.output_dir
    outdir.mkdir(parents=True, exist_ok=True)
    reports.write_results_csv(outdir / "results.csv", result)
    reports.write_results_json(outdir / "results.json", result)
    if args.dump_keypoints:
        backend = result.scorer_config.backend
        if backend in ("sift", "orb"):
            images = [result.images[e.id] for e in result.manifest.entries]
            table = engine.detect_keypoint_table(images, backend, config.threads)
            reports.write_null_json(outdir / "keypoints.json", table)
            print(f"wrote {outdir / 'keypoints.json'}")
        else:
            print(f"--dump-keypoints ignored for backend {backend!r}", file=sys.stderr)
    timings = dict(result.timings)
    timings["total_s"] = time.perf_counter() - t0
    reports.write_run_meta(outdir / "run_meta.json", "scan", config, timings)
    print(f"scored {len(result.ranked.entries)} targets")
    print(f"wrote {outdir / 'results.csv'}")
    return EXIT_OK


def cmd_evaluate(config, args) -> int:
    t0 = time.perf_counter()
    rows = engine.evaluate_corpus(config)
    outdir = config.output_dir
    outdir.mkdir(parents=True, exist_ok=True)
    reports.write_metrics_csv(outdir / "metrics.csv", rows, config.k, config.thresholds)
    reports.write_run_meta(
        outdir / "run_meta.json", "evaluate", config, {"total_s": time.perf_counter() - t0}
    )
    print(f"evaluated {len(rows)} configurations")
    print(f"wrote {outdir / 'metrics.csv'}")
    return EXIT_OK


def cmd_histogram(config, args) -> int:
    t0 = time.perf_counter()
    payload = reports.read_results_json(config.output_dir / "results.json")
    path = config.output_dir / "histograms.json"
    reports.write_histograms_json(path, payload["rows"])
    reports.write_run_meta(
        config.output_dir / "run_meta.json", "histogram", config,
        {"total_s": time.perf_counter() - t0},
    )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_export_null(config, args) -> int:
    t0 = time.perf_counter()
    payload = engine.export_null(config)
    outdir = config.output_dir
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "null.json"
    reports.write_null_json(path, payload)
    reports.write_run_meta(
        outdir / "run_meta.json", "export-null", config, {"total_s": time.perf_counter() - t0}
    )
    print(f"wrote {path}")
    return EXIT_OK


COMMANDS = {
    "scan": cmd_scan,
    "evaluate": cmd_evaluate,
    "histogram": cmd_histogram,
    "export-null": cmd_export_null,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = load_run_config(
            args.config,
            output=args.output,
            backend=args.backend,
            mechanism=args.mechanism,
            k=args.k,
            threads=args.threads,
        )
        return COMMANDS[args.command](config, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BackendModelError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (ManifestError, ImageDecodeError) as exc:
        print(f"corpus error: {exc}", file=sys.stderr)
        return EXIT_CORPUS
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
