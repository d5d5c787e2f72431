"""CSV/JSON report writers.

Display values are rounded to 4 decimal places; the sibling JSON keeps
full precision. All writers are pure functions of their inputs so
identical runs produce byte-identical files (run_meta.json excepted:
it carries wall-clock timings by design).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig
from .engine import EvaluationRow, ScanResult

RESULTS_HEADER = ["image", "name", "text", "similarity", "p_value"]
HISTOGRAM_BINS = 30
HISTOGRAM_GROUPS = ("reference", "matched", "unmatched")


def format4(value: float) -> str:
    return f"{value:.4f}"


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _query_text(result: ScanResult) -> str:
    if result.query.kind == "text":
        return result.query.text_payload
    return result.query.name


def result_rows(result: ScanResult) -> list[dict]:
    """Ranked target rows followed by reference rows, full precision."""
    entry_by_id = {e.id: e for e in result.manifest.entries}
    text = _query_text(result)
    rows = []
    for scored in result.ranked.entries:
        entry = entry_by_id[scored.image_id]
        rows.append(
            {
                "image": str(entry.path),
                "name": entry.id,
                "text": text,
                "similarity": scored.similarity,
                "p_value": result.pvalues[scored.image_id].p,
                "role": "target",
                "label": entry.label,
            }
        )
    for entry in result.manifest.references():
        rows.append(
            {
                "image": str(entry.path),
                "name": entry.id,
                "text": text,
                "similarity": result.reference_scores[entry.id],
                "p_value": None,
                "role": "reference",
                "label": entry.label,
            }
        )
    return rows


def write_results_csv(path: Path, result: ScanResult) -> None:
    """Ranked listing, one row per target, 4-decimal display values."""
    rows = [r for r in result_rows(result) if r["role"] == "target"]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row["image"],
                    row["name"],
                    row["text"],
                    format4(row["similarity"]),
                    format4(row["p_value"]),
                ]
            )


def write_results_json(path: Path, result: ScanResult) -> None:
    payload = {
        "query": {"kind": result.query.kind, "name": result.query.name, "text": _query_text(result)},
        "scorer": {
            "backend": result.scorer_config.backend,
            "model_id": result.scorer_config.model_id,
        },
        "mechanism": result.mechanism,
        "rows": result_rows(result),
    }
    _write_json(path, payload)


def _threshold_tag(threshold: float) -> str:
    return f"{int(round(threshold * 100)):03d}"


def metrics_header(k: int, thresholds) -> list[str]:
    header = ["object_type", "model_name", "pvalue_type", f"matches_in_first_{k}"]
    for threshold in thresholds:
        tag = _threshold_tag(threshold)
        header += [f"balanced_accuracy_{tag}", f"f1_score_{tag}"]
    return header


def write_metrics_csv(path: Path, rows: list[EvaluationRow], k: int, thresholds) -> None:
    """One row per (scorer, mechanism); metric pairs per threshold as columns."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(metrics_header(k, thresholds))
        for row in rows:
            by_threshold = {report.threshold: report for report in row.reports}
            record = [row.object_type, row.model_name, str(row.mechanism), str(row.matches_at_k)]
            for threshold in thresholds:
                report = by_threshold[threshold]
                record += [format4(report.balanced_accuracy), format4(report.f1)]
            writer.writerow(record)


def histogram_payload(groups: dict[str, list[float]], bins: int = HISTOGRAM_BINS) -> dict:
    """Fixed-width bin counts over the pooled min/max of all groups."""
    pooled = [v for values in groups.values() for v in values]
    if pooled:
        lo, hi = float(min(pooled)), float(max(pooled))
        edges = np.histogram_bin_edges(pooled, bins=bins, range=(lo, hi))
        payload_groups = {
            name: {
                "samples": [float(v) for v in values],
                "counts": np.histogram(values, bins=edges)[0].tolist(),
            }
            for name, values in groups.items()
        }
        edges_list = edges.tolist()
    else:
        payload_groups = {name: {"samples": [], "counts": []} for name in groups}
        edges_list = []
    return {"bins": bins, "edges": edges_list, "groups": payload_groups}


def similarity_groups(rows: list[dict]) -> dict[str, list[float]]:
    """Figure-style grouping: reference vs matched vs unmatched similarities."""
    groups = {name: [] for name in HISTOGRAM_GROUPS}
    for row in rows:
        if row["role"] == "reference":
            groups["reference"].append(row["similarity"])
        elif row["label"] == "positive":
            groups["matched"].append(row["similarity"])
        elif row["label"] == "negative":
            groups["unmatched"].append(row["similarity"])
    return groups


def write_histograms_json(path: Path, rows: list[dict], bins: int = HISTOGRAM_BINS) -> None:
    _write_json(path, histogram_payload(similarity_groups(rows), bins))


def write_null_json(path: Path, payload: dict) -> None:
    _write_json(path, payload)


def write_run_meta(path: Path, command: str, config: RunConfig, timings: dict[str, float]) -> None:
    _write_json(
        path,
        {
            "version": __version__,
            "command": command,
            "config": config.to_json_dict(),
            "timings": {name: round(value, 6) for name, value in timings.items()},
        },
    )


def read_results_json(path: Path) -> dict:
    if not Path(path).is_file():
        raise FileNotFoundError(
            f"run artifact not found: {path} (run the scan command first)"
        )
    return json.loads(Path(path).read_text())
