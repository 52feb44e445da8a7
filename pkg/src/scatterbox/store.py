"""Append-only store of accepted rectangle models.

One self-contained JSON record per line, versioned with a `v` field.
Appends are serialized through a lock and written as a single flush, so
concurrent submissions never interleave partial records.
"""

import json
import threading
from pathlib import Path

from .data import NormStats
from .pairs import DimensionPair
from .regions import Rectangle, RectangleModel

RECORD_VERSION = 1


class StoreError(ValueError):
    """Corrupt or incompatible store contents."""


def model_to_record(model: RectangleModel, dataset_hash: str, seed: int) -> dict:
    if model.test_accuracy is None or model.validation_accuracy is None:
        raise StoreError("only accepted (fully scored) models belong in the store")
    return {
        "v": RECORD_VERSION,
        "id": model.model_id,
        "provenance": model.provenance,
        "dataset_hash": dataset_hash,
        "seed": seed,
        "pair": [model.pair.dim_a, model.pair.dim_b],
        "stats": {
            "mean_a": model.stats.mean_a,
            "std_a": model.stats.std_a,
            "mean_b": model.stats.mean_b,
            "std_b": model.stats.std_b,
        },
        "rectangles": [
            {
                "u_min": r.u_min,
                "u_max": r.u_max,
                "v_min": r.v_min,
                "v_max": r.v_max,
                "label": r.predicted_label,
                "draw_order": r.draw_order,
            }
            for r in model.rectangles
        ],
        "validation_accuracy": model.validation_accuracy,
        "test_accuracy": model.test_accuracy,
    }


def model_from_record(record: dict) -> RectangleModel:
    if record.get("v") != RECORD_VERSION:
        raise StoreError(f"unsupported record version {record.get('v')!r}")
    stats = record["stats"]
    return RectangleModel(
        model_id=record["id"],
        pair=DimensionPair(*record["pair"]),
        stats=NormStats(stats["mean_a"], stats["std_a"], stats["mean_b"], stats["std_b"]),
        rectangles=tuple(
            Rectangle(
                u_min=r["u_min"],
                u_max=r["u_max"],
                v_min=r["v_min"],
                v_max=r["v_max"],
                predicted_label=r["label"],
                draw_order=r["draw_order"],
            )
            for r in record["rectangles"]
        ),
        provenance=record["provenance"],
        validation_accuracy=record["validation_accuracy"],
        test_accuracy=record["test_accuracy"],
    )


class ModelStore:
    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.records())

    def append(self, model: RectangleModel, dataset_hash: str, seed: int) -> None:
        line = json.dumps(model_to_record(model, dataset_hash, seed), sort_keys=True)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(line + "\n")
                fh.flush()

    def records(self) -> list:
        if not self.path.exists():
            return []
        out = []
        for lineno, line in enumerate(self.path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                raise StoreError(f"{self.path}:{lineno}: corrupt record") from None
        return out

    def load(self, expected_hash: str = None) -> list:
        """Load all models, optionally checking dataset provenance."""
        models = []
        for record in self.records():
            if expected_hash is not None and record["dataset_hash"] != expected_hash:
                raise StoreError(
                    f"store {self.path} was built on dataset "
                    f"{record['dataset_hash'][:12]}, not {expected_hash[:12]}"
                )
            models.append(model_from_record(record))
        return models
