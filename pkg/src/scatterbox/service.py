"""HTTP service that hands out annotation tasks and gates submissions.

Sessions are in-memory and expire after an idle timeout; the only durable
state is the append-only model store. Clients only ever see the
annotation-train points: validation and test rows drive scoring on the
server and are never serialized into a response.
"""

import hmac
import secrets
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field, model_validator

from .data import SplitSizes, balance_classes, load_csv, load_schema, make_splits, normalize_pair
from .pairs import correlation_table, select_pairs
from .regions import RectangleModel, Rectangle, accept_model, score_model
from .store import ModelStore


@dataclass
class ServiceConfig:
    dataset_csv: str
    schema_csv: str
    label_column: str
    store_path: str
    seed: int = 0
    balance: bool = True
    annotation_train: int = 100
    annotation_valid: int = 100
    annotation_test: int = 200
    train_pool: int = 0  # 0 means the SplitSizes default for the dataset
    threshold: float = 0.5
    min_coverage: float = 0.0
    pair_pool_size: int = 10
    session_timeout_seconds: float = 1800.0
    host: str = "127.0.0.1"
    port: int = 8000
    static_dir: str = ""

    @classmethod
    def parse(cls, path) -> "ServiceConfig":
        """Read `key = value` lines; '#' starts a comment."""
        raw = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected `key = value`")
            key, value = (part.strip() for part in line.split("=", 1))
            raw[key] = value
        known = {f.name: f.type for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        kwargs = {}
        for key, value in raw.items():
            if key not in known:
                raise ValueError(f"{path}: unknown config key {key!r}")
            kind = known[key]
            if kind is bool or kind == "bool":
                kwargs[key] = value.lower() in ("1", "true", "yes", "on")
            elif kind is int or kind == "int":
                kwargs[key] = int(value)
            elif kind is float or kind == "float":
                kwargs[key] = float(value)
            else:
                kwargs[key] = value
        return cls(**kwargs)


@dataclass
class Session:
    session_id: str
    pair: tuple
    stats: object
    points: list
    last_touched: float
    consumed: bool = False
    model_id: str = ""


@dataclass
class CodeRecord:
    model_id: str
    session_id: str
    issued_at: float
    used: bool = False


class ServiceState:
    """Everything the endpoints share; one instance per server."""

    def __init__(self, config: ServiceConfig, clock=time.time):
        self.config = config
        self.clock = clock
        schema = load_schema(config.schema_csv)
        ds = load_csv(config.dataset_csv, schema, config.label_column)
        if config.balance:
            ds = balance_classes(ds, config.seed)
        sizes = SplitSizes(
            config.annotation_train,
            config.annotation_valid,
            config.annotation_test,
            config.train_pool or SplitSizes.defaults_for(ds.n_samples).train_pool,
        )
        self.dataset = ds
        self.dataset_hash = ds.content_hash()
        self.split = make_splits(ds, sizes, config.seed)
        table = correlation_table(ds, self.split)
        self.pair_pool = select_pairs(
            table, k=max(1, config.pair_pool_size), mode="rank"
        )
        self.store = ModelStore(config.store_path)
        self.sessions: dict = {}
        self.codes: dict = {}
        self._draw_rng = np.random.default_rng(config.seed)
        self._lock = threading.Lock()

    def draw_pair(self):
        if not self.pair_pool:
            return None
        return self.pair_pool[int(self._draw_rng.integers(len(self.pair_pool)))]

    def open_session(self) -> Session:
        pair = self.draw_pair()
        if pair is None:
            raise HTTPException(status_code=503, detail="no dimension pairs available")
        uv, labels, stats = normalize_pair(self.dataset, self.split, pair)
        points = [
            [float(u), float(v), int(y)] for (u, v), y in zip(uv, labels)
        ]
        session = Session(
            session_id=secrets.token_hex(16),
            pair=pair,
            stats=stats,
            points=points,
            last_touched=self.clock(),
        )
        with self._lock:
            self.sessions[session.session_id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        with self._lock:
            session = self.sessions.get(session_id)
            if session is not None:
                age = self.clock() - session.last_touched
                if age > self.config.session_timeout_seconds:
                    del self.sessions[session_id]
                    session = None
            if session is None:
                raise HTTPException(status_code=404, detail="unknown or expired session")
            session.last_touched = self.clock()
            return session

    def issue_code(self, session: Session, model_id: str) -> str:
        code = secrets.token_hex(16)
        with self._lock:
            self.codes[code] = CodeRecord(
                model_id=model_id,
                session_id=session.session_id,
                issued_at=self.clock(),
            )
        return code

    def verify_code(self, code: str) -> dict:
        # scan every stored code with a constant-time comparison
        with self._lock:
            match = None
            for known in self.codes:
                if hmac.compare_digest(known, code):
                    match = known
            if match is None:
                return {"valid": False}
            record = self.codes[match]
            if record.used:
                return {"valid": False, "already_used": True}
            record.used = True
            return {"valid": True, "model_id": record.model_id}


class RectangleIn(BaseModel):
    u_min: float
    u_max: float
    v_min: float
    v_max: float
    label: int = Field(ge=0, le=1)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.u_min < self.u_max:
            raise ValueError("u_min must be strictly less than u_max")
        if not self.v_min < self.v_max:
            raise ValueError("v_min must be strictly less than v_max")
        return self


class RectangleList(BaseModel):
    rectangles: list[RectangleIn]


def _build_model(session: Session, body: RectangleList, model_id: str) -> RectangleModel:
    rects = tuple(
        Rectangle(
            u_min=r.u_min,
            u_max=r.u_max,
            v_min=r.v_min,
            v_max=r.v_max,
            predicted_label=r.label,
            draw_order=i,
        )
        for i, r in enumerate(body.rectangles)
    )
    return RectangleModel(
        model_id=model_id,
        pair=session.pair,
        stats=session.stats,
        rectangles=rects,
        provenance=f"worker:{session.session_id[:8]}",
    )


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="scatterbox annotation service")
    config = state.config

    @app.get("/task")
    def get_task():
        session = state.open_session()
        dim_a, dim_b = session.pair
        names = state.dataset.column_names()
        return {
            "session_id": session.session_id,
            "dataset": state.dataset.name,
            "pair": {
                "dim_a": dim_a,
                "dim_b": dim_b,
                "name_a": names[dim_a],
                "name_b": names[dim_b],
            },
            "points": session.points,
            "threshold": config.threshold,
            "min_coverage": config.min_coverage,
        }

    @app.post("/task/{session_id}/rectangles")
    def score_rectangles(session_id: str, body: RectangleList):
        session = state.get_session(session_id)
        if not body.rectangles:
            return {
                "validation_accuracy": None,
                "no_coverage": True,
                "covered_fraction": 0.0,
            }
        model = _build_model(session, body, model_id="live")
        acc, covered, total = score_model(
            model, state.dataset, state.split.annotation_valid
        )
        return {
            "validation_accuracy": acc,
            "no_coverage": covered == 0,
            "covered_fraction": covered / total,
        }

    @app.post("/task/{session_id}/submit")
    def submit(session_id: str, body: RectangleList):
        session = state.get_session(session_id)
        if session.consumed:
            raise HTTPException(status_code=409, detail="session already submitted")
        if not body.rectangles:
            return {
                "accepted": False,
                "validation_accuracy": None,
                "covered_fraction": 0.0,
                "threshold": config.threshold,
            }
        model = _build_model(session, body, model_id=f"wrk-{secrets.token_hex(6)}")
        accepted = accept_model(
            model,
            state.dataset,
            state.split,
            threshold=config.threshold,
            min_coverage=config.min_coverage,
        )
        _, covered, total = score_model(
            model, state.dataset, state.split.annotation_valid
        )
        if not accepted:
            return {
                "accepted": False,
                "validation_accuracy": model.validation_accuracy,
                "covered_fraction": covered / total,
                "threshold": config.threshold,
            }
        state.store.append(model, state.dataset_hash, config.seed)
        session.consumed = True
        session.model_id = model.model_id
        code = state.issue_code(session, model.model_id)
        return {
            "accepted": True,
            "completion_code": code,
            "model_id": model.model_id,
            "validation_accuracy": model.validation_accuracy,
        }

    @app.get("/codes/verify")
    def verify(code: str = ""):
        return state.verify_code(code)

    static_dir = config.static_dir
    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def create_app_from_config(path) -> FastAPI:
    return create_app(ServiceState(ServiceConfig.parse(path)))
