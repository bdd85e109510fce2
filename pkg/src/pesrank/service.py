"""HTTP estimation service: POST /estimate and GET /health.

Privacy contract: the plaintext password (and its sub-password tokens) never
reaches logs, metrics, or storage — log lines carry only the status,
classification, and bit strength. Error messages are static strings for the
same reason. Responses are byte-deterministic for identical model + request.
"""

from __future__ import annotations

import json
import logging

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response

from .explain import explain, render_message
from .model import Model
from .rank import PasswordEstimate, estimate_password
from .tweaks import request_tweaks

logger = logging.getLogger("pesrank.service")


def to_json_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def build_response(model: Model, password: str, est: PasswordEstimate) -> dict:
    """Shape one estimate into the wire format (shared by CLI and service).
    Ranks travel as decimal strings: volumes outgrow 64-bit integers."""
    if est.status == "not_in_model":
        return {
            "status": "not_in_model",
            "pgs_compatible": -5,
            "missing_dimension": est.missing_dimension,
        }
    explanation = explain(model, password, est)
    bounds = est.bounds
    return {
        "status": "ok",
        "rank_lower": str(bounds.lower),
        "rank_upper": str(bounds.upper),
        "bits_lower": bounds.bits_lower,
        "bits_upper": bounds.bits_upper,
        "classification": explanation.classification,
        "explanation": {
            "message": render_message(explanation, model.training_population),
            "dimensions": [
                {
                    "dimension": r.dimension,
                    "token": r.token,
                    "probability": r.probability,
                    "people_count": r.people_count,
                }
                for r in explanation.dimensions
            ],
        },
        "pgs_compatible": bounds.lower,
    }


def _json(obj, status: int = 200) -> Response:
    return Response(content=to_json_bytes(obj), status_code=status, media_type="application/json")


def _bad_request(reason: str) -> Response:
    return _json({"error": reason}, status=400)


def _validate_history(history):
    """Returns (history list, None) or (None, error text). Static texts only."""
    if not isinstance(history, list):
        return None, "history must be a list of [password, frequency] pairs"
    cleaned = []
    total = 0.0
    for item in history:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            return None, "history entries must be [password, frequency] pairs"
        pw, freq = item
        if not isinstance(pw, str) or not pw:
            return None, "history passwords must be non-empty strings"
        if not isinstance(freq, (int, float)) or isinstance(freq, bool):
            return None, "history frequencies must be numbers"
        if not (0.0 < freq <= 1.0):
            return None, "history frequencies must be in (0, 1]"
        total += freq
        cleaned.append((pw, float(freq)))
    if total > 1.0 + 1e-9:
        return None, "history frequencies must sum to at most 1"
    return cleaned, None


def create_app(model: Model | None = None, cors_origins=None) -> FastAPI:
    app = FastAPI(title="password rank estimation service", docs_url=None, redoc_url=None)
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def ready() -> bool:
        return model is not None and model.merged is not None

    @app.get("/health")
    async def health():
        if not ready():
            return _json({"status": "loading"}, status=503)
        return _json(
            {
                "status": "ok",
                "model_population": model.training_population,
                "gamma": model.gamma,
            }
        )

    @app.post("/estimate")
    async def estimate(request: Request):
        if not ready():
            return _json({"status": "loading"}, status=503)
        try:
            data = await request.json()
        except Exception:
            return _bad_request("body must be a JSON object")
        if not isinstance(data, dict):
            return _bad_request("body must be a JSON object")
        password = data.get("password")
        if not isinstance(password, str) or not password:
            return _bad_request("password must be a non-empty string")
        username = data.get("username")
        if username is not None and not isinstance(username, str):
            return _bad_request("username must be a string")
        history = data.get("history")
        if history is not None:
            history, problem = _validate_history(history)
            if problem is not None:
                return _bad_request(problem)
        try:
            tweaks = request_tweaks(model, username, history)
            est = estimate_password(model, password, tweaks)
            payload = build_response(model, password, est)
        except Exception as exc:
            logger.error("estimate failed: %s", type(exc).__name__)
            return _json({"error": "internal error"}, status=500)
        logger.info(
            "estimate status=%s classification=%s bits=%s",
            payload["status"],
            payload.get("classification", "-"),
            f"{payload['bits_lower']:.1f}" if "bits_lower" in payload else "-",
        )
        return _json(payload)

    return app
