"""HTTP ingest service for the capture UI.

POST /api/session            raw session JSON -> accepted / 422 rejected
GET  /api/subject/{id}/progress
GET  /api/export?deidentify=1&phrase=turkish   dataset CSV
GET  /api/phrases            phrase specs for the capture page

The server re-validates everything; client-side checks are advisory.
A static capture-UI bundle is served from / when present.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from keydyn.phrases import PHRASES
from keydyn.store import SessionStore, SubmissionError


class WireKeyEvent(BaseModel):
    key: str
    kind: str = Field(pattern="^(down|up)$")
    t_us: int = Field(ge=0)


class WireSubject(BaseModel):
    subject_id: int
    gender: str
    age_group: str
    birth_year: int
    survey: dict | None = None


class SessionSubmission(BaseModel):
    subject: WireSubject
    phrase_id: str
    session_index: int
    events: list[WireKeyEvent]
    clock_resolution_us: float | None = None


class SubmitAccepted(BaseModel):
    status: str = "accepted"
    session_count: int


class PhraseInfo(BaseModel):
    phrase_id: str
    text: str
    key_tokens: list[str]


class SubjectProgress(BaseModel):
    subject_id: int
    progress: dict[str, int]


def create_app(store_dir: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    store = SessionStore(store_dir)
    app = FastAPI(title="keydyn ingest service")
    app.state.store = store

    @app.post("/api/session", response_model=SubmitAccepted)
    def submit_session(sub: SessionSubmission):
        if sub.phrase_id not in PHRASES:
            raise HTTPException(
                status_code=422,
                detail={"status": "rejected", "reason": "malformed_payload"},
            )
        try:
            count = store.submit(sub.model_dump())
        except SubmissionError as exc:
            raise HTTPException(
                status_code=422,
                detail={"status": "rejected", "reason": exc.reason},
            ) from exc
        return SubmitAccepted(session_count=count)

    @app.get("/api/subject/{subject_id}/progress", response_model=SubjectProgress)
    def subject_progress(subject_id: int):
        return SubjectProgress(subject_id=subject_id, progress=store.progress(subject_id))

    @app.get("/api/export", response_class=PlainTextResponse)
    def export(
        deidentify: int = Query(default=0),
        phrase: str | None = Query(default=None),
    ):
        try:
            csv_text = store.export_csv(phrase_id=phrase, deidentify=bool(deidentify))
        except SubmissionError as exc:
            raise HTTPException(
                status_code=409, detail={"reason": exc.reason, "detail": str(exc)}
            ) from exc
        return PlainTextResponse(csv_text, media_type="text/csv")

    @app.get("/api/phrases", response_model=list[PhraseInfo])
    def phrases():
        return [
            PhraseInfo(phrase_id=p.phrase_id, text=p.text, key_tokens=list(p.key_tokens))
            for p in PHRASES.values()
        ]

    if static_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = candidate if candidate.is_dir() else None
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
