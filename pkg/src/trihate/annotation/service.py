"""HTTP service backing the live annotation UI.

Endpoints:
  GET  /api/tasks/next?annotator=ID  next tweet this annotator has not labeled
  POST /api/labels                   submit {tweet_id, annotator_id, label}
  GET  /api/agreement                pooled Fleiss' Kappa over complete items
  GET  /api/progress                 distinct tweets labeled per annotator

Static UI assets, when a directory is given, are served from the root path.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..corpus import Corpus, Label
from ..errors import DataError
from .agreement import agreement_pipeline
from .store import AnnotationStore

GUIDELINES_DIGEST = (
    "Hateful: the text attacks, demeans, or threatens a person or group - "
    "insults, slurs, incitement, or prejudice aimed at identity such as race, "
    "religion, gender, or nationality, including mockery or sarcasm used to "
    "demean. "
    "Not-Hateful: the text carries no abusive intent - neutral, supportive, "
    "or venting frustration without targeting anyone."
)


class LabelSubmission(BaseModel):
    tweet_id: str
    annotator_id: str
    label: str


def create_app(
    corpus: Corpus,
    store: AnnotationStore,
    annotators_per_item: int = 3,
    static_dir: Optional[str | Path] = None,
) -> FastAPI:
    app = FastAPI(title="trihate annotation service")
    tweets_by_id = {t.id: t for t in corpus}

    @app.get("/api/tasks/next")
    def next_task(annotator: str):
        if not annotator.strip():
            raise HTTPException(status_code=400, detail="annotator id required")
        labeled = store.labeled_ids(annotator)
        for tweet in corpus:
            if tweet.id not in labeled:
                return {
                    "id": tweet.id,
                    "text": tweet.text,
                    "language": tweet.language.value,
                    "guidelines": GUIDELINES_DIGEST,
                    "done": False,
                    "labeled": len(labeled),
                    "total": len(corpus),
                }
        return {"done": True, "labeled": len(labeled), "total": len(corpus)}

    @app.post("/api/labels")
    def submit_label(body: LabelSubmission):
        if body.tweet_id not in tweets_by_id:
            raise HTTPException(status_code=404, detail=f"unknown tweet id {body.tweet_id!r}")
        if not body.annotator_id.strip():
            raise HTTPException(status_code=400, detail="annotator id required")
        try:
            label = Label.parse(body.label)
        except DataError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        record = store.submit(body.tweet_id, body.annotator_id, label)
        return {"ok": True, "tweet_id": record.tweet_id, "timestamp": record.timestamp}

    @app.get("/api/agreement")
    def agreement():
        records = store.snapshot()
        try:
            result = agreement_pipeline(records, n=annotators_per_item)
        except DataError:
            # Not enough complete items yet; the UI treats this as pending.
            return {
                "kappa": None,
                "observed_agreement": None,
                "expected_agreement": None,
                "interpretation": None,
                "item_count": 0,
                "annotator_count": annotators_per_item,
                "ties": 0,
            }
        payload = result.report.to_dict()
        payload["ties"] = sum(1 for o in result.outcomes if o.tie)
        payload["excluded_tweets"] = len(result.excluded_tweets)
        return payload

    @app.get("/api/progress")
    def progress():
        return {"total": len(corpus), "per_annotator": store.progress()}

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app
