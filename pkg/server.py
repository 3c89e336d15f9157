"""Mock model and MT endpoints for local runs and integration tests.

    uvicorn server:app --port 8000

Serves the bag-of-words toy model behind the classifier (/predict) and
completion (/score_labels) wire contracts, plus a dictionary /translate.
"""
import logging
import math
import os
import sys

sys.path.append(os.path.dirname(__file__))
sys.path.append(os.path.join(os.path.dirname(__file__), "src"))

from fastapi import Depends, FastAPI, Header, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from core.errors import BackTranslationError
from models.toy import load_weight_lexicon, normalize_lexicon, toy_probs
from perturb.translate import DictionaryTranslator, load_translation_table

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
DEFAULT_LABELS = ("positive", "negative")
DEFAULT_SURFACE_FORMS = {" positive": "positive", " negative": "negative"}
LOG_FLOOR = 1e-300


class PredictRequest(BaseModel):
    text: str


class ScoreLabelsRequest(BaseModel):
    prompt: str
    candidates: list[str]


class TranslateRequest(BaseModel):
    text: str
    source: str
    target: str


def _default_lexicon() -> dict[str, float]:
    path = os.environ.get("MOCK_LEXICON", os.path.join(DATA_DIR, "toy_sentiment.tsv"))
    return load_weight_lexicon(path) if os.path.exists(path) else {"good": 2.0, "great": 2.5, "bad": -2.0, "awful": -2.5}


def _default_translator() -> DictionaryTranslator:
    forward = os.path.join(DATA_DIR, "mt_en_de.tsv")
    backward = os.path.join(DATA_DIR, "mt_de_en.tsv")
    if os.path.exists(forward) and os.path.exists(backward):
        return DictionaryTranslator(load_translation_table(forward), load_translation_table(backward))
    return DictionaryTranslator({}, {})


def create_app(lexicon: dict[str, float] | None = None, labels: tuple[str, str] = DEFAULT_LABELS,
               surface_forms: dict[str, str] | None = None, translator: DictionaryTranslator | None = None,
               token: str | None = None) -> FastAPI:
    lexicon = normalize_lexicon(lexicon if lexicon is not None else _default_lexicon())
    surface_forms = surface_forms or DEFAULT_SURFACE_FORMS
    translator = translator or _default_translator()
    token = token if token is not None else os.environ.get("MOCK_TOKEN")

    app = FastAPI(title="explain-robustness mock endpoints")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def authorize(authorization: str | None = Header(default=None)) -> None:
        if token and authorization != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or wrong bearer token")

    def label_probs(text: str) -> dict[str, float]:
        return dict(zip(labels, toy_probs(lexicon, text)))

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/models")
    def get_models():
        return {"labels": list(labels), "surface_forms": surface_forms, "lexicon_size": len(lexicon)}

    @app.post("/predict", dependencies=[Depends(authorize)])
    def predict(request: PredictRequest):
        return {"probs": label_probs(request.text)}

    @app.post("/score_labels", dependencies=[Depends(authorize)])
    def score_labels(request: ScoreLabelsRequest):
        # prompt scaffolding carries no lexicon weight, so the whole prompt is scored
        probs = label_probs(request.prompt)
        logprobs = {
            candidate: math.log(max(probs[surface_forms[candidate]], LOG_FLOOR))
            for candidate in request.candidates
            if candidate in surface_forms
        }
        return {"logprobs": logprobs}

    @app.post("/translate", dependencies=[Depends(authorize)])
    def translate(request: TranslateRequest):
        try:
            return {"text": translator.translate(request.text, request.source, request.target)}
        except BackTranslationError as e:
            logger.warning(f"/translate failed: {e}")
            raise HTTPException(status_code=422, detail=str(e)) from e

    return app


app = create_app()
