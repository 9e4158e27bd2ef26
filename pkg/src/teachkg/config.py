"""Runtime configuration shared by the CLI and the HTTP service.

The config file uses the same JSON dialect as course manifests::

    {"corpus_root": "corpus", "alpha": 0.5, "port": 8080, "k": 5,
     "extraction": {"top_k": 5, "min_score": 0.0, "min_token_len": 3},
     "inference": {"threshold": 0.8, "min_support": 2, "transitive_reduction": false}}

``TEACHKG_CORPUS`` in the environment overrides ``corpus_root``.
"""

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .errors import InvalidParams, MissingFile, SchemaViolation
from .ingest import _Checker, _load_json
from .prereq import InferParams
from .similarity import _check_alpha
from .topics import ExtractionParams

ENV_CORPUS = "TEACHKG_CORPUS"

_TOP = ("corpus_root", "alpha", "port", "k", "extraction", "inference")
_EXTRACTION = ("top_k", "min_score", "min_token_len", "stopword_list")
_INFERENCE = ("threshold", "min_support", "transitive_reduction")


@dataclass(frozen=True)
class Config:
    corpus_root: Optional[Path] = None
    alpha: float = 0.5
    extraction: ExtractionParams = field(default_factory=ExtractionParams)
    inference: InferParams = field(default_factory=InferParams)
    port: int = 8080
    k: int = 5

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not isinstance(self.port, int) or isinstance(self.port, bool) or not 0 <= self.port <= 65535:
            raise InvalidParams(f"port must be in [0, 65535], got {self.port!r}")
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise InvalidParams(f"k must be a positive integer, got {self.k!r}")


def _number(value, path, ck):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        ck.fail(path, "must be a number")
    return value


def _int(value, path, ck):
    if isinstance(value, bool) or not isinstance(value, int):
        ck.fail(path, "must be an integer")
    return value


def parse_config(data, source=None):
    doc = _load_json(data, source)
    ck = _Checker(source)
    ck.obj(doc, "$", (), _TOP)
    kw = {}
    if "corpus_root" in doc:
        root = Path(ck.string(doc["corpus_root"], "$.corpus_root"))
        if source is not None and not root.is_absolute():
            root = Path(source).parent / root
        kw["corpus_root"] = root
    if "alpha" in doc:
        kw["alpha"] = _number(doc["alpha"], "$.alpha", ck)
    if "port" in doc:
        kw["port"] = _int(doc["port"], "$.port", ck)
    if "k" in doc:
        kw["k"] = _int(doc["k"], "$.k", ck)
    try:
        if "extraction" in doc:
            ex = doc["extraction"]
            ck.obj(ex, "$.extraction", (), _EXTRACTION)
            sub = {}
            for key in ("top_k", "min_token_len"):
                if key in ex:
                    sub[key] = _int(ex[key], f"$.extraction.{key}", ck)
            if "min_score" in ex:
                sub["min_score"] = _number(ex["min_score"], "$.extraction.min_score", ck)
            if "stopword_list" in ex:
                sub["stopword_list"] = ck.string(ex["stopword_list"], "$.extraction.stopword_list")
            kw["extraction"] = ExtractionParams(**sub)
        if "inference" in doc:
            inf = doc["inference"]
            ck.obj(inf, "$.inference", (), _INFERENCE)
            sub = {}
            if "threshold" in inf:
                sub["threshold"] = _number(inf["threshold"], "$.inference.threshold", ck)
            if "min_support" in inf:
                sub["min_support"] = _int(inf["min_support"], "$.inference.min_support", ck)
            if "transitive_reduction" in inf:
                sub["transitive_reduction"] = ck.boolean(inf["transitive_reduction"],
                                                         "$.inference.transitive_reduction")
            kw["inference"] = InferParams(**sub)
        return Config(**kw)
    except InvalidParams as exc:
        raise SchemaViolation("$", str(exc), source) from None


def load_config(path=None, environ=None):
    """Read ``path`` (if given) and apply the environment override."""
    environ = os.environ if environ is None else environ
    if path is None:
        config = Config()
    else:
        path = Path(path)
        if not path.is_file():
            raise MissingFile(path)
        config = parse_config(path.read_bytes(), str(path))
    if environ.get(ENV_CORPUS):
        config = replace(config, corpus_root=Path(environ[ENV_CORPUS]))
    return config
