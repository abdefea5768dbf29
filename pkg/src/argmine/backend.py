"""Text generators that produce annotated text for a document.

``gold_echo`` returns the encoding of the reference graph (for testing the
pipeline end to end), ``replay`` returns strings produced offline by any
external model, and ``http`` calls a generation server.
"""

from __future__ import annotations

import copy
import json
import logging
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import requests

from .codec import EncodeOptions, encode
from .io import read_jsonl
from .model import ArgumentGraph, Document, LabelScheme

log = logging.getLogger(__name__)

TOKEN_ENV = "ARGMINE_BACKEND_TOKEN"


class BackendError(RuntimeError):
    pass


class BackendUnavailable(BackendError):
    pass


class MissingReplayEntry(BackendError, KeyError):
    pass


class MissingGold(BackendError, KeyError):
    pass


@dataclass(frozen=True)
class GenerationRequest:
    doc_id: str
    input_text: str
    max_output_words: int = 1024

    def __post_init__(self):
        if self.max_output_words <= 0:
            raise ValueError("max_output_words must be positive")


@dataclass(frozen=True)
class RetryPolicy:
    max_retries: int = 3
    backoff: float = 0.5
    max_backoff: float = 8.0

    def delay(self, attempt: int, rng: random.Random) -> float:
        base = min(self.max_backoff, self.backoff * 2 ** attempt)
        return base * (0.5 + rng.random() / 2)


DEFAULT_TEMPLATE = {"inputs": "{input}", "parameters": {"max_new_tokens": "{max_output_words}"}}


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "gold_echo"
    endpoint_url: str | None = None
    request_template: Mapping[str, Any] = field(default_factory=lambda: dict(DEFAULT_TEMPLATE))
    response_path: str = "generated_text"
    timeout: float = 60.0
    max_concurrent_requests: int = 4
    retry_policy: RetryPolicy = RetryPolicy()
    replay_path: str | None = None
    headers: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("gold_echo", "replay", "http"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "http" and not self.endpoint_url:
            raise ValueError("http backend needs endpoint_url")
        if self.kind != "http" and self.endpoint_url:
            raise ValueError(f"endpoint_url only applies to the http backend, not {self.kind!r}")
        if self.max_concurrent_requests < 1:
            raise ValueError("max_concurrent_requests must be at least 1")

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "BackendConfig":
        d = dict(d)
        if "retry_policy" in d and isinstance(d["retry_policy"], Mapping):
            d["retry_policy"] = RetryPolicy(**d["retry_policy"])
        return cls(**d)


class Backend:
    def generate(self, req: GenerationRequest) -> str:
        raise NotImplementedError

    def generate_many(self, reqs: Sequence[GenerationRequest]) -> list[str]:
        return [self.generate(r) for r in reqs]


class GoldEchoBackend(Backend):
    def __init__(self, gold: Mapping[str, tuple[Document, ArgumentGraph]], scheme: LabelScheme,
                 opts: EncodeOptions = EncodeOptions()):
        self.gold = dict(gold)
        self.scheme = scheme
        self.opts = opts

    def generate(self, req):
        try:
            doc, graph = self.gold[req.doc_id]
        except KeyError:
            raise MissingGold(f"no gold graph registered for {req.doc_id!r}") from None
        return encode(doc, graph, self.scheme, self.opts).text


class ReplayBackend(Backend):
    """Serves stored generations from ``{"doc_id": ..., "output": ...}`` records."""

    def __init__(self, outputs: Mapping[str, str]):
        self.outputs = dict(outputs)

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayBackend":
        outputs = {}
        for rec in read_jsonl(path):
            if "doc_id" not in rec or "output" not in rec:
                raise ValueError(f"{path}: replay records need 'doc_id' and 'output'")
            outputs[str(rec["doc_id"])] = str(rec["output"])
        return cls(outputs)

    def generate(self, req):
        try:
            return self.outputs[req.doc_id]
        except KeyError:
            raise MissingReplayEntry(f"no replay output for {req.doc_id!r}") from None


def fill_template(template: Any, req: GenerationRequest) -> Any:
    """Substitute ``{input}``, ``{doc_id}`` and ``{max_output_words}`` in string leaves."""
    if isinstance(template, str):
        if template == "{max_output_words}":
            return req.max_output_words
        return (template.replace("{input}", req.input_text)
                .replace("{doc_id}", req.doc_id)
                .replace("{max_output_words}", str(req.max_output_words)))
    if isinstance(template, Mapping):
        return {k: fill_template(v, req) for k, v in template.items()}
    if isinstance(template, list):
        return [fill_template(v, req) for v in template]
    return copy.deepcopy(template)


def extract(reply: Any, path: str) -> str:
    """Follow a dotted path (``choices.0.text``) into a decoded JSON reply."""
    node = reply
    for part in filter(None, path.split(".")):
        if isinstance(node, list):
            node = node[int(part)]
        elif isinstance(node, Mapping):
            node = node[part]
        else:
            raise KeyError(part)
    if not isinstance(node, str):
        raise TypeError(f"value at {path!r} is {type(node).__name__}, not a string")
    return node


class HttpBackend(Backend):
    def __init__(self, cfg: BackendConfig, session: requests.Session | None = None, seed: int | None = None):
        self.cfg = cfg
        self.session = session or requests.Session()
        self._slots = threading.BoundedSemaphore(cfg.max_concurrent_requests)
        self._rng = random.Random(seed)
        self._rng_lock = threading.Lock()
        self.headers = {"Content-Type": "application/json", **cfg.headers}
        token = os.environ.get(TOKEN_ENV)
        if token:
            self.headers["Authorization"] = f"Bearer {token}"

    def _sleep(self, attempt: int):
        with self._rng_lock:
            delay = self.cfg.retry_policy.delay(attempt, self._rng)
        time.sleep(delay)

    def generate(self, req):
        body = fill_template(self.cfg.request_template, req)
        last: Exception | None = None
        for attempt in range(self.cfg.retry_policy.max_retries + 1):
            if attempt:
                self._sleep(attempt - 1)
            try:
                with self._slots:
                    resp = self.session.post(self.cfg.endpoint_url, data=json.dumps(body),
                                             headers=self.headers, timeout=self.cfg.timeout)
                if resp.status_code >= 500 or resp.status_code == 429:
                    last = BackendError(f"HTTP {resp.status_code}")
                    log.debug("%s: attempt %d got HTTP %d", req.doc_id, attempt + 1, resp.status_code)
                    continue
                resp.raise_for_status()
                return extract(resp.json(), self.cfg.response_path)
            except (requests.ConnectionError, requests.Timeout) as exc:
                last = exc
                log.debug("%s: attempt %d failed: %s", req.doc_id, attempt + 1, exc)
            except requests.HTTPError as exc:
                raise BackendError(f"{req.doc_id}: {exc}") from exc
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                raise BackendError(f"{req.doc_id}: bad reply: {exc}") from exc
        raise BackendUnavailable(f"{req.doc_id}: gave up after {self.cfg.retry_policy.max_retries + 1} attempts: {last}")

    def generate_many(self, reqs):
        # results come back in request order whatever the completion order
        with ThreadPoolExecutor(max_workers=self.cfg.max_concurrent_requests) as pool:
            return list(pool.map(self.generate, reqs))


def build_backend(cfg: BackendConfig, gold: Mapping[str, tuple[Document, ArgumentGraph]] | None = None,
                  scheme: LabelScheme | None = None, opts: EncodeOptions = EncodeOptions()) -> Backend:
    if cfg.kind == "gold_echo":
        if gold is None or scheme is None:
            raise ValueError("gold_echo backend needs gold graphs and a scheme")
        return GoldEchoBackend(gold, scheme, opts)
    if cfg.kind == "replay":
        if not cfg.replay_path:
            raise ValueError("replay backend needs replay_path")
        return ReplayBackend.from_file(cfg.replay_path)
    return HttpBackend(cfg)


def generate(req: GenerationRequest, cfg: BackendConfig, **kw) -> str:
    return build_backend(cfg, **kw).generate(req)
