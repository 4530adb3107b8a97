"""Completion backends: remote HTTP, deterministic replay, write-through cache.

All backends share one key function over (prompt bytes, model, decoding
params), so a cache file written during a live run doubles as a replay store
for offline reruns. Store files are JSONL, one record per line, append-only.
"""

import fcntl
import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import requests

DEFAULT_API_KEY_ENV = "LLM_API_KEY"
CACHE_FILE_NAME = "completions.jsonl"


class BackendError(Exception):
    pass


class ConfigError(BackendError):
    pass


class TransportError(BackendError):
    """HTTP failure that persisted through the bounded retries."""


class RateLimited(BackendError):
    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class MissingReplayEntry(BackendError):
    """The prompt's key is absent from the replay store."""


class StoreError(BackendError):
    """Malformed replay/cache store file."""


class Source(Enum):
    HTTP = "http"
    REPLAY = "replay"
    CACHE = "cache"


class BackendMode(Enum):
    HTTP = "http"
    REPLAY = "replay"


@dataclass(frozen=True)
class DecodingParams:
    model_id: str
    temperature: float = 0.0
    max_tokens: int = 256
    stop_sequences: tuple[str, ...] = ("\n\n",)

    def __post_init__(self):
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ConfigError("max_tokens must be positive")


@dataclass(frozen=True)
class CompletionRecord:
    prompt: object  # PromptText or raw str
    params: DecodingParams
    completion: str
    source: Source
    latency_ms: float


@dataclass(frozen=True)
class BackendConfig:
    mode: BackendMode
    model_id: str
    endpoint_url: str | None = None
    cache_dir: str | None = None
    replay_path: str | None = None
    api_key_env: str = DEFAULT_API_KEY_ENV

    def __post_init__(self):
        if self.mode is BackendMode.HTTP and not self.endpoint_url:
            raise ConfigError("http mode requires endpoint_url")
        if self.mode is BackendMode.REPLAY and not self.replay_path:
            raise ConfigError("replay mode requires replay_path")

    def params(self, **overrides) -> DecodingParams:
        return DecodingParams(model_id=self.model_id, **overrides)

    @staticmethod
    def from_file(path) -> "BackendConfig":
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"backend config {path}: {e}") from e
        try:
            mode = BackendMode(obj["mode"])
            model_id = obj["model_id"]
        except (KeyError, ValueError) as e:
            raise ConfigError(f"backend config {path}: bad mode/model_id: {e}") from e
        return BackendConfig(
            mode=mode,
            model_id=model_id,
            endpoint_url=obj.get("endpoint_url"),
            cache_dir=obj.get("cache_dir"),
            replay_path=obj.get("replay_path"),
            api_key_env=obj.get("api_key_env", DEFAULT_API_KEY_ENV),
        )


def _prompt_text(prompt) -> str:
    return prompt.text if hasattr(prompt, "text") else prompt


def cache_key(prompt, params: DecodingParams) -> str:
    """Stable 64-hex digest over prompt bytes and decoding parameters."""
    payload = json.dumps(
        {
            "prompt": _prompt_text(prompt),
            "model": params.model_id,
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
            "stop": list(params.stop_sequences),
        },
        sort_keys=True,
        ensure_ascii=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def truncate_at_stop(text: str, stop_sequences) -> str:
    cut = len(text)
    for stop in stop_sequences:
        idx = text.find(stop)
        if idx >= 0:
            cut = min(cut, idx)
    return text[:cut]


def store_record(prompt, params: DecodingParams, completion: str) -> dict:
    return {
        "key": cache_key(prompt, params),
        "model": params.model_id,
        "prompt": _prompt_text(prompt),
        "params": {
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
            "stop": list(params.stop_sequences),
        },
        "completion": completion,
    }


def load_store_index(path) -> dict[str, str]:
    """key -> completion from a JSONL store; later duplicates win."""
    index = {}
    path = Path(path)
    if not path.exists():
        return index
    with path.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                index[obj["key"]] = obj["completion"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise StoreError(f"{path}:{lineno}: malformed store record: {e}") from e
    return index


def append_store_record(path, record: dict) -> None:
    """Append one record; atomic at line granularity via an advisory lock."""
    line = json.dumps(record, ensure_ascii=True, separators=(",", ":")) + "\n"
    with open(path, "a", encoding="utf-8") as f:
        fcntl.flock(f.fileno(), fcntl.LOCK_EX)
        try:
            f.write(line)
            f.flush()
        finally:
            fcntl.flock(f.fileno(), fcntl.LOCK_UN)


class ReplayBackend:
    """Answers prompts from a recorded store; lock-free immutable index."""

    def __init__(self, replay_path):
        self.replay_path = Path(replay_path)
        if not self.replay_path.exists():
            raise ConfigError(f"replay store not found: {replay_path}")
        self._index = load_store_index(self.replay_path)

    def __len__(self):
        return len(self._index)

    def complete(self, prompt, params: DecodingParams) -> CompletionRecord:
        key = cache_key(prompt, params)
        try:
            completion = self._index[key]
        except KeyError:
            head = _prompt_text(prompt)[:80].replace("\n", "\\n")
            raise MissingReplayEntry(
                f"no replay entry for key {key} (prompt starts {head!r})"
            ) from None
        return CompletionRecord(
            prompt=prompt,
            params=params,
            completion=truncate_at_stop(completion, params.stop_sequences),
            source=Source.REPLAY,
            latency_ms=0.0,
        )


class HttpBackend:
    """Minimal JSON completion POST with bounded retries.

    Retries (3 attempts, exponential backoff from 1 s) apply only to
    transport errors, 5xx, and 429; other HTTP errors fail immediately.
    """

    max_attempts = 3
    backoff_s = 1.0

    def __init__(self, endpoint_url: str, api_key_env: str = DEFAULT_API_KEY_ENV,
                 timeout_s: float = 60.0, session=None):
        self.endpoint_url = endpoint_url
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self._session = session or requests.Session()

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, prompt, params: DecodingParams) -> CompletionRecord:
        payload = {
            "model": params.model_id,
            "prompt": _prompt_text(prompt),
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
            "stop": list(params.stop_sequences),
        }
        start = time.perf_counter()
        last_error = None
        retry_after = None
        for attempt in range(self.max_attempts):
            if attempt:
                time.sleep(self.backoff_s * 2 ** (attempt - 1))
            try:
                resp = self._session.post(
                    self.endpoint_url, json=payload, headers=self._headers(),
                    timeout=self.timeout_s,
                )
            except requests.RequestException as e:
                last_error = TransportError(f"POST {self.endpoint_url}: {e}")
                continue
            if resp.status_code == 429:
                try:
                    retry_after = float(resp.headers.get("Retry-After", ""))
                except ValueError:
                    retry_after = None
                last_error = RateLimited(
                    f"rate limited by {self.endpoint_url}", retry_after
                )
                continue
            if resp.status_code >= 500:
                last_error = TransportError(
                    f"POST {self.endpoint_url}: HTTP {resp.status_code}"
                )
                continue
            if resp.status_code != 200:
                raise TransportError(
                    f"POST {self.endpoint_url}: HTTP {resp.status_code}: {resp.text[:200]}"
                )
            try:
                text = resp.json()["choices"][0]["text"]
            except (ValueError, KeyError, IndexError) as e:
                raise TransportError(f"malformed completion response: {e}") from e
            latency = (time.perf_counter() - start) * 1000.0
            return CompletionRecord(
                prompt=prompt,
                params=params,
                completion=truncate_at_stop(text, params.stop_sequences),
                source=Source.HTTP,
                latency_ms=latency,
            )
        raise last_error


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0


class CachedBackend:
    """Write-through persistent cache wrapped around another backend."""

    def __init__(self, inner, cache_dir):
        self.inner = inner
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.cache_path = self.cache_dir / CACHE_FILE_NAME
        self.stats = CacheStats()
        self._lock = threading.Lock()
        self._index = load_store_index(self.cache_path)

    def complete(self, prompt, params: DecodingParams) -> CompletionRecord:
        key = cache_key(prompt, params)
        with self._lock:
            cached = self._index.get(key)
        if cached is not None:
            self.stats.hits += 1
            return CompletionRecord(
                prompt=prompt,
                params=params,
                completion=truncate_at_stop(cached, params.stop_sequences),
                source=Source.CACHE,
                latency_ms=0.0,
            )
        self.stats.misses += 1
        record = self.inner.complete(prompt, params)
        with self._lock:
            self._index[key] = record.completion
            append_store_record(
                self.cache_path, store_record(prompt, params, record.completion)
            )
        return record


def make_backend(config: BackendConfig):
    """Build the configured backend, cache-wrapped when cache_dir is set."""
    if config.mode is BackendMode.REPLAY:
        backend = ReplayBackend(config.replay_path)
    else:
        backend = HttpBackend(config.endpoint_url, api_key_env=config.api_key_env)
    if config.cache_dir:
        backend = CachedBackend(backend, config.cache_dir)
    return backend


def replay_fingerprint(config: BackendConfig) -> str | None:
    """sha256 of the replay store bytes, for report provenance."""
    if config.mode is not BackendMode.REPLAY or not config.replay_path:
        return None
    return hashlib.sha256(Path(config.replay_path).read_bytes()).hexdigest()
