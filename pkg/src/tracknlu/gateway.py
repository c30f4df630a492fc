"""Completion-backend contract: an OpenAI-compatible HTTP client, a
fixture-replay mock for deterministic tests, and a fixed-text backend for
demos."""

from __future__ import annotations

import hashlib
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

DEFAULT_STOP = "\n###"
DEFAULT_MAX_TOKENS = 256
DEFAULT_TEMPERATURE = 0.0


class GatewayError(RuntimeError):
    """Base class for completion-backend failures."""

    retryable = False


class AuthError(GatewayError):
    retryable = False


class RateLimitError(GatewayError):
    retryable = True


class TransportFailure(GatewayError):
    retryable = True


class DeadlineExceeded(GatewayError):
    retryable = False


class MockMissError(GatewayError):
    """The mock backend has no fixture for this prompt."""

    def __init__(self, prompt_hash: str) -> None:
        super().__init__(f"no mock fixture for prompt {prompt_hash}")
        self.prompt_hash = prompt_hash


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    stop_sequence: str = DEFAULT_STOP
    max_tokens: int = DEFAULT_MAX_TOKENS
    temperature: float = DEFAULT_TEMPERATURE
    model_name: str = ""

    def validate(self) -> None:
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class CompletionResult:
    text: str
    latency_ms: int
    backend_id: str
    truncated: bool = False


class CompletionBackend(Protocol):
    def complete(self, req: CompletionRequest) -> CompletionResult: ...


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class MockBackend:
    """Replay canned completions from a directory of {sha256(prompt)}.txt files."""

    def __init__(self, fixtures_dir: str | Path) -> None:
        self.fixtures_dir = Path(fixtures_dir)

    def complete(self, req: CompletionRequest) -> CompletionResult:
        req.validate()
        digest = prompt_hash(req.prompt)
        path = self.fixtures_dir / f"{digest}.txt"
        if not path.exists():
            raise MockMissError(digest)
        text = path.read_text(encoding="utf-8")
        if req.stop_sequence and req.stop_sequence in text:
            text = text.split(req.stop_sequence, 1)[0]
        return CompletionResult(text=text, latency_ms=0, backend_id="mock")

    def record(self, prompt: str, text: str) -> Path:
        """Write a fixture for a prompt; used by tests and fixture tooling."""
        self.fixtures_dir.mkdir(parents=True, exist_ok=True)
        path = self.fixtures_dir / f"{prompt_hash(prompt)}.txt"
        path.write_text(text, encoding="utf-8")
        return path


class StaticBackend:
    """Return one fixed completion for every prompt (demo/dev only)."""

    def __init__(self, text: str) -> None:
        self.text = text

    def complete(self, req: CompletionRequest) -> CompletionResult:
        req.validate()
        return CompletionResult(text=self.text, latency_ms=0, backend_id="static")


class HttpBackend:
    """OpenAI-compatible /completions client with retry and a total deadline."""

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        model: str = "",
        max_attempts: int = 3,
        backoff_start: float = 0.25,
        deadline: float = 30.0,
        transport: httpx.BaseTransport | None = None,
    ) -> None:
        self.model = model
        self._max_attempts = max_attempts
        self._backoff_start = backoff_start
        self._deadline = deadline
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._client = httpx.Client(
            base_url=base_url, headers=headers, timeout=deadline, transport=transport
        )

    def complete(self, req: CompletionRequest) -> CompletionResult:
        req.validate()
        body = {
            "model": req.model_name or self.model,
            "prompt": req.prompt,
            "max_tokens": req.max_tokens,
            "temperature": req.temperature,
            "stop": [req.stop_sequence] if req.stop_sequence else [],
        }
        started = time.monotonic()
        last_error: GatewayError | None = None
        for attempt in range(self._max_attempts):
            if time.monotonic() - started > self._deadline:
                raise DeadlineExceeded(f"deadline of {self._deadline}s exceeded")
            try:
                resp = self._client.post("/completions", json=body)
            except httpx.TransportError as exc:
                last_error = TransportFailure(str(exc))
            else:
                if resp.status_code in (401, 403):
                    raise AuthError(f"authentication failed ({resp.status_code})")
                if resp.status_code == 429:
                    last_error = RateLimitError("rate limited (429)")
                elif resp.status_code >= 500:
                    last_error = TransportFailure(f"server error ({resp.status_code})")
                elif resp.status_code >= 400:
                    raise GatewayError(f"request rejected ({resp.status_code}): {resp.text}")
                else:
                    payload = resp.json()
                    choice = payload["choices"][0]
                    text = choice.get("text", "")
                    if req.stop_sequence and req.stop_sequence in text:
                        text = text.split(req.stop_sequence, 1)[0]
                    return CompletionResult(
                        text=text,
                        latency_ms=int((time.monotonic() - started) * 1000),
                        backend_id=body["model"] or "http",
                        truncated=choice.get("finish_reason") == "length",
                    )
            if attempt + 1 < self._max_attempts:
                remaining = self._deadline - (time.monotonic() - started)
                if remaining <= 0:
                    break
                time.sleep(min(self._backoff_start * (2**attempt), remaining))
        assert last_error is not None
        raise last_error


def make_backend(spec: str, env: dict[str, str] | None = None) -> CompletionBackend:
    """Build a backend from a CLI-style spec: mock:DIR, static:TEXT, or live."""
    env = dict(os.environ) if env is None else env
    if spec.startswith("mock:"):
        return MockBackend(spec[len("mock:") :])
    if spec.startswith("static:"):
        return StaticBackend(spec[len("static:") :])
    if spec == "live":
        base_url = env.get("LLM_BASE_URL")
        if not base_url:
            raise GatewayError("live backend requires LLM_BASE_URL")
        return HttpBackend(
            base_url, api_key=env.get("LLM_API_KEY"), model=env.get("LLM_MODEL", "")
        )
    raise ValueError(f"unknown backend spec {spec!r}")
