"""Text embeddings and cosine ranking used for shot retrieval and label snapping.

The local embedder is a deterministic trigram-hash encoder; the remote client
speaks a simple batch-encode HTTP contract for fidelity runs.
"""

from __future__ import annotations

import os
import time
from typing import Iterable, Protocol, Sequence

import httpx
import numpy as np

DIM = 512

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


class EmbeddingError(RuntimeError):
    """Remote encoder failure, with retry metadata in the message."""


class Embedder(Protocol):
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


class LocalEmbedder:
    """Deterministic 512-dim trigram-hash embedder.

    Lowercase the text, pad with single spaces, hash each character trigram
    with FNV-1a 64-bit into 512 count buckets, then L2-normalize. Empty text
    maps to the zero vector.
    """

    dim = DIM

    def __init__(self) -> None:
        self._cache: dict[str, np.ndarray] = {}

    def embed(self, text: str) -> np.ndarray:
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        counts = np.zeros(DIM, dtype=np.float64)
        lowered = text.lower()
        if lowered:
            padded = f" {lowered} "
            for i in range(len(padded) - 2):
                tri = padded[i : i + 3]
                counts[_fnv1a64(tri.encode("utf-8")) % DIM] += 1.0
        norm = float(np.linalg.norm(counts))
        vec = counts / norm if norm > 0 else counts
        vec.setflags(write=False)
        self._cache[text] = vec
        return vec


class RemoteEmbedder:
    """Client for a batch text-encoder endpoint: POST {texts} -> {vectors}."""

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        dim: int = 384,
        timeout: float = 10.0,
        max_attempts: int = 3,
        backoff_start: float = 0.25,
        transport: httpx.BaseTransport | None = None,
    ) -> None:
        self.dim = dim
        self._max_attempts = max_attempts
        self._backoff_start = backoff_start
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._client = httpx.Client(
            base_url=base_url, headers=headers, timeout=timeout, transport=transport
        )
        self._cache: dict[str, np.ndarray] = {}

    def embed(self, text: str) -> np.ndarray:
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        vec = self.embed_many([text])[0]
        self._cache[text] = vec
        return vec

    def embed_many(self, texts: Sequence[str]) -> list[np.ndarray]:
        last_error: Exception | None = None
        for attempt in range(self._max_attempts):
            try:
                resp = self._client.post("/embed", json={"texts": list(texts)})
            except httpx.TransportError as exc:
                last_error = exc
            else:
                if resp.status_code in (401, 403):
                    raise EmbeddingError(f"auth failure ({resp.status_code}); not retried")
                if resp.status_code < 400:
                    vectors = resp.json()["vectors"]
                    return [self._normalize(np.asarray(v, dtype=np.float64)) for v in vectors]
                last_error = EmbeddingError(f"encoder returned {resp.status_code}")
            if attempt + 1 < self._max_attempts:
                time.sleep(self._backoff_start * (2**attempt))
        raise EmbeddingError(
            f"encoder unreachable after {self._max_attempts} attempts: {last_error}"
        )

    @staticmethod
    def _normalize(vec: np.ndarray) -> np.ndarray:
        norm = float(np.linalg.norm(vec))
        out = vec / norm if norm > 0 else vec
        out.setflags(write=False)
        return out


def make_embedder(env: dict[str, str] | None = None) -> Embedder:
    """Build the embedder selected by EMBED_MODE (local unless set to remote)."""
    env = dict(os.environ) if env is None else env
    if env.get("EMBED_MODE", "local") == "remote":
        base_url = env.get("EMBED_BASE_URL")
        if not base_url:
            raise EmbeddingError("EMBED_MODE=remote requires EMBED_BASE_URL")
        return RemoteEmbedder(base_url, api_key=env.get("EMBED_API_KEY"))
    return LocalEmbedder()


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; zero vectors yield 0.0 by convention."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def rank_by_similarity(
    query: str,
    candidates: Iterable[tuple[str, str]],
    embedder: Embedder,
) -> list[tuple[str, float]]:
    """Rank candidate (id, text) pairs by cosine to the query, descending.

    Scores are rounded to 12 decimals before sorting so last-bit float noise
    from the batched matrix product cannot reorder effective ties; ties are
    then broken by ascending id, which keeps rankings bit-stable.
    """
    pairs = list(candidates)
    ids = [cid for cid, _ in pairs]
    if len(set(ids)) != len(ids):
        raise ValueError("candidate ids must be unique")
    if not pairs:
        return []
    qvec = embedder.embed(query)
    matrix = np.stack([embedder.embed(text) for _, text in pairs])
    qnorm = float(np.linalg.norm(qvec))
    norms = np.linalg.norm(matrix, axis=1)
    safe = np.where(norms == 0.0, 1.0, norms)
    scores = matrix @ qvec / safe
    if qnorm == 0.0:
        scores = np.zeros(len(pairs))
    else:
        scores = scores / qnorm
        scores = np.where(norms == 0.0, 0.0, scores)
    scored = [(cid, round(float(s), 12)) for cid, s in zip(ids, scores)]
    scored.sort(key=lambda entry: (-entry[1], entry[0]))
    return scored
