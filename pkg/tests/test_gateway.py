from __future__ import annotations

import httpx
import pytest

from tracknlu.gateway import (
    AuthError,
    CompletionRequest,
    GatewayError,
    HttpBackend,
    MockBackend,
    MockMissError,
    RateLimitError,
    TransportFailure,
    make_backend,
    prompt_hash,
)

GOLDEN_COMPLETION = "Exercise = push-ups | Repetitions = 3 | Intensity = light"


class TestMockBackend:
    def test_fixture_round_trip(self, tmp_path):
        mock = MockBackend(tmp_path)
        prompt = "some golden prompt\nValues:"
        mock.record(prompt, GOLDEN_COMPLETION)
        result = mock.complete(CompletionRequest(prompt=prompt))
        assert result.text == GOLDEN_COMPLETION
        assert result.backend_id == "mock"

    def test_miss_names_prompt_hash(self, tmp_path):
        mock = MockBackend(tmp_path)
        with pytest.raises(MockMissError) as err:
            mock.complete(CompletionRequest(prompt="never recorded"))
        assert err.value.prompt_hash == prompt_hash("never recorded")
        assert err.value.prompt_hash in str(err.value)

    def test_empty_prompt_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            MockBackend(tmp_path).complete(CompletionRequest(prompt=""))

    def test_bit_deterministic_across_instances(self, tmp_path):
        prompt = "p"
        MockBackend(tmp_path).record(prompt, "canned")
        a = MockBackend(tmp_path).complete(CompletionRequest(prompt=prompt))
        b = MockBackend(tmp_path).complete(CompletionRequest(prompt=prompt))
        assert a == b

    def test_stop_sequence_trimmed(self, tmp_path):
        mock = MockBackend(tmp_path)
        mock.record("p", "line one\n###\nnoise")
        result = mock.complete(CompletionRequest(prompt="p", stop_sequence="\n###"))
        assert result.text == "line one"


class TestRequestValidation:
    def test_bad_max_tokens(self):
        with pytest.raises(ValueError):
            CompletionRequest(prompt="x", max_tokens=0).validate()

    def test_negative_temperature(self):
        with pytest.raises(ValueError):
            CompletionRequest(prompt="x", temperature=-1).validate()


def _backend_with(handler, **kwargs) -> HttpBackend:
    transport = httpx.MockTransport(handler)
    return HttpBackend(
        "http://llm.test", api_key="k", model="m",
        backoff_start=0.0, transport=transport, **kwargs,
    )


class TestHttpBackend:
    def test_successful_completion(self):
        seen = {}

        def handler(request):
            seen["body"] = request.read().decode()
            seen["auth"] = request.headers.get("authorization")
            return httpx.Response(200, json={
                "choices": [{"text": " Mood = calm", "finish_reason": "stop"}]
            })

        result = _backend_with(handler).complete(CompletionRequest(prompt="p"))
        assert result.text == " Mood = calm"
        assert not result.truncated
        assert seen["auth"] == "Bearer k"
        assert '"stop":["\\n###"]' in seen["body"]

    def test_truncation_flag(self):
        def handler(request):
            return httpx.Response(200, json={
                "choices": [{"text": "cut", "finish_reason": "length"}]
            })

        assert _backend_with(handler).complete(CompletionRequest(prompt="p")).truncated

    def test_retries_on_transient_errors_then_succeeds(self):
        calls = {"n": 0}

        def handler(request):
            calls["n"] += 1
            if calls["n"] < 3:
                return httpx.Response(500)
            return httpx.Response(200, json={"choices": [{"text": "ok"}]})

        result = _backend_with(handler).complete(CompletionRequest(prompt="p"))
        assert result.text == "ok"
        assert calls["n"] == 3

    def test_gives_up_after_max_attempts(self):
        calls = {"n": 0}

        def handler(request):
            calls["n"] += 1
            return httpx.Response(429)

        with pytest.raises(RateLimitError):
            _backend_with(handler).complete(CompletionRequest(prompt="p"))
        assert calls["n"] == 3

    def test_auth_error_never_resent(self):
        calls = {"n": 0}

        def handler(request):
            calls["n"] += 1
            return httpx.Response(401)

        with pytest.raises(AuthError):
            _backend_with(handler).complete(CompletionRequest(prompt="p"))
        assert calls["n"] == 1

    def test_transport_error_is_retryable(self):
        calls = {"n": 0}

        def handler(request):
            calls["n"] += 1
            raise httpx.ConnectError("refused")

        with pytest.raises(TransportFailure):
            _backend_with(handler).complete(CompletionRequest(prompt="p"))
        assert calls["n"] == 3


class TestMakeBackend:
    def test_mock_spec(self, tmp_path):
        backend = make_backend(f"mock:{tmp_path}")
        assert isinstance(backend, MockBackend)

    def test_static_spec(self):
        backend = make_backend("static:Mood = calm")
        result = backend.complete(CompletionRequest(prompt="anything"))
        assert result.text == "Mood = calm"

    def test_live_requires_base_url(self):
        with pytest.raises(GatewayError):
            make_backend("live", env={})

    def test_unknown_spec(self):
        with pytest.raises(ValueError):
            make_backend("carrier-pigeon")
