"""Text-generation backends for table, code, and description synthesis.

The template backend is a marker: synthesis modules detect it and take
their built-in deterministic path instead of calling out. The HTTP backend
is a thin client for an external text-generation service; responses are
validated by the callers, never trusted.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import requests


class BackendFailure(RuntimeError):
    """The backend could not produce a usable response."""


@runtime_checkable
class TextGenBackend(Protocol):
    @property
    def is_template(self) -> bool: ...

    def complete(self, prompt: str, max_tokens: int = 2048, temperature: float = 0.7) -> str: ...


@dataclass(frozen=True)
class TemplateBackend:
    """Built-in deterministic generation; never issues a completion call."""

    @property
    def is_template(self) -> bool:
        return True

    def complete(self, prompt: str, max_tokens: int = 2048, temperature: float = 0.7) -> str:
        raise BackendFailure("template backend does not serve free-form completions")


TOKEN_ENV_VAR = "CHARTFORGE_LLM_TOKEN"


@dataclass
class HttpTextBackend:
    """Client for an HTTP text-generation endpoint.

    Sends ``{"prompt", "max_tokens", "temperature"}`` as JSON and expects
    ``{"text": "..."}`` back; ``payload_style="openai_chat"`` switches to a
    chat-completions request/response shape. The bearer token is read from
    the CHARTFORGE_LLM_TOKEN environment variable, never from config files.
    """

    endpoint: str
    payload_style: str = "plain"  # "plain" | "openai_chat"
    model: str = "default"
    max_retries: int = 3
    backoff_s: float = 1.0
    timeout_s: float = 60.0
    session: requests.Session = field(default_factory=requests.Session, repr=False)

    @property
    def is_template(self) -> bool:
        return False

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(TOKEN_ENV_VAR)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def complete(self, prompt: str, max_tokens: int = 2048, temperature: float = 0.7) -> str:
        if self.payload_style == "openai_chat":
            payload = {
                "model": self.model,
                "messages": [{"role": "user", "content": prompt}],
                "max_tokens": max_tokens,
                "temperature": temperature,
            }
        else:
            payload = {
                "prompt": prompt,
                "max_tokens": max_tokens,
                "temperature": temperature,
            }
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            if attempt:
                time.sleep(self.backoff_s * 2 ** (attempt - 1))
            try:
                resp = self.session.post(
                    self.endpoint,
                    json=payload,
                    headers=self._headers(),
                    timeout=self.timeout_s,
                )
                if resp.status_code >= 500:
                    last_error = BackendFailure(f"server error {resp.status_code}")
                    continue
                if resp.status_code != 200:
                    raise BackendFailure(f"endpoint returned {resp.status_code}")
                body = resp.json()
                if self.payload_style == "openai_chat":
                    return str(body["choices"][0]["message"]["content"])
                return str(body["text"])
            except BackendFailure:
                raise
            except (requests.RequestException, KeyError, ValueError, IndexError) as exc:
                last_error = exc
        raise BackendFailure(f"no response after {self.max_retries} attempts: {last_error}")
