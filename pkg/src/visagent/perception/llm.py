"""Client for an OpenAI-compatible chat endpoint with inline image input."""

from __future__ import annotations

import base64
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

import requests

from ..errors import AuthError, ConfigError, ProviderError, RateLimited
from ..responses import ParsedResponse, parse_agent_response

ENV_BASE_URL = "VISAGENT_LLM_BASE_URL"
ENV_API_KEY = "VISAGENT_LLM_API_KEY"
ENV_MODEL = "VISAGENT_LLM_MODEL"

MAX_IMAGES_PER_REQUEST = 4


@dataclass(frozen=True)
class Message:
    role: str
    text: str
    images: tuple = ()  # raw PNG bytes attachments


@dataclass(frozen=True)
class ChatRequest:
    messages: tuple
    model: str = ""
    max_tokens: int = 1024

    def __post_init__(self):
        if not self.messages:
            raise ConfigError("chat request needs at least one message")
        n_images = sum(len(m.images) for m in self.messages)
        if n_images > MAX_IMAGES_PER_REQUEST:
            raise ConfigError(f"at most {MAX_IMAGES_PER_REQUEST} images per request, got {n_images}")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    attempts: int = 1


def _as_openai_message(m: Message) -> dict:
    if not m.images:
        return {"role": m.role, "content": m.text}
    content = [{"type": "text", "text": m.text}]
    for png in m.images:
        b64 = base64.b64encode(png).decode("ascii")
        content.append({"type": "image_url", "image_url": {"url": f"data:image/png;base64,{b64}"}})
    return {"role": m.role, "content": content}


@dataclass
class ChatClient:
    """Thin chat-completions client: env-configured endpoint, exponential
    backoff on transient failures, bounded concurrent requests."""

    base_url: str = ""
    api_key: str = ""
    model: str = ""
    max_attempts: int = 3
    backoff_s: float = 0.5
    timeout_s: float = 60.0
    max_in_flight: int = 4
    sleep: Callable[[float], None] = time.sleep
    usage_log: list = field(default_factory=list)

    def __post_init__(self):
        self.base_url = self.base_url or os.environ.get(ENV_BASE_URL, "")
        self.api_key = self.api_key or os.environ.get(ENV_API_KEY, "")
        self.model = self.model or os.environ.get(ENV_MODEL, "")
        self._gate = threading.Semaphore(self.max_in_flight)

    def chat_complete(self, request: ChatRequest) -> ChatResponse:
        if not self.base_url:
            raise AuthError(f"no chat endpoint configured (set {ENV_BASE_URL})")
        if not self.api_key:
            raise AuthError(f"no chat credential configured (set {ENV_API_KEY})")

        body = {
            "model": request.model or self.model,
            "messages": [_as_openai_message(m) for m in request.messages],
            "max_tokens": request.max_tokens,
        }
        headers = {"Authorization": f"Bearer {self.api_key}", "Content-Type": "application/json"}
        url = self.base_url.rstrip("/") + "/chat/completions"

        last_status = None
        for attempt in range(1, self.max_attempts + 1):
            with self._gate:
                try:
                    resp = requests.post(url, json=body, headers=headers, timeout=self.timeout_s)
                except requests.RequestException as exc:
                    last_status = f"transport: {exc}"
                    if attempt < self.max_attempts:
                        self.sleep(self.backoff_s * 2 ** (attempt - 1))
                        continue
                    raise ProviderError(0, str(exc)) from exc

            if resp.status_code == 200:
                data = resp.json()
                usage = data.get("usage", {})
                out = ChatResponse(
                    text=data["choices"][0]["message"]["content"],
                    prompt_tokens=int(usage.get("prompt_tokens", 0)),
                    completion_tokens=int(usage.get("completion_tokens", 0)),
                    attempts=attempt,
                )
                self.usage_log.append(
                    {"prompt_tokens": out.prompt_tokens, "completion_tokens": out.completion_tokens, "attempts": attempt}
                )
                return out
            if resp.status_code in (401, 403):
                raise AuthError(f"chat endpoint rejected the credential (status {resp.status_code})")
            if resp.status_code in (429, 500, 502, 503):
                last_status = resp.status_code
                if attempt < self.max_attempts:
                    self.sleep(self.backoff_s * 2 ** (attempt - 1))
                    continue
                if resp.status_code == 429:
                    raise RateLimited(f"still rate limited after {self.max_attempts} attempts")
                raise ProviderError(resp.status_code, "transient failure persisted")
            raise ProviderError(resp.status_code, resp.text[:200])

        raise ProviderError(0, f"exhausted attempts (last: {last_status})")  # pragma: no cover

    def total_usage(self) -> dict:
        return {
            "prompt_tokens": sum(u["prompt_tokens"] for u in self.usage_log),
            "completion_tokens": sum(u["completion_tokens"] for u in self.usage_log),
            "requests": len(self.usage_log),
        }


def llm_assess(
    images,
    role_prompt: str,
    context: str,
    client: ChatClient,
    max_tokens: int = 1024,
) -> ParsedResponse:
    """Send the role prompt, context, and screenshots; parse the tagged reply."""
    images = tuple(images)
    if not 1 <= len(images) <= MAX_IMAGES_PER_REQUEST:
        raise ConfigError(f"llm_assess takes 1..{MAX_IMAGES_PER_REQUEST} images, got {len(images)}")
    request = ChatRequest(
        messages=(
            Message(role="system", text=role_prompt),
            Message(role="user", text=context, images=images),
        ),
        max_tokens=max_tokens,
    )
    response = client.chat_complete(request)
    return parse_agent_response(response.text)
