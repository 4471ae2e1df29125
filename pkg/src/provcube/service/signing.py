"""Time-limited signed URLs for result downloads.

Signature: lowercase-hex HMAC-SHA-256 over ``path + "\\n" + expires`` with
the server secret. URL form: ``<path>?expires=<epoch>&sig=<hex>``.
Verification is strict: any malformed, tampered, or expired URL is simply
invalid (no exceptions), and now >= expires already fails.
"""

from __future__ import annotations

import hashlib
import hmac
import re
from dataclasses import dataclass

_URL_RE = re.compile(r"^(?P<path>[^?]+)\?expires=(?P<expires>\d+)&sig=(?P<sig>[0-9a-f]{64})$")


@dataclass(frozen=True)
class SignedUrl:
    path: str
    expires: int
    signature: str

    def __str__(self) -> str:
        return f"{self.path}?expires={self.expires}&sig={self.signature}"


def _digest(path: str, expires: int, secret: str) -> str:
    message = f"{path}\n{expires}".encode("utf-8")
    return hmac.new(secret.encode("utf-8"), message, hashlib.sha256).hexdigest()


def sign_url(path: str, ttl_seconds: int, secret: str, now: float) -> SignedUrl:
    if ttl_seconds <= 0:
        raise ValueError("ttl_seconds must be positive")
    expires = int(now) + int(ttl_seconds)
    return SignedUrl(path=path, expires=expires, signature=_digest(path, expires, secret))


def verify_signed_url(url: str, secret: str, now: float) -> bool:
    match = _URL_RE.match(url)
    if match is None:
        return False
    path = match.group("path")
    expires = int(match.group("expires"))
    provided = match.group("sig")
    if now >= expires:
        return False
    return hmac.compare_digest(_digest(path, expires, secret), provided)
