"""Account lifecycle: registration, email confirmation, sessions.

Passwords are stored only as salted scrypt hashes. Confirmation is
delivered through a persistent outbox table instead of a live mail
transport; whatever reads the outbox (tests, an operator, a future SMTP
relay) sees one single-use 24-hour token per registration. All three
login failure modes (unknown email, wrong password, unconfirmed account)
surface as the same generic error so the endpoint cannot be used as an
account-existence oracle.
"""

from __future__ import annotations

import hmac
import re
import secrets
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from hashlib import scrypt
from typing import Callable

from .config import Config
from .storage import Database, epoch_us, from_epoch_us
from .validation import format_rfc3339

_EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")

MIN_PASSWORD_LENGTH = 8
TOKEN_BYTES = 32  # 256 bits

CONFIRMATION_KIND = "account_confirmation"


class AuthError(Exception):
    """Generic authentication failure; deliberately unspecific."""

    def __init__(self, message: str = "invalid credentials"):
        super().__init__(message)


class DuplicateEmailError(ValueError):
    pass


class RegistrationError(ValueError):
    pass


class TokenError(ValueError):
    """Unknown, already used, or expired confirmation token."""


def hash_password(password: str, *, n: int, r: int, p: int) -> str:
    """Salted scrypt hash, serialized with its parameters."""
    salt = secrets.token_bytes(16)
    key = scrypt(password.encode("utf-8"), salt=salt, n=n, r=r, p=p, maxmem=256 * 1024 * 1024)
    return f"scrypt${n}${r}${p}${salt.hex()}${key.hex()}"


def verify_password(password: str, stored: str) -> bool:
    """Recompute the hash under the stored parameters; constant-time compare."""
    try:
        scheme, n, r, p, salt_hex, key_hex = stored.split("$")
        if scheme != "scrypt":
            return False
        key = scrypt(
            password.encode("utf-8"),
            salt=bytes.fromhex(salt_hex),
            n=int(n),
            r=int(r),
            p=int(p),
            maxmem=256 * 1024 * 1024,
        )
        return hmac.compare_digest(key, bytes.fromhex(key_hex))
    except (ValueError, TypeError):
        return False


def new_token() -> str:
    return secrets.token_urlsafe(TOKEN_BYTES)


@dataclass(frozen=True)
class Session:
    token: str
    user_id: int
    expires_at: datetime


class AccountService:
    def __init__(self, db: Database, config: Config, clock: Callable[[], datetime] | None = None):
        self._db = db
        self._config = config
        self._clock = clock or (lambda: datetime.now(timezone.utc))
        # verified against on unknown emails so lookups cost the same either way
        self._decoy_hash = hash_password(
            secrets.token_urlsafe(16), n=config.scrypt_n, r=config.scrypt_r, p=config.scrypt_p
        )

    def register(self, email: str, password: str) -> int:
        """Create an unconfirmed account and queue its confirmation token."""
        if not isinstance(email, str) or not _EMAIL_RE.match(email):
            raise RegistrationError(f"not a valid email address: {email!r}")
        if not isinstance(password, str) or len(password) < MIN_PASSWORD_LENGTH:
            raise RegistrationError(f"password must be at least {MIN_PASSWORD_LENGTH} characters")
        password_hash = hash_password(
            password, n=self._config.scrypt_n, r=self._config.scrypt_r, p=self._config.scrypt_p
        )
        now = self._clock()
        token = new_token()
        expires = now + timedelta(hours=self._config.confirm_ttl_hours)
        with self._db.write() as conn:
            existing = conn.execute(
                "SELECT 1 FROM clients WHERE email = ?", (email,)
            ).fetchone()
            if existing is not None:
                raise DuplicateEmailError(f"an account for {email!r} already exists")
            cur = conn.execute(
                "INSERT INTO clients (email, password_hash, confirmed, created_at) VALUES (?, ?, 0, ?)",
                (email, password_hash, format_rfc3339(now)),
            )
            user_id = int(cur.lastrowid)
            conn.execute(
                "INSERT INTO confirmation_tokens (token, user_id, expires_at_us, used) VALUES (?, ?, ?, 0)",
                (token, user_id, epoch_us(expires)),
            )
            conn.execute(
                "INSERT INTO outbox (recipient, kind, body, created_at) VALUES (?, ?, ?, ?)",
                (email, CONFIRMATION_KIND, token, format_rfc3339(now)),
            )
        return user_id

    def confirm(self, token: str) -> int:
        """Activate the account behind a confirmation token; single use."""
        now_us = epoch_us(self._clock())
        with self._db.write() as conn:
            row = conn.execute(
                "SELECT user_id, expires_at_us, used FROM confirmation_tokens WHERE token = ?",
                (token,),
            ).fetchone()
            if row is None:
                raise TokenError("unknown confirmation token")
            user_id, expires_at_us, used = row
            if used:
                raise TokenError("confirmation token already used")
            if now_us > expires_at_us:
                raise TokenError("confirmation token expired")
            conn.execute("UPDATE confirmation_tokens SET used = 1 WHERE token = ?", (token,))
            conn.execute("UPDATE clients SET confirmed = 1 WHERE id = ?", (user_id,))
        return int(user_id)

    def login(self, email: str, password: str) -> Session:
        with self._db.read() as conn:
            row = conn.execute(
                "SELECT id, password_hash, confirmed FROM clients WHERE email = ?",
                (email,),
            ).fetchone()
        if row is None:
            verify_password(password, self._decoy_hash)
            raise AuthError()
        user_id, password_hash, confirmed = row
        if not verify_password(password, password_hash):
            raise AuthError()
        if not confirmed:
            raise AuthError()
        now = self._clock()
        expires = now + timedelta(hours=self._config.session_ttl_hours)
        token = new_token()
        with self._db.write() as conn:
            conn.execute(
                "INSERT INTO sessions (token, user_id, expires_at_us) VALUES (?, ?, ?)",
                (token, user_id, epoch_us(expires)),
            )
        return Session(token=token, user_id=int(user_id), expires_at=expires)

    def authenticate(self, token: str) -> int | None:
        """User id for a live session token, or None."""
        if not token:
            return None
        with self._db.read() as conn:
            row = conn.execute(
                "SELECT user_id, expires_at_us FROM sessions WHERE token = ?", (token,)
            ).fetchone()
        if row is None:
            return None
        user_id, expires_at_us = row
        if epoch_us(self._clock()) > expires_at_us:
            return None
        return int(user_id)

    def pending_confirmations(self, email: str) -> list[str]:
        """Outbox confirmation tokens queued for an address, oldest first."""
        with self._db.read() as conn:
            rows = conn.execute(
                "SELECT body FROM outbox WHERE recipient = ? AND kind = ? ORDER BY id",
                (email, CONFIRMATION_KIND),
            ).fetchall()
        return [r[0] for r in rows]

    def session_expiry(self, token: str) -> datetime | None:
        with self._db.read() as conn:
            row = conn.execute(
                "SELECT expires_at_us FROM sessions WHERE token = ?", (token,)
            ).fetchone()
        return from_epoch_us(row[0]) if row else None
