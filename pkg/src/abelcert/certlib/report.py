"""Structured pass/fail records for certificate runs."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Sequence

from ..errors import GroebnerTimeout
from ..field import FieldSpec
from ..polyring import Polynomial

# report schema version
VERSION = "1.0"
PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
# generator lists longer than this many characters are embedded by hash only
EMBED_LIMIT = 20000


class CheckFailed(Exception):
    """Raised inside a check body to fail it with a message."""


class Skip(Exception):
    """Raised inside a check body to mark it skipped with a reason."""


@dataclass
class Outcome:
    """Returned by a check body: detail text and optional structured data."""

    detail: str
    data: dict = field(default_factory=dict)
    ok: bool = True


@dataclass
class Check:
    name: str
    status: str
    detail: str
    millis: int
    data: dict = field(default_factory=dict)

    def stable(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.data:
            out["data"] = self.data
        return out

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail, "millis": self.millis}
        if self.data:
            out["data"] = self.data
        return out


def require(cond: bool, message: str) -> None:
    if not cond:
        raise CheckFailed(message)


def embed_polys(polys: Sequence[Polynomial]) -> dict:
    """Exact generators, or their digest when the text is large."""
    if not polys:
        return {"count": 0, "polys": []}
    ring = polys[0].ring
    lines = [p.to_text() for p in polys]
    text = ring.header() + "\n" + "\n".join(lines) + "\n"
    digest = hashlib.sha256(text.encode()).hexdigest()
    out: dict[str, Any] = {"ring": ring.header(), "count": len(polys), "sha256": digest}
    if len(text) <= EMBED_LIMIT:
        out["polys"] = lines
    return out


class CertificateReport:
    def __init__(self, cert_id: str, field_spec: FieldSpec, params: dict | None = None):
        self.id = cert_id
        self.field = field_spec
        self.params = dict(params or {})
        self.checks: list[Check] = []
        self.artifacts: dict[str, Any] = {}
        self.started = datetime.now(timezone.utc).isoformat(timespec="seconds")
        self._t0 = time.perf_counter()
        self.elapsed_millis = 0
        self.timed_out = False
        # run configuration echoed by the CLI; kept out of the hash-stable section
        self.config: dict | None = None

    # -- recording -----------------------------------------------------
    def run(self, name: str, body: Callable[[], Outcome | str | None]) -> Check:
        """Run one check; exceptions become failures, never crashes."""
        t0 = time.perf_counter()
        data: dict = {}
        try:
            res = body()
            if isinstance(res, Outcome):
                status = PASS if res.ok else FAIL
                detail, data = res.detail, res.data
            else:
                status, detail = PASS, res or "ok"
        except Skip as exc:
            status, detail = SKIPPED, str(exc)
        except CheckFailed as exc:
            status, detail = FAIL, str(exc)
        except GroebnerTimeout as exc:
            self.timed_out = True
            status, detail = FAIL, f"timeout: {exc}"
        except Exception as exc:  # noqa: BLE001 - a crash is a failed check
            status, detail = FAIL, f"{type(exc).__name__}: {exc}"
        check = Check(name, status, detail, int((time.perf_counter() - t0) * 1000), data)
        self.checks.append(check)
        self.elapsed_millis = int((time.perf_counter() - self._t0) * 1000)
        return check

    def add_artifact(self, name: str, polys: Sequence[Polynomial]) -> None:
        self.artifacts[name] = embed_polys(polys)

    def finish(self) -> "CertificateReport":
        self.elapsed_millis = int((time.perf_counter() - self._t0) * 1000)
        return self

    # -- queries -------------------------------------------------------
    @property
    def status(self) -> str:
        active = [c for c in self.checks if c.status != SKIPPED]
        if not active:
            return FAIL
        return PASS if all(c.status == PASS for c in active) else FAIL

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def stable_section(self) -> dict:
        return {
            "id": self.id,
            "version": VERSION,
            "field": self.field.to_json(),
            "params": self.params,
            "checks": [c.stable() for c in self.checks],
            "artifacts": self.artifacts,
            "status": self.status,
        }

    def stable_hash(self) -> str:
        blob = json.dumps(self.stable_section(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "version": VERSION,
            "field": self.field.to_json(),
            "params": self.params,
            "checks": [c.to_json() for c in self.checks],
            "artifacts": self.artifacts,
            "status": self.status,
            "started": self.started,
            "elapsed_millis": self.elapsed_millis,
            "stable_hash": self.stable_hash(),
            **({"config": self.config} if self.config is not None else {}),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def summary_lines(self) -> list[str]:
        lines = [f"{self.id}: {self.status.upper()} ({self.elapsed_millis} ms)"]
        for c in self.checks:
            lines.append(f"  [{c.status}] {c.name}: {c.detail}")
        return lines
