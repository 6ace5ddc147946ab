"""Run configuration: defaults, key=value files, environment overrides and validation."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Mapping

from .errors import AbelcertError
from .field import is_prime

CERTIFICATES = ("d12", "d14", "d16", "d18", "d20", "group", "props")
ENV_PREFIX = "ABELCERT_"

# default primes per certificate; the rational run is always included where it applies
DEFAULT_PRIMES = {
    "d12": (101, 103),
    "d14": (31,),
    "d16": (7, 13),
    "d18": (11,),
    "d20": (31,),
    "group": (),
    "props": (),
}
D20_FALLBACKS = (41, 61)
# per-computation Groebner budgets in minutes
DEFAULT_TIMEOUT_MIN = {"d12": 1, "d14": 1, "d16": 5, "d18": 45, "d20": 15, "group": 1, "props": 5}
DEFAULT_EXTENDED_TIMEOUT_MIN = 120
# total degrees entering Euler-identity or derivative checks; a prime dividing one is refused
DERIVATIVE_DEGREES = {"d12": (2, 3, 4), "d14": (2, 3, 4), "d16": (2, 3, 4), "d18": (2, 3, 4), "d20": (4, 5)}


class ConfigError(AbelcertError, ValueError):
    """Invalid run configuration (CLI exit code 2)."""


@dataclass
class RunConfig:
    cert: str = "d12"
    primes: tuple[int, ...] = ()
    seed: int = 0
    param: tuple[int, ...] | None = None
    timeout_min: float | None = None
    extended: bool = False
    extended_timeout_min: float = DEFAULT_EXTENDED_TIMEOUT_MIN
    orbit_prime: int = 7
    sing_prime: int = 13
    trials: int = 1000
    cache_dir: str | None = None
    out: str | None = None
    extra: dict = field(default_factory=dict, repr=False)

    # -- resolved values -------------------------------------------------

    def effective_primes(self) -> tuple[int, ...]:
        return self.primes or DEFAULT_PRIMES[self.cert]

    def effective_timeout_min(self) -> float:
        return self.timeout_min if self.timeout_min is not None else DEFAULT_TIMEOUT_MIN[self.cert]

    def timeout_seconds(self) -> float:
        return float(self.effective_timeout_min()) * 60

    # -- validation ------------------------------------------------------

    def validate(self) -> "RunConfig":
        if self.cert not in CERTIFICATES:
            raise ConfigError(f"unknown certificate {self.cert!r}; choose from {', '.join(CERTIFICATES)}")
        if self.timeout_min is not None and not self.timeout_min > 0:
            raise ConfigError(f"timeout must be positive, got {self.timeout_min}")
        if not self.extended_timeout_min > 0:
            raise ConfigError(f"extended timeout must be positive, got {self.extended_timeout_min}")
        if self.trials <= 0:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        checked = list(self.effective_primes())
        if self.cert == "d16":
            checked += [self.orbit_prime, self.sing_prime]
        for p in checked:
            if p == 2 or not is_prime(p):
                raise ConfigError(f"{p} is not an odd prime")
            bad = [k for k in DERIVATIVE_DEGREES.get(self.cert, ()) if k % p == 0]
            if bad:
                raise ConfigError(f"characteristic {p} divides degree {bad[0]} used in a derivative check")
        if self.cert == "d20":
            if len(self.effective_primes()) != 1:
                raise ConfigError("d20 takes a single prime")
            if self.effective_primes()[0] % 5 != 1:
                raise ConfigError(f"d20 needs p = 1 mod 5, got {self.effective_primes()[0]}")
        if self.cert in ("d14", "d18") and len(self.effective_primes()) != 1:
            raise ConfigError(f"{self.cert} takes a single prime")
        if self.cert == "d16" and self.sing_prime % 4 != 1:
            raise ConfigError(f"the singular-point check needs sqrt(-1), so p = 1 mod 4; got {self.sing_prime}")
        if self.param is not None:
            if self.cert != "d20":
                raise ConfigError("--param only applies to d20")
            if len(self.param) != 3:
                raise ConfigError(f"--param needs three values a0,a1,a2, got {len(self.param)}")
        if self.extra:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(self.extra))}")
        return self

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        d["primes"] = list(self.effective_primes())
        d["param"] = list(self.param) if self.param is not None else "search"
        d["timeout_min"] = self.effective_timeout_min()
        return d

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            if f.name == "extra":
                continue
            v = getattr(self, f.name)
            if v is None or v == ():
                continue
            lines.append(f"{f.name}={format_value(v)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls().updated(parse_key_values(text))

    def updated(self, values: Mapping[str, str]) -> "RunConfig":
        """A copy with string-valued settings applied (unknown keys kept for validation)."""
        known = {f.name for f in fields(self)} - {"extra"}
        changes: dict = {}
        extra = dict(self.extra)
        for key, raw in values.items():
            name = key.strip().lower().replace("-", "_")
            if name == "prime":
                name = "primes"
            if name not in known:
                extra[name] = raw
                continue
            changes[name] = convert(name, raw)
        return replace(self, **changes, extra=extra)


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return str(int(v)) if v.is_integer() else repr(v)
    if isinstance(v, (tuple, list)):
        return ",".join(str(x) for x in v)
    return str(v)


def _ints(raw: str, name: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in raw.replace(" ", "").split(",") if s)
    except ValueError:
        raise ConfigError(f"{name}: expected comma-separated integers, got {raw!r}") from None


def convert(name: str, raw: str):
    raw = str(raw).strip()
    try:
        if name == "primes":
            return _ints(raw, name)
        if name == "param":
            return None if raw in ("", "search") else _ints(raw, name)
        if name in ("seed", "orbit_prime", "sing_prime", "trials"):
            return int(raw)
        if name in ("timeout_min", "extended_timeout_min"):
            return float(raw)
        if name == "extended":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off", ""):
                return False
            raise ConfigError(f"extended: expected a boolean, got {raw!r}")
        if name in ("cache_dir", "out"):
            return raw or None
        return raw
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"{name}: cannot parse {raw!r}") from None


def parse_key_values(text: str) -> dict[str, str]:
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise ConfigError(f"config line {n}: expected key=value")
        k, v = s.split("=", 1)
        out[k.strip()] = v.strip()
    return out


ENV_KEYS = ("prime", "seed", "param", "timeout_min", "extended", "cache_dir", "out", "orbit_prime", "sing_prime", "trials")


def env_values(environ: Mapping[str, str] | None = None) -> dict[str, str]:
    """Settings from the environment: ABELCERT_<NAME> wins over the bare <NAME>."""
    environ = os.environ if environ is None else environ
    out = {}
    for key in ENV_KEYS:
        for var in (key.upper(), ENV_PREFIX + key.upper()):
            if var in environ:
                out[key] = environ[var]
    return out


def load_config(
    cert: str,
    cli_values: Mapping[str, str] | None = None,
    config_path: str | None = None,
    environ: Mapping[str, str] | None = None,
) -> RunConfig:
    """Defaults < config file < environment < command line."""
    cfg = RunConfig(cert=cert)
    environ = os.environ if environ is None else environ
    path = config_path or environ.get(ENV_PREFIX + "CONFIG")
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        values = parse_key_values(text)
        values.pop("cert", None)
        cfg = cfg.updated(values)
    cfg = cfg.updated(env_values(environ))
    cfg = cfg.updated(dict(cli_values or {}))
    return cfg.validate()
