"""Command-line entry point: ``abelcert verify ...`` and the gb/hilbert/pfaffian tools."""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .config import CERTIFICATES, D20_FALLBACKS, ConfigError, RunConfig, env_values, load_config
from .errors import AbelcertError, GroebnerTimeout, ParameterRejected, ParseError, PreconditionError

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_TIMEOUT = 0, 1, 2, 3
DEFAULT_OUT_DIR = "reports"
# flags that name a single certificate's parameters and make no sense for `verify all`
PER_CERT_FLAGS = ("prime", "param", "orbit_prime", "sing_prime")


def run_certificate(cfg: RunConfig):
    """Run one certificate under ``cfg`` and return its report."""
    from .certlib import d12, d14, d16, d18, d20, group, props
    from .certlib.common import Budget
    from .groebner import GBCache

    cache = GBCache(cfg.cache_dir) if cfg.cache_dir else None
    budget = Budget(cfg.timeout_seconds(), cache)
    primes = cfg.effective_primes()
    if cfg.cert == "d12":
        rep = d12.verify(primes=primes, budget=budget)
    elif cfg.cert == "d14":
        ext = Budget(cfg.extended_timeout_min * 60, cache)
        rep = d14.verify(prime=primes[0], seed=cfg.seed, extended=cfg.extended, budget=budget, extended_budget=ext)
    elif cfg.cert == "d16":
        rep = d16.verify(primes=primes, orbit_prime=cfg.orbit_prime, sing_prime=cfg.sing_prime, extended=cfg.extended, budget=budget)
    elif cfg.cert == "d18":
        rep = d18.verify(degen_prime=primes[0], budget=budget)
    elif cfg.cert == "d20":
        a = list(cfg.param) if cfg.param is not None else "search"
        # fallbacks only apply to the default prime
        fallbacks = D20_FALLBACKS if not cfg.primes else ()
        rep = d20.verify(prime=primes[0], a=a, seed=cfg.seed, budget=budget, fallbacks=fallbacks)
    elif cfg.cert == "group":
        rep = group.verify(budget=budget)
    else:
        rep = props.verify(trials=cfg.trials, seed=cfg.seed)
    rep.config = cfg.to_dict()
    return rep


def exit_code(rep) -> int:
    if rep.timed_out:
        return EXIT_TIMEOUT
    return EXIT_PASS if rep.passed else EXIT_FAIL


def write_report(rep, out: str) -> None:
    if out == "-":
        sys.stdout.write(rep.dumps() + "\n")
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rep.dumps() + "\n", encoding="utf-8")


def _verify_one(cfg: RunConfig, out: str) -> tuple[int, list[str]]:
    """Run, write the report and return (exit code, summary lines)."""
    try:
        rep = run_certificate(cfg)
    except (ParameterRejected, PreconditionError) as e:
        return EXIT_CONFIG, [f"{cfg.cert}: invalid configuration: {e}"]
    except GroebnerTimeout as e:
        return EXIT_TIMEOUT, [f"{cfg.cert}: TIMEOUT outside a check: {e}"]
    write_report(rep, out)
    lines = rep.summary_lines()
    if out != "-":
        lines.append(f"  report: {out}")
    return exit_code(rep), lines


def _worker(cfg_text: str, cert: str, out: str) -> tuple[str, int, list[str]]:
    cfg = RunConfig.from_text(cfg_text)
    cfg.cert = cert
    code, lines = _verify_one(cfg.validate(), out)
    return cert, code, lines


def cmd_verify(args: argparse.Namespace) -> int:
    cli_values = {}
    for key in ("prime", "seed", "param", "timeout_min", "cache_dir", "out", "orbit_prime", "sing_prime", "trials"):
        v = getattr(args, key, None)
        if v is not None:
            cli_values[key] = ",".join(v) if isinstance(v, list) else str(v)
    if args.extended:
        cli_values["extended"] = "true"
    if args.cert == "all":
        return _verify_all(args, cli_values)
    try:
        cfg = load_config(args.cert, cli_values, args.config)
    except ConfigError as e:
        print(f"abelcert: {e}", file=sys.stderr)
        return EXIT_CONFIG
    out = cfg.out or str(Path(DEFAULT_OUT_DIR) / f"{cfg.cert}.json")
    code, lines = _verify_one(cfg, out)
    print("\n".join(lines), file=sys.stderr if out == "-" else sys.stdout)
    return code


def _verify_all(args: argparse.Namespace, cli_values: dict) -> int:
    given = [k for k in PER_CERT_FLAGS if k in cli_values]
    if given:
        print(f"abelcert: --{given[0].replace('_', '-')} cannot be combined with 'verify all'", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfgs = [load_config(cert, cli_values, args.config) for cert in CERTIFICATES]
    except ConfigError as e:
        print(f"abelcert: {e}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(cli_values.get("out") or env_values().get("out") or DEFAULT_OUT_DIR)
    workers = args.jobs or os.cpu_count() or 1
    codes = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_worker, c.to_text(), c.cert, str(out_dir / f"{c.cert}.json")) for c in cfgs]
        for fut in futures:
            cert, code, lines = fut.result()
            codes[cert] = code
            print("\n".join(lines))
    print("overall: " + ", ".join(f"{c}={'pass' if codes[c] == 0 else 'exit ' + str(codes[c])}" for c in CERTIFICATES))
    for worst in (EXIT_CONFIG, EXIT_TIMEOUT, EXIT_FAIL):
        if worst in codes.values():
            return worst
    return EXIT_PASS


def _tool_cache(args: argparse.Namespace):
    from .groebner import GBCache

    d = args.cache_dir or env_values().get("cache_dir")
    return GBCache(d) if d else None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from None


def _report_cache(cache, gb) -> None:
    if cache is not None:
        print("cache: hit" if gb.cache_hit else "cache: miss (stored)", file=sys.stderr)


def cmd_gb(args: argparse.Namespace) -> int:
    from .groebner import Ideal, parse_polynomials

    ring, polys = parse_polynomials(_read(args.file))
    cache = _tool_cache(args)
    gb = Ideal(ring, polys).groebner(timeout=_tool_timeout(args), cache=cache)
    _report_cache(cache, gb)
    sys.stdout.write(gb.to_text())
    return EXIT_PASS


def cmd_hilbert(args: argparse.Namespace) -> int:
    from .groebner import Ideal, dimension_and_degree, parse_polynomials

    ring, polys = parse_polynomials(_read(args.file))
    cache = _tool_cache(args)
    gb = Ideal(ring, polys).groebner(timeout=_tool_timeout(args), cache=cache)
    _report_cache(cache, gb)
    print(dimension_and_degree(gb))
    return EXIT_PASS


def cmd_pfaffian(args: argparse.Namespace) -> int:
    from .groebner import serialize_polynomials
    from .moore import parse_matrix, pfaffian

    m = parse_matrix(_read(args.file))
    sys.stdout.write(serialize_polynomials(m.ring, [pfaffian(m)]))
    return EXIT_PASS


def _tool_timeout(args: argparse.Namespace) -> float | None:
    return args.timeout_min * 60 if args.timeout_min else None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abelcert", description="Exact certificates for Heisenberg-invariant abelian surface constructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a certificate and write its JSON report")
    v.add_argument("cert", choices=[*CERTIFICATES, "all"])
    v.add_argument("--prime", action="append", help="prime (repeatable or comma-separated)")
    v.add_argument("--seed", type=int)
    v.add_argument("--param", help="d20 parameter a0,a1,a2 (default: search)")
    v.add_argument("--timeout-min", type=float, help="Groebner budget per computation, in minutes")
    v.add_argument("--extended", action="store_true", help="also run the optional long checks")
    v.add_argument("--cache-dir", help="Groebner basis cache directory")
    v.add_argument("--out", help="report path ('-' for stdout); a directory for 'verify all'")
    v.add_argument("--orbit-prime", type=int, help="d16: prime for the orbit-scheme check")
    v.add_argument("--sing-prime", type=int, help="d16: prime (1 mod 4) for the singular points of Z'")
    v.add_argument("--trials", type=int, help="props: trials per battery")
    v.add_argument("--config", help="key=value configuration file")
    v.add_argument("--jobs", type=int, help="worker processes for 'verify all'")
    v.set_defaults(func=cmd_verify)

    for name, func, what in (
        ("gb", cmd_gb, "print the reduced Groebner basis"),
        ("hilbert", cmd_hilbert, "print dimension, degree and Hilbert polynomial"),
        ("pfaffian", cmd_pfaffian, "print the Pfaffian of a skew matrix"),
    ):
        t = sub.add_parser(name, help=what)
        t.add_argument("file", help="input in the canonical text format")
        if name != "pfaffian":
            t.add_argument("--cache-dir", help="Groebner basis cache directory")
            t.add_argument("--timeout-min", type=float)
        t.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"abelcert: {getattr(args, 'file', '')}: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as e:
        print(f"abelcert: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except GroebnerTimeout as e:
        print(f"abelcert: timeout: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    except AbelcertError as e:
        print(f"abelcert: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
