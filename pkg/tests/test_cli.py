from __future__ import annotations

import json

import pytest

from abelcert.certlib import d16
from abelcert.cli import main
from abelcert.config import ConfigError, RunConfig, load_config
from abelcert.field import FieldSpec
from abelcert.groebner import serialize_polynomials

TWISTED_CUBIC = "ring Q 4 grevlex\nx0*x2 + -1*x1^2\nx1*x3 + -1*x2^2\nx0*x3 + -1*x1*x2\n"
SKEW4 = "ring Q 6 grevlex\nmatrix 4 4 skew\n" + "\n".join(
    ["0", "x0", "x1", "x2", "-1*x0", "0", "x3", "x4", "-1*x1", "-1*x3", "0", "x5", "-1*x2", "-1*x4", "-1*x5", "0"]
) + "\n"


# -- configuration -------------------------------------------------------


def test_config_text_round_trip():
    cfg = RunConfig(cert="d20", primes=(41,), seed=3, param=(1, 9, 17), timeout_min=2.5, extended=True, cache_dir="c", out="o.json")
    back = RunConfig.from_text(cfg.to_text())
    assert back == cfg
    assert back.to_text() == cfg.to_text()


def test_config_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nseed=1\ntimeout_min=3\nprime=101,103\n")
    env = {"ABELCERT_SEED": "2", "TIMEOUT_MIN": "4"}
    cfg = load_config("d12", {"seed": "5"}, str(path), environ=env)
    assert cfg.seed == 5
    assert cfg.timeout_min == 4
    assert cfg.primes == (101, 103)
    cfg = load_config("d12", {}, str(path), environ=env)
    assert cfg.seed == 2


def test_prefixed_env_wins_over_bare():
    cfg = load_config("d14", {}, None, environ={"SEED": "1", "ABELCERT_SEED": "9"})
    assert cfg.seed == 9


@pytest.mark.parametrize(
    "cert, values",
    [
        ("d20", {"prime": "2"}),
        ("d20", {"prime": "13"}),
        ("d12", {"prime": "9"}),
        ("d12", {"prime": "3"}),
        ("d16", {"sing_prime": "7"}),
        ("d18", {"timeout_min": "0"}),
        ("d18", {"timeout_min": "-1"}),
        ("d20", {"param": "1,2"}),
        ("d12", {"param": "1,2,3"}),
        ("d14", {"seed": "x"}),
    ],
)
def test_config_validation(cert, values):
    with pytest.raises(ConfigError):
        load_config(cert, values, None, environ={})


def test_unknown_config_key(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("primes=7\nflavour=strange\n")
    with pytest.raises(ConfigError):
        load_config("d16", {}, str(path), environ={})


def test_defaults_per_certificate():
    assert load_config("d12", environ={}).effective_primes() == (101, 103)
    assert load_config("d16", environ={}).effective_primes() == (7, 13)
    assert load_config("d18", environ={}).timeout_seconds() == 45 * 60
    assert load_config("d20", environ={}).effective_primes() == (31,)


# -- verify ----------------------------------------------------------------


def test_verify_d20_even_prime_exits_2(tmp_path, capsys):
    assert main(["verify", "d20", "--prime", "2", "--out", str(tmp_path / "r.json")]) == 2
    assert "odd prime" in capsys.readouterr().err
    assert not (tmp_path / "r.json").exists()


def test_verify_d16_exit_0_and_report(tmp_path):
    out = tmp_path / "d16.json"
    assert main(["verify", "d16", "--orbit-prime", "7", "--sing-prime", "13", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["status"] == "pass"
    checks = {c["name"]: c for c in rep["checks"]}
    assert "degree 40" in checks["b.degree40"]["detail"]
    assert checks["f.orbit_scheme"]["data"]["orbit"]["degree"] == 32
    assert rep["config"]["orbit_prime"] == 7 and rep["config"]["sing_prime"] == 13


def test_verify_d18_exit_0(tmp_path):
    out = tmp_path / "d18.json"
    assert main(["verify", "d18", "--prime", "11", "--timeout-min", "45", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert "P(t)=18t^2" in json.dumps(rep["checks"])
    assert rep["config"]["timeout_min"] == 45


def test_verify_timeout_exits_3(tmp_path):
    assert main(["verify", "d18", "--timeout-min", "0.00000001", "--out", str(tmp_path / "t.json")]) == 3


def test_verify_failure_exits_1(tmp_path):
    # the optional triple-point comparison fails honestly (measured multiplicity 4)
    out = tmp_path / "d16x.json"
    assert main(["verify", "d16", "--extended", "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    h = next(c for c in rep["checks"] if c["name"] == "h.triple_points")
    assert h["status"] == "fail" and h["data"]["multiplicities"] == [4] * 6


def test_verify_d20_given_parameter(tmp_path):
    out = tmp_path / "d20.json"
    assert main(["verify", "d20", "--param", "1,9,17", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["params"]["a"] == [1, 9, 17] and rep["params"]["mode"] == "given"


def test_verify_d20_rejected_parameter_exits_2(tmp_path):
    assert main(["verify", "d20", "--param", "0,1,2", "--out", str(tmp_path / "x.json")]) == 2


def test_same_config_same_report_section(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["verify", "group", "--out", str(out)]) == 0
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    assert ja["stable_hash"] == jb["stable_hash"]
    for key in ("started", "elapsed_millis", "config"):
        ja.pop(key), jb.pop(key)
    for c in ja["checks"] + jb["checks"]:
        c.pop("millis")
    assert ja == jb


def test_verify_all_worker_pool(tmp_path, capsys):
    code = main(["verify", "all", "--trials", "5", "--jobs", "2", "--out", str(tmp_path)])
    assert code == 0, capsys.readouterr().out
    assert sorted(p.name for p in tmp_path.glob("*.json")) == sorted(f"{c}.json" for c in ("d12", "d14", "d16", "d18", "d20", "group", "props"))
    assert main(["verify", "all", "--prime", "7"]) == 2


# -- tools -----------------------------------------------------------------


def test_hilbert_twisted_cubic(tmp_path, capsys):
    f = tmp_path / "twisted-cubic.txt"
    f.write_text(TWISTED_CUBIC)
    assert main(["hilbert", str(f)]) == 0
    assert capsys.readouterr().out.strip() == "dim 1 degree 3 P(t)=3t+1"


def test_pfaffian_skew4(tmp_path, capsys):
    f = tmp_path / "skew4.txt"
    f.write_text(SKEW4)
    assert main(["pfaffian", str(f)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["ring Q 6 grevlex", "1*x2*x3 + -1*x1*x4 + 1*x0*x5"]


def test_gb_cache_hit_on_second_invocation(tmp_path, capsys):
    ring, _, pf = d16.z_quartics(FieldSpec.prime(7))
    f = tmp_path / "d16-pfaffians.txt"
    f.write_text(serialize_polynomials(ring, pf))
    cache = str(tmp_path / "cache")
    assert main(["gb", str(f), "--cache-dir", cache]) == 0
    first = capsys.readouterr()
    assert "cache: miss" in first.err
    assert main(["gb", str(f), "--cache-dir", cache]) == 0
    second = capsys.readouterr()
    assert "cache: hit" in second.err
    assert second.out == first.out
    assert main(["gb", str(f)]) == 0
    assert capsys.readouterr().out == first.out


def test_tool_parse_error_reports_line(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("ring 7 2 grevlex\nx0 + x1\nx0 ^^ 2\n")
    assert main(["gb", str(f)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_tool_missing_file(tmp_path):
    assert main(["hilbert", str(tmp_path / "nope.txt")]) == 2
