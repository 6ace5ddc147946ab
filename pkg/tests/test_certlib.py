from __future__ import annotations

import json

import pytest

from abelcert.certlib import d12, d14, d16, d18, d20, group, props
from abelcert.certlib.common import Budget
from abelcert.certlib.report import CertificateReport, CheckFailed, Outcome, Skip, require
from abelcert.errors import GroebnerTimeout, ParameterRejected, PreconditionError
from abelcert.field import FieldSpec
from abelcert.heisenberg import HeisenbergContext
from abelcert.linalg import DenseMatrix
from abelcert.polyring import PolyRing


@pytest.fixture(scope="module")
def reports():
    return {}


def run(reports: dict, name: str, fn):
    if name not in reports:
        reports[name] = fn()
    return reports[name]


def statuses(rep: CertificateReport) -> dict[str, str]:
    return {c.name: c.status for c in rep.checks}


# -- report plumbing -----------------------------------------------------


def test_report_status_mapping():
    rep = CertificateReport("demo", FieldSpec.rationals(), {"k": 1})
    rep.run("ok", lambda: "fine")
    rep.run("outcome", lambda: Outcome("x", {"v": 1}))

    def skip():
        raise Skip("not requested")

    def fail():
        require(False, "nope")

    def slow():
        raise GroebnerTimeout("budget")

    rep.run("skip", skip)
    assert rep.passed
    rep.run("fail", fail)
    assert not rep.passed and not rep.timed_out
    rep.run("slow", slow)
    assert rep.timed_out
    assert statuses(rep) == {"ok": "pass", "outcome": "pass", "skip": "skipped", "fail": "fail", "slow": "fail"}


def test_crash_becomes_failed_check():
    rep = CertificateReport("demo", FieldSpec.rationals())
    rep.run("boom", lambda: 1 / 0)
    assert rep.checks[0].status == "fail" and "ZeroDivisionError" in rep.checks[0].detail


def test_outcome_with_ok_false_fails():
    rep = CertificateReport("demo", FieldSpec.rationals())
    rep.run("claim", lambda: Outcome("measured 4", ok=False))
    assert rep.status == "fail"


def test_stable_hash_ignores_timing():
    def build():
        rep = CertificateReport("demo", FieldSpec.prime(7), {"p": 7})
        rep.run("a", lambda: "ok")
        return rep.finish()

    a, b = build(), build()
    a.elapsed_millis, a.started = 5, "then"
    assert a.stable_hash() == b.stable_hash()
    assert json.loads(a.dumps())["stable_hash"] == a.stable_hash()


def test_artifacts_embed_generators():
    ring = PolyRing(2, FieldSpec.prime(7))
    rep = CertificateReport("demo", ring.field)
    rep.add_artifact("g", [ring.parse("x0^2 - x1")])
    art = rep.artifacts["g"]
    assert art["polys"] == ["1*x0^2 + 6*x1"] and art["ring"] == "ring 7 2 grevlex" and len(art["sha256"]) == 64


# -- certificates --------------------------------------------------------


def test_d12_all_checks(reports):
    rep = run(reports, "d12", d12.verify)
    assert rep.passed
    assert list(statuses(rep)) == ["a.pfaffian_identity", "b.smoothness", "c.two_quadric_model", "d.z2xz2_invariance"]
    assert rep.artifacts["Q"]["count"] == 1


def test_d12_rejects_characteristic_two():
    with pytest.raises(PreconditionError):
        d12.verify(primes=(2, 3))


def test_d14_default_checks(reports):
    rep = run(reports, "d14", d14.verify)
    s = statuses(rep)
    assert rep.passed
    assert s["g.v14y_extended"] == "skipped"
    assert all(v == "pass" for k, v in s.items() if not k.startswith("g."))


def test_d14_random_point_is_on_the_minus_chart():
    u = d14.random_chart_point(31, 0)
    x = d14.chart_to_full(u, 14)
    assert x[0] == x[7] == 0
    assert all((x[i] + x[14 - i]) % 31 == 0 for i in range(1, 7))
    assert d14.random_chart_point(31, 0) == u


def test_d16_checks(reports):
    rep = run(reports, "d16", d16.verify)
    s = statuses(rep)
    assert rep.passed
    assert s["h.triple_points"] == "skipped"
    orbit = rep.check("f.orbit_scheme").data
    assert orbit["orbit"]["degree"] == 32 and orbit["full"]["degree"] == 40


def test_d16_singular_points_need_sqrt_minus_one():
    with pytest.raises(ValueError):
        d16.sqrt_minus_one(7)
    i = d16.sqrt_minus_one(13)
    assert i * i % 13 == 12


def test_d18_checks(reports):
    rep = run(reports, "d18", d18.verify)
    assert rep.passed
    assert rep.check("f.degeneration_char11").data["hilbert"]["hilbert_polynomial"] == "18t^2"


def test_d20_checks(reports):
    rep = run(reports, "d20", d20.verify)
    assert rep.passed
    assert rep.params["prime"] == 31
    assert rep.check("g.nodes").data["jacobian"]["degree"] == 100


def test_d20_rejects_bad_primes():
    for p in (2, 11 * 3, 29):
        with pytest.raises(PreconditionError):
            d20.verify(prime=p)


def test_d20_screen_rejections():
    ctx = HeisenbergContext.over_prime(5, 31)
    with pytest.raises(ParameterRejected):
        d20.screen(ctx, [0, 1, 2])
    # a = (1,0,0): the quintic degenerates to x0x1x2x3x4, whose restriction is not squarefree
    with pytest.raises(ParameterRejected):
        d20.screen(ctx, [1, 0, 0])


def test_d20_search_is_seeded():
    a1 = d20.search_parameter(31, 0)
    a2 = d20.search_parameter(31, 0)
    assert a1 == a2
    ctx = HeisenbergContext.over_prime(5, 31)
    data = d20.screen(ctx, a1[0])
    assert data["roots"]


def test_d20_second_root_of_unity_rerun(reports):
    # the same parameter with xi replaced by xi^2 gives the same line union and kernel
    rep = run(reports, "d20", d20.verify)
    a = rep.params["a"]
    base = FieldSpec.prime(31, [5])
    other = base.with_root(5, pow(base.root(5), 2, 31))
    results = []
    for fld in (base, other):
        ctx = HeisenbergContext(5, fld)
        lines = d20.LineConfig(ctx, a)
        n, ker = d20.kernel_dimension(ctx, lines)
        dims = d20.eigenspace_dimensions(ctx)
        canon = {DenseMatrix(fld, m).rref()[0].entries for m in lines.lines.values()}
        results.append((n, sorted(dims.values()), canon))
    assert results[0][0] == results[1][0] == 1
    assert results[0][1] == results[1][1] == [5] * 24 + [6]
    assert results[0][2] == results[1][2]


def test_group_counts(reports):
    rep = run(reports, "group", group.verify)
    assert rep.passed
    assert [c.data["count"] for c in rep.checks] == [32, 4, 8]
    assert group.two_torsion_count(16) == 4


def test_props_small_run():
    rep = props.verify(trials=20, seed=7)
    assert rep.passed
    assert len(rep.checks) == 6


def test_timeout_budget_reaches_checks():
    rep = d18.verify(budget=Budget(1e-6))
    assert rep.timed_out and not rep.passed


def test_rerun_hashes_match(reports):
    first = run(reports, "d18", d18.verify)
    assert d18.verify().stable_hash() == first.stable_hash()
