from __future__ import annotations

import time

from abelcert.certlib import d12, d14, d16, d18, d20, group, props
from abelcert.heisenberg import TWO_K, count_level_stabilizer

_reports: dict = {}
CONFIGS = [
    ("d12", d12.verify, {}),
    ("d14", d14.verify, {}),
    ("d16", d16.verify, {"primes": (7, 13), "orbit_prime": 7, "sing_prime": 13}),
    ("d18", d18.verify, {}),
    ("d20", d20.verify, {"prime": 31}),
    ("group", group.verify, {}),
    ("props", props.verify, {"trials": 1000, "seed": 0}),
]


def timed(fn, **kwargs):
    t0 = time.perf_counter()
    rep = fn(**kwargs)
    return rep, time.perf_counter() - t0


def announce(capsys, n: int, title: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nACCEPTANCE {n} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")


def check_map(rep) -> dict:
    return {c.name: c for c in rep.checks}


def test_criterion_1_d12(capsys):
    rep, secs = timed(d12.verify)
    _reports["d12"] = (d12.verify, {}, rep)
    ok = rep.passed and len(rep.checks) == 4 and secs < 10
    announce(capsys, 1, "d12 certificate", ok, f"{sum(c.status == 'pass' for c in rep.checks)}/4 checks pass in {secs:.1f} s")
    assert ok, "\n".join(rep.summary_lines())


def test_criterion_2_d14(capsys):
    rep, secs = timed(d14.verify)
    _reports["d14"] = (d14.verify, {}, rep)
    c = check_map(rep)
    required = ["a.f1_klein", "b.f2_display", "c.phi_pullbacks", "d.base_locus", "e.f1_f2_intersection", "f.psi_annihilator"]
    ok = all(c[n].status == "pass" for n in required) and "dim 3 degree 16" in c["e.f1_f2_intersection"].detail and secs < 60
    # the optional extended check over F_31
    ext, ext_secs = timed(d14.verify, extended=True)
    g = check_map(ext)["g.v14y_extended"]
    ext_ok = g.status == "pass" and "degree 42" in g.detail and "length 49" in g.detail and ext_secs < 7200
    announce(
        capsys, 2, "d14 certificate", ok and ext_ok,
        f"identities and f1=f2=0 (dim 3, degree 16) in {secs:.1f} s; extended: {g.detail} in {ext_secs:.0f} s",
    )
    assert ok, "\n".join(rep.summary_lines())
    assert ext_ok, "\n".join(ext.summary_lines())


def test_criterion_3_d16(capsys):
    rep, secs = timed(d16.verify, primes=(7, 13), orbit_prime=7, sing_prime=13)
    _reports["d16"] = (d16.verify, {"primes": (7, 13), "orbit_prime": 7, "sing_prime": 13}, rep)
    c = check_map(rep)
    orbit = c["f.orbit_scheme"].data
    ok = (
        all(c[n].status == "pass" for n in ("a.coordinate_change", "b.degree40", "c.tangent_cone", "d.g1_g2", "e.zprime_singular_points", "f.orbit_scheme", "g.stabilizer_count"))
        and "dim 3 degree 40" in c["b.degree40"].detail
        and orbit["orbit"]["degree"] == 32
        and c["g.stabilizer_count"].data["count"] == 32 == count_level_stabilizer(8, TWO_K)
        and secs < 300
    )
    announce(capsys, 3, "d16 certificate", ok, f"Z dim 3 degree 40, tangent cone equal, six singular points of Z' over F_13, orbit degree {orbit['orbit']['degree']}, count 32 in {secs:.1f} s")
    assert ok, "\n".join(rep.summary_lines())


def test_criterion_4_d18(capsys):
    rep, secs = timed(d18.verify)
    _reports["d18"] = (d18.verify, {}, rep)
    h = check_map(rep)["f.degeneration_char11"].data.get("hilbert", {})
    ok = rep.passed and h.get("hilbert_polynomial") == "18t^2" and h.get("degree") == 36 and h.get("dim") == 2 and secs < 2700
    announce(capsys, 4, "d18 certificate", ok, f"identities exact; char-11 degeneration P(t)={h.get('hilbert_polynomial')}, dim {h.get('dim')}, degree {h.get('degree')} in {secs:.1f} s")
    assert ok, "\n".join(rep.summary_lines())


def test_criterion_5_d20(capsys):
    rep, secs = timed(d20.verify, prime=31)
    _reports["d20"] = (d20.verify, {"prime": 31}, rep)
    c = check_map(rep)
    dims = c["b.eigenspaces"].data["dims"]
    nodes = c["g.nodes"].data
    ok = (
        rep.passed
        and rep.params["prime"] == 31
        and c["d.unique_quintic"].data["kernel_dim"] == 1
        and "x0x1x2x3x4" in c["c.special_parameter"].detail
        and dims["0,0"] == 6 and sorted(v for k, v in dims.items() if k != "0,0") == [5] * 24
        and nodes["jacobian"]["degree"] == 100 and nodes["jacobian"]["dim"] == 0
        and all(r == 4 for r in nodes["hessian_ranks"])
        and secs < 900
    )
    announce(capsys, 5, "d20 certificate", ok, f"a={rep.params['a']} over F_31: kernel dim 1, dims 6 + 24x5, Jacobian degree {nodes['jacobian']['degree']}, Hessian ranks {nodes['hessian_ranks']} in {secs:.1f} s")
    assert ok, "\n".join(rep.summary_lines())


def test_criterion_6_property_suites(capsys):
    rep, secs = timed(props.verify, trials=1000, seed=0)
    _reports["props"] = (props.verify, {"trials": 1000, "seed": 0}, rep)
    ok = rep.passed and len(rep.checks) == 6 and secs < 300
    announce(capsys, 6, "property suites", ok, f"{sum(c.status == 'pass' for c in rep.checks)}/6 batteries x 1000 trials pass in {secs:.1f} s")
    assert ok, "\n".join(rep.summary_lines())


def test_criterion_7_determinism(capsys):
    runs = dict(_reports)
    # certificates not already run above get their first run here
    for name, fn, kwargs in CONFIGS:
        if name not in runs:
            runs[name] = (fn, kwargs, fn(**kwargs))
    same = {}
    for name, (fn, kwargs, first) in sorted(runs.items()):
        same[name] = fn(**kwargs).stable_hash() == first.stable_hash()
    ok = all(same.values())
    announce(capsys, 7, "determinism", ok, ", ".join(f"{k}={'same' if v else 'DIFFERENT'}" for k, v in same.items()))
    assert ok, same
