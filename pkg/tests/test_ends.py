import math

import pytest

from forge.ends import EndReport, end_report, picard_premise_check, theorem_consistency
from forge.errors import InconclusiveInput
from forge.holo import Z, exp, parse
from forge.surfaces import FlatFrontData, ImproperAffineData, SurfaceModel, counterexample


def _fake(**kw):
    base = dict(end_id="x", kind="flat_front", weakly_complete=True, complete=True,
                singular_set_compact=True, end_punctured_type=True, weak={"growth": "power"},
                strong={"growth": "power"}, singular={}, pole_orders={}, constants={})
    base.update(kw)
    return EndReport(**base)


def test_forward_implication_violation_fails():
    r = theorem_consistency(_fake(weakly_complete=False, weak={"growth": "bounded"}))
    assert not r.passed and not r.checks["forward"]


def test_converse_violation_fails():
    r = theorem_consistency(_fake(complete=False, strong={"growth": "bounded"}))
    assert not r.passed and not r.checks["converse"]


def test_consistent_report_passes():
    assert theorem_consistency(_fake()).passed
    assert theorem_consistency(_fake(weakly_complete=False, complete=False)).passed


def test_exempt_counterexample_shape():
    r = theorem_consistency(_fake(kind="flat_s3", complete=False, exempt=True, end_punctured_type=False))
    assert r.passed and r.checks["counterexample_shape"]
    r2 = theorem_consistency(_fake(kind="flat_s3", complete=True, exempt=True))
    assert not r2.passed


def test_inconclusive_report_refused():
    with pytest.raises(InconclusiveInput):
        theorem_consistency(_fake(inconclusive=True, reasons=["because"]))


def test_flat_front_end_report():
    m = SurfaceModel("flat_front", FlatFrontData(parse("z^(-2)"), parse("0.5")))
    r = end_report(m, {"n_rays": 4, "grid": 64})
    assert r.weakly_complete and r.complete and r.singular_set_compact
    assert r.pole_orders["omega_hat"]["verdict"] == "pole(2)"
    assert r.checks["sqrt2_bound"]["passed"]
    assert "evidence, not proof" in r.evidence_note
    assert theorem_consistency(r).passed


def test_paraboloid_end_is_not_complete():
    m = SurfaceModel("improper_affine", ImproperAffineData(parse("0"), Z))
    r = end_report(m, {"n_rays": 4, "grid": 64})
    assert not r.weakly_complete and not r.complete
    assert r.weak["growth"] == "bounded" and r.singular["n_curves"] == 0


def test_singular_set_reaching_the_end_is_not_compact():
    # |dF/dG| = 1 along the whole line Re z = 0 when F = conj-symmetric; use rho with |rho| = 1 on a ray
    m = SurfaceModel("flat_front", FlatFrontData(parse("z^(-2)"), exp(Z)))
    r = end_report(m, {"n_rays": 4, "grid": 64})
    assert not r.singular_set_compact and not r.complete
    assert theorem_consistency(r).passed


def test_flat_s3_report_is_exempt():
    m = SurfaceModel("flat_s3", counterexample(), punctured=False)
    r = end_report(m, {"n_rays": 4})
    assert r.exempt and r.weakly_complete and not r.complete
    assert abs(r.constants["diagonal_length"] - math.sqrt(math.pi) / 2) < 1e-9


def test_report_is_deterministic():
    m = SurfaceModel("flat_front", FlatFrontData(parse("z^(-2)"), parse("0.5")))
    a, b = end_report(m, {"n_rays": 4, "grid": 64}), end_report(m, {"n_rays": 4, "grid": 64})
    assert a.verdict_fields() == b.verdict_fields()
    assert a.weak == b.weak and a.strong == b.strong


def test_picard_premise():
    b = picard_premise_check(parse("z/2") + 0.1)
    assert b["premise"] == "bounded" and b["holds"] and b["bounded_away_from_1"] and b["consistent"]
    p = picard_premise_check(1 / Z)
    assert p["premise"] == "pole-bounded" and p["classifier"] == "pole(1)"
    e = picard_premise_check(exp(1 / Z))
    assert e["premise"] == "fails" and not e["holds"]
