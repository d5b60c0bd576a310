"""The ten acceptance criteria at their stated tolerances.

Each test records one PASS/FAIL line (printed in the terminal summary)
before asserting, so a failure still reports its numbers.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import integrate as sci_int

from forge.cli import SCENARIO_DIR, run_scenario
from forge.errors import ExactnessViolation
from forge.holo import Z, classify_singularity, const, exp, parse, schwarzian
from forge.metric import (EVIDENCE_NOTE, AbsOneForm, ConformalMetric, ModulusWeight, PathSpec,
                          gauss_curvature, path_length, radial_divergence_test,
                          weighted_divergence_test)
from forge.scenario import load_scenario
from forge.surfaces import (Cmc1Data, ImproperAffineData, affine_chain_check, build_improper_affine,
                            cmc1_elliptic_check, cmc1_identity_check, cmc1_metric_bundle,
                            cmc1_parabolic_g, cmc1_parabolic_model, counterexample, flat_s3_forms,
                            flat_s3_integrate, hopf_and_schwarzian_identity, improper_affine_metrics,
                            mesh_metric_error, singular_set_extract)

GOLDEN = Path(__file__).parent / "golden"
DIAG = (1.0, -1.0)


def test_01_flat_s3_diagonal(criterion):
    forms = flat_s3_forms(counterexample())
    t0 = time.perf_counter()
    L = path_length(forms.I, PathSpec.segment((0.0, 0.0), DIAG))
    T = 7.5
    LT = path_length(forms.dtau2, PathSpec.segment((0.0, 0.0), DIAG, T=T))
    Linf = path_length(forms.dtau2, PathSpec.segment((0.0, 0.0), DIAG))
    dt = time.perf_counter() - t0
    # oracle: the closed form and scipy's own improper quadrature of exp(-t^2)
    oracle, _ = sci_int.quad(lambda t: math.exp(-t * t), 0, math.inf)
    assert abs(oracle - math.sqrt(math.pi) / 2) < 1e-12
    e1 = abs(L.value - math.sqrt(math.pi) / 2)
    e2 = abs(LT.value - math.sqrt(2) * T)
    ok = e1 <= 1e-6 and e2 <= 1e-9 and Linf.divergent and dt < 5
    criterion(1, "flat S^3 diagonal: finite ds2 length, divergent dtau2", ok,
              f"|L - sqrt(pi)/2| = {e1:.1e}, |L_T - sqrt2 T| = {e2:.1e}, dtau2 {Linf.growth}, {dt:.2f} s")
    assert ok


def test_02_pointwise_identity(criterion):
    d = counterexample()
    t = np.linspace(-6, 6, 1000)
    # 2 sin(w/2) is the cancellation-free form of sqrt(2(1 - cos w))
    stable = 2 * d.half_sin(t, -t)
    err = float(np.max(np.abs(stable - np.exp(-t * t))))
    ok = err <= 1e-12
    criterion(2, "sqrt(2(1 - cos w(t,-t))) = exp(-t^2) at 1000 points", ok, f"max error {err:.1e}")
    assert ok


def test_02b_literal_form_where_well_conditioned():
    d = counterexample()
    t = np.linspace(-1.5, 1.5, 1000)
    w = d.omega(t, -t)
    lit = np.sqrt(2 * (1 - np.cos(w)))
    assert np.max(np.abs(lit - np.exp(-t * t))) <= 1e-12


def test_03_completeness_lemma_engine(criterion):
    rows, ok = [], True
    for k in range(1, 6):
        v = classify_singularity(Z ** (-k) * (1 + Z / 2))
        good = v.kind == "pole" and v.order == k and abs(v.slope - k) <= 0.1
        ok &= good
        rows.append(f"{v}")
    ess = classify_singularity(exp(1 / Z))
    ok &= ess.kind == "essential"
    log_m = radial_divergence_test(ConformalMetric([AbsOneForm(1 / Z)]), 8)
    flat = radial_divergence_test(ConformalMetric([AbsOneForm(const(1))]), 8)
    lengths = [pl.value for _, pl in flat.paths]
    ok &= log_m.divergent and log_m.growth == "log"
    ok &= (not flat.divergent) and all(v is not None and abs(v - 1) <= 1e-9 for v in lengths)
    criterion(3, "pole orders, essential singularity, radial divergence", ok,
              f"{', '.join(rows)}; exp(1/z): {ess}; |dz/z|: {log_m.growth}; "
              f"|dz| max |L-1| = {max(abs(v - 1) for v in lengths):.1e}")
    assert ok


def test_04_improper_affine(criterion):
    with pytest.raises(ExactnessViolation) as ei:
        build_improper_affine(ImproperAffineData(parse("i/z"), Z))
    per = ei.value.period.real
    d = ImproperAffineData(parse("1/z"), Z, r0=2.0)
    build_improper_affine(d)
    m = improper_affine_metrics(d)
    curve = singular_set_extract(m.indicator, (-2, 2, -2, 2), 512)
    v = curve.vertices()
    circ = float(np.max(np.abs(np.abs(v) - 1)))
    c = affine_chain_check(d)
    ok = abs(per + 2 * math.pi) <= 1e-8 and circ <= 1e-3 and c["forward_chain"] and c["reverse_bound"]
    criterion(4, "improper affine rejection, singular circle, inequality chain", ok,
              f"Re-period {per:.10f}, circle error {circ:.1e}, chain {c['forward_chain']}, "
              f"reverse {c['reverse_bound']} (delta {c['delta']:.3f})")
    assert ok


def test_05_cmc1(criterion):
    ell = Cmc1Data(parse("z/2"), omega=parse("z^(-2)"))
    chain = cmc1_elliptic_check(ell, eps=0.75)
    ident = cmc1_identity_check(ell)
    # oracle for the chain from the closed-form densities (1 +- |g|^2)^2 |omega|^2
    x = np.linspace(-1, 1, 201)
    zz = (x[:, None] + 1j * x[None, :]).ravel()
    zz = zz[(np.abs(zz) < 1) & (np.abs(zz) > 1e-3)]
    gg, ww = np.abs(zz / 2) ** 2, np.abs(zz ** -2.0) ** 2
    b = cmc1_metric_bundle(ell)
    assert np.allclose(b.dhat_s2.density(zz), (1 + gg) ** 2 * ww, rtol=1e-12)
    assert np.allclose(b.ds2.density(zz), (1 - gg) ** 2 * ww, rtol=1e-12)
    chain_oracle = bool(np.all((1 + gg) ** 2 <= 4 / 0.75 ** 2 * (1 - gg) ** 2 * (1 + 1e-12)))
    model, rep = cmc1_parabolic_model(parse("0"), 1)
    g10 = complex(model.g(np.array([math.exp(-10.0)]))[0])
    # independent check of |1 - |g|^2| against the closed form on fresh points
    rng = np.random.default_rng(3)
    zs = 10 ** rng.uniform(-8, -2, 200) * np.exp(1j * rng.uniform(-3, 3, 200))
    lhs = np.abs(1 - np.abs(model.g(zs)) ** 2)
    rhs = 4 * np.log(np.abs(zs)) / np.abs(np.log(zs) + 1) ** 2
    id_err = float(np.max(np.abs(lhs - np.abs(rhs))))
    ok = (chain["passed"] and chain_oracle and ident["passed"] and ident["max_relative_error"] <= 1e-9
          and abs(g10 - 11 / 9) <= 1e-12 and id_err <= 1e-10
          and rep["c1_spread"] <= 0.2 and rep["c2_spread"] <= 0.2)
    criterion(5, "CMC-1 elliptic chain, metric identity, parabolic model", ok,
              f"chain {chain['passed']}, identity rel err {ident['max_relative_error']:.1e}, "
              f"|g(e^-10) - 11/9| = {abs(g10 - 11 / 9):.1e}, |1-|g|^2| err {id_err:.1e}, "
              f"c1 {rep['c1']:.4g} (spread {rep['c1_spread']:.3f}), c2 {rep['c2']:.4g} "
              f"(spread {rep['c2_spread']:.3f})")
    assert ok


def test_06_schwarzian(criterion):
    rng = np.random.default_rng(11)
    pts = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20)
    mob = (parse("2+i") * Z + 1) / (Z - parse("3"))
    e_mob = float(np.max(np.abs(schwarzian(mob)(pts))))
    e_sq = float(np.max(np.abs(schwarzian(Z ** 2)(pts) + 1.5 / pts ** 2)))
    e_exp = float(np.max(np.abs(schwarzian(exp(Z))(pts) + 0.5)))
    g = cmc1_parabolic_g(parse("0"), 1).g
    Q = schwarzian(g) * 0.5
    zp = 0.4 * np.sqrt(rng.uniform(0.01, 1, 40)) * np.exp(1j * rng.uniform(-3, 3, 40))
    res = float(np.max(np.abs(hopf_and_schwarzian_identity(g, Z, Q=Q, points=zp))))
    ok = e_mob <= 1e-10 and e_sq <= 1e-9 and e_exp <= 1e-9 and res <= 1e-8
    criterion(6, "Schwarzian derivative checks", ok,
              f"Moebius {e_mob:.1e}, z^2 {e_sq:.1e}, e^z {e_exp:.1e}, parabolic residual {res:.1e}")
    assert ok


def test_07_flat_s3_mesh(criterion):
    d = counterexample()
    t0 = time.perf_counter()
    mesh = flat_s3_integrate(d, (-2, 2, -2, 2), 1e-2)
    dt = time.perf_counter() - t0
    sph = mesh.sphere_error()
    merr = mesh_metric_error(d, mesh)
    forms = flat_s3_forms(d)
    u, v = np.meshgrid(np.linspace(-2, 2, 41), np.linspace(-2, 2, 41))
    E, F, G = forms.I.components(u, v)
    L, M, N = forms.II.components(u, v)
    ratio = (L * N - M * M) / (E * G - F * F)
    e_det = float(np.max(np.abs(ratio + 1)))
    K = np.array([gauss_curvature(forms.I, (a, b)) for a, b in
                  [(0.0, 0.0), (0.3, -0.7), (1.1, 0.4), (-1.5, 1.5), (0.8, 0.8)]])
    e_K = float(np.max(np.abs(K)))
    ok = sph <= 1e-6 and merr <= 1e-4 and e_det <= 1e-10 and e_K <= 1e-4 and dt < 60
    criterion(7, "flat S^3 frame integration", ok,
              f"| |f| - 1 | {sph:.1e}, metric error {merr:.1e}, det ratio {e_det:.1e}, |K| {e_K:.1e}, {dt:.2f} s")
    assert ok


def test_08_curvature_units(criterion):
    poincare = ConformalMetric([AbsOneForm(const(2))], [ModulusWeight(Z, 1.0, -1.0, -2.0)])
    euclid = ConformalMetric([AbsOneForm(const(1))])
    pts = [0.1 + 0.2j, -0.3 + 0.1j, 0.5j, 0.6 - 0.2j, -0.4 - 0.4j]
    Kp = np.array([gauss_curvature(poincare, p) for p in pts])
    Ke = np.array([gauss_curvature(euclid, p) for p in pts])
    ep, ee = float(np.max(np.abs(Kp + 1))), float(np.max(np.abs(Ke)))
    ok = ep <= 1e-6 and ee <= 1e-8
    criterion(8, "curvature of Poincare and Euclidean metrics", ok, f"|K + 1| {ep:.1e}, |K| {ee:.1e}")
    assert ok


def test_09_consistency_corpus(criterion):
    files = sorted(SCENARIO_DIR.glob("*.scn"))
    kinds, bad, mism = set(), [], []
    exempt_ok = False
    for p in files:
        cfg = load_scenario(p)
        doc1, doc2 = run_scenario(cfg), run_scenario(load_scenario(p))
        kinds.add(cfg.kind)
        c = doc1.consistency[0]
        if not c["passed"] or doc1.exit_code != 0:
            bad.append(p.stem)
        if doc1.verdicts() != doc2.verdicts() or doc1.ends[0]["constants"] != doc2.ends[0]["constants"]:
            mism.append(p.stem)
        gold = json.loads((GOLDEN / f"{p.stem}.json").read_text())
        if gold["verdicts"] != doc1.verdicts():
            mism.append(p.stem + " (golden)")
        end = doc1.ends[0]
        if cfg.kind == "flat_s3":
            exempt_ok = end["exempt"] and end["weakly_complete"] and not end["complete"]
    ok = len(files) >= 8 and len(kinds) == 5 and not bad and not mism and exempt_ok
    criterion(9, "consistency on the stored scenario corpus", ok,
              f"{len(files)} scenarios, {len(kinds)} classes, failures {bad}, mismatches {mism}, "
              f"counterexample exempt and weakly complete only: {exempt_ok}")
    assert ok


def test_10_weighted_probe(criterion):
    ok, parts = True, []
    for n in (0, 1, 2):
        v = weighted_divergence_test(AbsOneForm(1 / Z), n)
        ok &= v.divergent and "evidence, not proof" in v.note
        for label, pl in v.paths:
            if not label.startswith("ray"):
                continue
            p = pl.constants.get("p")
            ok &= pl.growth == "log" and p is not None and abs(p - (n + 1)) <= 0.1 * (n + 1)
            # closed form on the real axis: integral of ln^n(1/r)/r = ln^{n+1}(1/eps)/(n+1)
            eps, L = pl.table[-1]
            closed = math.log(1 / eps) ** (n + 1) / (n + 1)
            ok &= abs(L - closed) <= 0.1 * closed
        worst = min(pl.constants.get("p", 0) for lab, pl in v.paths if lab.startswith("ray"))
        parts.append(f"n={n}: p_min={worst:.3f}")
    ok &= EVIDENCE_NOTE.startswith("evidence, not proof")
    criterion(10, "weighted |dz/z| |log z|^n probe", ok, "; ".join(parts) + "; labelled evidence, not proof")
    assert ok
