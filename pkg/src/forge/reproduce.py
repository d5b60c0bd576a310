"""Built-in reproductions with their pass/fail criteria."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ExactnessViolation, ForgeError
from .holo import Z, classify_singularity, exp, parse, schwarzian
from .metric import AbsOneForm, ConformalMetric, PathSpec, path_length, radial_divergence_test
from .report import ReportDocument, to_jsonable
from .surfaces import (ImproperAffineData, affine_chain_check, build_improper_affine,
                       cmc1_parabolic_model, counterexample, flat_s3_forms,
                       hopf_and_schwarzian_identity, improper_affine_metrics, singular_set_extract)


@dataclass
class Criterion:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _s3_counterexample():
    out = []
    d = counterexample()
    forms = flat_s3_forms(d)
    t0 = time.perf_counter()
    diag = path_length(forms.I, PathSpec.segment((0.0, 0.0), (1.0, -1.0)), tol=1e-10)
    dt = time.perf_counter() - t0
    target = math.sqrt(math.pi) / 2
    err = abs(diag.value - target) if diag.value is not None else math.inf
    out.append(Criterion("ds2 length of t -> (t, -t) is sqrt(pi)/2", err <= 1e-6,
                         f"L = {float(diag.value)!r}, |L - sqrt(pi)/2| = {err:.2e} (tol 1e-6), {dt:.3f} s"))
    T = 7.5
    tr = path_length(forms.dtau2, PathSpec.segment((0.0, 0.0), (1.0, -1.0), T=T))
    e2 = abs(tr.value - math.sqrt(2) * T)
    out.append(Criterion("dtau2 length truncated at T equals sqrt(2) T", e2 <= 1e-9,
                         f"T = {T}, L = {tr.value!r}, error {e2:.2e} (tol 1e-9)"))
    inf = path_length(forms.dtau2, PathSpec.segment((0.0, 0.0), (1.0, -1.0)))
    out.append(Criterion("dtau2 length of the diagonal is divergent", inf.divergent,
                         f"growth {inf.growth}"))
    t = np.linspace(-6.0, 6.0, 1000)
    lhs = 2 * d.half_sin(t, -t)
    e3 = float(np.max(np.abs(lhs - np.exp(-t * t))))
    out.append(Criterion("sqrt(2(1 - cos w(t, -t))) = exp(-t^2)", e3 <= 1e-12,
                         f"max error {e3:.2e} over 1000 points (tol 1e-12)"))
    out.append(Criterion("runtime under 5 s", dt < 5.0, f"{dt:.3f} s"))
    return out, {"diagonal_length": diag.value, "diagonal_error": diag.error}


def _affine_claim():
    out = []
    try:
        build_improper_affine(ImproperAffineData(parse("i/z"), Z))
        out.append(Criterion("F = i/z, G = z rejected", False, "data was accepted"))
        period = None
    except ExactnessViolation as exc:
        period = exc.period
        e = abs(period.real + 2 * math.pi)
        out.append(Criterion("F = i/z, G = z rejected with Re-period -2 pi", e <= 1e-8,
                             f"Re-period {period.real!r} (tol 1e-8)"))
    d = ImproperAffineData(parse("1/z"), Z, r0=2.0)
    try:
        build_improper_affine(d)
        out.append(Criterion("F = 1/z, G = z accepted", True, "exact, positive"))
    except ForgeError as exc:
        out.append(Criterion("F = 1/z, G = z accepted", False, str(exc)))
    m = improper_affine_metrics(d)
    curve = singular_set_extract(m.indicator, (-2, 2, -2, 2), 512, "|dF/dG| - 1")
    v = curve.vertices()
    e = float(np.max(np.abs(np.abs(v) - 1))) if v.size else math.inf
    out.append(Criterion("singular circle |z| = 1 located on a 512^2 grid", e <= 1e-3,
                         f"max ||z| - 1| = {e:.2e} over {v.size} vertices (tol 1e-3)"))
    c = affine_chain_check(d)
    out.append(Criterion("chain ds2 <= dtau2 at every grid point", c["forward_chain"],
                         f"{c['n_points']} points"))
    out.append(Criterion("reverse bound with fitted delta", bool(c["reverse_bound"]),
                         f"delta = {c['delta']:.4f}, {c['n_reverse_points']} points"))
    return out, {"period": period, "delta": c["delta"], "singular_curve": curve.summary()}


def _parabolic_end():
    out = []
    model, rep = cmc1_parabolic_model(parse("0"), 1)
    gv = complex(model.g(np.array([math.exp(-10.0)]))[0])
    e = abs(gv - 11 / 9)
    out.append(Criterion("g(e^-10) = 11/9", e <= 1e-12, f"g = {gv!r}, error {e:.2e} (tol 1e-12)"))
    out.append(Criterion("|1 - |g|^2| closed form", rep["one_minus_g2_identity_error"] <= 1e-10,
                         f"error {rep['one_minus_g2_identity_error']:.2e} (tol 1e-10)"))
    out.append(Criterion("g' closed form", rep["dg_closed_form_error"] <= 1e-10,
                         f"relative error {rep['dg_closed_form_error']:.2e} (tol 1e-10)"))
    out.append(Criterion("c1 stable within 20% on [1e-8, 1e-2]", rep["c1_spread"] <= 0.2,
                         f"c1 = {rep['c1']:.6g}, spread {rep['c1_spread']:.3f}"))
    out.append(Criterion("c2 stable within 20% on [1e-8, 1e-2]", rep["c2_spread"] <= 0.2,
                         f"c2 = {rep['c2']:.6g}, spread {rep['c2_spread']:.3f}"))
    Q = schwarzian(model.g) * 0.5
    rng = np.random.default_rng(7)
    pts = 0.5 * np.sqrt(rng.uniform(0.01, 1, 50)) * np.exp(1j * rng.uniform(-3, 3, 50))
    res = float(np.max(np.abs(hopf_and_schwarzian_identity(model.g, Z, Q=Q, points=pts))))
    out.append(Criterion("2Q - S(g) + S(G) vanishes for Q = S(g)/2, G = z", res <= 1e-8,
                         f"max residual {res:.2e} (tol 1e-8)"))
    return out, {k: rep[k] for k in ("c1", "c2", "c1_windows", "c2_windows", "c1_spread", "c2_spread")}


def _completeness_lemma_demo():
    out, table = [], []
    for k in range(1, 6):
        v = classify_singularity(Z ** (-k) * (1 + Z / 2))
        ok = v.kind == "pole" and v.order == k and abs(v.slope - k) <= 0.1
        table.append((k, str(v), v.slope))
        out.append(Criterion(f"z^-{k} (1 + z/2) classified pole({k})", ok,
                             f"{v}, slope {v.slope:.4f} (tol 0.1)"))
    v = classify_singularity(exp(1 / Z))
    out.append(Criterion("exp(1/z) classified essential", v.kind == "essential", str(v)))
    log_m = ConformalMetric([AbsOneForm(1 / Z)], name="|dz/z|")
    r = radial_divergence_test(log_m, 8)
    out.append(Criterion("|dz/z| divergent with log growth", r.divergent and r.growth == "log",
                         f"divergent={r.divergent}, growth {r.growth}"))
    flat = ConformalMetric([AbsOneForm(parse("1"))], name="|dz|")
    r2 = radial_divergence_test(flat, 8)
    vals = [pl.value for _, pl in r2.paths] if r2.paths else []
    e = max(abs(x - 1) for x in vals) if vals and None not in vals else math.inf
    out.append(Criterion("|dz| finite with radial length 1", (not r2.divergent) and e <= 1e-9,
                         f"max |L - 1| = {e:.2e} (tol 1e-9)"))
    return out, {"pole_table": table}


EXAMPLES = {
    "s3-counterexample": _s3_counterexample,
    "affine-claim": _affine_claim,
    "parabolic-end": _parabolic_end,
    "completeness-lemma-demo": _completeness_lemma_demo,
}


def reproduce(example: str):
    """Run a built-in example; returns ``(criteria, ReportDocument)``."""
    if example not in EXAMPLES:
        raise KeyError(f"unknown example {example!r}; choose from {sorted(EXAMPLES)}")
    t0 = time.perf_counter()
    crit, extra = EXAMPLES[example]()
    doc = ReportDocument({"name": example, "builtin": True})
    doc.inequality_suites = {"criteria": [c.__dict__ for c in crit], "values": to_jsonable(extra)}
    doc.timing = {"total": time.perf_counter() - t0}
    doc.exit_code = 0 if all(c.passed for c in crit) else 4
    return crit, doc
