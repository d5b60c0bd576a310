"""Per-end completeness analysis and the equivalence checks on its verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InconclusiveInput
from .holo import classify_singularity
from .holo.analysis import DEFAULT_RADII, check_single_valued, circle_points
from .metric import (EVIDENCE_NOTE, PathSpec, _aggregate, disk_points, path_length,
                     radial_divergence_test)
from .surfaces import (SurfaceModel, affine_chain_check, cmc1_elliptic_check,
                       cmc1_identity_check, cmc1_parabolic_model, flat_front_bound_check,
                       governing_forms, model_metrics, singular_set_extract)

DEFAULTS = {
    "n_rays": 8,
    "r_check": 0.2,  # fraction of r0
    "grid": 256,
    "tol": 1e-9,
    "decades": 8,
    "floor": 1e-3,
}


@dataclass
class EndReport:
    end_id: str
    kind: str
    weakly_complete: bool
    complete: bool
    singular_set_compact: bool
    end_punctured_type: bool
    weak: dict
    strong: dict
    singular: dict
    pole_orders: dict
    constants: dict
    checks: dict = field(default_factory=dict)
    exempt: bool = False
    inconclusive: bool = False
    reasons: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)  # metric name -> rows
    evidence_note: str = EVIDENCE_NOTE

    def verdict_fields(self):
        return {"end_id": self.end_id, "kind": self.kind,
                "weakly_complete": self.weakly_complete, "complete": self.complete,
                "singular_set_compact": self.singular_set_compact,
                "end_punctured_type": self.end_punctured_type,
                "weak_growth": self.weak["growth"], "strong_growth": self.strong["growth"],
                "pole_orders": {k: v["verdict"] for k, v in self.pole_orders.items()},
                "exempt": self.exempt, "inconclusive": self.inconclusive}

    def as_dict(self):
        return {**self.verdict_fields(), "weak": self.weak, "strong": self.strong,
                "singular": self.singular, "pole_orders": self.pole_orders,
                "constants": self.constants, "checks": self.checks, "reasons": self.reasons,
                "notes": self.notes, "evidence_note": self.evidence_note}


def _segment_test(metric, n_rays, decades, tol, floor, offset=-math.pi / 4):
    """Straight rays ``t -> t (cos a, sin a)`` to infinity in the (u, v) plane."""
    results, table = [], []
    for j in range(n_rays):
        a = offset + 2 * math.pi * j / n_rays
        # rounding keeps exact diagonals exact, so cancellations in the form survive
        direction = (round(math.cos(a), 14), round(math.sin(a), 14))
        pl = path_length(metric, PathSpec.segment((0.0, 0.0), direction),
                         tol=tol, decades=decades, floor=floor)
        results.append((f"segment angle={a:.6f}", pl))
        table.extend((a, e, L) for e, L in pl.table)
    return _aggregate(results, table)


def _verdict_dict(name, v):
    return {"metric": name, "divergent": v.divergent, "growth": v.growth,
            **{k: val for k, val in v.summary().items() if k not in ("divergent", "growth")}}


def end_report(model: SurfaceModel, config: dict | None = None, end_id: str = "0") -> EndReport:
    """Divergence tests on the weak and strong metrics, singular set near the
    end, pole orders of the governing forms and the class inequality suite."""
    cfg = {**DEFAULTS, **(config or {})}
    mp = model_metrics(model)
    kw = dict(tol=cfg["tol"], decades=cfg["decades"], floor=cfg["floor"])
    r0 = model.r0
    reasons, notes = [], list(mp.notes)
    constants, checks = {}, {}

    if model.kind == "flat_s3":
        weak = _segment_test(mp.weak, cfg["n_rays"], **kw)
        strong = _segment_test(mp.strong, cfg["n_rays"], **kw)
        compact = True
        singular = {"indicator": mp.indicator_name, "n_curves": 0, "note": "immersion: no singular points"}
        diag = path_length(mp.strong, PathSpec.segment((0.0, 0.0), (1.0, -1.0)), tol=cfg["tol"])
        constants["diagonal_length"] = diag.value
        constants["diagonal_length_error"] = diag.error
    else:
        weak = radial_divergence_test(mp.weak, cfg["n_rays"], r0, **kw)
        strong = radial_divergence_test(mp.strong, cfg["n_rays"], r0, **kw)
        ext = (-r0, r0, -r0, r0)
        curve = singular_set_extract(mp.indicator, ext, cfg["grid"], mp.indicator_name,
                                     mask=lambda Z: np.abs(Z) <= r0)
        r_check = cfg["r_check"] * r0
        compact = curve.compact_near(r_check)
        singular = {**curve.summary(), "r_check": r_check, "compact_on_probed_region": compact,
                    "note": "on probed region only"}

    pole_orders = {}
    for name, e in governing_forms(model).items():
        try:
            v = classify_singularity(e)
            pole_orders[name] = {"verdict": str(v), **v.as_dict()}
            if v.kind == "inconclusive":
                reasons.append(f"pole order of {name} inconclusive: {v.note}")
        except Exception as exc:  # multivalued forms cannot be classified on circles
            pole_orders[name] = {"verdict": "not classified", "note": str(exc)}
            notes.append(f"{name}: {exc}")

    _class_suite(model, cfg, constants, checks, notes)

    for label, v in (("weak", weak), ("strong", strong)):
        if v.growth == "undetermined" and not v.divergent:
            reasons.append(f"{label} metric: finiteness could not be settled within the decade budget")
    weakly_complete = weak.divergent
    complete = strong.divergent and compact
    exempt = model.kind == "flat_s3"
    tables = {mp.weak_name: weak.table, mp.strong_name: strong.table}
    return EndReport(end_id, model.kind, weakly_complete, complete, compact, model.punctured and not exempt,
                     _verdict_dict(mp.weak_name, weak), _verdict_dict(mp.strong_name, strong), singular,
                     pole_orders, constants, checks, exempt, bool(reasons), reasons, notes, tables)


def _class_suite(model, cfg, constants, checks, notes):
    k, d = model.kind, model.data
    if k == "improper_affine":
        c = affine_chain_check(d)
        constants["delta"] = c["delta"]
        checks["affine_chain"] = c
    elif k == "maxface":
        g, w = d.weierstrass()
        Zs = disk_points(model.r0, 96, r_min=1e-3 * model.r0)
        gv = np.abs(g(Zs))
        M = float(gv.max())
        constants["M"] = M
        sig = (1 + gv ** 2) ** 2 * np.abs(w(Zs)) ** 2
        checks["sigma_bound"] = {"passed": bool(np.all(sig <= (1 + M * M) ** 2 * np.abs(w(Zs)) ** 2 * (1 + 1e-12))),
                                 "M": M}
        checks["picard_premise"] = picard_premise_check(g)
    elif k == "cmc1":
        checks["identity_ds2_dsigma2"] = cmc1_identity_check(d)
        if model.options.get("model") == "parabolic":
            _, rep = cmc1_parabolic_model(model.options["h"], model.options["eps_model"])
            constants.update({"c1": rep["c1"], "c2": rep["c2"]})
            checks["parabolic_bounds"] = {k2: rep[k2] for k2 in ("c1_spread", "c2_spread", "stable",
                                                                 "dg_closed_form_error")}
        else:
            c = cmc1_elliptic_check(d)
            constants["eps"] = c["eps"]
            checks["elliptic_chain"] = c
    elif k == "flat_front":
        c = flat_front_bound_check(d)
        checks["sqrt2_bound"] = c
        constants["roles_exchanged"] = c["exchanged"]
    elif k == "flat_s3":
        from .surfaces import flatness_checks
        checks["flatness"] = flatness_checks(d, [(0.0, 0.0), (0.5, -0.2), (1.0, 1.5)])
        notes.append("class exempt from the punctured-end equivalence: domain is R^2, not a punctured disk")


@dataclass
class ConsistencyResult:
    passed: bool
    explanation: str
    checks: dict


def theorem_consistency(r: EndReport) -> ConsistencyResult:
    """complete => weakly complete and compact singular set; and
    weakly complete, compact, punctured type => complete (unless exempt)."""
    if r.inconclusive:
        raise InconclusiveInput("report is inconclusive: " + "; ".join(r.reasons))
    forward = (not r.complete) or (r.weakly_complete and r.singular_set_compact)
    premise = r.weakly_complete and r.singular_set_compact and r.end_punctured_type
    converse = True if r.exempt else ((not premise) or r.complete)
    checks = {"forward": forward, "converse": converse, "exempt": r.exempt}
    msgs = []
    if not forward:
        msgs.append(f"complete but weakly_complete={r.weakly_complete}, "
                    f"singular_set_compact={r.singular_set_compact} (weak growth {r.weak['growth']})")
    if not converse:
        msgs.append(f"weakly complete with compact singular set on a punctured end, but ds2 growth is "
                    f"{r.strong['growth']}")
    if r.exempt:
        shape = r.weakly_complete and not r.complete
        checks["counterexample_shape"] = shape
        if not shape:
            msgs.append("exempt counterexample no longer weakly complete and incomplete")
        else:
            msgs.append("exempt from the equivalence: weakly complete, not complete")
    passed = forward and converse and checks.get("counterexample_shape", True)
    if passed and not msgs:
        msgs.append("both implications hold")
    return ConsistencyResult(passed, "; ".join(msgs), checks)


def picard_premise_check(g, radii=DEFAULT_RADII, n_theta: int = 512, margin: float = 1e-3):
    """Does ``|g|`` stay bounded (or at least pole-bounded) on shrinking circles?"""
    radii = sorted(radii, reverse=True)
    check_single_valued(g, radii[0])
    rows = []
    for r in radii:
        with np.errstate(all="ignore"):
            a = np.abs(g(circle_points(r, n_theta)))
        rows.append((r, float(a.min()), float(a.max())))
    maxes = np.array([row[2] for row in rows])
    mins = np.array([row[1] for row in rows])
    bounded = bool(np.all(np.isfinite(maxes)) and maxes.max() <= 10 * max(1.0, maxes[0]))
    away_from_one = bool(np.all((maxes < 1 - margin) | (mins > 1 + margin)))
    v = classify_singularity(g, radii, n_theta)
    if bounded:
        premise = "bounded"
    elif v.kind == "pole":
        premise = "pole-bounded"
    elif v.kind == "essential":
        premise = "fails"
    else:
        premise = "inconclusive"
    consistent = (not bounded) or v.kind == "removable"
    return {"premise": premise, "holds": premise in ("bounded", "pole-bounded"), "bounded": bounded,
            "bounded_away_from_1": away_from_one, "classifier": str(v), "consistent": consistent,
            "sup_abs": float(np.nanmax(maxes)) if np.any(np.isfinite(maxes)) else math.inf,
            "table": rows}
