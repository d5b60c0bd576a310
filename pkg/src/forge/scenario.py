"""Scenario files: ``key = value`` lines, ``#`` comments, expressions as values.

All defaults live in :data:`DEFAULTS` (analysis options) and
:data:`CLASS_KEYS` (per-class data keys with their defaults).  Example::

    name = flatfront_pole2
    class = flat_front
    omega_hat = z^(-2)
    rho_hat = 0.5
    r0 = 1
    rays = 8
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DataError
from .holo.parser import parse
from .surfaces import (Cmc1Data, FlatFrontData, ImproperAffineData, MaxfaceData, SurfaceModel,
                       build_improper_affine, build_maxface, cmc1_parabolic_g, constant_profile,
                       counterexample)
from .surfaces.flat_s3 import check_range

# analysis options shared by every class
DEFAULTS = {
    "rays": 8,         # radial rays (or segment directions) in divergence tests
    "grid": 256,       # singular-set grid size per axis
    "tol": 1e-9,       # absolute path-length tolerance
    "decades": 8,      # truncation schedule eps_k = r0 10^-k, k = 1..decades
    "floor": 1e-3,     # minimum increment for a divergent verdict
    "r_check": 0.2,    # singular set compact iff no contour inside r_check * r0
    "r0": 1.0,         # radius of the punctured disk around the end
}

_EXPR, _REAL, _INT, _TEXT, _RECT = "expr", "real", "int", "text", "rect"

CLASS_KEYS = {
    "improper_affine": {"F": (_EXPR, None), "G": (_EXPR, None), "z0": (_EXPR, "0.5")},
    "maxface": {"F1": (_EXPR, None), "F2": (_EXPR, None), "F3": (_EXPR, None),
                "g": (_EXPR, None), "omega": (_EXPR, None), "z0": (_EXPR, "0.5")},
    "cmc1": {"model": (_TEXT, "elliptic"), "g": (_EXPR, None), "omega": (_EXPR, None),
             "G": (_EXPR, None), "Q": (_EXPR, None), "h": (_EXPR, None), "eps": (_INT, None)},
    "flat_front": {"omega_hat": (_EXPR, None), "rho_hat": (_EXPR, None), "mu": (_REAL, "0"),
                   "nu": (_REAL, "0")},
    "flat_s3": {"profile": (_TEXT, "counterexample"), "omega0": (_REAL, str(math.pi / 2)),
                "rect": (_RECT, "-2, 2, -2, 2"), "step": (_REAL, "0.02")},
}

_OPTION_TYPES = {"rays": _INT, "grid": _INT, "tol": _REAL, "decades": _INT, "floor": _REAL,
                 "r_check": _REAL, "r0": _REAL}
_META = {"name": _TEXT, "class": _TEXT, "description": _TEXT}


@dataclass
class Entry:
    key: str
    text: str
    line: int
    col: int  # column of the value


@dataclass
class ScenarioConfig:
    name: str
    kind: str
    data: dict  # key -> parsed value
    options: dict
    entries: dict = field(default_factory=dict)
    source: str = ""

    def echo(self):
        return {"name": self.name, "class": self.kind,
                "data": {k: e.text for k, e in self.entries.items() if k in CLASS_KEYS[self.kind]},
                "options": dict(self.options), "source": self.source}


def _convert(kind, text, line, col):
    try:
        if kind == _EXPR:
            return parse(text, line, col)
        if kind == _REAL:
            return float(_const_value(text, line, col).real)
        if kind == _INT:
            v = float(text)
            if not v.is_integer():
                raise ValueError
            return int(v)
        if kind == _RECT:
            parts = [float(p) for p in text.split(",")]
            if len(parts) != 4:
                raise ValueError
            return tuple(parts)
    except ConfigError:
        raise
    except ValueError:
        raise ConfigError(f"cannot read {text!r} as {kind}", line, col) from None
    return text


def _const_value(text, line, col):
    e = parse(text, line, col)
    from .holo.expr import Const
    if not isinstance(e, Const):
        raise ConfigError(f"expected a constant, found {text!r}", line, col)
    return e.value


def parse_scenario(text: str, source: str = "<string>") -> ScenarioConfig:
    entries = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ConfigError("expected 'key = value'", ln, col)
        k_part, v_part = body.split("=", 1)
        key = k_part.strip()
        key_col = len(k_part) - len(k_part.lstrip()) + 1
        if not key:
            raise ConfigError("missing key before '='", ln, key_col)
        vstart = len(k_part) + 1 + (len(v_part) - len(v_part.lstrip()))
        value = v_part.strip()
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first on line {entries[key].line})", ln, key_col)
        entries[key] = Entry(key, value, ln, vstart + 1)
        entries[key].key_col = key_col

    if "class" not in entries:
        raise ConfigError("missing 'class' key", 1, 1)
    kind = entries["class"].text
    if kind not in CLASS_KEYS:
        e = entries["class"]
        raise ConfigError(f"unknown class {kind!r}; expected one of {sorted(CLASS_KEYS)}", e.line, e.col)
    allowed = CLASS_KEYS[kind]
    data, options = {}, dict(DEFAULTS)
    for key, e in entries.items():
        if key in _META:
            continue
        if key in _OPTION_TYPES:
            options[key] = _convert(_OPTION_TYPES[key], e.text, e.line, e.col)
        elif key in allowed:
            data[key] = _convert(allowed[key][0], e.text, e.line, e.col)
        else:
            raise ConfigError(f"unknown key {key!r} for class {kind}", e.line, e.key_col)
    for key, (typ, default) in allowed.items():
        if key not in data and default is not None:
            data[key] = _convert(typ, default, None, 1)
    name = entries["name"].text if "name" in entries else Path(source).stem
    return ScenarioConfig(name, kind, data, options, entries, source)


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))


def _need(cfg, *keys):
    missing = [k for k in keys if k not in cfg.data]
    if missing:
        raise ConfigError(f"class {cfg.kind} needs key(s) {', '.join(missing)}", 1, 1)


def _posit(cfg, key, exc):
    e = cfg.entries.get(key)
    if e is None:
        return exc
    return ConfigError(str(exc), e.line, e.col)


def build_model(cfg: ScenarioConfig) -> SurfaceModel:
    """Turn a parsed scenario into a validated :class:`SurfaceModel`."""
    d, r0 = cfg.data, float(cfg.options["r0"])
    if cfg.kind == "improper_affine":
        _need(cfg, "F", "G")
        z0 = complex(d["z0"].value) if hasattr(d["z0"], "value") else complex(d["z0"])
        data = ImproperAffineData(d["F"], d["G"], z0, r0)
        build_improper_affine(data)
        return SurfaceModel("improper_affine", data, r0)
    if cfg.kind == "maxface":
        z0 = complex(d["z0"].value)
        if all(k in d for k in ("F1", "F2", "F3")):
            data = MaxfaceData(F=(d["F1"], d["F2"], d["F3"]), z0=z0, r0=r0)
        elif "g" in d and "omega" in d:
            data = MaxfaceData.from_weierstrass(d["g"], d["omega"], z0, r0)
        else:
            raise ConfigError("maxface needs F1, F2, F3 or g, omega", 1, 1)
        build_maxface(data)
        return SurfaceModel("maxface", data, r0)
    if cfg.kind == "cmc1":
        model = d["model"]
        opts = {"model": model}
        if model == "parabolic":
            _need(cfg, "h", "eps")
            if d["eps"] not in (1, -1):
                e = cfg.entries["eps"]
                raise ConfigError("eps must be 1 or -1", e.line, e.col)
            g = cmc1_parabolic_g(d["h"], d["eps"]).g
            opts.update(h=d["h"], eps_model=d["eps"])
        elif model == "elliptic":
            _need(cfg, "g")
            g = d["g"]
        else:
            e = cfg.entries["model"]
            raise ConfigError(f"unknown CMC-1 end model {model!r} (elliptic or parabolic)", e.line, e.col)
        data = Cmc1Data(g, d.get("omega"), d.get("G"), d.get("Q"), r0)
        return SurfaceModel("cmc1", data, r0, opts)
    if cfg.kind == "flat_front":
        _need(cfg, "omega_hat", "rho_hat")
        try:
            data = FlatFrontData(d["omega_hat"], d["rho_hat"], d["mu"], d["nu"], r0)
        except DataError as exc:
            raise _posit(cfg, "mu" if not 0 <= d["mu"] < 1 else "nu", exc) from None
        return SurfaceModel("flat_front", data, r0)
    # flat_s3
    prof = d["profile"]
    if prof == "counterexample":
        data = counterexample()
    elif prof == "constant":
        data = constant_profile(d["omega0"])
    else:
        e = cfg.entries["profile"]
        raise ConfigError(f"unknown profile {prof!r} (counterexample or constant)", e.line, e.col)
    check_range(data, d["rect"])
    return SurfaceModel("flat_s3", data, r0, {"rect": d["rect"], "step": d["step"]}, punctured=False)
