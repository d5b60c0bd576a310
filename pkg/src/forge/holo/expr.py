"""Closed-form holomorphic expressions in one complex variable ``z``.

Nodes are immutable and hashable.  Build them through the operator overloads
or the smart constructors (:func:`add`, :func:`mul`, ...), which fold
constants and drop neutral elements so that derivative trees stay small.

Evaluation is vectorized: ``e(z)`` accepts a scalar or any array of complex
points and uses the principal branch for ``log`` and non-integer powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np

from ..errors import DomainError

__all__ = [
    "Expr", "Const", "Var", "Add", "Mul", "Neg", "Recip", "IntPow", "RealPow",
    "Exp", "Log", "Z", "const", "add", "mul", "neg", "recip", "ipow", "rpow",
    "exp", "log", "sub", "div", "as_expr", "evaluate", "differentiate",
    "has_branch",
]


class Expr:
    __slots__ = ()
    precedence = 100

    # operator sugar ---------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n):
        if isinstance(n, (int, np.integer)):
            return ipow(self, int(n))
        return rpow(self, float(n))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            return _eval(self, z, {})

    def diff(self) -> "Expr":
        return differentiate(self)

    def children(self):
        return ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: complex
    precedence = 100

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True, eq=True, repr=True)
class Var(Expr):
    precedence = 100


@dataclass(frozen=True, eq=True, repr=True)
class Add(Expr):
    a: Expr
    b: Expr
    precedence = 10

    def children(self):
        return (self.a, self.b)


@dataclass(frozen=True, eq=True, repr=True)
class Mul(Expr):
    a: Expr
    b: Expr
    precedence = 20

    def children(self):
        return (self.a, self.b)


@dataclass(frozen=True, eq=True, repr=True)
class Neg(Expr):
    a: Expr
    precedence = 15

    def children(self):
        return (self.a,)


@dataclass(frozen=True, eq=True, repr=True)
class Recip(Expr):
    a: Expr
    precedence = 20

    def children(self):
        return (self.a,)


@dataclass(frozen=True, eq=True, repr=True)
class IntPow(Expr):
    a: Expr
    n: int
    precedence = 30

    def children(self):
        return (self.a,)


@dataclass(frozen=True, eq=True, repr=True)
class RealPow(Expr):
    """Principal power ``a**mu = exp(mu * log a)``."""
    a: Expr
    mu: float
    precedence = 100

    def children(self):
        return (self.a,)


@dataclass(frozen=True, eq=True, repr=True)
class Exp(Expr):
    a: Expr
    precedence = 100

    def children(self):
        return (self.a,)


@dataclass(frozen=True, eq=True, repr=True)
class Log(Expr):
    a: Expr
    precedence = 100

    def children(self):
        return (self.a,)


Z = Var()
ZERO = Const(0)
ONE = Const(1)


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Number):
        return Const(complex(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def const(v) -> Const:
    return Const(complex(v))


def _is(e, v):
    return isinstance(e, Const) and e.value == v


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Add(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.a
    return Neg(a)


def sub(a: Expr, b: Expr) -> Expr:
    return add(a, neg(b))


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if _is(a, -1):
        return neg(b)
    if _is(b, -1):
        return neg(a)
    return Mul(a, b)


def recip(a: Expr) -> Expr:
    if isinstance(a, Const) and a.value != 0:
        return Const(1 / a.value)
    if isinstance(a, Recip):
        return a.a
    return Recip(a)


def div(a: Expr, b: Expr) -> Expr:
    return mul(a, recip(b))


def ipow(a: Expr, n: int) -> Expr:
    n = int(n)
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Const) and (a.value != 0 or n > 0):
        return Const(a.value ** n)
    if isinstance(a, IntPow):
        return ipow(a.a, a.n * n)
    return IntPow(a, n)


def rpow(a: Expr, mu: float) -> Expr:
    mu = float(mu)
    if mu.is_integer() and abs(mu) < 2 ** 31:
        return ipow(a, int(mu))
    return RealPow(a, mu)


def exp(a: Expr) -> Expr:
    a = as_expr(a)
    if isinstance(a, Const):
        return Const(np.exp(a.value))
    return Exp(a)


def log(a: Expr) -> Expr:
    a = as_expr(a)
    return Log(a)


def has_branch(e: Expr) -> bool:
    """True if ``e`` contains a principal log or a non-integer power."""
    if isinstance(e, (Log, RealPow)):
        return True
    return any(has_branch(c) for c in e.children())


# evaluation ---------------------------------------------------------------

def _eval(e, z, memo, slit_hits=None):
    key = id(e)
    if key in memo:
        return memo[key]
    if isinstance(e, Const):
        v = np.full(z.shape, e.value, dtype=complex) if z.ndim else e.value
    elif isinstance(e, Var):
        v = z
    elif isinstance(e, Add):
        v = _eval(e.a, z, memo, slit_hits) + _eval(e.b, z, memo, slit_hits)
    elif isinstance(e, Mul):
        v = _eval(e.a, z, memo, slit_hits) * _eval(e.b, z, memo, slit_hits)
    elif isinstance(e, Neg):
        v = -_eval(e.a, z, memo, slit_hits)
    elif isinstance(e, Recip):
        v = 1.0 / _eval(e.a, z, memo, slit_hits)
    elif isinstance(e, IntPow):
        base = _eval(e.a, z, memo, slit_hits)
        v = base ** e.n if e.n > 0 else 1.0 / base ** (-e.n)
    elif isinstance(e, (RealPow, Log)):
        base = _eval(e.a, z, memo, slit_hits)
        if slit_hits is not None:
            b = np.asarray(base)
            slit_hits.append(np.any((b.imag == 0) & (b.real <= 0)))
        if isinstance(e, Log):
            v = np.log(base)
        else:
            v = np.exp(e.mu * np.log(base))
    elif isinstance(e, Exp):
        v = np.exp(_eval(e.a, z, memo, slit_hits))
    else:  # pragma: no cover
        raise TypeError(type(e))
    memo[key] = v
    return v


def evaluate(e: Expr, z):
    """Evaluate with domain checks.

    Raises :class:`DomainError` at the puncture ``z = 0``, where a branch
    node's argument lies on the slit ``(-inf, 0]``, or where the value is not
    finite (a pole).
    """
    za = np.asarray(z, dtype=complex)
    if np.any(za == 0):
        raise DomainError("z = 0 is the puncture, outside the domain")
    hits = []
    with np.errstate(all="ignore"):
        v = _eval(e, za, {}, hits)
    if any(hits):
        raise DomainError(f"branch cut hit while evaluating {e} at {z}")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{e} is not finite at {z} (pole)")
    return v.item() if np.ndim(v) == 0 else v


# differentiation ------------------------------------------------------------

def differentiate(e: Expr) -> Expr:
    memo = {}

    def d(x):
        k = id(x)
        if k in memo:
            return memo[k]
        if isinstance(x, Const):
            r = ZERO
        elif isinstance(x, Var):
            r = ONE
        elif isinstance(x, Add):
            r = add(d(x.a), d(x.b))
        elif isinstance(x, Mul):
            r = add(mul(d(x.a), x.b), mul(x.a, d(x.b)))
        elif isinstance(x, Neg):
            r = neg(d(x.a))
        elif isinstance(x, Recip):
            r = neg(mul(d(x.a), recip(ipow(x.a, 2))))
        elif isinstance(x, IntPow):
            r = mul(mul(Const(x.n), ipow(x.a, x.n - 1)), d(x.a))
        elif isinstance(x, RealPow):
            r = mul(mul(Const(x.mu), rpow(x.a, x.mu - 1)), d(x.a))
        elif isinstance(x, Exp):
            r = mul(x, d(x.a))
        elif isinstance(x, Log):
            r = mul(d(x.a), recip(x.a))
        else:  # pragma: no cover
            raise TypeError(type(x))
        memo[k] = r
        return r

    return d(e)


# printing -------------------------------------------------------------------

def _num(x: float) -> str:
    s = repr(float(x))
    return s


def _const_text(v: complex) -> str:
    re, im = v.real, v.imag
    if im == 0:
        s = _num(re)
        return f"({s})" if re < 0 or s.startswith("-") else s
    if re == 0:
        s = _num(im) + "i"
        return f"({s})" if im < 0 or s.startswith("-") else s
    sign = "-" if (im < 0 or str(im).startswith("-")) else "+"
    return f"({_num(re)}{sign}{_num(abs(im))}i)"


def to_text(e: Expr) -> str:
    """Infix text that :func:`forge.holo.parse` maps back to the same values."""

    def wrap(child, min_prec):
        s = to_text(child)
        if child.precedence < min_prec:
            return f"({s})"
        return s

    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Add):
        if isinstance(e.b, Neg):
            return f"{wrap(e.a, 10)} - {wrap(e.b.a, 11)}"
        return f"{wrap(e.a, 10)} + {wrap(e.b, 11)}"
    if isinstance(e, Mul):
        if isinstance(e.b, Recip):
            return f"{wrap(e.a, 20)} / {wrap(e.b.a, 21)}"
        return f"{wrap(e.a, 20)} * {wrap(e.b, 21)}"
    if isinstance(e, Neg):
        return f"-{wrap(e.a, 16)}"
    if isinstance(e, Recip):
        return f"1 / {wrap(e.a, 21)}"
    if isinstance(e, IntPow):
        n = f"{e.n}" if e.n >= 0 else f"({e.n})"
        return f"{wrap(e.a, 31)}^{n}"
    if isinstance(e, RealPow):
        return f"pow({to_text(e.a)}, {_num(e.mu)})"
    if isinstance(e, Exp):
        return f"exp({to_text(e.a)})"
    if isinstance(e, Log):
        return f"log({to_text(e.a)})"
    raise TypeError(type(e))  # pragma: no cover
