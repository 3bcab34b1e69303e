"""Certified extrema of univariate expressions on a closed interval.

Expressions are small trees (:class:`Expr`) that can be evaluated three
ways: on numpy arrays (for brute-force oracles), on a point, and on an
:class:`~hlcert.interval.Interval` together with an interval enclosure of
the derivative.  The branch-and-bound search uses the intersection of the
natural enclosure and the mean-value form ``f(c) + f'(X)(X - c)``, so box
excess shrinks quadratically and a handful of levels suffice near a smooth
maximum.

The returned bound is one-sided: ``certified_max(...).certified_bound`` is
an upper bound of the supremum, ``certified_min(...).certified_bound`` a
lower bound of the infimum.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .interval import PI, DomainError, Interval
from .trigpoly import UPoly

__all__ = [
    "Expr",
    "BoundResult",
    "BudgetExhausted",
    "DomainError",
    "var",
    "const",
    "poly",
    "sqrt",
    "exp",
    "log",
    "fabs",
    "certified_max",
    "certified_min",
    "comparison_constant",
]

# enclosure plus derivative enclosure; None marks an unbounded derivative
Enclosure = tuple[Interval, "Interval | None"]


class BudgetExhausted(RuntimeError):
    """Raised when branch-and-bound runs out of evaluations before reaching tol."""

    def __init__(self, message: str, best_bound: float, best_witness: float):
        super().__init__(message)
        self.best_bound = best_bound
        self.best_witness = best_witness


def _wrap(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(v)


class Expr:
    """Base class of the expression tree in one variable."""

    def enclose(self, X: Interval) -> Enclosure:
        raise NotImplementedError

    def __call__(self, x):
        raise NotImplementedError

    def __add__(self, o):
        return Add(self, _wrap(o))

    def __radd__(self, o):
        return Add(_wrap(o), self)

    def __sub__(self, o):
        return Sub(self, _wrap(o))

    def __rsub__(self, o):
        return Sub(_wrap(o), self)

    def __mul__(self, o):
        return Mul(self, _wrap(o))

    def __rmul__(self, o):
        return Mul(_wrap(o), self)

    def __truediv__(self, o):
        return Div(self, _wrap(o))

    def __rtruediv__(self, o):
        return Div(_wrap(o), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n: int):
        return Pow(self, n)


class Var(Expr):
    def enclose(self, X):
        return X, Interval(1.0)

    def __call__(self, x):
        return np.asarray(x, dtype=float)

    def __repr__(self):
        return "u"


class Const(Expr):
    def __init__(self, value):
        if isinstance(value, Interval):
            self.iv = value
        elif isinstance(value, (Fraction, int)):
            self.iv = Interval.from_fraction(value)
        else:
            self.iv = Interval(float(value))
        self.value = self.iv.mid

    def enclose(self, X):
        return self.iv, Interval(0.0)

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.value)

    def __repr__(self):
        return repr(self.value)


class Poly(Expr):
    """Polynomial leaf ``scale * sum c_i u**i`` with exact coefficients."""

    def __init__(self, coeffs: Sequence, scale: Interval | None = None):
        self.coeffs = [Fraction(c) for c in coeffs] or [Fraction(0)]
        self.scale = scale
        self._c = [Interval.from_fraction(c) for c in self.coeffs]
        self._dc = [Interval.from_fraction(i * c) for i, c in enumerate(self.coeffs)][1:]

    @staticmethod
    def _horner(cs, X):
        acc = Interval(0.0)
        for c in reversed(cs):
            acc = acc * X + c
        return acc

    def _taylor(self, X):
        """Centered form: shift the coefficients to the box midpoint, then sum over R = X - c."""
        C = Interval(X.mid)
        a = list(self._c)
        n = len(a)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] = a[j] + C * a[j + 1]
        R = Interval.hull((Interval(X.lo) - C).lo, (Interval(X.hi) - C).hi)
        v = a[0]
        d = Interval(0.0)
        for i in range(1, n):
            v = v + a[i] * R**i
            d = d + a[i] * i * R ** (i - 1)
        return v, d

    def enclose(self, X):
        v = self._horner(self._c, X)
        d = self._horner(self._dc, X) if self._dc else Interval(0.0)
        if len(self._c) > 3 and X.lo < X.hi:
            tv, td = self._taylor(X)
            v, d = v.intersect(tv), d.intersect(td)
        if self.scale is not None:
            v, d = v * self.scale, d * self.scale
        return v, d

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc * (self.scale.mid if self.scale is not None else 1.0)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"


class _Unary(Expr):
    def __init__(self, a: Expr):
        self.a = a


class _Binary(Expr):
    def __init__(self, a: Expr, b: Expr):
        self.a, self.b = a, b


class Add(_Binary):
    def enclose(self, X):
        (u, du), (v, dv) = self.a.enclose(X), self.b.enclose(X)
        return u + v, None if du is None or dv is None else du + dv

    def __call__(self, x):
        return self.a(x) + self.b(x)


class Sub(_Binary):
    def enclose(self, X):
        (u, du), (v, dv) = self.a.enclose(X), self.b.enclose(X)
        return u - v, None if du is None or dv is None else du - dv

    def __call__(self, x):
        return self.a(x) - self.b(x)


class Mul(_Binary):
    def enclose(self, X):
        (u, du), (v, dv) = self.a.enclose(X), self.b.enclose(X)
        d = None if du is None or dv is None else du * v + u * dv
        return u * v, d

    def __call__(self, x):
        return self.a(x) * self.b(x)


class Div(_Binary):
    def enclose(self, X):
        (u, du), (v, dv) = self.a.enclose(X), self.b.enclose(X)
        q = u / v
        d = None if du is None or dv is None else (du * v - u * dv) / (v**2)
        return q, d

    def __call__(self, x):
        return self.a(x) / self.b(x)


class Neg(_Unary):
    def enclose(self, X):
        u, du = self.a.enclose(X)
        return -u, None if du is None else -du

    def __call__(self, x):
        return -self.a(x)


class Pow(_Unary):
    def __init__(self, a: Expr, n: int):
        super().__init__(a)
        if not isinstance(n, int) or n < 0:
            raise ValueError("integer power must be a non-negative int")
        self.n = n

    def enclose(self, X):
        u, du = self.a.enclose(X)
        if self.n == 0:
            return Interval(1.0), Interval(0.0)
        d = None if du is None else (u ** (self.n - 1)) * self.n * du
        return u**self.n, d

    def __call__(self, x):
        return self.a(x) ** self.n


class Abs(_Unary):
    def enclose(self, X):
        u, du = self.a.enclose(X)
        if du is None:
            return u.abs(), None
        if u.lo > 0:
            return u, du
        if u.hi < 0:
            return -u, -du
        m = max(abs(du.lo), abs(du.hi))
        return u.abs(), Interval(-m, m)

    def __call__(self, x):
        return np.abs(self.a(x))


class Sqrt(_Unary):
    def enclose(self, X):
        u, du = self.a.enclose(X)
        r = u.sqrt()
        if du is None or r.lo <= 0.0:
            return r, None
        return r, du / (r * 2.0)

    def __call__(self, x):
        return np.sqrt(self.a(x))


class Exp(_Unary):
    def enclose(self, X):
        u, du = self.a.enclose(X)
        r = u.exp()
        return r, None if du is None else r * du

    def __call__(self, x):
        return np.exp(self.a(x))


class Log(_Unary):
    def enclose(self, X):
        u, du = self.a.enclose(X)
        r = u.log()
        return r, None if du is None else du / u

    def __call__(self, x):
        return np.log(self.a(x))


def var() -> Expr:
    return Var()


def const(value) -> Expr:
    return Const(value)


def poly(p: UPoly | Sequence, pi_power: int = 0) -> Expr:
    """Polynomial leaf from a :class:`UPoly` (keeps its pi factor) or raw coefficients."""
    if isinstance(p, UPoly):
        coeffs, pi_power = p.coeffs, p.pi_power
    else:
        coeffs = p
    return Poly(coeffs, PI**pi_power if pi_power else None)


def sqrt(e) -> Expr:
    return Sqrt(_wrap(e))


def exp(e) -> Expr:
    return Exp(_wrap(e))


def log(e) -> Expr:
    return Log(_wrap(e))


def fabs(e) -> Expr:
    return Abs(_wrap(e))


@dataclass(frozen=True)
class BoundResult:
    certified_bound: float
    witness_point: float
    witness_value: float
    subdivisions: int
    converged: bool = True


def _enclosure(e: Expr, lo: float, hi: float) -> Interval:
    X = Interval(lo, hi)
    v, dv = e.enclose(X)
    if dv is not None and lo < hi:
        c = X.mid
        fc, _ = e.enclose(Interval(c))
        v = v.intersect(fc + dv * (X - c))
    return v


def _point_lower(e: Expr, x: float) -> float | None:
    try:
        v, _ = e.enclose(Interval(x))
    except (DomainError, ZeroDivisionError, OverflowError, ValueError):
        return None
    return v.lo


def certified_max(
    e: Expr,
    interval: tuple[float, float],
    tol: float | None = None,
    *,
    rtol: float = 1e-6,
    atol: float = 1e-9,
    max_depth: int = 60,
    max_evals: int = 400_000,
) -> BoundResult:
    """Upper bound for ``sup e`` on ``[a, b]`` by interval branch and bound.

    ``tol`` is an absolute gap between bound and witness; when omitted the
    gap is ``rtol`` times the magnitude of the best witness, but never below
    ``atol`` (so extrema at zero terminate).  Boxes on which
    the expression cannot be enclosed (a denominator or square-root argument
    not yet separated from zero) are split; if that is still impossible at
    ``max_depth`` the query is rejected with :class:`DomainError`.
    """
    a, b = map(float, interval)
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")

    best_val, best_x = -math.inf, a

    def consider(x: float) -> None:
        nonlocal best_val, best_x
        v = _point_lower(e, x)
        if v is None:
            return
        if v > best_val or (v == best_val and x < best_x):
            best_val, best_x = v, x

    heap: list[tuple[float, float, float, int]] = []
    evals = 0

    def push(lo: float, hi: float, depth: int, parent_hi: float) -> None:
        nonlocal evals
        evals += 1
        try:
            upper = min(_enclosure(e, lo, hi).hi, parent_hi)
        except (DomainError, ZeroDivisionError, OverflowError) as exc:
            if depth >= max_depth:
                raise DomainError(f"cannot enclose expression on [{lo!r}, {hi!r}]: {exc}") from exc
            upper = math.inf
        heapq.heappush(heap, (-upper, lo, hi, depth))
        consider(0.5 * lo + 0.5 * hi)

    consider(a)
    consider(b)
    push(a, b, 0, math.inf)
    frozen = -math.inf
    converged = True

    while True:
        top = -heap[0][0] if heap else -math.inf
        bound = max(top, frozen)
        gap = tol if tol is not None else max(rtol * abs(best_val), atol)
        if bound - best_val <= gap:
            break
        if frozen >= top:
            # best remaining box is already at the depth cap
            converged = False
            break
        neg_upper, lo, hi, depth = heapq.heappop(heap)
        mid = 0.5 * lo + 0.5 * hi
        if depth >= max_depth or not lo < mid < hi:
            if math.isinf(neg_upper):
                raise DomainError(f"cannot enclose expression on [{lo!r}, {hi!r}]")
            frozen = max(frozen, -neg_upper)
            continue
        if evals >= max_evals:
            raise BudgetExhausted(
                f"branch and bound budget of {max_evals} evaluations exhausted",
                bound,
                best_val,
            )
        push(lo, mid, depth + 1, -neg_upper)
        push(mid, hi, depth + 1, -neg_upper)

    return BoundResult(
        certified_bound=bound,
        witness_point=best_x,
        witness_value=best_val,
        subdivisions=evals,
        converged=converged,
    )


def certified_min(e: Expr, interval: tuple[float, float], tol: float | None = None, **kw) -> BoundResult:
    """Lower bound for ``inf e`` on ``[a, b]``; exactly the negated max of ``-e``."""
    r = certified_max(Neg(e), interval, tol, **kw)
    return BoundResult(
        certified_bound=-r.certified_bound,
        witness_point=r.witness_point,
        witness_value=-r.witness_value,
        subdivisions=r.subdivisions,
        converged=r.converged,
    )


def comparison_constant(
    numerator: Expr,
    denominator: Expr,
    interval: tuple[float, float],
    tol: float | None = None,
    *,
    granularity: float | None = None,
    **kw,
) -> float:
    """Certified C with ``numerator <= C * denominator`` on the interval.

    The denominator must be provably positive.  With ``granularity`` the
    constant is rounded up to a multiple of it (``granularity=100`` turns a
    certified 1285.3 into 1300).
    """
    low = certified_min(denominator, interval, **kw).certified_bound
    if not low > 0:
        raise DomainError(f"denominator not provably positive on {interval} (lower bound {low})")
    c = certified_max(numerator / denominator, interval, tol, **kw).certified_bound
    if granularity:
        c = math.ceil(c / granularity) * granularity
    return c
