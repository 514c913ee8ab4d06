"""Exact step functions on left-open cells, and piecewise polynomials.

A :class:`StepFn` is the computational backbone of the package: a function
that is constant on finitely many contiguous left-open cells ``(b[i-1], b[i]]``
covering ``(b[0], b[-1]]``, plus a separate value at the base point ``b[0]``.
The representation is left-continuous by construction.  When every breakpoint
and value is a :class:`fractions.Fraction` all operations here are exact;
float-valued instances arise as step approximations of symbolic functions and
make no exactness claims.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction

from .intervals import DomainError, Interval


def _is_exact(xs) -> bool:
    return all(isinstance(x, (Fraction, int)) for x in xs)


class StepFn:
    """Piecewise-constant, left-continuous function on ``[b0, bk]``."""

    __slots__ = ("breaks", "values", "base_value", "exact")

    def __init__(self, breaks, values, base_value=None):
        breaks = list(breaks)
        values = list(values)
        assert len(breaks) == len(values) + 1, "need one more breakpoint than cells"
        assert all(breaks[i] < breaks[i + 1] for i in range(len(values))), \
            "breakpoints must be strictly increasing"
        if base_value is None:
            # D^lc convention: right-continuous at the minimum
            base_value = values[0]
        self.breaks = breaks
        self.values = values
        self.base_value = base_value
        self.exact = _is_exact(breaks) and _is_exact(values) and _is_exact([base_value])

    # -- construction helpers -------------------------------------------------

    @classmethod
    def indicator(cls, lo, hi, domain_lo=None, domain_hi=None, value=Fraction(1)):
        """chi_{(lo, hi]} on [domain_lo, domain_hi] (defaults to [lo, hi])."""
        lo, hi = Fraction(lo), Fraction(hi)
        dlo = Fraction(domain_lo) if domain_lo is not None else lo
        dhi = Fraction(domain_hi) if domain_hi is not None else hi
        breaks, values = [dlo], []
        zero = Fraction(0)
        for b, v in ((lo, zero), (hi, value), (dhi, zero)):
            if b > breaks[-1]:
                breaks.append(b)
                values.append(v)
        return cls(breaks, values, zero)

    @classmethod
    def constant(cls, lo, hi, value):
        return cls([Fraction(lo), Fraction(hi)], [Fraction(value)])

    @property
    def lo(self):
        return self.breaks[0]

    @property
    def hi(self):
        return self.breaks[-1]

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def __repr__(self):
        cells = ", ".join(
            f"({self.breaks[i]},{self.breaks[i+1]}]->{self.values[i]}"
            for i in range(min(len(self.values), 4))
        )
        more = "..." if len(self.values) > 4 else ""
        return f"StepFn[{self.base_value}@{self.lo}; {cells}{more}]"

    # -- evaluation ------------------------------------------------------------

    def __call__(self, t):
        if t < self.lo or t > self.hi:
            raise DomainError(f"{t} outside [{self.lo}, {self.hi}]")
        if t == self.lo:
            return self.base_value
        i = bisect_left(self.breaks, t, lo=1) - 1
        return self.values[i]

    def left_limit(self, t):
        if t <= self.lo or t > self.hi:
            raise DomainError(f"no left limit at {t}")
        i = bisect_left(self.breaks, t, lo=1) - 1
        return self.values[i]

    def right_limit(self, t):
        if t < self.lo or t >= self.hi:
            raise DomainError(f"no right limit at {t}")
        j = bisect_left(self.breaks, t)
        if self.breaks[j] == t:
            # t is a breakpoint; the next cell (b_j, b_{j+1}] carries the limit
            return self.values[j]
        return self.values[j - 1]

    def sample(self, ts):
        return [self(t) for t in ts]

    # -- structural operations --------------------------------------------------

    def merged(self) -> "StepFn":
        """Coalesce adjacent cells carrying equal values."""
        breaks = [self.breaks[0]]
        values = []
        for i, v in enumerate(self.values):
            if values and values[-1] == v:
                breaks[-1] = self.breaks[i + 1]
            else:
                breaks.append(self.breaks[i + 1])
                values.append(v)
        return StepFn(breaks, values, self.base_value)

    def refined(self, extra_breaks) -> "StepFn":
        pts = sorted(set(self.breaks).union(
            b for b in extra_breaks if self.lo < b < self.hi))
        values = [self(pts[i + 1]) for i in range(len(pts) - 1)]
        return StepFn(pts, values, self.base_value)

    def restrict(self, lo, hi) -> "StepFn":
        assert self.lo <= lo < hi <= self.hi
        r = self.refined([lo, hi])
        i0 = r.breaks.index(lo)
        i1 = r.breaks.index(hi)
        base = self(lo) if lo > self.lo else self.base_value
        return StepFn(r.breaks[i0:i1 + 1], r.values[i0:i1], base)

    @staticmethod
    def _common(f: "StepFn", g: "StepFn"):
        if f.lo != g.lo or f.hi != g.hi:
            raise DomainError("step functions live on different intervals")
        pts = sorted(set(f.breaks).union(g.breaks))
        fv = [f(pts[i + 1]) for i in range(len(pts) - 1)]
        gv = [g(pts[i + 1]) for i in range(len(pts) - 1)]
        return pts, fv, gv

    def zip_with(self, other: "StepFn", op) -> "StepFn":
        pts, fv, gv = self._common(self, other)
        return StepFn(pts, [op(a, b) for a, b in zip(fv, gv)],
                      op(self.base_value, other.base_value)).merged()

    def map(self, op) -> "StepFn":
        return StepFn(self.breaks, [op(v) for v in self.values],
                      op(self.base_value)).merged()

    def __add__(self, other):
        if isinstance(other, StepFn):
            return self.zip_with(other, lambda a, b: a + b)
        return self.map(lambda v: v + other)

    def __sub__(self, other):
        if isinstance(other, StepFn):
            return self.zip_with(other, lambda a, b: a - b)
        return self.map(lambda v: v - other)

    def __mul__(self, other):
        if isinstance(other, StepFn):
            return self.zip_with(other, lambda a, b: a * b)
        return self.map(lambda v: v * other)

    def __rmul__(self, c):
        return self.map(lambda v: c * v)

    def __neg__(self):
        return self.map(lambda v: -v)

    def __eq__(self, other):
        if not isinstance(other, StepFn):
            return NotImplemented
        a, b = self.merged(), other.merged()
        return (a.breaks == b.breaks and a.values == b.values
                and a.base_value == b.base_value)

    def __hash__(self):
        return hash((tuple(self.breaks), tuple(self.values), self.base_value))

    # -- lattice ---------------------------------------------------------------

    def join(self, other):
        return self.zip_with(other, max)

    def meet(self, other):
        return self.zip_with(other, min)

    def abs(self):
        return self.map(abs)

    def pos(self):
        zero = Fraction(0) if self.exact else 0.0
        return self.map(lambda v: max(v, zero))

    def neg(self):
        zero = Fraction(0) if self.exact else 0.0
        return self.map(lambda v: max(-v, zero))

    def le(self, other) -> bool:
        pts, fv, gv = self._common(self, other)
        return self.base_value <= other.base_value and all(
            a <= b for a, b in zip(fv, gv))

    # -- jumps / variation -------------------------------------------------------

    def jump_points(self):
        """Breakpoints where the function actually jumps (from the right)."""
        out = []
        prev = self.base_value
        for i, v in enumerate(self.values):
            if v != prev:
                out.append(self.breaks[i])
            prev = v
        return out

    def variation(self):
        """Total variation on [lo, hi]."""
        v = abs(self.values[0] - self.base_value)
        for i in range(1, len(self.values)):
            v += abs(self.values[i] - self.values[i - 1])
        return v

    # -- integration and norms ----------------------------------------------------

    def integral(self, a=None, b=None):
        """Exact integral over [a, b] (defaults: whole domain)."""
        a = self.lo if a is None else a
        b = self.hi if b is None else b
        sign = 1
        if a > b:
            a, b, sign = b, a, -1
        if a < self.lo or b > self.hi:
            raise DomainError("integration limits outside domain")
        total = 0
        for i, v in enumerate(self.values):
            l, r = self.breaks[i], self.breaks[i + 1]
            lo, hi = max(l, a), min(r, b)
            if hi > lo:
                total += v * (hi - lo)
        return sign * total

    def cumulative(self):
        """Exact running integral x -> int_lo^x, as a PiecewisePoly."""
        coeffs = []
        acc = Fraction(0) if self.exact else 0.0
        for i, v in enumerate(self.values):
            # on (b_i, b_{i+1}]: acc + v*(x - b_i)
            coeffs.append((acc - v * self.breaks[i], v))
            acc = acc + v * (self.breaks[i + 1] - self.breaks[i])
        return PiecewisePoly(list(self.breaks), coeffs,
                             base_value=Fraction(0) if self.exact else 0.0)

    def sup_norm(self):
        return max(abs(self.base_value), max(abs(v) for v in self.values))

    def l1_norm(self, a=None, b=None):
        return self.abs().integral(a, b)

    def alexiewicz_norm(self, a=None, b=None):
        """sup over subintervals of |integral|, via cumulative extrema."""
        f = self if a is None and b is None else self.restrict(
            a if a is not None else self.lo, b if b is not None else self.hi)
        acc = Fraction(0) if f.exact else 0.0
        mn = mx = acc
        for i, v in enumerate(f.values):
            acc = acc + v * (f.breaks[i + 1] - f.breaks[i])
            mn = min(mn, acc)
            mx = max(mx, acc)
        return mx - mn

    def alexiewicz_extrema(self):
        """Breakpoints attaining the cumulative max and min."""
        acc = Fraction(0) if self.exact else 0.0
        mn = mx = acc
        arg_mn = arg_mx = self.breaks[0]
        for i, v in enumerate(self.values):
            acc = acc + v * (self.breaks[i + 1] - self.breaks[i])
            if acc > mx:
                mx, arg_mx = acc, self.breaks[i + 1]
            if acc < mn:
                mn, arg_mn = acc, self.breaks[i + 1]
        return arg_mn, arg_mx

    def as_poly(self) -> "PiecewisePoly":
        """Degree-0 piecewise polynomial view."""
        return PiecewisePoly(list(self.breaks), [(v,) for v in self.values],
                             self.base_value)

    # -- serialization --------------------------------------------------------------

    def to_cells(self):
        return [(self.breaks[i], self.breaks[i + 1], self.values[i])
                for i in range(len(self.values))]

    @classmethod
    def from_cells(cls, cells, base_value):
        breaks = [cells[0][0]]
        values = []
        for x, y, v in cells:
            assert x == breaks[-1], "cells must be contiguous"
            breaks.append(y)
            values.append(v)
        return cls(breaks, values, base_value)


class PiecewisePoly:
    """Left-continuous piecewise polynomial on left-open cells.

    ``coeffs[i]`` holds the coefficient tuple (ascending powers) in force on
    ``(breaks[i], breaks[i+1]]``.  Primitives of step data (piecewise linear)
    and their iterated primitives live here.
    """

    __slots__ = ("breaks", "coeffs", "base_value", "exact")

    def __init__(self, breaks, coeffs, base_value=None):
        assert len(breaks) == len(coeffs) + 1
        self.breaks = list(breaks)
        self.coeffs = [tuple(c) for c in coeffs]
        if base_value is None:
            base_value = self._horner(self.coeffs[0], self.breaks[0])
        self.base_value = base_value
        self.exact = (_is_exact(breaks) and _is_exact([base_value])
                      and all(_is_exact(c) for c in self.coeffs))

    @staticmethod
    def _horner(c, x):
        acc = 0
        for a in reversed(c):
            acc = acc * x + a
        return acc

    @property
    def lo(self):
        return self.breaks[0]

    @property
    def hi(self):
        return self.breaks[-1]

    def __call__(self, t):
        if t < self.lo or t > self.hi:
            raise DomainError(f"{t} outside [{self.lo}, {self.hi}]")
        if t == self.lo:
            return self.base_value
        i = bisect_left(self.breaks, t, lo=1) - 1
        return self._horner(self.coeffs[i], t)

    def left_limit(self, t):
        if t <= self.lo:
            raise DomainError(f"no left limit at {t}")
        i = bisect_left(self.breaks, t, lo=1) - 1
        return self._horner(self.coeffs[i], t)

    def right_limit(self, t):
        if t >= self.hi:
            raise DomainError(f"no right limit at {t}")
        j = bisect_left(self.breaks, t)
        if j < len(self.breaks) and self.breaks[j] == t:
            return self._horner(self.coeffs[j], t) if j < len(self.coeffs) \
                else self._horner(self.coeffs[-1], t)
        return self._horner(self.coeffs[j - 1], t)

    def refined(self, extra):
        pts = sorted(set(self.breaks).union(
            b for b in extra if self.lo < b < self.hi))
        coeffs = []
        for i in range(len(pts) - 1):
            j = bisect_left(self.breaks, pts[i + 1], lo=1) - 1
            coeffs.append(self.coeffs[j])
        return PiecewisePoly(pts, coeffs, self.base_value)

    def sample_array(self, ts):
        """Vectorised left-branch evaluation (float)."""
        import numpy as np

        ts = np.asarray(ts, dtype=float)
        breaks = np.array([float(b) for b in self.breaks])
        idx = np.clip(np.searchsorted(breaks, ts, side="left") - 1,
                      0, len(self.coeffs) - 1)
        out = np.zeros_like(ts)
        deg = max(len(c) for c in self.coeffs)
        cmat = np.array([[float(c[k]) if k < len(c) else 0.0
                          for k in range(deg)] for c in self.coeffs])
        acc = np.zeros_like(ts)
        for k in range(deg - 1, -1, -1):
            acc = acc * ts + cmat[idx, k]
        out = acc
        out[ts <= breaks[0]] = float(self.base_value)
        return out

    def zip_with(self, other, op):
        if self.lo != other.lo or self.hi != other.hi:
            raise DomainError("piecewise polynomials on different intervals")
        pts = sorted(set(self.breaks).union(other.breaks))
        a = self.refined(pts)
        b = other.refined(pts)
        coeffs = [op(ca, cb) for ca, cb in zip(a.coeffs, b.coeffs)]
        return PiecewisePoly(pts, coeffs, op_scalar(op, self.base_value, other.base_value))

    def __add__(self, other):
        if isinstance(other, PiecewisePoly):
            return self.zip_with(other, _poly_add)
        return PiecewisePoly(self.breaks,
                             [_poly_add(c, (other,)) for c in self.coeffs],
                             self.base_value + other)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, k):
        return PiecewisePoly(self.breaks, [tuple(k * a for a in c) for c in self.coeffs],
                             k * self.base_value)

    def __mul__(self, other):
        if isinstance(other, PiecewisePoly):
            return self.zip_with(other, _poly_mul)
        return self.__rmul__(other)

    def integral(self, a=None, b=None):
        a = self.lo if a is None else a
        b = self.hi if b is None else b
        sign = 1
        if a > b:
            a, b, sign = b, a, -1
        total = 0
        for i, c in enumerate(self.coeffs):
            l, r = max(self.breaks[i], a), min(self.breaks[i + 1], b)
            if r > l:
                anti = _poly_antiderivative(c)
                total += self._horner(anti, r) - self._horner(anti, l)
        return sign * total

    def cumulative(self):
        coeffs = []
        acc = Fraction(0) if self.exact else 0.0
        for i, c in enumerate(self.coeffs):
            anti = _poly_antiderivative(c)
            off = acc - self._horner(anti, self.breaks[i])
            coeffs.append(_poly_add(anti, (off,)))
            acc = acc + self._horner(anti, self.breaks[i + 1]) - self._horner(anti, self.breaks[i])
        return PiecewisePoly(list(self.breaks), coeffs,
                             base_value=Fraction(0) if self.exact else 0.0)

    def variation(self):
        """Exact total variation for cells of degree <= 2."""
        total = 0
        prev = self.base_value
        for i, c in enumerate(self.coeffs):
            l, r = self.breaks[i], self.breaks[i + 1]
            jump_in = self._horner(c, l) - prev  # discontinuity entering the cell
            total += abs(jump_in)
            if len(c) <= 1:
                pass
            elif len(c) == 2:
                total += abs(c[1]) * (r - l)
            elif len(c) == 3:
                vertex = -c[1] / (2 * c[2]) if c[2] != 0 else None
                pts = [l] + ([vertex] if vertex is not None and l < vertex < r else []) + [r]
                for p, q in zip(pts, pts[1:]):
                    total += abs(self._horner(c, q) - self._horner(c, p))
            else:
                raise NotImplementedError("variation only for degree <= 2 cells")
            prev = self._horner(c, r)
        return total


def op_scalar(op, a, b):
    if op is _poly_add:
        return a + b
    if op is _poly_mul:
        return a * b
    raise AssertionError("unknown polynomial op")


def _poly_add(c1, c2):
    n = max(len(c1), len(c2))
    return tuple((c1[i] if i < len(c1) else 0) + (c2[i] if i < len(c2) else 0)
                 for i in range(n))


def _poly_mul(c1, c2):
    out = [0] * (len(c1) + len(c2) - 1)
    for i, a in enumerate(c1):
        for j, b in enumerate(c2):
            out[i + j] += a * b
    return tuple(out)


def _poly_antiderivative(c):
    return (0,) + tuple(Fraction(a, k + 1) if isinstance(a, (int, Fraction))
                        else a / (k + 1) for k, a in enumerate(c))


def random_stepfn(rng, lo=0, hi=1, max_cells=8, value_range=6, denom_pool=(2, 3, 4, 5, 7, 8)) -> StepFn:
    """Seeded random exact step function on [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    k = int(rng.integers(1, max_cells + 1))
    cuts = set()
    while len(cuts) < k - 1:
        den = int(rng.choice(denom_pool)) * 4
        num = int(rng.integers(1, den))
        c = lo + (hi - lo) * Fraction(num, den)
        if lo < c < hi:
            cuts.add(c)
    breaks = [lo] + sorted(cuts) + [hi]
    values = [Fraction(int(rng.integers(-value_range, value_range + 1)),
                       int(rng.choice(denom_pool)))
              for _ in range(len(breaks) - 1)]
    return StepFn(breaks, values)
