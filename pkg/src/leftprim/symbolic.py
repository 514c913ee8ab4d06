"""Symbolic left-regulated functions with branch-aware evaluation.

Expression nodes here cover the concrete function families the package
ships: truncated oscillatory series built from ``frac(n t)`` compositions,
floor/Heaviside steps, monomials, and the ``t * trig(1/t)`` shapes.  Every
node knows

* its value with one-sided branch selection (``side`` -1/0/+1 for left
  limit / value / right limit); by convention the value at a declared jump
  is the left-limit branch, which makes every family left-continuous by
  construction,
* its exact jump set (rationals, as ``Fraction``) on a query interval,
* certified oscillation and sup bounds on cells that do not straddle a
  declared cut, which drive the oscillation-partition refinement,
* a singularity class used by the integrability classifier.

Float evaluation snaps to the left branch within ``SNAP`` of a jump so that
rational jump locations survive the round trip through binary floats.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

SNAP = 1e-9

# singularity classes, ordered by severity
BOUNDED, ABS, COND, DIV = 0, 1, 2, 3
SING_NAMES = {BOUNDED: "bounded", ABS: "abs-integrable",
              COND: "conditional", DIV: "divergent"}


class SecondKindLimit(ArithmeticError):
    """The requested one-sided limit does not exist."""


def _rationals_in(lo, hi, den):
    """Multiples of 1/den in [lo, hi]."""
    lo_n = math.ceil(Fraction(lo) * den) if not isinstance(lo, float) \
        else math.ceil(lo * den - 1e-12)
    hi_n = math.floor(Fraction(hi) * den) if not isinstance(hi, float) \
        else math.floor(hi * den + 1e-12)
    return [Fraction(k, den) for k in range(lo_n, hi_n + 1)]


def _frac_parts(t, n, side):
    """(phi, at_jump) for phi = n*t - floor(n*t) with left-branch convention."""
    if isinstance(t, (Fraction, int)):
        z = Fraction(t) * n
        fl = math.floor(z)
        phi = z - fl
        if phi == 0:
            return (1.0, True) if side <= 0 else (0.0, True)
        return (float(phi), False)
    z = float(t) * n
    phi = z - math.floor(z)
    if phi < SNAP * n or phi > 1 - SNAP * n:
        # within float noise of a jump: left branch unless a right limit is asked
        return ((1.0, True) if side <= 0 else (0.0, True))
    return (phi, False)


def _frac_array(ts, n):
    """Vectorised phi with the left-branch snap."""
    z = ts * n
    phi = z - np.floor(z)
    snap = SNAP * n
    phi = np.where(phi < snap, 1.0, phi)
    phi = np.where(phi > 1 - snap, 1.0, phi)
    return phi


class Expr:
    """Base node; subclasses override the protocol methods."""

    def ev(self, t, side=0) -> float:
        raise NotImplementedError

    def ev_array(self, ts: np.ndarray) -> np.ndarray:
        return np.array([self.ev(float(t), 0) for t in ts])

    def jumps(self, lo, hi):
        """Exact discontinuity points in [lo, hi]."""
        return []

    def bound_cuts(self, lo, hi):
        """Points osc/sup bound cells must not straddle (defaults to jumps)."""
        return self.jumps(lo, hi)

    def osc_bound(self, u, v) -> float:
        """Certified oscillation bound on (u, v]; requires no interior cut."""
        return math.inf

    def osc_bound_array(self, us, vs) -> np.ndarray:
        return np.array([self.osc_bound(u, v) for u, v in zip(us, vs)])

    def sup_bound(self, u, v) -> float:
        return math.inf

    def sing_class(self) -> int:
        return BOUNDED

    # sugar
    def __add__(self, other):
        other = other if isinstance(other, Expr) else Const(other)
        return Sum([self, other])

    def __mul__(self, other):
        if isinstance(other, Expr):
            return Product(self, other)
        return Scale(other, self)

    __rmul__ = __mul__

    def __neg__(self):
        return Scale(-1, self)

    def __sub__(self, other):
        other = other if isinstance(other, Expr) else Const(other)
        return Sum([self, Scale(-1, other)])


class Const(Expr):
    def __init__(self, c):
        self.c = float(c)

    def ev(self, t, side=0):
        return self.c

    def ev_array(self, ts):
        return np.full_like(np.asarray(ts, dtype=float), self.c)

    def osc_bound(self, u, v):
        return 0.0

    def osc_bound_array(self, us, vs):
        return np.zeros_like(np.asarray(us, dtype=float))

    def sup_bound(self, u, v):
        return abs(self.c)


class Monomial(Expr):
    """t**k for integer k >= 0."""

    def __init__(self, k=1):
        assert k >= 0
        self.k = k

    def ev(self, t, side=0):
        return float(t) ** self.k

    def ev_array(self, ts):
        return np.asarray(ts, dtype=float) ** self.k

    def osc_bound(self, u, v):
        return abs(float(v) ** self.k - float(u) ** self.k)

    def osc_bound_array(self, us, vs):
        return np.abs(vs ** self.k - us ** self.k)

    def sup_bound(self, u, v):
        return max(abs(float(u)) ** self.k, abs(float(v)) ** self.k)


class Heaviside(Expr):
    """H1: 0 for t <= 0, 1 for t > 0 (left continuous)."""

    def ev(self, t, side=0):
        t = float(t)
        if abs(t) < SNAP:
            return 1.0 if side > 0 else 0.0
        return 1.0 if t > 0 else 0.0

    def ev_array(self, ts):
        return (np.asarray(ts, dtype=float) > SNAP).astype(float)

    def jumps(self, lo, hi):
        return [Fraction(0)] if lo <= 0 <= hi else []

    def osc_bound(self, u, v):
        return 0.0 if (u >= 0 or v <= 0) else 1.0

    def osc_bound_array(self, us, vs):
        return np.where((us >= 0) | (vs <= 0), 0.0, 1.0)

    def sup_bound(self, u, v):
        return 1.0


class FloorRight(Expr):
    """[n t] with [z] = m for m <= z < m+1; value at a jump is the left branch."""

    def __init__(self, n=1):
        self.n = n

    def ev(self, t, side=0):
        if isinstance(t, (Fraction, int)):
            z = Fraction(t) * self.n
            fl = math.floor(z)
            if z == fl and side <= 0:
                return float(fl - 1)
            return float(fl)
        z = float(t) * self.n
        fl = math.floor(z + SNAP * self.n)
        if abs(z - fl) < SNAP * self.n and side <= 0:
            return float(fl - 1)
        return float(math.floor(z))

    def ev_array(self, ts):
        z = np.asarray(ts, dtype=float) * self.n
        fl = np.floor(z + SNAP * self.n)
        at_jump = np.abs(z - fl) < SNAP * self.n
        return np.where(at_jump, fl - 1, np.floor(z))

    def jumps(self, lo, hi):
        return _rationals_in(lo, hi, self.n)

    def osc_bound(self, u, v):
        # constant between consecutive jumps
        return 0.0

    def osc_bound_array(self, us, vs):
        return np.zeros_like(np.asarray(us, dtype=float))

    def sup_bound(self, u, v):
        return max(abs(self.ev(float(u), 1)), abs(self.ev(float(v), -1))) + 1


class _FracCell:
    """Helper: phi-range of frac(n t) over a cut-free cell (u, v]."""

    @staticmethod
    def range(n, u, v):
        u, v = float(u), float(v)
        zv = n * v
        fl = math.floor(zv + SNAP * n)
        if abs(zv - fl) < SNAP * n:
            phi_hi, base = 1.0, fl - 1
        else:
            base = math.floor(zv)
            phi_hi = zv - base
        phi_lo = n * u - base
        return max(phi_lo, 0.0), phi_hi

    @staticmethod
    def range_array(n, us, vs):
        zv = n * vs
        fl = np.floor(zv + SNAP * n)
        at = np.abs(zv - fl) < SNAP * n
        base = np.where(at, fl - 1, np.floor(zv))
        phi_hi = np.where(at, 1.0, zv - np.floor(zv))
        phi_lo = np.maximum(n * us - base, 0.0)
        return phi_lo, phi_hi


class SeriesTerm(Expr):
    """Common machinery for terms built on phi = frac(n t)."""

    def __init__(self, n):
        self.n = n

    def g(self, phi):
        raise NotImplementedError

    def g_array(self, phi):
        raise NotImplementedError

    def g_sup(self, phi_lo, phi_hi):
        raise NotImplementedError

    def g_lip(self, phi_lo, phi_hi):
        raise NotImplementedError

    continuous = False

    def ev(self, t, side=0):
        phi, at_jump = _frac_parts(t, self.n, side)
        if phi == 0.0:
            if self.continuous:
                return self.g(0.0)
            raise SecondKindLimit(f"no right limit at jump of order-{self.n} term")
        return self.g(phi)

    def ev_array(self, ts):
        return self.g_array(_frac_array(np.asarray(ts, dtype=float), self.n))

    def jumps(self, lo, hi):
        return [] if self.continuous else _rationals_in(lo, hi, self.n)

    def bound_cuts(self, lo, hi):
        return _rationals_in(lo, hi, self.n)

    def osc_bound(self, u, v):
        phi_lo, phi_hi = _FracCell.range(self.n, u, v)
        sup = self.g_sup(phi_lo, phi_hi)
        if phi_lo <= 0:
            return 2 * sup
        return min(2 * sup, self.g_lip(phi_lo, phi_hi) * (phi_hi - phi_lo))

    def osc_bound_array(self, us, vs):
        phi_lo, phi_hi = _FracCell.range_array(self.n, us, vs)
        touch = phi_lo <= 0
        safe_lo = np.where(touch, 0.5, phi_lo)
        with np.errstate(divide="ignore", invalid="ignore"):
            sup = self.g_sup_array(safe_lo, phi_hi)
            lip = self.g_lip_array(safe_lo, phi_hi)
            sup_touch = self.g_sup_array(np.zeros_like(phi_lo), phi_hi)
        out = np.minimum(2 * sup, lip * (phi_hi - phi_lo))
        return np.where(touch, 2 * sup_touch, out)

    def g_sup_array(self, phi_lo, phi_hi):
        return np.array([self.g_sup(a, b) for a, b in zip(phi_lo, phi_hi)])

    def g_lip_array(self, phi_lo, phi_hi):
        return np.array([self.g_lip(a, b) for a, b in zip(phi_lo, phi_hi)])

    def sup_bound(self, u, v):
        phi_lo, phi_hi = _FracCell.range(self.n, u, v)
        return self.g_sup(phi_lo, phi_hi)


class OscCosTerm(SeriesTerm):
    """(1/n^2) (2 phi cos(pi/(2 phi)) + (pi/2) sin(pi/(2 phi))).

    Bounded, with a discontinuity of the second kind (from the right) at
    every jump of phi.
    """

    def g(self, phi):
        a = math.pi / (2 * phi)
        return (2 * phi * math.cos(a) + (math.pi / 2) * math.sin(a)) / self.n ** 2

    def g_array(self, phi):
        a = math.pi / (2 * phi)
        return (2 * phi * np.cos(a) + (math.pi / 2) * np.sin(a)) / self.n ** 2

    def g_sup(self, phi_lo, phi_hi):
        return (2 * phi_hi + math.pi / 2) / self.n ** 2

    def g_lip(self, phi_lo, phi_hi):
        return (2 + math.pi / phi_lo + math.pi ** 2 / (4 * phi_lo ** 2)) / self.n ** 2

    def g_sup_array(self, phi_lo, phi_hi):
        return (2 * phi_hi + math.pi / 2) / self.n ** 2

    def g_lip_array(self, phi_lo, phi_hi):
        return (2 + math.pi / phi_lo + math.pi ** 2 / (4 * phi_lo ** 2)) / self.n ** 2


class SmoothSquareCosTerm(SeriesTerm):
    """(phi^2 / n^3) cos(pi/(2 phi)); continuous (both one-sided limits 0)."""

    continuous = True

    def g(self, phi):
        if phi == 0.0:
            return 0.0
        return (phi ** 2) * math.cos(math.pi / (2 * phi)) / self.n ** 3

    def g_array(self, phi):
        return (phi ** 2) * np.cos(math.pi / (2 * phi)) / self.n ** 3

    def g_sup(self, phi_lo, phi_hi):
        return phi_hi ** 2 / self.n ** 3

    def g_lip(self, phi_lo, phi_hi):
        # |d/dphi| = |2 phi cos + (pi/2) sin| <= 2 + pi/2 globally
        return (2 + math.pi / 2) / self.n ** 3

    def osc_bound(self, u, v):
        phi_lo, phi_hi = _FracCell.range(self.n, u, v)
        return min(2 * self.g_sup(phi_lo, phi_hi),
                   self.g_lip(phi_lo, phi_hi) * (phi_hi - phi_lo))

    def osc_bound_array(self, us, vs):
        phi_lo, phi_hi = _FracCell.range_array(self.n, us, vs)
        return np.minimum(2 * phi_hi ** 2 / self.n ** 3,
                          (2 + math.pi / 2) / self.n ** 3 * (phi_hi - phi_lo))


class HardOscTerm(SeriesTerm):
    """cos(pi/(2 phi)) + (pi/(2 phi)) sin(pi/(2 phi)): unbounded, conditional."""

    def g(self, phi):
        a = math.pi / (2 * phi)
        return math.cos(a) + a * math.sin(a)

    def g_array(self, phi):
        a = math.pi / (2 * phi)
        return np.cos(a) + a * np.sin(a)

    def g_sup(self, phi_lo, phi_hi):
        if phi_lo <= 0:
            return math.inf
        return 1 + math.pi / (2 * phi_lo)

    def g_lip(self, phi_lo, phi_hi):
        return math.pi / phi_lo ** 2 + math.pi ** 2 / (4 * phi_lo ** 3)

    def g_sup_array(self, phi_lo, phi_hi):
        return np.where(phi_lo <= 0, np.inf, 1 + math.pi / (2 * np.maximum(phi_lo, 1e-300)))

    def g_lip_array(self, phi_lo, phi_hi):
        p = np.maximum(phi_lo, 1e-300)
        return math.pi / p ** 2 + math.pi ** 2 / (4 * p ** 3)

    def sing_class(self):
        return COND


class SmoothPhiCosTerm(SeriesTerm):
    """(phi / n) cos(pi/(2 phi)); continuous."""

    continuous = True

    def g(self, phi):
        if phi == 0.0:
            return 0.0
        return phi * math.cos(math.pi / (2 * phi)) / self.n

    def g_array(self, phi):
        return phi * np.cos(math.pi / (2 * phi)) / self.n

    def g_sup(self, phi_lo, phi_hi):
        return phi_hi / self.n

    def g_lip(self, phi_lo, phi_hi):
        return (1 + math.pi / (2 * phi_lo)) / self.n

    def osc_bound(self, u, v):
        phi_lo, phi_hi = _FracCell.range(self.n, u, v)
        sup = 2 * self.g_sup(phi_lo, phi_hi)
        if phi_lo <= 0:
            return sup
        return min(sup, self.g_lip(phi_lo, phi_hi) * (phi_hi - phi_lo))

    def osc_bound_array(self, us, vs):
        phi_lo, phi_hi = _FracCell.range_array(self.n, us, vs)
        p = np.maximum(phi_lo, 1e-300)
        lipped = (1 + math.pi / (2 * p)) / self.n * (phi_hi - phi_lo)
        sup = 2 * phi_hi / self.n
        return np.where(phi_lo <= 0, sup, np.minimum(sup, lipped))


class SqrtRecipTerm(SeriesTerm):
    """1 / (2 sqrt(phi)): absolutely integrable power singularity."""

    def g(self, phi):
        return 0.5 / math.sqrt(phi)

    def g_array(self, phi):
        return 0.5 / np.sqrt(phi)

    def g_sup(self, phi_lo, phi_hi):
        if phi_lo <= 0:
            return math.inf
        return 0.5 / math.sqrt(phi_lo)

    def osc_bound(self, u, v):
        phi_lo, phi_hi = _FracCell.range(self.n, u, v)
        if phi_lo <= 0:
            return math.inf
        # monotone in phi: exact oscillation
        return 0.5 / math.sqrt(phi_lo) - 0.5 / math.sqrt(phi_hi)

    def osc_bound_array(self, us, vs):
        phi_lo, phi_hi = _FracCell.range_array(self.n, us, vs)
        p = np.maximum(phi_lo, 1e-300)
        return np.where(phi_lo <= 0, np.inf,
                        0.5 / np.sqrt(p) - 0.5 / np.sqrt(phi_hi))

    def sing_class(self):
        return ABS


class SqrtFloorTerm(SeriesTerm):
    """([n t] + sqrt(phi)) / n; continuous across jumps of the floor."""

    continuous = True

    def ev(self, t, side=0):
        phi, at_jump = _frac_parts(t, self.n, side)
        fl = FloorRight(self.n).ev(t, side)
        return (fl + math.sqrt(phi)) / self.n

    def ev_array(self, ts):
        phi = _frac_array(np.asarray(ts, dtype=float), self.n)
        fl = FloorRight(self.n).ev_array(ts)
        return (fl + np.sqrt(phi)) / self.n

    def jumps(self, lo, hi):
        return []

    def osc_bound(self, u, v):
        phi_lo, phi_hi = _FracCell.range(self.n, u, v)
        if phi_lo <= 0:
            return math.sqrt(phi_hi) / self.n
        return (math.sqrt(phi_hi) - math.sqrt(phi_lo)) / self.n

    def osc_bound_array(self, us, vs):
        phi_lo, phi_hi = _FracCell.range_array(self.n, us, vs)
        return (np.sqrt(phi_hi) - np.sqrt(np.maximum(phi_lo, 0.0))) / self.n

    def sup_bound(self, u, v):
        return (abs(FloorRight(self.n).ev(float(v), -1)) + 1) / self.n


class LeftFracTerm(SeriesTerm):
    """(1 + n t - floor_left(n t)) / n**p: piecewise linear, left continuous."""

    def __init__(self, n, p):
        super().__init__(n)
        self.p = p

    def ev(self, t, side=0):
        phi, _ = _frac_parts(t, self.n, side)
        if phi == 0.0:
            # right limit at a jump
            return 0.0
        return phi / self.n ** self.p

    def ev_array(self, ts):
        return _frac_array(np.asarray(ts, dtype=float), self.n) / self.n ** self.p

    def osc_bound(self, u, v):
        phi_lo, phi_hi = _FracCell.range(self.n, u, v)
        return (phi_hi - max(phi_lo, 0.0)) / self.n ** self.p

    def osc_bound_array(self, us, vs):
        phi_lo, phi_hi = _FracCell.range_array(self.n, us, vs)
        return (phi_hi - np.maximum(phi_lo, 0.0)) / self.n ** self.p

    def sup_bound(self, u, v):
        return 1.0 / self.n ** self.p


class Shape(Expr):
    """t (1 + sign*trig(1/t)) for t > 0, 0 at t = 0; continuous, nonnegative."""

    def __init__(self, trig, sign):
        assert trig in ("sin", "cos")
        self.trig = trig
        self.sign = sign
        self._f = math.sin if trig == "sin" else math.cos
        self._fa = np.sin if trig == "sin" else np.cos

    def ev(self, t, side=0):
        t = float(t)
        if t <= SNAP:
            return 0.0
        return t * (1 + self.sign * self._f(1.0 / t))

    def ev_array(self, ts):
        ts = np.asarray(ts, dtype=float)
        out = np.zeros_like(ts)
        m = ts > SNAP
        out[m] = ts[m] * (1 + self.sign * self._fa(1.0 / ts[m]))
        return out

    def osc_bound(self, u, v):
        u, v = float(u), float(v)
        if u <= 0:
            return 2 * v
        return min(2 * v, (2 + 1.0 / u) * (v - u))

    def osc_bound_array(self, us, vs):
        p = np.maximum(us, 1e-300)
        return np.where(us <= 0, 2 * vs,
                        np.minimum(2 * vs, (2 + 1.0 / p) * (vs - us)))

    def sup_bound(self, u, v):
        return 2 * float(v)

    def integral(self, a, b, tol=1e-12):
        """Exact-splitting integral: t^2/2 term plus certified oscillatory part."""
        from .quadrature import oscillatory_t_trig
        key = (float(a), float(b), float(tol))
        cache = getattr(self, "_int_cache", None)
        if cache is None:
            cache = self._int_cache = {}
        if key not in cache:
            base = (float(b) ** 2 - float(a) ** 2) / 2
            osc, err = oscillatory_t_trig(self.trig, float(a), float(b), tol=tol)
            cache[key] = (base + self.sign * osc, err)
        return cache[key]


class GFactor(Expr):
    """(1/t) trig(1/t) + other_trig(1/t) + 1; the derivative of a Shape.

    kind "A": (1/t) cos(1/t) - sin(1/t) + 1   (primitive t (1 - sin(1/t)))
    kind "B": (1/t) sin(1/t) + cos(1/t) + 1   (primitive t (1 + cos(1/t)))
    Value at t = 0 is defined as 0.
    """

    def __init__(self, kind):
        assert kind in ("A", "B")
        self.kind = kind

    def primitive_shape(self) -> Shape:
        return Shape("sin", -1) if self.kind == "A" else Shape("cos", +1)

    def ev(self, t, side=0):
        t = float(t)
        if t <= SNAP:
            if side > 0:
                raise SecondKindLimit("no right limit at 0")
            return 0.0
        r = 1.0 / t
        if self.kind == "A":
            return r * math.cos(r) - math.sin(r) + 1
        return r * math.sin(r) + math.cos(r) + 1

    def ev_array(self, ts):
        ts = np.asarray(ts, dtype=float)
        out = np.zeros_like(ts)
        m = ts > SNAP
        r = 1.0 / ts[m]
        if self.kind == "A":
            out[m] = r * np.cos(r) - np.sin(r) + 1
        else:
            out[m] = r * np.sin(r) + np.cos(r) + 1
        return out

    def osc_bound(self, u, v):
        u, v = float(u), float(v)
        if u <= 0:
            return math.inf
        lip = 1 / u ** 2 + 1 / u ** 3 + 1 / u ** 2 + 1 / u ** 2
        return min(2 * self.sup_bound(u, v), lip * (v - u))

    def sup_bound(self, u, v):
        u = float(u)
        if u <= 0:
            return math.inf
        return 1.0 / u + 2

    def sing_class(self):
        return COND

    def integral(self, a, b, tol=1e-12):
        s = self.primitive_shape()
        return s.ev(b) - s.ev(a), 1e-15


class Scale(Expr):
    def __init__(self, c, inner):
        self.c = float(c)
        self.inner = inner

    def ev(self, t, side=0):
        return self.c * self.inner.ev(t, side)

    def ev_array(self, ts):
        return self.c * self.inner.ev_array(ts)

    def jumps(self, lo, hi):
        return [] if self.c == 0 else self.inner.jumps(lo, hi)

    def bound_cuts(self, lo, hi):
        return self.inner.bound_cuts(lo, hi)

    def osc_bound(self, u, v):
        return abs(self.c) * self.inner.osc_bound(u, v)

    def osc_bound_array(self, us, vs):
        return abs(self.c) * self.inner.osc_bound_array(us, vs)

    def sup_bound(self, u, v):
        return abs(self.c) * self.inner.sup_bound(u, v)

    def sing_class(self):
        return BOUNDED if self.c == 0 else self.inner.sing_class()


def _merge_jumps(lists):
    out = set()
    for l in lists:
        out.update(l)
    return sorted(out)


class Sum(Expr):
    def __init__(self, terms):
        flat = []
        for t in terms:
            if isinstance(t, Sum):
                flat.extend(t.terms)
            else:
                flat.append(t)
        self.terms = flat

    def ev(self, t, side=0):
        return sum(x.ev(t, side) for x in self.terms)

    def ev_array(self, ts):
        ts = np.asarray(ts, dtype=float)
        acc = np.zeros_like(ts)
        for x in self.terms:
            acc += x.ev_array(ts)
        return acc

    def jumps(self, lo, hi):
        return _merge_jumps(x.jumps(lo, hi) for x in self.terms)

    def bound_cuts(self, lo, hi):
        return _merge_jumps(x.bound_cuts(lo, hi) for x in self.terms)

    def osc_bound(self, u, v):
        return sum(x.osc_bound(u, v) for x in self.terms)

    def osc_bound_array(self, us, vs):
        acc = np.zeros_like(np.asarray(us, dtype=float))
        for x in self.terms:
            acc = acc + x.osc_bound_array(us, vs)
        return acc

    def sup_bound(self, u, v):
        return sum(x.sup_bound(u, v) for x in self.terms)

    def sing_class(self):
        return max((x.sing_class() for x in self.terms), default=BOUNDED)


class Product(Expr):
    def __init__(self, a, b):
        self.a = a
        self.b = b

    def ev(self, t, side=0):
        try:
            va = self.a.ev(t, side)
        except SecondKindLimit:
            # a bounded-to-zero partner can still force the limit to zero
            vb = self.b.ev(t, side)
            if vb == 0.0:
                return 0.0
            raise
        try:
            vb = self.b.ev(t, side)
        except SecondKindLimit:
            if va == 0.0:
                return 0.0
            raise
        return va * vb

    def ev_array(self, ts):
        return self.a.ev_array(ts) * self.b.ev_array(ts)

    def jumps(self, lo, hi):
        return _merge_jumps([self.a.jumps(lo, hi), self.b.jumps(lo, hi)])

    def bound_cuts(self, lo, hi):
        return _merge_jumps([self.a.bound_cuts(lo, hi), self.b.bound_cuts(lo, hi)])

    def osc_bound(self, u, v):
        sa, sb = self.a.sup_bound(u, v), self.b.sup_bound(u, v)
        oa, ob = self.a.osc_bound(u, v), self.b.osc_bound(u, v)
        return sa * ob + sb * oa

    def osc_bound_array(self, us, vs):
        sa = np.array([self.a.sup_bound(u, v) for u, v in zip(us, vs)])
        sb = np.array([self.b.sup_bound(u, v) for u, v in zip(us, vs)])
        return sa * self.b.osc_bound_array(us, vs) + sb * self.a.osc_bound_array(us, vs)

    def sup_bound(self, u, v):
        return self.a.sup_bound(u, v) * self.b.sup_bound(u, v)

    def sing_class(self):
        return max(self.a.sing_class(), self.b.sing_class())


class PointwiseExtreme(Expr):
    """max or min of two expressions; preserves left continuity."""

    def __init__(self, a, b, is_max=True):
        self.a, self.b, self.is_max = a, b, is_max

    def ev(self, t, side=0):
        op = max if self.is_max else min
        return op(self.a.ev(t, side), self.b.ev(t, side))

    def ev_array(self, ts):
        op = np.maximum if self.is_max else np.minimum
        return op(self.a.ev_array(ts), self.b.ev_array(ts))

    def jumps(self, lo, hi):
        return _merge_jumps([self.a.jumps(lo, hi), self.b.jumps(lo, hi)])

    def bound_cuts(self, lo, hi):
        return _merge_jumps([self.a.bound_cuts(lo, hi), self.b.bound_cuts(lo, hi)])

    def osc_bound(self, u, v):
        return max(self.a.osc_bound(u, v), self.b.osc_bound(u, v))

    def sup_bound(self, u, v):
        return max(self.a.sup_bound(u, v), self.b.sup_bound(u, v))

    def sing_class(self):
        return max(self.a.sing_class(), self.b.sing_class())


class AbsExpr(Expr):
    def __init__(self, inner):
        self.inner = inner

    def ev(self, t, side=0):
        return abs(self.inner.ev(t, side))

    def ev_array(self, ts):
        return np.abs(self.inner.ev_array(ts))

    def jumps(self, lo, hi):
        return self.inner.jumps(lo, hi)

    def bound_cuts(self, lo, hi):
        return self.inner.bound_cuts(lo, hi)

    def osc_bound(self, u, v):
        return self.inner.osc_bound(u, v)

    def sup_bound(self, u, v):
        return self.inner.sup_bound(u, v)

    def sing_class(self):
        return self.inner.sing_class()


class SmoothWrap(Expr):
    """sin/cos/arctan/tanh of an inner expression (all 1-Lipschitz)."""

    _FNS = {"sin": (math.sin, np.sin), "cos": (math.cos, np.cos),
            "arctan": (math.atan, np.arctan), "tanh": (math.tanh, np.tanh)}

    def __init__(self, fn: str, inner):
        assert fn in self._FNS
        self.fn = fn
        self.inner = inner

    def ev(self, t, side=0):
        return self._FNS[self.fn][0](self.inner.ev(t, side))

    def ev_array(self, ts):
        return self._FNS[self.fn][1](self.inner.ev_array(ts))

    def jumps(self, lo, hi):
        return self.inner.jumps(lo, hi)

    def bound_cuts(self, lo, hi):
        return self.inner.bound_cuts(lo, hi)

    def osc_bound(self, u, v):
        return min(2.0, self.inner.osc_bound(u, v))

    def osc_bound_array(self, us, vs):
        return np.minimum(2.0, self.inner.osc_bound_array(us, vs))

    def sup_bound(self, u, v):
        cap = math.pi / 2 if self.fn == "arctan" else 1.0
        if self.fn == "cos":
            return cap
        # sin, arctan, tanh vanish at 0 and are 1-Lipschitz
        return min(cap, self.inner.sup_bound(u, v))

    def sing_class(self):
        # the composition is bounded; at worst second-kind oscillation remains
        return min(self.inner.sing_class(), COND)


class RecipT(Expr):
    """1/t: divergent at 0, the canonical non-integrable example."""

    def ev(self, t, side=0):
        t = float(t)
        if abs(t) <= SNAP:
            raise SecondKindLimit("1/t blows up at 0")
        return 1.0 / t

    def ev_array(self, ts):
        return 1.0 / np.asarray(ts, dtype=float)

    def osc_bound(self, u, v):
        u, v = float(u), float(v)
        if u <= 0 <= v:
            return math.inf
        return abs(1 / u - 1 / v)

    def sup_bound(self, u, v):
        u, v = float(u), float(v)
        if u <= 0 <= v:
            return math.inf
        return max(abs(1 / u), abs(1 / v))

    def sing_class(self):
        return DIV


# ---------------------------------------------------------------------------
# truncated series of the catalogued families


def series(term_cls, m, **kw):
    return Sum([term_cls(n, **kw) if kw else term_cls(n) for n in range(1, m + 1)])
