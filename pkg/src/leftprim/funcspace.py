"""Left-regulated functions: representation facade and the space operations.

A :class:`RegulatedFn` wraps one of the concrete carriers (exact
:class:`~leftprim.stepfn.StepFn`, exact :class:`~leftprim.stepfn.PiecewisePoly`,
or a symbolic expression) together with its interval, an optional registered
primitive, and linear-combination / product structure.  All operations in
this module are pure; values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import symbolic as sym
from .intervals import DomainError, Interval
from .quadrature import (EstimationError, IntegrabilityError,
                         integrate_piecewise, richardson_limit)
from .stepfn import PiecewisePoly, StepFn


class RegulatedFn:
    """A left-regulated scalar function on an interval.

    ``kind`` is one of ``step`` / ``poly`` / ``symbolic`` / ``lincomb`` /
    ``product``.  Symbolic variants evaluate the left-limit branch at their
    declared discontinuities (right-limit branch at the domain minimum when
    it exists), so every instance is left-continuous as seen through
    :meth:`value`.
    """

    def __init__(self, kind, payload, interval: Interval, name: str = "",
                 primitive: "RegulatedFn | None" = None):
        self.kind = kind
        self.payload = payload
        self.interval = interval
        self.name = name
        self.primitive = primitive  # registered antiderivative, if any

    # -- constructors -----------------------------------------------------------

    @classmethod
    def from_step(cls, step: StepFn, name: str = "") -> "RegulatedFn":
        return cls("step", step, step.interval, name)

    @classmethod
    def from_poly(cls, poly: PiecewisePoly, name: str = "") -> "RegulatedFn":
        return cls("poly", poly, Interval(poly.lo, poly.hi), name)

    @classmethod
    def from_expr(cls, expr: sym.Expr, interval: Interval, name: str = "",
                  primitive: "RegulatedFn | None" = None) -> "RegulatedFn":
        return cls("symbolic", expr, interval, name, primitive)

    @classmethod
    def lincomb(cls, parts, interval=None, name: str = "") -> "RegulatedFn":
        parts = [(c, f) for c, f in parts]
        assert parts, "empty linear combination"
        iv = interval or parts[0][1].interval
        if all(f.kind == "step" for _, f in parts):
            acc = None
            for c, f in parts:
                term = f.payload.map(lambda v, c=c: _like(c, v) * v)
                acc = term if acc is None else acc + term
            return cls.from_step(acc, name)
        return cls("lincomb", parts, iv, name)

    @classmethod
    def product_of(cls, f: "RegulatedFn", g: "RegulatedFn", name: str = "") -> "RegulatedFn":
        if f.kind == "step" and g.kind == "step":
            return cls.from_step(f.payload * g.payload, name)
        if f.kind in ("step", "poly") and g.kind in ("step", "poly"):
            fp = f.payload.as_poly() if f.kind == "step" else f.payload
            gp = g.payload.as_poly() if g.kind == "step" else g.payload
            return cls.from_poly(fp * gp, name)
        return cls("product", (f, g), f.interval, name)

    @classmethod
    def constant(cls, value, interval: Interval, name: str = "") -> "RegulatedFn":
        return cls.from_step(StepFn.constant(interval.lo, interval.hi,
                                             Fraction(value)), name)

    def with_primitive(self, primitive: "RegulatedFn") -> "RegulatedFn":
        return RegulatedFn(self.kind, self.payload, self.interval, self.name,
                           primitive)

    def __repr__(self):
        label = self.name or self.kind
        return f"RegulatedFn<{label} on {self.interval}>"

    # -- evaluation ---------------------------------------------------------------

    def value(self, t):
        lo = self.interval.lo
        if not self.interval.contains(t):
            raise DomainError(f"{t} outside {self.interval}")
        if self.kind == "step" or self.kind == "poly":
            return self.payload(t)  # exact when the payload is exact
        if self.kind == "lincomb":
            return sum(c * f.value(t) for c, f in self.payload)
        if self.kind == "product":
            f, g = self.payload
            return f.value(t) * g.value(t)
        if t == lo:
            try:
                return self.payload.ev(t, +1)
            except sym.SecondKindLimit:
                return self.payload.ev(t, 0)
        return self.payload.ev(t, 0)

    def left_limit(self, t):
        if not self.interval.contains(t) or t == self.interval.lo:
            raise DomainError(f"no left limit at {t}")
        if self.kind in ("step", "poly"):
            return self.payload.left_limit(t)
        if self.kind == "lincomb":
            return sum(c * f.left_limit(t) for c, f in self.payload)
        if self.kind == "product":
            f, g = self.payload
            return f.left_limit(t) * g.left_limit(t)
        return self.payload.ev(t, -1)

    def right_limit(self, t):
        """Right limit, or None when it does not exist (second kind)."""
        if not self.interval.contains(t) or t == self.interval.hi:
            return None
        if self.kind in ("step", "poly"):
            return self.payload.right_limit(t)
        if self.kind == "lincomb":
            vals = [f.right_limit(t) for _, f in self.payload]
            if any(v is None for v in vals):
                return None
            return sum(c * v for (c, _), v in zip(self.payload, vals))
        try:
            if self.kind == "product":
                f, g = self.payload
                expr = sym.Product(_as_expr_like(f), _as_expr_like(g))
                return expr.ev(t, +1)
            return self.payload.ev(t, +1)
        except sym.SecondKindLimit:
            return None

    def sample(self, ts) -> np.ndarray:
        """Vectorised values: left branch, right branch at the domain minimum."""
        ts = np.asarray(ts, dtype=float)
        out = self._sample_left(ts)
        lo = float(self.interval.lo)
        at_min = ts <= lo
        if np.any(at_min):
            out = out.copy()
            out[at_min] = self.value(self.interval.lo)
        return out

    def _sample_left(self, ts) -> np.ndarray:
        if self.kind == "step":
            sf = self.payload
            breaks = np.array([float(b) for b in sf.breaks])
            vals = np.array([float(v) for v in sf.values])
            idx = np.clip(np.searchsorted(breaks, ts, side="left") - 1,
                          0, len(vals) - 1)
            out = vals[idx]
            out[ts <= breaks[0]] = float(sf.base_value)
            return out
        if self.kind == "poly":
            return self.payload.sample_array(ts)
        if self.kind == "lincomb":
            acc = np.zeros_like(ts)
            for c, f in self.payload:
                acc += float(c) * f._sample_left(ts)
            return acc
        if self.kind == "product":
            f, g = self.payload
            return f._sample_left(ts) * g._sample_left(ts)
        return self.payload.ev_array(ts)

    # -- structure ------------------------------------------------------------------

    def jumps(self, lo=None, hi=None):
        lo = self.interval.lo if lo is None else lo
        hi = self.interval.hi if hi is None else hi
        if self.kind == "step":
            return [b for b in self.payload.jump_points() if lo <= b <= hi]
        if self.kind == "poly":
            return []
        if self.kind == "lincomb":
            return sym._merge_jumps(f.jumps(lo, hi) for _, f in self.payload)
        if self.kind == "product":
            f, g = self.payload
            return sym._merge_jumps([f.jumps(lo, hi), g.jumps(lo, hi)])
        return self.payload.jumps(lo, hi)

    def bound_cuts(self, lo, hi):
        if self.kind == "step":
            return [Fraction(b) for b in self.payload.breaks if lo <= b <= hi]
        if self.kind == "poly":
            return [Fraction(b) for b in self.payload.breaks if lo <= b <= hi]
        if self.kind == "lincomb":
            return sym._merge_jumps(f.bound_cuts(lo, hi) for _, f in self.payload)
        if self.kind == "product":
            f, g = self.payload
            return sym._merge_jumps([f.bound_cuts(lo, hi), g.bound_cuts(lo, hi)])
        return self.payload.bound_cuts(lo, hi)

    def osc_bound_array(self, us, vs):
        if self.kind == "step":
            return np.zeros_like(us)  # cut at every breakpoint already
        if self.kind == "poly":
            return np.array([_poly_osc(self.payload, u, v) for u, v in zip(us, vs)])
        if self.kind == "lincomb":
            acc = np.zeros_like(np.asarray(us, dtype=float))
            for c, f in self.payload:
                acc += abs(float(c)) * f.osc_bound_array(us, vs)
            return acc
        if self.kind == "product":
            f, g = self.payload
            sa = f.sup_bound_cells(us, vs)
            sb = g.sup_bound_cells(us, vs)
            return sa * g.osc_bound_array(us, vs) + sb * f.osc_bound_array(us, vs)
        return self.payload.osc_bound_array(us, vs)

    def sup_bound_cells(self, us, vs):
        if self.kind == "step":
            return np.full_like(np.asarray(us, dtype=float),
                                float(self.payload.sup_norm()))
        if self.kind == "poly":
            return np.array([max(abs(float(self.payload(v))),
                                 abs(float(self.payload(v)))) +
                             _poly_osc(self.payload, u, v)
                             for u, v in zip(us, vs)])
        if self.kind == "lincomb":
            acc = np.zeros_like(np.asarray(us, dtype=float))
            for c, f in self.payload:
                acc += abs(float(c)) * f.sup_bound_cells(us, vs)
            return acc
        if self.kind == "product":
            f, g = self.payload
            return f.sup_bound_cells(us, vs) * g.sup_bound_cells(us, vs)
        return np.array([self.payload.sup_bound(u, v) for u, v in zip(us, vs)])

    def sing_class(self) -> int:
        if self.kind in ("step", "poly"):
            return sym.BOUNDED
        if self.kind == "lincomb":
            return max(f.sing_class() for _, f in self.payload)
        if self.kind == "product":
            f, g = self.payload
            return max(f.sing_class(), g.sing_class())
        return self.payload.sing_class()

    def to_step(self) -> StepFn:
        assert self.kind == "step", "not exact step data"
        return self.payload

    # arithmetic sugar (used heavily by the solver and tests)
    def __add__(self, other):
        return RegulatedFn.lincomb([(1, self), (1, other)], self.interval)

    def __sub__(self, other):
        return RegulatedFn.lincomb([(1, self), (-1, other)], self.interval)

    def __rmul__(self, c):
        return RegulatedFn.lincomb([(c, self)], self.interval)

    def __neg__(self):
        return RegulatedFn.lincomb([(-1, self)], self.interval)


def _like(c, v):
    """Coerce scalar c to pair with value v, keeping Fractions exact."""
    if isinstance(v, (Fraction, int)) and isinstance(c, (Fraction, int)):
        return Fraction(c)
    return float(c)


def _as_expr_like(f: RegulatedFn):
    if f.kind == "symbolic":
        return f.payload

    class _Wrap(sym.Expr):
        def ev(self, t, side=0):
            if side < 0:
                return f.left_limit(t)
            if side > 0:
                r = f.right_limit(t)
                if r is None:
                    raise sym.SecondKindLimit("no right limit")
                return r
            return f.value(t)

    return _Wrap()


def _poly_osc(poly: PiecewisePoly, u, v):
    """Oscillation bound for a piecewise polynomial on a cut-free cell."""
    i = max(0, min(len(poly.coeffs) - 1,
                   np.searchsorted([float(b) for b in poly.breaks], float(v)) - 1))
    c = poly.coeffs[i]
    scale = max(abs(float(u)), abs(float(v)), 1.0)
    lip = sum(abs(float(a)) * k * scale ** (k - 1) for k, a in enumerate(c) if k)
    return lip * (float(v) - float(u))


# ---------------------------------------------------------------------------
# operations


def limits(f: RegulatedFn, t):
    """(left limit, value, right limit or None) at t.

    At the domain minimum the left limit is reported as the value itself.
    """
    if not f.interval.contains(t):
        raise DomainError(f"{t} outside {f.interval}")
    val = f.value(t)
    left = val if t == f.interval.lo else f.left_limit(t)
    right = f.right_limit(t)
    return left, val, right


@dataclass
class OscillationPartition:
    """Finite oscillation partition: cells (cuts[i], cuts[i+1]] with values."""

    n: int
    interval: Interval
    cuts: list
    values: list
    certified: bool
    residual: list  # cells at the width floor that still violate 1/n


def oscillation_partition(f: RegulatedFn, n: int, J: Interval,
                          probes: int = 40_000, w_floor: float = None,
                          max_cells: int = 2_000_000) -> OscillationPartition:
    """Left-open cell partition of J with per-cell oscillation <= 1/n.

    Cells are seeded at the declared discontinuities and split by bisection
    while a certified oscillation bound exceeds 1/n.  Refinement is driven by
    a uniform probe lattice: a cell is split only while some probe lies in
    its open interior, and never below the width floor.  For exact step data
    the construction is exact and certified; for symbolic functions cells at
    the width floor next to second-kind discontinuities may keep oscillation
    above 1/n and are reported in ``residual``.
    """
    if not J.is_compact:
        raise EstimationError(
            "unsupported: oscillation partition needs a compact interval "
            "(no tail limit was supplied)")
    lo, hi = float(J.lo), float(J.hi)
    if f.kind == "step":
        sf = f.payload.restrict(Fraction(J.lo), Fraction(J.hi)).merged()
        return OscillationPartition(n, J, list(sf.breaks), list(sf.values),
                                    True, [])

    if w_floor is None:
        w_floor = (hi - lo) * 2.0 ** -48
    cuts = sorted({lo, hi}.union(float(c) for c in f.bound_cuts(J.lo, J.hi)
                                 if lo < float(c) < hi))
    grid = np.linspace(lo, hi, probes + 1)
    target = 1.0 / n

    us = np.array(cuts[:-1])
    vs = np.array(cuts[1:])
    done_u, done_v = [], []
    residual = []
    total = len(us)
    while len(us):
        osc = f.osc_bound_array(us, vs)
        wide = (vs - us) > w_floor
        # probe strictly inside (u, v): first lattice point > u is < v
        k = np.searchsorted(grid, us, side="right")
        has_probe = (k < len(grid)) & (grid[np.minimum(k, len(grid) - 1)] < vs)
        split = (osc > target) & wide & has_probe
        stuck = (osc > target) & ~wide
        for u, v in zip(us[stuck], vs[stuck]):
            residual.append((u, v))
        keep = ~split
        done_u.extend(us[keep])
        done_v.extend(vs[keep])
        mid = 0.5 * (us[split] + vs[split])
        us = np.concatenate([us[split], mid])
        vs = np.concatenate([mid, vs[split]])
        total += len(mid)
        if total > max_cells:
            raise EstimationError(
                f"oscillation partition exceeded {max_cells} cells at n={n}")
    order = np.argsort(done_u)
    breaks = np.concatenate([np.array(done_u)[order], [hi]])
    values = f.sample(breaks[1:])
    return OscillationPartition(n, J, breaks.tolist(), values.tolist(),
                                False, residual)


def step_approximation(f: RegulatedFn, n: int, J: Interval = None,
                       **kw) -> StepFn:
    """Countably-stepped approximation with |F_n - f| <= 1/n (see partition).

    For step input the result is the merged restriction (zero error).  For
    symbolic input the bound is certified on the probe lattice, except inside
    the reported residual cells hugging second-kind discontinuities.
    """
    J = J or f.interval
    if f.kind == "step":
        return f.payload.restrict(Fraction(J.lo), Fraction(J.hi)).merged()
    part = oscillation_partition(f, n, J, **kw)
    base = f.value(part.cuts[0])
    return StepFn(part.cuts, part.values, base)


def lattice(f: RegulatedFn, g: RegulatedFn, op: str) -> RegulatedFn:
    """Pointwise join (max) or meet (min); exact on step data."""
    if f.interval.lo != g.interval.lo or f.interval.hi != g.interval.hi:
        raise DomainError("lattice operands on different intervals")
    if f.kind == "step" and g.kind == "step":
        out = f.payload.join(g.payload) if op == "join" else f.payload.meet(g.payload)
        return RegulatedFn.from_step(out)
    expr = sym.PointwiseExtreme(_as_expr_like(f), _as_expr_like(g), op == "join")
    return RegulatedFn.from_expr(expr, f.interval)


def abs_fn(f: RegulatedFn) -> RegulatedFn:
    if f.kind == "step":
        return RegulatedFn.from_step(f.payload.abs())
    return RegulatedFn.from_expr(sym.AbsExpr(_as_expr_like(f)), f.interval)


def pos_fn(f: RegulatedFn) -> RegulatedFn:
    if f.kind == "step":
        return RegulatedFn.from_step(f.payload.pos())
    zero = RegulatedFn.constant(0, f.interval)
    return lattice(f, zero, "join")


def neg_fn(f: RegulatedFn) -> RegulatedFn:
    if f.kind == "step":
        return RegulatedFn.from_step(f.payload.neg())
    zero = RegulatedFn.constant(0, f.interval)
    return lattice(RegulatedFn.lincomb([(-1, f)]), zero, "join")


def norm(F: RegulatedFn, kind: str, J: Interval = None, tol: float = 1e-10,
         grid: int = 4096):
    """Alexiewicz / L1 / sup norm of F on J.

    Exact rationals for step data (the Alexiewicz norm via extrema of the
    piecewise-linear cumulative); numeric estimates otherwise.
    """
    J = J or F.interval
    assert kind in ("alexiewicz", "l1", "sup")
    if F.kind == "step":
        sf = F.payload
        if (J.lo, J.hi) != (sf.lo, sf.hi):
            sf = sf.restrict(Fraction(J.lo), Fraction(J.hi))
        if kind == "alexiewicz":
            return sf.alexiewicz_norm()
        if kind == "l1":
            return sf.l1_norm()
        return sf.sup_norm()
    if F.kind == "poly":
        return _poly_norm(F.payload, kind, J, grid)
    lo, hi = float(J.lo), float(J.hi)
    if kind == "sup":
        if not classify(F, J).locally_riemann:
            raise EstimationError(
                "sup norm of an unbounded function has no certified bound")
        ts = np.linspace(lo, hi, grid + 1)
        extra = np.array([float(c) for c in F.jumps(J.lo, J.hi)])
        if len(extra):
            ts = np.concatenate([ts, extra])
        return float(np.max(np.abs(F.sample(ts))))
    if kind == "l1":
        g = abs_fn(F)
        val, _ = integrate_regulated(g, lo, hi, tol)
        return val
    # alexiewicz: extrema of the cumulative, accumulated over a refinement
    cuts = sorted({lo, hi}.union(float(c) for c in F.jumps(J.lo, J.hi)))
    pts = [lo]
    for a, b in zip(cuts[:-1], cuts[1:]):
        k = max(2, int(grid * (b - a) / (hi - lo)) + 1)
        pts.extend(np.linspace(a, b, k)[1:])
    acc = 0.0
    mn = mx = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        v, _ = integrate_regulated(F, a, b, tol)
        acc += v
        mn, mx = min(mn, acc), max(mx, acc)
    return mx - mn


def _poly_norm(poly: PiecewisePoly, kind: str, J: Interval, grid: int):
    """Norms of piecewise polynomials: sampled at breakpoints plus a dense
    grid (sup and the cumulative extrema are attained to O(h^2))."""
    lo, hi = float(J.lo), float(J.hi)
    ts = np.unique(np.concatenate([
        np.linspace(lo, hi, grid + 1),
        np.array([float(b) for b in poly.breaks if lo <= float(b) <= hi])]))
    vals = poly.sample_array(ts)
    if kind == "sup":
        return float(np.max(np.abs(vals)))
    if kind == "l1":
        return float(np.trapezoid(np.abs(vals), ts))
    cvals = poly.cumulative().sample_array(ts)
    return float(np.max(cvals) - np.min(cvals))


def local_metric(F: RegulatedFn, G: RegulatedFn, kind: str, exhaustion,
                 depth: int = None) -> float:
    """Sum of norm_n/(1+norm_n) over an increasing compact exhaustion.

    The series is truncated at ``depth`` terms (every term is < 1, so the
    omitted tail is at most the remaining term count); the displayed metric
    has no summability weights and this truncation is the desk-scale
    surrogate.
    """
    if not exhaustion:
        raise ValueError("empty exhaustion")
    depth = len(exhaustion) if depth is None else min(depth, len(exhaustion))
    diff = RegulatedFn.lincomb([(1, F), (-1, G)], F.interval)
    total = 0.0
    for J in exhaustion[:depth]:
        d = float(norm(diff, kind, J))
        total += d / (1.0 + d)
    return total


@dataclass
class Classification:
    locally_riemann: bool
    locally_lebesgue: bool
    locally_hk: bool
    certified: bool


def classify(F: RegulatedFn, J: Interval = None) -> Classification:
    """Integrability flags on compact subintervals of J.

    Step data is certain; symbolic classification combines the declared
    singularity class of the expression tree with a boundedness probe, and
    carries certified=False.
    """
    J = J or F.interval
    if F.kind in ("step", "poly"):
        return Classification(True, True, True, True)
    sing = F.sing_class()
    lo, hi = float(J.lo), float(J.hi)
    cuts = sorted({lo, hi}.union(
        float(c) for c in F.bound_cuts(J.lo, J.hi) if lo < float(c) < hi))
    us, vs = np.array(cuts[:-1]), np.array(cuts[1:])
    # local boundedness is equivalent to local Riemann integrability for
    # left-regulated functions (a.e. continuity comes free)
    bounded = bool(np.all(np.isfinite(F.sup_bound_cells(us, vs))))
    riemann = bounded
    lebesgue = riemann or sing <= sym.ABS
    hk = lebesgue or sing <= sym.COND
    if sing >= sym.DIV:
        riemann = lebesgue = hk = False
    return Classification(riemann, lebesgue, hk, False)


def integrate_regulated(F: RegulatedFn, a, b, tol: float = 1e-10):
    """Integral of F over [a, b] with an error bound.

    Exact for step and piecewise-polynomial data; endpoint difference of a
    registered primitive when one exists; linearity across combinations;
    otherwise adaptive quadrature splitting at declared discontinuities.
    """
    if a == b:
        return 0.0, 0.0
    if F.kind == "step" or F.kind == "poly":
        return F.payload.integral(a, b), 0.0
    if F.primitive is not None:
        P = F.primitive
        return P.value(b) - P.value(a), 1e-15 * (abs(P.value(b)) + abs(P.value(a)))
    if F.kind == "symbolic" and hasattr(F.payload, "integral"):
        return F.payload.integral(a, b, tol)
    if F.kind == "lincomb":
        total, err = 0.0, 0.0
        for c, f in F.payload:
            v, e = integrate_regulated(f, a, b, tol)
            total += float(c) * v
            err += abs(float(c)) * e
        return total, err
    cls = classify(F)
    if not cls.locally_hk:
        raise IntegrabilityError(f"{F!r} is not locally HK integrable")
    cuts = [float(c) for c in F.jumps(min(a, b), max(a, b))]
    return integrate_piecewise(F.sample, float(a), float(b), cuts, tol)


def fd_derivative_check(F: RegulatedFn, G: RegulatedFn, points, h0: float = 1e-3,
                        levels: int = 4, min_dist: float = None):
    """Compare central finite differences of F with G at the given points.

    Points too close to G's declared discontinuities are skipped with a note.
    Returns a report dict with per-point deviations and the max.
    """
    jumps = np.array([float(j) for j in G.jumps()] or [np.inf])
    report = {"points": [], "skipped": [], "max_deviation": 0.0}
    for t in points:
        t = float(t)
        dist = float(np.min(np.abs(jumps - t))) if jumps.size else np.inf
        h = min(h0, dist / 8) if np.isfinite(dist) else h0
        if min_dist is not None and dist < min_dist:
            report["skipped"].append((t, "too close to discontinuity"))
            continue
        if h <= 0:
            report["skipped"].append((t, "on discontinuity"))
            continue
        sampler = lambda hh: (F.value(t + hh) - F.value(t - hh)) / (2 * hh)
        d, _ = richardson_limit(sampler, h, levels=levels, order=2)
        dev = abs(d - G.value(t))
        report["points"].append((t, dev))
        report["max_deviation"] = max(report["max_deviation"], dev)
    return report
