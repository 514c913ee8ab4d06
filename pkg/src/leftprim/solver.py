"""Monotone fixed-point machinery for distributional Cauchy systems.

The engine iterates an increasing operator on vectors of functions.  Three
carrier types interoperate:

* :class:`~leftprim.funcspace.RegulatedFn` (symbolic/step/poly),
* :class:`GridFn` (values on the verification grid, piecewise linear
  semantics between nodes), and
* :class:`TaggedFn`, a RegulatedFn plus a hashable quantization tag that
  enables *exact* stabilization detection when iterates live in a
  finite-coefficient family.

Between finite iteration stages the engine forms omega-stages: the pointwise
sup/inf on the grid (which for a monotone chain is the latest iterate)
followed by a left-continuity closure at the system's declared branch
points.  The closure re-defines the value at points where the operator's
pointwise action is the identity, by quadratic extrapolation from the left
-- the grid surrogate of redefining a limit function to be left continuous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .funcspace import RegulatedFn
from .intervals import Interval


class MonotonicityError(RuntimeError):
    """An iterate fell below (above) its predecessor on an up (down) chain."""


class OrderBoundError(ValueError):
    """Spot check of declared order bounds failed."""


class GridFn:
    """Function known through its values on a fixed grid."""

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        self.grid = np.asarray(grid, dtype=float)
        self.values = np.asarray(values, dtype=float)
        assert self.grid.shape == self.values.shape

    @classmethod
    def constant(cls, grid, c):
        return cls(grid, np.full(len(grid), float(c)))

    def sample(self, ts):
        ts = np.asarray(ts, dtype=float)
        if ts.shape == self.grid.shape and np.array_equal(ts, self.grid):
            return self.values
        return np.interp(ts, self.grid, self.values)

    def __add__(self, c):
        return GridFn(self.grid, self.values + float(c))


class TaggedFn:
    """A RegulatedFn with a hashable tag for exact iterate comparison."""

    __slots__ = ("fn", "tag")

    def __init__(self, fn: RegulatedFn, tag):
        self.fn = fn
        self.tag = tag

    def sample(self, ts):
        return self.fn.sample(ts)


def as_grid(fn, grid) -> np.ndarray:
    if isinstance(fn, np.ndarray):
        return fn
    return np.asarray(fn.sample(grid), dtype=float)


def make_grid(a, b, per_unit: int = 4096, include=()) -> np.ndarray:
    """Uniform grid with mandatory inclusion of declared discontinuities."""
    a, b = float(a), float(b)
    n = max(2, int(round((b - a) * per_unit)) + 1)
    grid = np.linspace(a, b, n)
    extra = np.array(sorted(float(p) for p in include if a < float(p) < b))
    if len(extra):
        grid = np.unique(np.concatenate([grid, extra]))
    return grid


@dataclass
class CauchySystem:
    """First-order system y_i' = f_i(y), y_i(a) = c_i on [a, b).

    ``component_maps[i]`` maps the current iterate vector to the primitive of
    f_i evaluated on it: a function object vanishing (in right limit) at
    ``a``.  ``closure_points`` are branch points where the operator's
    pointwise action degenerates to the identity and left-continuity closure
    applies.
    """

    m: int
    component_maps: list
    c: list
    interval: Interval
    grid: np.ndarray
    monotone: bool = True
    closure_points: tuple = ()
    name: str = ""

    def __post_init__(self):
        assert len(self.component_maps) == self.m == len(self.c)

    def constant_start(self, values) -> list:
        return [GridFn.constant(self.grid, v) for v in values]

    def spot_check_monotone(self, lower, upper, rng=None, cases: int = 3,
                            eps: float = 1e-9):
        """Random ordered pairs inside [lower, upper] must map to ordered
        images; a declared-monotone operator failing this raises."""
        g = self.grid
        rng = rng or np.random.default_rng(0)
        lo = [as_grid(f, g) for f in lower]
        hi = [as_grid(f, g) for f in upper]
        for _ in range(cases):
            w1 = rng.uniform(0, 1)
            w2 = rng.uniform(w1, 1)
            x = [GridFn(g, (1 - w1) * a + w1 * b) for a, b in zip(lo, hi)]
            y = [GridFn(g, (1 - w2) * a + w2 * b) for a, b in zip(lo, hi)]
            fx = apply_operator(self, x)
            fy = apply_operator(self, y)
            for a, b in zip(fx, fy):
                if np.any(as_grid(a, g) > as_grid(b, g) + eps):
                    raise MonotonicityError(
                        "declared-monotone operator fails an order spot check")


def apply_operator(S: CauchySystem, x: list) -> list:
    """F(x) = (c_i + Phi_i(x))_i."""
    out = []
    for i, phi in enumerate(S.component_maps):
        p = phi(x)
        ci = S.c[i]
        if isinstance(p, TaggedFn):
            out.append(TaggedFn(_fn_plus_const(p.fn, ci), (p.tag, _num(ci))))
        elif isinstance(p, GridFn):
            out.append(p + ci)
        else:
            out.append(_fn_plus_const(p, ci))
    return out


def _num(c):
    return c if isinstance(c, (int, Fraction)) else float(c)


def _fn_plus_const(fn: RegulatedFn, c) -> RegulatedFn:
    if c == 0:
        return fn
    return fn + RegulatedFn.constant(c, fn.interval)


def closure_indices(grid: np.ndarray, closure_points) -> list:
    out = []
    for p in closure_points:
        j = int(np.searchsorted(grid, float(p)))
        if j < len(grid) and abs(grid[j] - float(p)) <= 1e-12 and j >= 3:
            out.append(j)
    return out


def closure_repair(grid: np.ndarray, closure_points, values: np.ndarray,
                   previous: np.ndarray = None, sign: float = None) -> np.ndarray:
    """Left-continuity closure at declared branch points.

    Replaces the value by a quadratic extrapolation from the three grid
    points to the left (exact for locally quadratic limit functions, in
    particular for locally constant and linear ones).  When ``previous`` and
    ``sign`` are given the repaired value is clamped so the monotone chain
    direction is preserved (+1 up, -1 down); the clamp only delays the
    transient, the converged value is the extrapolated left limit."""
    if not len(closure_points):
        return values
    out = values.copy()
    for j in closure_indices(grid, closure_points):
        extrap = 3 * out[j - 1] - 3 * out[j - 2] + out[j - 3]
        if previous is not None and sign is not None:
            extrap = max(extrap, previous[j]) if sign > 0 else                 min(extrap, previous[j])
        out[j] = extrap
    return out


@dataclass
class IterationTrace:
    """Record of one monotone chain."""

    direction: str
    stages: list = field(default_factory=list)   # grid sample snapshots
    labels: list = field(default_factory=list)   # "start", "step k", "omega j"
    stabilized: bool = False
    stabilization_index: int = None
    omega_stages: int = 0
    residual: float = None

    def add(self, label, samples):
        self.labels.append(label)
        self.stages.append([np.array(s) for s in samples])


def _tags(x):
    if all(isinstance(f, TaggedFn) for f in x):
        return tuple(f.tag for f in x)
    return None


def iterate_chain(S: CauchySystem, start: list, direction: str,
                  tol: float = 1e-10, max_steps: int = 200,
                  max_omega_stages: int = 8,
                  mono_eps: float = 1e-9,
                  record_every: int = 1) -> tuple:
    """Iterate F from a sub- (up) or supersolution (down) to stabilization.

    Returns ``(final_vector, IterationTrace)``.  Stabilization requires two
    consecutive iterates equal: exactly (matching tags) for tagged iterates,
    within ``tol`` in grid sup-norm otherwise.  After ``max_steps`` without
    stabilization an omega-stage closes the chain (pointwise sup/inf on the
    grid, i.e. the latest iterate of the monotone chain, plus left-continuity
    closure) and iteration resumes, up to ``max_omega_stages`` times.
    """
    assert direction in ("up", "down")
    sign = 1.0 if direction == "up" else -1.0
    trace = IterationTrace(direction)
    grid = S.grid
    mono_mask = np.ones(len(grid), dtype=bool)
    for j in closure_indices(grid, S.closure_points):
        mono_mask[j] = False  # repaired values are definitions, not outputs
    x = list(start)
    xs = [as_grid(f, grid) for f in x]
    trace.add("start", xs)
    steps_total = 0
    for omega in range(max_omega_stages + 1):
        for k in range(max_steps):
            x_new = apply_operator(S, x)
            new_samples = [as_grid(f, grid) for f in x_new]
            if S.closure_points:
                new_samples = [closure_repair(grid, S.closure_points, v,
                                              previous=ov, sign=sign)
                               for v, ov in zip(new_samples, xs)]
                x_new = [GridFn(grid, v) for v in new_samples]
            steps_total += 1
            # monotonicity on the grid, stage by stage (closure points are
            # redefined by extrapolation and excluded)
            worst = min(float(np.min((sign * (nv - ov))[mono_mask]))
                        for nv, ov in zip(new_samples, xs))
            if S.monotone and worst < -mono_eps:
                raise MonotonicityError(
                    f"{direction}-chain violated order by {-worst:.3e} "
                    f"at step {steps_total}")
            if record_every and steps_total % record_every == 0:
                trace.add(f"step {steps_total}", new_samples)
            t_old, t_new = _tags(x), _tags(x_new)
            if t_old is not None and t_new is not None:
                equal = t_old == t_new
            else:
                equal = max(float(np.max(np.abs(nv - ov)))
                            for nv, ov in zip(new_samples, xs)) <= tol
            x, xs = x_new, new_samples
            if equal:
                trace.stabilized = True
                trace.stabilization_index = steps_total - 1
                trace.omega_stages = omega
                return x, trace
        # omega-stage: monotone chain's pointwise sup/inf is the last iterate;
        # the closure repair is what actually unlocks identity points
        omega_samples = [closure_repair(grid, S.closure_points, v,
                                        previous=v, sign=sign) for v in xs]
        x = [GridFn(grid, v) for v in omega_samples]
        xs = omega_samples
        trace.add(f"omega {omega + 1}", omega_samples)
        trace.omega_stages = omega + 1
    trace.stabilized = False
    return x, trace


def residual(S: CauchySystem, x: list) -> float:
    """Grid sup-norm of F(x) - x."""
    fx = apply_operator(S, x)
    fs = [as_grid(f, S.grid) for f in fx]
    if S.closure_points:
        fs = [closure_repair(S.grid, S.closure_points, v) for v in fs]
    return max(float(np.max(np.abs(a - as_grid(b, S.grid))))
               for a, b in zip(fs, x))


@dataclass
class SubSuperPair:
    lower: list
    upper: list

    def validate(self, S: CauchySystem, check_roles: bool = True):
        """Pointwise order on the grid, plus the sub/supersolution role check
        via primitive comparison: y <= F(y) for the lower, F(y) <= y upper."""
        g = S.grid
        for lo, hi in zip(self.lower, self.upper):
            if np.any(as_grid(lo, g) > as_grid(hi, g) + 1e-12):
                raise OrderBoundError("lower exceeds upper on the grid")
        if check_roles:
            flo = apply_operator(S, self.lower)
            fhi = apply_operator(S, self.upper)
            for y, fy in zip(self.lower, flo):
                if np.any(as_grid(y, g) > as_grid(fy, g) + 1e-9):
                    raise OrderBoundError("lower bound is not a subsolution")
            for y, fy in zip(self.upper, fhi):
                if np.any(as_grid(fy, g) > as_grid(y, g) + 1e-9):
                    raise OrderBoundError("upper bound is not a supersolution")


def smallest_greatest(S: CauchySystem, pair: SubSuperPair, tol: float = 1e-10,
                      max_steps: int = 200, max_omega_stages: int = 8,
                      res_tol: float = None, **kw):
    """Smallest and greatest solutions between a sub/supersolution pair.

    The up-chain from the lower bound yields the smallest solution, the
    down-chain from the upper bound the greatest; both are verified as fixed
    points on the grid and bracket-ordered.
    """
    pair.validate(S)
    if S.monotone:
        S.spot_check_monotone(pair.lower, pair.upper)
    y_lo, tr_up = iterate_chain(S, pair.lower, "up", tol, max_steps,
                                max_omega_stages, **kw)
    y_hi, tr_dn = iterate_chain(S, pair.upper, "down", tol, max_steps,
                                max_omega_stages, **kw)
    res_tol = res_tol if res_tol is not None else 50 * tol
    r_lo, r_hi = residual(S, y_lo), residual(S, y_hi)
    assert r_lo <= res_tol and r_hi <= res_tol, \
        f"chain limits are not fixed points (residuals {r_lo:.2e}, {r_hi:.2e})"
    g = S.grid
    for a, b in zip(y_lo, y_hi):
        assert np.all(as_grid(a, g) <= as_grid(b, g) + 1e-9), \
            "smallest solution exceeds greatest"
    for a, b in zip(pair.lower, y_lo):
        assert np.all(as_grid(a, g) <= as_grid(b, g) + 1e-9)
    for a, b in zip(y_hi, pair.upper):
        assert np.all(as_grid(a, g) <= as_grid(b, g) + 1e-9)
    return y_lo, y_hi, (tr_up, tr_dn)


def bounds_to_subsuper(S: CauchySystem, h_lo: list, h_hi: list,
                       spot_checks: int = 5, rng=None) -> SubSuperPair:
    """Sub/supersolution pair from order bounds h_lo <= f_i(x) <= h_hi.

    The bounds are distributions; the pair is built from their cumulative
    primitives: y_i = c_i + int_a^t h_i.  The declared order is spot-checked
    by applying the operator to random vectors inside the candidate interval.
    """
    from .integral import cumulative

    a = S.interval.lo
    lower = [cumulative(h, a, S.c[i]) for i, h in enumerate(h_lo)]
    upper = [cumulative(h, a, S.c[i]) for i, h in enumerate(h_hi)]
    pair = SubSuperPair(lower, upper)
    g = S.grid
    rng = rng or np.random.default_rng(0)
    for _ in range(spot_checks):
        w = rng.uniform(0, 1, size=S.m)
        x = [GridFn(g, (1 - wi) * as_grid(lo, g) + wi * as_grid(hi, g))
             for wi, lo, hi in zip(w, lower, upper)]
        fx = apply_operator(S, x)
        for lo, fi, hi in zip(lower, fx, upper):
            ok = (np.all(as_grid(lo, g) <= as_grid(fi, g) + 1e-9)
                  and np.all(as_grid(fi, g) <= as_grid(hi, g) + 1e-9))
            if not ok:
                raise OrderBoundError("declared order bounds fail a spot check")
    return pair


def ceil_norm(x: list):
    """Pointwise max_i |x_i|; exact on step data, grid values otherwise."""
    from .funcspace import abs_fn, lattice

    if all(isinstance(f, RegulatedFn) and f.kind == "step" for f in x):
        acc = abs_fn(x[0])
        for f in x[1:]:
            acc = lattice(acc, abs_fn(f), "join")
        return acc
    grids = [f.grid for f in x if isinstance(f, GridFn)]
    assert grids, "ceil_norm needs step data or grid functions"
    g = grids[0]
    vals = np.max(np.abs(np.stack([as_grid(f, g) for f in x])), axis=0)
    return GridFn(g, vals)


@dataclass
class L1Config:
    """Growth data for the minimal/maximal solution existence route."""

    Q: object                  # nondecreasing growth function on R+
    r_max: float = 100.0       # scan bound for the fixed point R = Q(R)
    scan_points: int = 2001
    samples: int = 5           # random vectors for the norm hypothesis check


def _q_fixed_point(cfg: L1Config):
    rs = np.linspace(0.0, cfg.r_max, cfg.scan_points)
    qs = np.array([float(cfg.Q(r)) for r in rs])
    below = qs <= rs
    if not np.any(below[1:]):
        raise ValueError("no R with Q(R) <= R found within the scan bound")
    j = 1 + int(np.argmax(below[1:]))  # first index with Q(r) <= r
    lo, hi = rs[j - 1], rs[j]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if cfg.Q(mid) <= mid:
            hi = mid
        else:
            lo = mid
    R = hi
    # r <= Q(r) implies r <= R on the scan samples
    viol = rs[(rs <= np.array(qs)) & (rs > R + 1e-9)]
    if len(viol):
        raise ValueError("growth hypothesis fails: r <= Q(r) with r > R")
    return R


def _l1_norm_grid(values: np.ndarray, grid: np.ndarray) -> float:
    return float(np.trapezoid(np.abs(values), grid))


def minmax_l1(S: CauchySystem, cfg: L1Config, tol: float = 1e-10,
              max_steps: int = 400, rng=None):
    """Minimal and maximal solutions for zero initial values.

    Finds R with R = Q(R), verifies the L1 growth bound on sampled vectors in
    the ball of radius R, builds the bracket (down-chain of min{0, F0(y)}
    from 0 and up-chain of max{0, F0(y)} from 0), and runs the monotone
    chains of F inside the bracket.
    """
    assert all(ci == 0 for ci in S.c), "the L1 route needs zero initial values"
    R = _q_fixed_point(cfg)
    g = S.grid
    rng = rng or np.random.default_rng(1)
    for _ in range(cfg.samples):
        scale = rng.uniform(0, 1)
        x = [GridFn(g, scale * R * rng.uniform(-1, 1) * np.ones(len(g)))
             for _ in range(S.m)]
        xnorm = max(_l1_norm_grid(as_grid(f, g), g) for f in x)
        fx = [phi(x) for phi in S.component_maps]
        for fi in fx:
            if _l1_norm_grid(as_grid(fi, g), g) > float(cfg.Q(xnorm)) + 1e-9:
                raise ValueError("L1 growth hypothesis fails a spot check")

    def clipped(op):
        def mapped(x):
            fx = apply_operator(S, x)
            return [GridFn(g, op(as_grid(f, g), 0.0)) for f in fx]
        return mapped

    zero = S.constant_start([0.0] * S.m)
    lower = _simple_chain(clipped(np.minimum), zero, g, "down", tol, max_steps)
    upper = _simple_chain(clipped(np.maximum), zero, g, "up", tol, max_steps)
    pair = SubSuperPair(lower, upper)
    y_min, y_max, traces = smallest_greatest(S, pair, tol, max_steps)
    return y_min, y_max, (pair, R, traces)


def _simple_chain(mapped, start, grid, direction, tol, max_steps):
    sign = 1.0 if direction == "up" else -1.0
    x = list(start)
    for _ in range(max_steps):
        x_new = mapped(x)
        diff = max(float(np.max(np.abs(as_grid(a, grid) - as_grid(b, grid))))
                   for a, b in zip(x_new, x))
        worst = min(float(np.min(sign * (as_grid(a, grid) - as_grid(b, grid))))
                    for a, b in zip(x_new, x))
        if worst < -1e-9:
            raise MonotonicityError("auxiliary bracket chain is not monotone")
        x = x_new
        if diff <= tol:
            return x
    return x


@dataclass
class MajorantOp:
    """Increasing envelope operator with its starting envelope."""

    G: object                 # maps GridFn -> GridFn (or arrays)
    w0: object
    grid: np.ndarray
    closure_points: tuple = ()

    def spot_check_increasing(self, rng=None, cases: int = 5):
        rng = rng or np.random.default_rng(0)
        for _ in range(cases):
            u = np.abs(rng.normal(size=len(self.grid)))
            v = u + np.abs(rng.normal(size=len(self.grid)))
            gu = as_grid(self.G(GridFn(self.grid, u)), self.grid)
            gv = as_grid(self.G(GridFn(self.grid, v)), self.grid)
            if np.any(gu > gv + 1e-9):
                raise OrderBoundError("majorant operator is not increasing")


def uniqueness_chain(M: MajorantOp, tol: float = 1e-9,
                     max_steps: int = 100_000, max_omega_stages: int = 8,
                     stag_tol: float = None):
    """Drive the envelope chain w -> G(w) toward zero.

    Certified when the grid sup-norm of the envelope falls below ``tol``
    within the budgets.  On stagnation (successive difference below
    ``stag_tol``, which defaults to tol * min-grid-spacing / 8 because the
    slowest modes decay by about value*spacing per step next to a branch
    point) an omega-stage applies the pointwise-inf closure (left-continuity
    repair at declared branch points) and iteration resumes.
    """
    M.spot_check_increasing()
    grid = M.grid
    if stag_tol is None:
        h = float(np.min(np.diff(grid)))
        stag_tol = tol * h / 8
    w = as_grid(M.w0, grid)
    trace = IterationTrace("down")
    trace.add("start", [w])
    steps = 0
    for omega in range(max_omega_stages + 1):
        for _ in range(max_steps):
            w_new = as_grid(M.G(GridFn(grid, w)), grid)
            steps += 1
            if np.any(w_new > w + 1e-9):
                raise MonotonicityError("envelope chain is not decreasing")
            diff = float(np.max(np.abs(w_new - w)))
            w = w_new
            if float(np.max(w)) <= tol:
                trace.add(f"step {steps}", [w])
                trace.stabilized = True
                trace.stabilization_index = steps
                trace.omega_stages = omega
                return True, trace
            if diff <= stag_tol:
                break
        w = np.maximum(closure_repair(grid, M.closure_points, w,
                                      previous=w, sign=-1.0), 0.0)
        trace.add(f"omega {omega + 1}", [w])
        trace.omega_stages = omega + 1
    certified = bool(float(np.max(w)) <= tol)
    trace.stabilized = certified
    return certified, trace


def reduce_higher_order(m: int, g_map, c: list, interval: Interval,
                        grid: np.ndarray, closure_points=()) -> CauchySystem:
    """Reduce y^(m) = g(y, y', ..., y^(m-1)) to a first-order system.

    Components 1..m-1 integrate the next component on the grid (exact for
    piecewise-linear grid semantics); component m applies the supplied
    primitive map of g.  Solving the system and reading component 1 solves
    the original problem.
    """
    assert m >= 1

    def integ(i):
        def phi(x):
            vals = as_grid(x[i + 1], grid)
            prim = np.concatenate([[0.0], np.cumsum(
                0.5 * (vals[1:] + vals[:-1]) * np.diff(grid))])
            return GridFn(grid, prim)
        return phi

    maps = [integ(i) for i in range(m - 1)] + [g_map]
    return CauchySystem(m, maps, list(c), interval, grid,
                        closure_points=tuple(closure_points),
                        name=f"order-{m} reduction")
