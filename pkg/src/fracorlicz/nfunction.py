"""N-function calculus: densities, conjugates, Delta_2 constants, growth exponents.

An N-function G is convex, continuous, vanishes only at 0, and satisfies
G(s)/s -> 0 at 0 and -> infinity at infinity.  It is represented here through
its right-continuous increasing density g with G(s) = integral of g over
[0, s].  Built-in parametric families:

    power(p)        G(s) = s^p / p                      (g- = g+ = p)
    mixed_power(p,q) G(s) = s^p/p + s^q/q               (g- = min, g+ = max)
    log_power(p)    G(s) = s^p log(1+s)                 (g- = p, g+ = p+1)
    exponential()   G(s) = e^s - s - 1                  (g+ unbounded; fails
                                                         the Delta_2 condition)

All evaluation functions accept scalars or numpy arrays.  NFunction values are
treated as immutable after construction and safe to share across workers; the
single sanctioned in-place write is ``check_delta2`` refreshing the cached
``delta2_k`` estimate with an idempotent value.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConditionViolationError, DomainError

#: default sample grid for growth/structure checks: log-spaced over 12 decades
DEFAULT_SAMPLE_GRID = np.logspace(-6.0, 6.0, 400)

#: ratio cap above which s g(s)/G(s) is treated as unbounded
GROWTH_RATIO_CAP = 1e6

#: Delta_2 ratio cap: G(2s)/G(s) above this is reported as unbounded
DELTA2_CAP = 1e6

#: bracket ceiling for the conjugate-density bisection
CONJUGATE_BRACKET_CAP = 1e12


@dataclass
class NFunction:
    """An N-function with its density and structural constants.

    ``G`` and ``g`` are vectorized callables on nonnegative inputs.  The
    growth exponents are exact for parametric families and sampled estimates
    for tabulated ones.  ``g_prime`` is optional (used only by Newton-type
    polishing); when absent a central difference of ``g`` is substituted.
    """

    name: str
    G: callable
    g: callable
    g_minus: float
    g_plus: float
    delta2_k: float
    kind: str  # 'parametric' | 'tabulated'
    g_prime: callable = None
    params: dict = field(default_factory=dict)

    def spec(self) -> str:
        """Round-trippable family descriptor, e.g. ``power:p=2``."""
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}:{inner}"

    def __repr__(self):
        return f"NFunction({self.spec()})"


def _as_nonneg(s, what="s"):
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"{what} must be nonnegative")
    return arr


def _maybe_scalar(out, template):
    if np.isscalar(template) or np.asarray(template).ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# built-in families

def power(p: float) -> NFunction:
    """G(s) = s^p / p with p > 1."""
    if p <= 1.0:
        raise DomainError("power family requires p > 1")
    return NFunction(
        name="power",
        G=lambda s: np.asarray(s, float) ** p / p,
        g=lambda s: np.asarray(s, float) ** (p - 1.0),
        g_minus=p,
        g_plus=p,
        delta2_k=2.0 ** p,
        kind="parametric",
        g_prime=_power_gprime(p),
        params={"p": p},
    )


def _power_gprime(p):
    if p == 2.0:
        return lambda s: np.ones_like(np.asarray(s, float))

    def g_prime(s):
        s = np.asarray(s, float)
        with np.errstate(divide="ignore"):
            return (p - 1.0) * s ** (p - 2.0)

    return g_prime


def mixed_power(p: float, q: float) -> NFunction:
    """G(s) = s^p/p + s^q/q; growth exponents span [min(p,q), max(p,q)]."""
    if min(p, q) <= 1.0:
        raise DomainError("mixed_power family requires p, q > 1")
    lo, hi = min(p, q), max(p, q)
    return NFunction(
        name="mixed_power",
        G=lambda s: np.asarray(s, float) ** p / p + np.asarray(s, float) ** q / q,
        g=lambda s: np.asarray(s, float) ** (p - 1.0) + np.asarray(s, float) ** (q - 1.0),
        g_minus=lo,
        g_plus=hi,
        delta2_k=2.0 ** hi,
        kind="parametric",
        g_prime=lambda s: (p - 1.0) * np.asarray(s, float) ** (p - 2.0)
        + (q - 1.0) * np.asarray(s, float) ** (q - 2.0),
        params={"p": p, "q": q},
    )


def log_power(p: float) -> NFunction:
    """G(s) = s^p log(1+s); the ratio s g/G decreases from p+1 to p."""
    if p <= 1.0:
        raise DomainError("log_power family requires p > 1")

    def G(s):
        s = np.asarray(s, float)
        return s ** p * np.log1p(s)

    def g(s):
        s = np.asarray(s, float)
        return p * s ** (p - 1.0) * np.log1p(s) + s ** p / (1.0 + s)

    return NFunction(
        name="log_power",
        G=G,
        g=g,
        g_minus=p,
        g_plus=p + 1.0,
        delta2_k=2.0 ** (p + 1.0),
        kind="parametric",
        params={"p": p},
    )


def exponential() -> NFunction:
    """G(s) = e^s - s - 1.  Violates both Delta_2 and the finite upper
    growth exponent; kept as the canonical rejection case."""

    def G(s):
        s = np.asarray(s, float)
        with np.errstate(over="ignore"):
            return np.expm1(s) - s

    def g(s):
        s = np.asarray(s, float)
        with np.errstate(over="ignore"):
            return np.expm1(s)

    return NFunction(
        name="exponential",
        G=G,
        g=g,
        g_minus=2.0,
        g_plus=math.inf,
        delta2_k=math.inf,
        kind="parametric",
        params={},
    )


def tabulated(s_knots, g_knots, name: str = "tabulated") -> NFunction:
    """N-function from a sampled density table (s, g(s)).

    The density is interpolated piecewise-linearly between knots and extended
    linearly (with the last slope) beyond the right end; G is its exact
    integral, i.e. the composite-trapezoid value at any point.  A knot at
    s = 0 with g = 0 is prepended when missing.
    """
    s_knots = np.asarray(s_knots, dtype=float)
    g_knots = np.asarray(g_knots, dtype=float)
    if s_knots.ndim != 1 or s_knots.shape != g_knots.shape or s_knots.size < 2:
        raise DomainError("tabulated density needs two equal-length 1-d columns")
    if np.any(np.diff(s_knots) <= 0):
        raise DomainError("tabulated s-knots must be strictly increasing")
    if np.any(g_knots < 0) or np.any(np.diff(g_knots) < 0):
        raise DomainError("tabulated density must be nonnegative and nondecreasing")
    if s_knots[0] > 0.0:
        s_knots = np.concatenate([[0.0], s_knots])
        g_knots = np.concatenate([[0.0], g_knots])

    # cumulative trapezoid of the piecewise-linear density (exact)
    segs = 0.5 * (g_knots[1:] + g_knots[:-1]) * np.diff(s_knots)
    cumG = np.concatenate([[0.0], np.cumsum(segs)])
    right_slope = (
        (g_knots[-1] - g_knots[-2]) / (s_knots[-1] - s_knots[-2])
        if g_knots[-1] > g_knots[-2]
        else 0.0
    )

    def g(s):
        s = np.asarray(s, float)
        out = np.interp(s, s_knots, g_knots)
        over = s > s_knots[-1]
        if np.any(over):
            out = np.where(over, g_knots[-1] + right_slope * (s - s_knots[-1]), out)
        return out

    def G(s):
        s = np.asarray(s, float)
        idx = np.clip(np.searchsorted(s_knots, s, side="right") - 1, 0, len(s_knots) - 2)
        s0 = s_knots[idx]
        base = cumG[idx]
        gs = g(s)
        g0 = g_knots[idx]
        inside = base + 0.5 * (g0 + gs) * (s - s0)
        over = s > s_knots[-1]
        if np.any(over):
            tail = cumG[-1] + 0.5 * (g_knots[-1] + gs) * (s - s_knots[-1])
            inside = np.where(over, tail, inside)
        return np.maximum(inside, 0.0)

    nf = NFunction(
        name=name,
        G=G,
        g=g,
        g_minus=math.nan,
        g_plus=math.nan,
        delta2_k=math.nan,
        kind="tabulated",
        params={},
    )
    # sampled structural constants over the table's interior range
    lo = max(s_knots[1] if s_knots[0] == 0.0 else s_knots[0], 1e-12)
    grid = np.geomspace(lo, s_knots[-1], 200)
    with np.errstate(all="ignore"):
        ratio = grid * nf.g(grid) / nf.G(grid)
    ratio = ratio[np.isfinite(ratio)]
    nf.g_minus = float(np.min(ratio)) if ratio.size else math.nan
    nf.g_plus = float(np.max(ratio)) if ratio.size else math.nan
    half = grid[grid <= s_knots[-1] / 2.0]
    if half.size:
        nf.delta2_k = float(np.max(nf.G(2.0 * half) / nf.G(half)))
    return nf


_FAMILIES = {
    "power": power,
    "mixed_power": mixed_power,
    "log_power": log_power,
    "exponential": exponential,
}


def from_spec(text: str) -> NFunction:
    """Build an N-function from a descriptor like ``power:p=2``,
    ``mixed_power:p=2,q=4`` or ``table:<path>`` (two-column s, g(s) file)."""
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.strip()
    if head == "table":
        if not rest:
            raise DomainError("table descriptor needs a file path")
        data = np.loadtxt(rest, ndmin=2)
        if data.shape[1] < 2:
            raise DomainError(f"density table {rest} must have two columns")
        return tabulated(data[:, 0], data[:, 1])
    if head not in _FAMILIES:
        raise DomainError(f"unknown N-function family '{head}'")
    kwargs = {}
    if rest:
        for item in rest.split(","):
            k, _, v = item.partition("=")
            if not _:
                raise DomainError(f"malformed family parameter '{item}'")
            kwargs[k.strip()] = float(v)
    return _FAMILIES[head](**kwargs)


# ---------------------------------------------------------------------------
# evaluation

def eval_G(nf: NFunction, s):
    """G(s); for tabulated kind this is the composite-trapezoid integral of
    the density from 0 to s."""
    arr = _as_nonneg(s)
    return _maybe_scalar(nf.G(arr), s)


def conjugate_density(nf: NFunction, s, tol: float = 1e-12,
                      cap: float = CONJUGATE_BRACKET_CAP):
    """Conjugate density gbar(s) = sup{t : g(t) <= s} by monotone bisection.

    The bracket grows geometrically (factor 2) until g exceeds s; if the cap
    is reached first the cap is returned and a warning is issued.
    """
    arr = _as_nonneg(s)
    flat = np.atleast_1d(arr).astype(float)
    lo = np.zeros_like(flat)
    hi = np.ones_like(flat)
    capped = np.zeros(flat.shape, dtype=bool)
    # grow brackets where g(hi) <= s
    for _ in range(64):
        need = (nf.g(hi) <= flat) & ~capped
        if not np.any(need):
            break
        hi = np.where(need, hi * 2.0, hi)
        newly_capped = need & (hi >= cap)
        hi = np.where(newly_capped, cap, hi)
        capped |= newly_capped
    if np.any(capped):
        warnings.warn(
            "conjugate_density bracket hit its cap; returning the cap",
            RuntimeWarning,
            stacklevel=2,
        )
    # bisect sup{t : g(t) <= s}: keep lo feasible, hi infeasible
    active = ~capped
    for _ in range(200):
        width = hi - lo
        if not np.any(active & (width > tol)):
            break
        mid = 0.5 * (lo + hi)
        feas = nf.g(mid) <= flat
        lo = np.where(active & feas, mid, lo)
        hi = np.where(active & ~feas, mid, hi)
    out = np.where(capped, cap, lo)
    out = np.where(flat == 0.0, 0.0, out)
    return _maybe_scalar(out.reshape(np.shape(arr)), s)


def eval_Gbar(nf: NFunction, s, nodes: int = 256):
    """Conjugate N-function Gbar(s) by composite Simpson quadrature of the
    conjugate density on a quadratically graded mesh (clustered at 0, where
    gbar may have a root-type cusp)."""
    arr = _as_nonneg(s)
    flat = np.atleast_1d(arr).astype(float)
    if nodes % 2 == 1:
        nodes += 1
    u = np.linspace(0.0, 1.0, nodes + 1)
    # t = s u^2, dt = 2 s u du: integrand f(u) = gbar(s u^2) * 2 s u
    t = flat[:, None] * u[None, :] ** 2
    gbar = np.atleast_2d(conjugate_density(nf, t))
    f = gbar * 2.0 * flat[:, None] * u[None, :]
    w = np.ones(nodes + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    out = (1.0 / nodes / 3.0) * f @ w
    return _maybe_scalar(out.reshape(np.shape(arr)), s)


def conjugate(nf: NFunction, s_range=(1e-9, 1e9), points: int = 2400) -> NFunction:
    """The conjugate N-function as a first-class NFunction.

    The power family maps to power(p') with 1/p + 1/p' = 1 in closed form;
    every other family gets a tabulated conjugate built from the bisection
    density on a log-spaced knot grid.
    """
    if nf.name == "power":
        p = nf.params["p"]
        return power(p / (p - 1.0))
    knots = np.geomspace(s_range[0], s_range[1], points)
    gbar = np.asarray(conjugate_density(nf, knots))
    gbar = np.maximum.accumulate(gbar)  # guard monotonicity against bisection noise
    out = tabulated(knots, gbar, name=f"conjugate({nf.name})")
    if math.isfinite(nf.g_plus) and nf.g_minus > 1.0:
        # conjugate growth exponents swap: inf <-> sup under s -> s/(s-1)
        out.g_minus = nf.g_plus / (nf.g_plus - 1.0)
        out.g_plus = nf.g_minus / (nf.g_minus - 1.0)
    return out


# ---------------------------------------------------------------------------
# structural checks

def check_delta2(nf: NFunction, sample_grid=None, cap: float = DELTA2_CAP):
    """Max of G(2s)/G(s) over the sample grid.

    Returns ``(bounded, estimated_k)`` and refreshes ``nf.delta2_k`` with the
    estimate.  ``bounded`` is False when the ratio exceeds the cap anywhere
    (including overflow to non-finite values).
    """
    grid = DEFAULT_SAMPLE_GRID if sample_grid is None else np.asarray(sample_grid, float)
    if grid.size == 0 or np.any(grid <= 0):
        raise DomainError("delta2 sample grid must be nonempty and strictly positive")
    with np.errstate(all="ignore"):
        num = np.asarray(nf.G(2.0 * grid), float)
        den = np.asarray(nf.G(grid), float)
        ratio = num / den
    bad = ~np.isfinite(ratio)
    estimated = math.inf if np.any(bad) else float(np.max(ratio))
    bounded = math.isfinite(estimated) and estimated <= cap
    nf.delta2_k = estimated
    return bounded, estimated


def estimate_growth_exponents(nf: NFunction, sample_grid=None,
                              cap: float = GROWTH_RATIO_CAP):
    """(inf, sup) of s g(s)/G(s) over the sample grid.

    For parametric families the exact exponents are returned and the sampled
    values act as a consistency check.  Raises ConditionViolationError when
    the sampled lower exponent is <= 1 or the ratio exceeds the cap (both
    violate the standing growth assumption 1 < g- <= g+ < infinity).
    """
    grid = DEFAULT_SAMPLE_GRID if sample_grid is None else np.asarray(sample_grid, float)
    if grid.size == 0 or np.any(grid <= 0):
        raise DomainError("growth sample grid must be nonempty and strictly positive")
    with np.errstate(all="ignore"):
        ratio = grid * np.asarray(nf.g(grid), float) / np.asarray(nf.G(grid), float)
    if np.any(~np.isfinite(ratio)) or np.any(ratio > cap):
        raise ConditionViolationError(
            f"{nf.name}: growth ratio s*g/G exceeds cap {cap:g}; "
            "upper growth exponent is effectively unbounded"
        )
    lo = float(np.min(ratio))
    hi = float(np.max(ratio))
    if lo <= 1.0:
        raise ConditionViolationError(
            f"{nf.name}: sampled lower growth exponent {lo:.6g} <= 1"
        )
    if nf.kind == "parametric" and math.isfinite(nf.g_plus):
        slack = 1e-6 * max(1.0, nf.g_plus)
        if lo < nf.g_minus - slack or hi > nf.g_plus + slack:
            raise ConditionViolationError(
                f"{nf.name}: sampled exponents ({lo:.6g}, {hi:.6g}) leave the "
                f"exact range [{nf.g_minus:g}, {nf.g_plus:g}]"
            )
        if nf.name == "power" and (abs(lo - nf.g_minus) > 1e-9 or abs(hi - nf.g_plus) > 1e-9):
            raise ConditionViolationError(
                "power family: sampled ratio deviates from the exact exponent"
            )
        return nf.g_minus, nf.g_plus
    return lo, hi


def check_sqrt_convexity(nf: NFunction, sample_grid=None, tol: float = 1e-9) -> bool:
    """True iff s -> G(sqrt(s)) has nonnegative second divided differences
    at all interior samples (uniform convexity surrogate)."""
    grid = DEFAULT_SAMPLE_GRID if sample_grid is None else np.asarray(sample_grid, float)
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("sqrt-convexity grid must be positive and sorted")
    f = np.asarray(nf.G(np.sqrt(grid)), float)
    s0, s1, s2 = grid[:-2], grid[1:-1], grid[2:]
    f0, f1, f2 = f[:-2], f[1:-1], f[2:]
    dd = ((f2 - f1) / (s2 - s1) - (f1 - f0) / (s1 - s0)) / (s2 - s0)
    scale = np.maximum(1.0, np.abs(f1) / np.maximum(s1, 1e-300) ** 2)
    return bool(np.all(dd >= -tol * scale))


def young_constant(nf: NFunction, sample_grid=None) -> float:
    """Smallest observed c with Gbar(g(s)) <= c G(s) over the sample grid."""
    grid = (
        np.geomspace(1e-3, 1e3, 60) if sample_grid is None
        else np.asarray(sample_grid, float)
    )
    with np.errstate(all="ignore"):
        gs = np.asarray(nf.g(grid), float)
    keep = np.isfinite(gs)
    grid, gs = grid[keep], gs[keep]
    num = np.asarray(eval_Gbar(nf, gs), float)
    den = np.asarray(nf.G(grid), float)
    with np.errstate(all="ignore"):
        ratio = num / den
    ratio = ratio[np.isfinite(ratio)]
    if ratio.size == 0:
        raise ConditionViolationError("Young-constant estimate found no finite ratios")
    return float(np.max(ratio))


def structural_report(nf: NFunction, sample_grid=None):
    """Bundle of the pointwise structural checks every registered N-function
    must pass: G(0) = 0, monotone convex G, the density sandwich
    G(s) <= s g(s) <= G(2s), the growth-exponent sandwich, and the scaling
    inequalities G(rs) <= r^{g+} G(s) (r > 1), G(rs) >= r^{g-} G(s) (r > 1),
    G(rs) <= r G(s) (r < 1)."""
    from .reports import CheckSet, InequalityCheck

    grid = DEFAULT_SAMPLE_GRID if sample_grid is None else np.asarray(sample_grid, float)
    rep = CheckSet(name=f"structure[{nf.spec()}]")
    G = np.asarray(nf.G(grid), float)
    g = np.asarray(nf.g(grid), float)
    finite = np.isfinite(G) & np.isfinite(g) & np.isfinite(nf.G(2.0 * grid))
    grid, G, g = grid[finite], G[finite], g[finite]
    G2 = np.asarray(nf.G(2.0 * grid), float)

    rep.add(InequalityCheck("G(0)=0", abs(float(np.asarray(nf.G(0.0)))), 0.0, budget=1e-14))
    rep.add(InequalityCheck(
        "G nondecreasing", 0.0, float(np.min(np.diff(G))), budget=1e-12))
    s0, s1, s2 = grid[:-2], grid[1:-1], grid[2:]
    dd = ((G[2:] - G[1:-1]) / (s2 - s1) - (G[1:-1] - G[:-2]) / (s1 - s0)) / (s2 - s0)
    rep.add(InequalityCheck(
        "G convex (2nd divided differences)", 0.0, float(np.min(dd)),
        budget=1e-9 * max(1.0, float(np.max(np.abs(dd))))))
    small, large = grid[0], grid[-1]
    rep.add(InequalityCheck(
        "G(s)/s -> 0 at 0", float(nf.G(small) / small), 1e-3,
        note=f"checked at s={small:g}"))
    rep.add(InequalityCheck(
        "G(s)/s -> inf at inf", 1e3, float(nf.G(large) / large),
        note=f"checked at s={large:g}"))
    rep.add(InequalityCheck(
        "G(s) <= s g(s)", float(np.max(G - grid * g)), 0.0, budget=1e-12))
    rep.add(InequalityCheck(
        "s g(s) <= G(2s)", float(np.max(grid * g - G2)), 0.0, budget=1e-12))
    with np.errstate(all="ignore"):
        ratio = grid * g / G
    rep.add(InequalityCheck(
        "g- <= s g/G", nf.g_minus, float(np.min(ratio)), budget=1e-9))
    rep.add(InequalityCheck(
        "s g/G <= g+", float(np.max(ratio)), nf.g_plus, budget=1e-9))

    # scaling inequalities on coarse (r, s) samples
    s_sub = grid[:: max(1, grid.size // 24)]
    worst_up = -math.inf
    worst_lo = -math.inf
    worst_shrink = -math.inf
    for r in (1.5, 2.0, 5.0, 20.0):
        Gr = np.asarray(nf.G(r * s_sub), float)
        Gs = np.asarray(nf.G(s_sub), float)
        m = np.isfinite(Gr) & np.isfinite(Gs)
        if math.isfinite(nf.g_plus):
            worst_up = max(worst_up, float(np.max(Gr[m] - r ** nf.g_plus * Gs[m])))
        worst_lo = max(worst_lo, float(np.max(r ** nf.g_minus * Gs[m] - Gr[m])))
    for r in (0.1, 0.5, 0.9):
        Gr = np.asarray(nf.G(r * s_sub), float)
        Gs = np.asarray(nf.G(s_sub), float)
        m = np.isfinite(Gr) & np.isfinite(Gs)
        worst_shrink = max(worst_shrink, float(np.max(Gr[m] - r * Gs[m])))
    scale = float(np.max(G))
    if math.isfinite(nf.g_plus):
        rep.add(InequalityCheck("G(rs) <= r^{g+} G(s), r>1", worst_up, 0.0,
                                budget=1e-9 * scale))
    rep.add(InequalityCheck("G(rs) >= r^{g-} G(s), r>1", worst_lo, 0.0,
                            budget=1e-9 * scale))
    rep.add(InequalityCheck("G(rs) <= r G(s), r<1", worst_shrink, 0.0,
                            budget=1e-9 * scale))
    rep.add(InequalityCheck(
        "conjugate density nondecreasing", 0.0,
        float(np.min(np.diff(np.asarray(conjugate_density(nf, np.geomspace(1e-3, 1e3, 40)))))),
        budget=1e-10))
    return rep
