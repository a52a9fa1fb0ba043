"""Energy functional, superlinearity checks and mountain-pass search for the
fractional boundary value problem

    CD_right^alpha( g( CD_left^alpha v ) ) = a(t, v)  on [0, T],
    v(0) = v(T) = 0.

Only the left-sided operator is ever discretized: the weak form pairs
g(CD v) with CD phi for interior hat test functions phi_j, so the right-sided
operator in the strong form stays a derived quantity.  Boundary conditions
are imposed strongly (nodes 0 and n pinned at zero).

The mountain-pass search is a path-based descent: the segment from 0 to a
certified downhill state e is discretized into path states, the energy
maximum along the path takes a metric-gradient descent step with Armijo
backtracking, and the path is re-splined to even arclength.  Near a critical
point a Newton polish on the weak-form residual drives the dual-norm residual
to the requested tolerance.  Path states update from a consistent snapshot
per iteration; gradient assembly per state is independent.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ARViolationError,
    DegenerateDescentError,
    DomainError,
    GeometryError,
    NonConvergenceError,
)
from .fractional_ops import FracParams, caputo_left_matrix
from .gammafn import gamma
from .nfunction import NFunction, eval_Gbar
from .orlicz import DEFAULT_NORM_TOL, GridFunction, luxemburg_norm, trapezoid_weights
from .reports import BISECTION_BUDGET_REL, CheckSet, InequalityCheck
from .space import (
    HOLDER_CONSTANT,
    SpaceElement,
    make_element,
    modular_O0,
    random_o0_element,
    seminorm,
)

__all__ = [
    "Nonlinearity",
    "power_nonlinearity",
    "perturbed_power_nonlinearity",
    "nonlinearity_from_spec",
    "MPConfig",
    "MPResult",
    "GeometryCertificate",
    "energy",
    "gradient",
    "weak_residual",
    "check_AR",
    "lemma42_check",
    "lemma43_check",
    "ps_coercivity_check",
    "certify_geometry",
    "mountain_pass_solve",
]


@dataclass
class Nonlinearity:
    """Right-hand side a(t, v), its primitive A(t, v) and the superlinearity
    exponent mu.  ``a_v`` (partial of a in v) is optional and only used by
    the Newton polish; a central difference fills in when absent."""

    name: str
    a: callable
    A: callable
    mu: float
    a_v: callable = None
    params: dict = field(default_factory=dict)

    def spec(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}:{inner}" if inner else self.name

    def da_dv(self, t, v, eps: float = 1e-6):
        if self.a_v is not None:
            return self.a_v(t, v)
        return (self.a(t, v + eps) - self.a(t, v - eps)) / (2.0 * eps)


def power_nonlinearity(mu: float) -> Nonlinearity:
    """a(t, v) = |v|^(mu-2) v with primitive |v|^mu / mu (equality case of
    the superlinearity condition)."""
    if mu <= 1.0:
        raise DomainError("power nonlinearity requires mu > 1")
    return Nonlinearity(
        name="power",
        a=lambda t, v: np.abs(v) ** (mu - 2.0) * v,
        A=lambda t, v: np.abs(v) ** mu / mu,
        mu=mu,
        a_v=lambda t, v: (mu - 1.0) * np.abs(v) ** (mu - 2.0),
        params={"mu": mu},
    )


def perturbed_power_nonlinearity(mu: float) -> Nonlinearity:
    """a(t, v) = |v|^(mu-2) v (1 + t/2): a t-modulated power family.  The
    modulation scales out of the superlinearity ratio, so it still sits on
    the equality boundary."""
    if mu <= 1.0:
        raise DomainError("perturbed power nonlinearity requires mu > 1")
    return Nonlinearity(
        name="perturbed_power",
        a=lambda t, v: np.abs(v) ** (mu - 2.0) * v * (1.0 + 0.5 * t),
        A=lambda t, v: np.abs(v) ** mu * (1.0 + 0.5 * t) / mu,
        mu=mu,
        a_v=lambda t, v: (mu - 1.0) * np.abs(v) ** (mu - 2.0) * (1.0 + 0.5 * t),
        params={"mu": mu},
    )


_NONLINEARITIES = {
    "power": power_nonlinearity,
    "perturbed_power": perturbed_power_nonlinearity,
}


def nonlinearity_from_spec(text: str) -> Nonlinearity:
    head, _, rest = text.strip().partition(":")
    if head not in _NONLINEARITIES:
        raise DomainError(f"unknown nonlinearity family '{head}'")
    kwargs = {}
    if rest:
        for item in rest.split(","):
            k, _, v = item.partition("=")
            kwargs[k.strip()] = float(v)
    return _NONLINEARITIES[head](**kwargs)


def _odd_g(nf: NFunction, s):
    """Odd extension of the density: sign(s) g(|s|)."""
    s = np.asarray(s, float)
    return np.sign(s) * np.asarray(nf.g(np.abs(s)), float)


# ---------------------------------------------------------------------------
# cached per-grid assembly

class _Workspace:
    """Per-(N-function, grid) assembly shared by energy/gradient/solver:
    Caputo matrix, trapezoid weights, hat-basis seminorms and the quadratic
    seminorm-surrogate metric on interior nodes."""

    def __init__(self, nf: NFunction, p: FracParams):
        self.nf = nf
        self.p = p
        self.D = caputo_left_matrix(p)
        self.w = trapezoid_weights(p.T, p.n)
        self.t = np.linspace(0.0, p.T, p.n + 1)
        self.interior = slice(1, p.n)
        WD = self.w[:, None] * self.D
        self.S = (self.D.T @ WD)[self.interior, self.interior]
        self.Sinv = np.linalg.inv(self.S)
        sems = []
        for j in range(1, p.n):
            dphi = GridFunction(p.T, p.n, self.D[:, j])
            sems.append(luxemburg_norm(nf, dphi, DEFAULT_NORM_TOL))
        self.basis_seminorms = np.asarray(sems)


_WORKSPACES: dict = {}


def _workspace(nf: NFunction, p: FracParams) -> _Workspace:
    key = (id(nf), p.alpha, p.T, p.n)
    ws = _WORKSPACES.get(key)
    if ws is None:
        if len(_WORKSPACES) > 32:
            _WORKSPACES.clear()
        ws = _Workspace(nf, p)
        _WORKSPACES[key] = ws
    return ws


# ---------------------------------------------------------------------------
# energy, gradient, residual

def energy(nf: NFunction, e: SpaceElement, nl: Nonlinearity) -> float:
    """J(v) = integral of G(|CD v|) - integral of A(t, v) (trapezoid)."""
    w = trapezoid_weights(e.T, e.n)
    t = e.v.nodes
    with np.errstate(over="ignore"):
        bulk = np.asarray(nf.G(np.abs(e.dv.values)), float)
        drive = np.asarray(nl.A(t, e.v.values), float)
    return float(w @ bulk - w @ drive)


def gradient(nf: NFunction, e: SpaceElement, nl: Nonlinearity) -> np.ndarray:
    """Pairings <J'(v), phi_j> for every interior hat phi_j:
    integral of g(CD v) CD phi_j minus integral of a(t, v) phi_j."""
    if not e.in_O0:
        raise DomainError("gradient requires an O0 element")
    ws = _workspace(nf, e.params)
    gvals = _odd_g(nf, e.dv.values)
    lhs = ws.D.T @ (ws.w * gvals)
    rhs = ws.w * np.asarray(nl.a(ws.t, e.v.values), float)
    return (lhs - rhs)[ws.interior]


def weak_residual(nf: NFunction, e: SpaceElement, nl: Nonlinearity) -> float:
    """Discrete dual norm of J'(v): the largest pairing against a
    unit-seminorm basis direction."""
    ws = _workspace(nf, e.params)
    grad = gradient(nf, e, nl)
    return float(np.max(np.abs(grad) / ws.basis_seminorms))


# ---------------------------------------------------------------------------
# assumption checks

def check_AR(nl: Nonlinearity, T: float = 1.0, v_max: float = 10.0,
             nf: NFunction = None, samples: int = 40,
             tol: float = 1e-9) -> CheckSet:
    """Sampled superlinearity (Ambrosetti-Rabinowitz) check:
    0 < mu A(t, v) <= v a(t, v) on a (t, v) box with v != 0, plus the
    exponent gap mu > k against the active N-function's Delta_2 constant."""
    out = CheckSet(name=f"superlinearity[{nl.spec()}]")
    t = np.linspace(0.0, T, samples)
    mags = np.concatenate([np.geomspace(1e-3, v_max, samples),
                           np.linspace(1e-2, v_max, samples)])
    v = np.concatenate([mags, -mags])
    tt, vv = np.meshgrid(t, v, indexing="ij")
    Avals = np.asarray(nl.A(tt, vv), float)
    avals = np.asarray(nl.a(tt, vv), float)
    gap = vv * avals - nl.mu * Avals
    scale = float(np.max(np.abs(vv * avals))) or 1.0
    out.add(InequalityCheck("mu A <= v a", float(np.max(-gap)), 0.0,
                            budget=tol * scale))
    out.add(InequalityCheck("A > 0 off v=0", 0.0, float(np.min(Avals)),
                            budget=0.0))
    if nf is not None:
        out.add(InequalityCheck("mu > delta2 k", nf.delta2_k, nl.mu, budget=0.0,
                                note=f"k={nf.delta2_k:g}, mu={nl.mu:g}"))
    return out


def lemma42_check(nl: Nonlinearity, T: float = 1.0, v_max: float = 5.0,
                  samples: int = 60, tol: float = 1e-9) -> CheckSet:
    """Scaling bounds for the primitive: A(t, v) <= A(t, v/|v|) |v|^mu for
    0 < |v| <= 1 and the reversed inequality for |v| >= 1."""
    out = CheckSet(name=f"primitive-scaling[{nl.spec()}]")
    t = np.linspace(0.0, T, samples)
    small = np.concatenate([np.geomspace(1e-3, 1.0, samples),
                            -np.geomspace(1e-3, 1.0, samples)])
    large = np.concatenate([np.linspace(1.0, v_max, samples),
                            -np.linspace(1.0, v_max, samples)])
    for label, vs, direction in (("|v|<=1", small, +1), ("|v|>=1", large, -1)):
        tt, vv = np.meshgrid(t, vs, indexing="ij")
        unit = np.sign(vv)
        bound = np.asarray(nl.A(tt, unit), float) * np.abs(vv) ** nl.mu
        Avals = np.asarray(nl.A(tt, vv), float)
        gap = direction * (bound - Avals)
        scale = float(np.max(np.abs(bound))) or 1.0
        out.add(InequalityCheck(f"primitive scaling {label}",
                                float(np.max(-gap)), 0.0, budget=tol * scale))
    return out


def lemma43_check(nf: NFunction, e: SpaceElement, nl: Nonlinearity,
                  xi_list, samples: int = 200) -> CheckSet:
    """Coercive lower bound for the driving term: with
    l = min{A(t, v) : t in [0, T], |v| = 1},
    integral of A(t, xi v) >= l |xi|^mu integral of |v|^mu - T l."""
    t_samples = np.linspace(0.0, e.T, samples)
    ell = float(min(np.min(nl.A(t_samples, 1.0)), np.min(nl.A(t_samples, -1.0))))
    w = trapezoid_weights(e.T, e.n)
    t = e.v.nodes
    mu_mass = float(w @ np.abs(e.v.values) ** nl.mu)
    out = CheckSet(name=f"drive-coercivity[{nl.spec()}]")
    out.notes.append(f"l={ell!r}")
    for xi in xi_list:
        if xi == 0:
            raise DomainError("xi must be nonzero")
        lhs_int = float(w @ np.asarray(nl.A(t, xi * e.v.values), float))
        rhs = ell * abs(xi) ** nl.mu * mu_mass - e.T * ell
        out.add(InequalityCheck(f"xi={xi:g}", rhs, lhs_int,
                                budget=1e-9 * max(1.0, abs(rhs))))
    return out


def ps_coercivity_check(nf: NFunction, e: SpaceElement, nl: Nonlinearity,
                        tol: float = DEFAULT_NORM_TOL) -> InequalityCheck:
    """Palais-Smale coercivity estimate:
    J(v) - (1/mu) <J'(v), v> >= (1 - k/mu) [v]^{g_pm}, with the exponent
    branch that is a valid lower bound for the derivative modular
    ([v] > 1 -> g-, [v] < 1 -> g+); both branch values are recorded."""
    w = trapezoid_weights(e.T, e.n)
    t = e.v.nodes
    pair = float(
        w @ (_odd_g(nf, e.dv.values) * e.dv.values)
        - w @ (np.asarray(nl.a(t, e.v.values), float) * e.v.values)
    )
    lhs = energy(nf, e, nl) - pair / nl.mu
    sem = seminorm(nf, e, tol)
    k = nf.delta2_k
    coef = 1.0 - k / nl.mu
    lower_minus = coef * sem ** nf.g_minus
    lower_plus = coef * sem ** nf.g_plus
    rhs = lower_minus if sem > 1.0 else lower_plus
    return InequalityCheck(
        "ps-coercivity", rhs, lhs,
        budget=BISECTION_BUDGET_REL * max(1.0, abs(lhs), abs(rhs)),
        note=f"[v]={sem:.6g}; branch g-={lower_minus:.6g}, g+={lower_plus:.6g}")



# ---------------------------------------------------------------------------
# mountain-pass geometry and search

@dataclass
class GeometryCertificate:
    R: float
    beta: float
    e_scale: float
    e: GridFunction
    drive_bound: float      # Q with  integral of A <= Q [v]^mu near 0
    embed_const: float      # M_T with  sup|v| <= M_T [v]
    small_ball: float       # C1 = 1/M_T: seminorm radius keeping sup|v| <= 1
    sphere_min: float
    sphere_trials: int

    def row(self) -> dict:
        return {
            "R": self.R, "beta": self.beta, "e_scale": self.e_scale,
            "drive_bound": self.drive_bound, "embed_const": self.embed_const,
            "sphere_min": self.sphere_min,
        }


@dataclass
class MPConfig:
    tol: float = 1e-6
    max_iters: int = 500
    path_states: int = 20
    seed: int = 0
    armijo: float = 1e-4
    max_backtracks: int = 50
    polish_every: int = 5
    collapse_frac: float = 0.1
    sphere_trials: int = 200
    xi_cap: float = 2.0 ** 40
    force: bool = False


@dataclass
class MPResult:
    solution: SpaceElement
    energy: float
    weak_residual: float
    geometry: GeometryCertificate
    iterations: int
    history: list = field(default_factory=list, repr=False)


def certify_geometry(nf: NFunction, nl: Nonlinearity, p: FracParams,
                     cfg: MPConfig = None, holder_C: float = None) -> GeometryCertificate:
    """Certify the two mountain-pass geometry conditions.

    Ridge: with M_T = C (Gbar(1))^{1/g+} T^{a/g+} / Gamma(a+1) the embedding
    gives sup|v| <= M_T [v]; for [v] <= C1 = 1/M_T the primitive bound yields
    integral of A <= Q [v]^mu with Q = (max_{|s|=1} A) T M_T^mu, hence
    J >= [v]^{g+} - Q [v]^mu on [v] = R < min{1, C1, (1/Q)^{1/(mu-g+)}} and
    beta = R^{g+} - Q R^mu > 0.  The sphere minimum is sampled empirically.

    Downhill state: e = xi v0 with J(e) <= 0, found by doubling xi on a fixed
    smooth profile (terminates because mu > g+)."""
    cfg = cfg or MPConfig()
    C = HOLDER_CONSTANT if holder_C is None else holder_C
    if nl.mu <= nf.g_plus:
        raise GeometryError(
            f"superlinearity exponent mu={nl.mu:g} must exceed g+={nf.g_plus:g}")
    M_T = C * eval_Gbar(nf, 1.0) ** (1.0 / nf.g_plus) * p.T ** (p.alpha / nf.g_plus) \
        / gamma(p.alpha + 1.0)
    C1 = 1.0 / M_T
    t_samples = np.linspace(0.0, p.T, 200)
    amax = float(max(np.max(nl.A(t_samples, 1.0)), np.max(nl.A(t_samples, -1.0))))
    if amax <= 0.0:
        raise GeometryError("primitive A vanishes on |v|=1: no mountain ridge")
    Q = amax * p.T * M_T ** nl.mu
    R = 0.9 * min(1.0, C1, (1.0 / Q) ** (1.0 / (nl.mu - nf.g_plus)))
    beta = R ** nf.g_plus - Q * R ** nl.mu
    if beta <= 0.0:
        raise GeometryError(f"ridge height beta={beta:g} <= 0 at R={R:g}")

    # empirical sphere minimum
    sphere_min = math.inf
    for k in range(cfg.sphere_trials):
        e = random_o0_element(p, np.random.default_rng((cfg.seed, k)),
                              target_seminorm=R, nf=nf)
        sphere_min = min(sphere_min, energy(nf, e, nl))
    budget = BISECTION_BUDGET_REL * max(1.0, abs(beta))
    if sphere_min < beta - budget:
        raise GeometryError(
            f"sampled sphere minimum {sphere_min:g} fell below beta={beta:g}")

    # downhill state by doubling
    bump = np.sin(np.pi * np.linspace(0.0, 1.0, p.n + 1))
    bump[0] = bump[-1] = 0.0
    profile = GridFunction(p.T, p.n, bump)
    base = make_element(profile, p, in_O0=True)
    s0 = seminorm(nf, base)
    v0 = make_element(GridFunction(p.T, p.n, profile.values / s0), p, in_O0=True)
    xi = max(1.0, 2.0 * R)
    while xi < cfg.xi_cap:
        cand = make_element(GridFunction(p.T, p.n, xi * v0.v.values), p, in_O0=True)
        if energy(nf, cand, nl) <= 0.0:
            return GeometryCertificate(
                R=R, beta=beta, e_scale=xi, e=cand.v, drive_bound=Q,
                embed_const=M_T, small_ball=C1, sphere_min=sphere_min,
                sphere_trials=cfg.sphere_trials)
        xi *= 2.0
    raise GeometryError(
        "no downhill state below the energy sea level before the xi cap; "
        "mu may be too close to g+")


def _respline(states: np.ndarray, metric) -> np.ndarray:
    """Re-parametrize the polygonal path to even arclength in the metric."""
    m = states.shape[0] - 1
    seglen = np.array([metric(states[i + 1] - states[i]) for i in range(m)])
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    total = cum[-1]
    if total <= 0:
        return states
    targets = np.linspace(0.0, total, m + 1)
    out = np.empty_like(states)
    out[0] = states[0]
    out[-1] = states[-1]
    for i in range(1, m):
        s = targets[i]
        k = int(np.searchsorted(cum, s, side="right") - 1)
        k = min(max(k, 0), m - 1)
        frac = (s - cum[k]) / seglen[k] if seglen[k] > 0 else 0.0
        out[i] = (1.0 - frac) * states[k] + frac * states[k + 1]
    return out


def mountain_pass_solve(nf: NFunction, nl: Nonlinearity, p: FracParams,
                        cfg: MPConfig = None) -> MPResult:
    """Path-based mountain-pass descent with Newton polish.

    Returns an MPResult whose candidate satisfies weak_residual <= cfg.tol,
    energy >= beta - budget and seminorm >= R (beyond the ridge).  Raises
    ARViolationError / GeometryError when the preconditions fail,
    DegenerateDescentError when the iteration collapses toward zero, and
    NonConvergenceError (carrying the best iterate) at the iteration cap."""
    cfg = cfg or MPConfig()
    ar = check_AR(nl, T=p.T, nf=nf)
    if not ar.ok and not cfg.force:
        bad = [c.name for c in ar.checks if not c.ok]
        raise ARViolationError(f"nonlinearity rejected by {bad}")
    cert = certify_geometry(nf, nl, p, cfg)
    ws = _workspace(nf, p)
    interior = ws.interior

    def metric(delta_values):
        d = delta_values[interior]
        return math.sqrt(max(float(d @ (ws.S @ d)), 0.0))

    def J_of(values):
        return energy(nf, make_element(GridFunction(p.T, p.n, values), p, True), nl)

    m = cfg.path_states
    lam = np.linspace(0.0, 1.0, m + 1)
    states = lam[:, None] * cert.e.values[None, :]
    history = []
    step = 1.0
    best = None
    best_res = math.inf

    for it in range(1, cfg.max_iters + 1):
        energies = np.array([J_of(s) for s in states])
        kmax = int(np.argmax(energies))
        elem = make_element(GridFunction(p.T, p.n, states[kmax]), p, True)
        res = weak_residual(nf, elem, nl)
        history.append({"iter": it, "energy": energies[kmax], "residual": res,
                        "step": step})
        if res < best_res:
            best, best_res = elem, res
        if res <= cfg.tol:
            return _finalize(nf, nl, elem, cert, it, history, cfg)
        sem = seminorm(nf, elem)
        if sem < cfg.collapse_frac * cert.R:
            raise DegenerateDescentError(
                f"path maximum collapsed to seminorm {sem:g} < R/10")

        if it % cfg.polish_every == 0:
            polished = _newton_polish(nf, nl, elem, ws, cfg)
            if polished is not None:
                pres = weak_residual(nf, polished, nl)
                psem = seminorm(nf, polished)
                if pres <= cfg.tol and psem >= cfg.collapse_frac * cert.R:
                    history.append({"iter": it, "energy": energy(nf, polished, nl),
                                    "residual": pres, "step": 0.0})
                    return _finalize(nf, nl, polished, cert, it, history, cfg)

        # metric-gradient descent on the maximal state
        grad = gradient(nf, elem, nl)
        d_int = -(ws.Sinv @ grad)
        slope = float(grad @ d_int)
        if slope >= 0.0:
            d_int = -grad
            slope = -float(grad @ grad)
        direction = np.zeros(p.n + 1)
        direction[interior] = d_int
        J0 = energies[kmax]
        s = min(2.0 * step, 1.0e3)
        accepted = False
        for _ in range(cfg.max_backtracks):
            trial = states[kmax] + s * direction
            if J_of(trial) <= J0 + cfg.armijo * s * slope:
                accepted = True
                break
            s *= 0.5
        if accepted:
            states[kmax] = trial
            step = s
        else:
            step = max(step * 0.5, 1e-12)

        resplined = _respline(states, metric)
        new_max = max(J_of(sv) for sv in resplined)
        if new_max <= max(J0, float(np.max(energies))) + 1e-12:
            states = resplined

    raise NonConvergenceError(
        f"mountain-pass residual {best_res:g} above tol after {cfg.max_iters} iterations",
        best=best)


def _newton_polish(nf: NFunction, nl: Nonlinearity, elem: SpaceElement,
                   ws: _Workspace, cfg: MPConfig):
    """Newton iteration on the interior weak-form residual from the given
    state; returns the polished element or None when it fails to settle."""
    p = elem.params
    interior = ws.interior
    v = elem.v.values.copy()
    scale0 = float(np.max(np.abs(v))) or 1.0
    for _ in range(40):
        e = make_element(GridFunction(p.T, p.n, v), p, True)
        F = gradient(nf, e, nl)
        dv = e.dv.values
        with np.errstate(all="ignore"):
            gp = np.asarray(nf.g_prime(np.abs(dv)), float) if nf.g_prime \
                else (np.asarray(nf.g(np.abs(dv) + 1e-7), float)
                      - np.asarray(nf.g(np.maximum(np.abs(dv) - 1e-7, 0.0)), float)) / 2e-7
        gp = np.where(np.isfinite(gp), gp, 0.0)
        av = np.asarray(nl.da_dv(ws.t, v), float)
        bulk = (ws.D.T @ (ws.w[:, None] * gp[:, None] * ws.D))
        Jmat = bulk[interior, interior] - np.diag((ws.w * av)[interior])
        try:
            delta = np.linalg.solve(Jmat, -F)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta)):
            return None
        v[interior] += delta
        if np.max(np.abs(v)) > 1e6 * scale0:
            return None
        if np.max(np.abs(delta)) <= 1e-14 * max(1.0, np.max(np.abs(v))):
            break
    out = make_element(GridFunction(p.T, p.n, v), p, True)
    return out


def _finalize(nf, nl, elem, cert, iterations, history, cfg) -> MPResult:
    # sign-symmetric problems admit the pair +/-v; return the representative
    # with nonnegative mean, but only when the flip verifies as critical too
    w = trapezoid_weights(elem.T, elem.n)
    if float(w @ elem.v.values) < 0.0:
        flipped = make_element(
            GridFunction(elem.T, elem.n, -elem.v.values), elem.params, True)
        if weak_residual(nf, flipped, nl) <= cfg.tol:
            elem = flipped
    en = energy(nf, elem, nl)
    res = weak_residual(nf, elem, nl)
    sem = seminorm(nf, elem)
    budget = BISECTION_BUDGET_REL * max(1.0, abs(cert.beta))
    if sem < cfg.collapse_frac * cert.R:
        raise DegenerateDescentError(
            f"candidate seminorm {sem:g} below the ridge radius guard")
    if en < cert.beta - budget:
        raise DegenerateDescentError(
            f"candidate energy {en:g} below the certified ridge beta={cert.beta:g}")
    return MPResult(solution=elem, energy=en, weak_residual=res,
                    geometry=cert, iterations=iterations, history=history)
