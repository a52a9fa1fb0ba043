"""Modulars and Luxemburg norms of grid functions on [0, T].

A GridFunction holds nodal values on the uniform grid t_j = j T / n and is
interpreted piecewise-linearly between nodes.  The modular is the composite
trapezoid value of G(|v|), so the pair (modular, Luxemburg gauge) is a true
modular/norm pair for the discrete trapezoid measure: all modular-norm
relations hold exactly up to the bisection tolerance.

File format: two columns (t, value), comment header ``# T=<T> n=<n>``.
All operations are pure; GridFunction is frozen and safe to share.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GridMismatchError, UnboundedNormError
from .nfunction import NFunction, conjugate
from .reports import BISECTION_BUDGET_REL, BracketReport, InequalityCheck

DEFAULT_NORM_TOL = 1e-10


@dataclass(frozen=True)
class GridFunction:
    T: float
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.T > 0):
            raise DomainError("GridFunction requires T > 0")
        if self.n < 2:
            raise DomainError("GridFunction requires n >= 2")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.n + 1,):
            raise DomainError(
                f"GridFunction needs exactly n+1={self.n + 1} values, got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("GridFunction values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def h(self) -> float:
        return self.T / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.n + 1)

    def same_grid(self, other) -> bool:
        return self.n == other.n and math.isclose(self.T, other.T, rel_tol=1e-12)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.T, self.n, np.asarray(values, float))

    def __add__(self, other):
        require_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        require_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __rmul__(self, scalar):
        return self.with_values(float(scalar) * self.values)


def require_same_grid(a, b) -> None:
    if not a.same_grid(b):
        raise GridMismatchError(
            f"grids differ: (T={a.T}, n={a.n}) vs (T={b.T}, n={b.n})"
        )


def _gridfunction_unchecked(T: float, n: int, values) -> GridFunction:
    """Internal: build a GridFunction without the finiteness check (used for
    results that legitimately carry a singular node flagged as +/-inf)."""
    out = GridFunction.__new__(GridFunction)
    object.__setattr__(out, "T", float(T))
    object.__setattr__(out, "n", int(n))
    vals = np.asarray(values, dtype=float).copy()
    vals.flags.writeable = False
    object.__setattr__(out, "values", vals)
    return out


def constant_grid(T: float, n: int, c: float) -> GridFunction:
    return GridFunction(T, n, np.full(n + 1, float(c)))


def sample(T: float, n: int, f) -> GridFunction:
    """GridFunction from nodal samples of a vectorized callable."""
    t = np.linspace(0.0, T, n + 1)
    return GridFunction(T, n, np.asarray(f(t), float))


def trapezoid_weights(T: float, n: int) -> np.ndarray:
    w = np.full(n + 1, T / n)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def save_gridfunction(v: GridFunction, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# T={v.T!r} n={v.n}\n")
        for t, x in zip(v.nodes, v.values):
            fh.write(f"{t!r} {x!r}\n")


def load_gridfunction(path) -> GridFunction:
    T = None
    n = None
    vals = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("T="):
                        T = float(tok[2:])
                    elif tok.startswith("n="):
                        n = int(tok[2:])
                continue
            parts = line.split()
            if len(parts) < 2:
                raise DomainError(f"malformed grid-function line: {line!r}")
            vals.append(float(parts[1]))
    if T is None or n is None:
        raise DomainError(f"{path}: missing '# T=<T> n=<n>' header")
    if len(vals) != n + 1:
        raise DomainError(f"{path}: expected {n + 1} rows, found {len(vals)}")
    return GridFunction(T, n, np.asarray(vals))


# ---------------------------------------------------------------------------
# modular and norm

def modular(nf: NFunction, v: GridFunction) -> float:
    """Composite-trapezoid value of the modular integral of G(|v|)."""
    with np.errstate(over="ignore"):
        vals = np.asarray(nf.G(np.abs(v.values)), float)
    return float(trapezoid_weights(v.T, v.n) @ vals)


def luxemburg_norm(nf: NFunction, v: GridFunction, tol: float = DEFAULT_NORM_TOL) -> float:
    """Luxemburg gauge inf{gamma > 0 : modular(v / gamma) <= 1}.

    Bisection on gamma exploits that gamma -> modular(v/gamma) is
    nonincreasing; the initial bracket [1e-3 m, 1e3 m] around m = max|v| is
    expanded geometrically when needed.  The zero function has norm 0.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    m = float(np.max(np.abs(v.values)))
    if m == 0.0:
        return 0.0

    def rho(gamma: float) -> float:
        return modular(nf, v.with_values(v.values / gamma))

    lo, hi = 1e-3 * m, 1e3 * m
    for _ in range(200):
        r = rho(hi)
        if math.isfinite(r) and r <= 1.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise UnboundedNormError("modular stayed above 1 at every bracket")
    for _ in range(200):
        if rho(lo) > 1.0:
            break
        hi, lo = lo, 0.5 * lo
    else:
        # modular(v/gamma) <= 1 down to a vanishing gamma: norm is 0
        return 0.0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        r = rho(mid)
        if math.isfinite(r) and r <= 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def holder_pairing_check(nf: NFunction, v: GridFunction, u: GridFunction,
                         nf_conj: NFunction = None,
                         tol: float = DEFAULT_NORM_TOL):
    """Orlicz Hoelder pairing data: lhs = |integral of v u|,
    rhs = ||v||_G ||u||_Gbar, and their ratio (0 when both vanish).

    Raises DomainError on the inconsistent case rhs = 0 < lhs.
    """
    require_same_grid(v, u)
    if nf_conj is None:
        nf_conj = conjugate(nf)
    w = trapezoid_weights(v.T, v.n)
    lhs = abs(float(w @ (v.values * u.values)))
    rhs = luxemburg_norm(nf, v, tol) * luxemburg_norm(nf_conj, u, tol)
    if rhs == 0.0:
        if lhs > 1e-14 * max(1.0, float(np.max(np.abs(v.values))) ** 2):
            raise DomainError("Hoelder pairing inconsistency: zero norms, nonzero pairing")
        return lhs, rhs, 0.0
    return lhs, rhs, lhs / rhs


def estimate_holder_constant(nf: NFunction, T: float, n: int, trials: int = 1000,
                             seed: int = 0, nf_conj: NFunction = None) -> float:
    """Empirical Hoelder constant: max pairing ratio over random pairs,
    including the aligned pair u = g(|v|) sign(v) that saturates Young's
    inequality.  Approaches the true constant from below (<= 2 classically)."""
    if nf_conj is None:
        nf_conj = conjugate(nf)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(trials):
        vals = rng.uniform(-1.0, 1.0, n + 1) * rng.uniform(0.1, 10.0)
        v = GridFunction(T, n, vals)
        if k % 3 == 0:
            u = v
        elif k % 3 == 1:
            u = GridFunction(T, n, np.sign(vals) * np.asarray(nf.g(np.abs(vals))))
        else:
            u = GridFunction(T, n, rng.uniform(-1.0, 1.0, n + 1) * rng.uniform(0.1, 10.0))
        _, _, ratio = holder_pairing_check(nf, v, u, nf_conj)
        worst = max(worst, ratio)
    return worst


def verify_norm_modular_relations(nf: NFunction, v: GridFunction,
                                  tol: float = DEFAULT_NORM_TOL) -> BracketReport:
    """Check the norm-modular bracket: for ||v|| > 1 the modular lies in
    [||v||^{g-}, ||v||^{g+}]; for ||v|| < 1 the exponents swap.  Violations
    are reported (with slack), never raised."""
    norm = luxemburg_norm(nf, v, tol)
    rho = modular(nf, v)
    budget = BISECTION_BUDGET_REL * max(1.0, rho, norm)
    if norm == 0.0:
        return BracketReport("norm-modular", 0.0, rho, "zero", 0.0, 0.0, budget)
    if abs(norm - 1.0) <= 10.0 * tol:
        return BracketReport("norm-modular", norm, rho, "unit", 1.0, 1.0,
                             budget=max(budget, 1e-4))
    if norm > 1.0:
        lower, upper = norm ** nf.g_minus, norm ** nf.g_plus
        branch = "gt1"
    else:
        lower, upper = norm ** nf.g_plus, norm ** nf.g_minus
        branch = "lt1"
    budget = BISECTION_BUDGET_REL * max(1.0, rho, upper if math.isfinite(upper) else 0.0)
    return BracketReport("norm-modular", norm, rho, branch, lower, upper, budget)


def norm_attainment_check(nf: NFunction, v: GridFunction,
                          tol: float = DEFAULT_NORM_TOL) -> InequalityCheck:
    """At gamma* = ||v|| > 0 the modular of v/gamma* equals 1 (the infimum is
    attained by continuity of G)."""
    gamma = luxemburg_norm(nf, v, tol)
    if gamma == 0.0:
        return InequalityCheck("modular at gauge", 0.0, 0.0, budget=tol)
    rho = modular(nf, v.with_values(v.values / gamma))
    return InequalityCheck("modular at gauge", abs(rho - 1.0), 0.0,
                           budget=1e4 * tol, note=f"gamma={gamma:g}")
