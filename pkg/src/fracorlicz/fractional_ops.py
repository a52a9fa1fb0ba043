"""Discrete fractional integrals and derivatives of order 0 < alpha < 1.

Riemann-Liouville integrals use product integration: on every subinterval the
input is replaced by its linear interpolant and the moments of the weakly
singular kernel (x - tau)^(alpha-1) are integrated in closed form, so the
rule is exact for piecewise-linear inputs.  Caputo derivatives use the L1
scheme: the fractional integral of order 1 - alpha applied to the piecewise
constant slope, which is exact at the nodes for piecewise-linear inputs and
O(h^(2-alpha)) for smooth ones.  The Riemann-Liouville derivative is obtained
from the Caputo derivative through the order-(0,1) relation
D^a v = CD^a v + v(0) t^(-a)/Gamma(1-a) rather than by differentiating a
quadrature.

All operators are linear and act node-by-node through cached lower/upper
triangular convolution weights; evaluations across nodes are independent.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, GridMismatchError
from .gammafn import gamma
from .orlicz import GridFunction, _gridfunction_unchecked

__all__ = [
    "FracParams",
    "rl_integral_left",
    "rl_integral_right",
    "caputo_left",
    "caputo_right",
    "rl_derivative_left",
    "composition_residual",
    "caputo_left_matrix",
    "rl_left_matrix",
]


@dataclass(frozen=True)
class FracParams:
    alpha: float
    T: float
    n: int

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise DomainError("alpha must lie strictly in (0, 1)")
        if not (self.T > 0.0):
            raise DomainError("T must be positive")
        if self.n < 2:
            raise DomainError("n must be at least 2")

    @property
    def h(self) -> float:
        return self.T / self.n


def _require_match(v: GridFunction, p: FracParams) -> None:
    if v.n != p.n or not math.isclose(v.T, p.T, rel_tol=1e-12):
        raise GridMismatchError(
            f"grid (T={v.T}, n={v.n}) does not match params (T={p.T}, n={p.n})"
        )


@lru_cache(maxsize=64)
def _linear_moments(alpha: float, n: int):
    """Dimensionless product-integration weights for the left RL integral.

    For m = 1..n, with rho = r/h in [m-1, m]:
        A[m] = int rho^(alpha-1) (rho - (m-1)) drho   (weight of the far node)
        B[m] = int rho^(alpha-1) (m - rho) drho       (weight of the near node)
    Index 0 is unused.
    """
    m = np.arange(0, n + 2, dtype=float)
    pa = m ** alpha
    pa1 = m ** (alpha + 1.0)
    A = (pa1[1:] - pa1[:-1]) / (alpha + 1.0) - (m[:-1]) * (pa[1:] - pa[:-1]) / alpha
    B = (m[1:]) * (pa[1:] - pa[:-1]) / alpha - (pa1[1:] - pa1[:-1]) / (alpha + 1.0)
    return np.concatenate([[0.0], A]), np.concatenate([[0.0], B])


@lru_cache(maxsize=64)
def _l1_weights(beta: float, n: int):
    """b[m] = m^beta - (m-1)^beta for m = 1..n (index 0 unused)."""
    m = np.arange(0, n + 1, dtype=float)
    b = m ** beta
    return np.concatenate([[0.0], b[1:] - b[:-1]])


def rl_integral_left(v: GridFunction, p: FracParams) -> GridFunction:
    """Left Riemann-Liouville integral I^alpha v at the nodes."""
    _require_match(v, p)
    a = p.alpha
    A, B = _linear_moments(a, p.n)
    scale = p.h ** a / gamma(a)
    vals = v.values
    out = np.zeros(p.n + 1)
    # I_j = scale * sum_{m=1..j} (A[m] v_{j-m} + B[m] v_{j-m+1})
    convA = np.convolve(vals, A[: p.n + 1])[: p.n + 1]
    shiftedB = B[1: p.n + 2]
    convB = np.convolve(vals, shiftedB)[: p.n + 1]
    j = np.arange(p.n + 1)
    out = convA + convB - shiftedB[j] * vals[0]
    out[0] = 0.0
    return v.with_values(scale * out)


def rl_integral_right(v: GridFunction, p: FracParams) -> GridFunction:
    """Right Riemann-Liouville integral with kernel (tau - x)^(alpha-1)
    over [x, T]; assembled independently of the left rule (mirror moments)."""
    _require_match(v, p)
    a = p.alpha
    A, B = _linear_moments(a, p.n)
    scale = p.h ** a / gamma(a)
    vals = v.values
    rev = vals[::-1]
    # I_j = scale * sum_{m=1..n-j} (B[m] v_{j+m-1} + A[m] v_{j+m})
    convA = np.convolve(rev, A[: p.n + 1])[: p.n + 1][::-1]
    shiftedB = B[1: p.n + 2]
    convB = np.convolve(rev, shiftedB)[: p.n + 1][::-1]
    j = np.arange(p.n + 1)
    out = convA + convB - shiftedB[p.n - j] * vals[-1]
    out[-1] = 0.0
    return v.with_values(scale * out)


def caputo_left(v: GridFunction, p: FracParams) -> GridFunction:
    """Left Caputo derivative by the L1 scheme (fractional integral of order
    1 - alpha of the forward-difference slope).  Node 0 is 0 by convention.
    Constants are annihilated exactly: their slopes vanish identically."""
    _require_match(v, p)
    b = _l1_weights(1.0 - p.alpha, p.n)
    d = np.diff(v.values)  # h * slope_i
    scale = p.h ** (-p.alpha) / gamma(2.0 - p.alpha)
    # dv_j = scale * sum_{i=0..j-1} d_i b_{j-i}
    conv = np.convolve(d, b[1:])[: p.n]
    out = np.concatenate([[0.0], scale * conv])
    return v.with_values(out)


def caputo_right(v: GridFunction, p: FracParams) -> GridFunction:
    """Right Caputo derivative: minus the right fractional integral of order
    1 - alpha of the slope.  Node n is 0 by convention."""
    _require_match(v, p)
    b = _l1_weights(1.0 - p.alpha, p.n)
    d = np.diff(v.values)[::-1]
    scale = p.h ** (-p.alpha) / gamma(2.0 - p.alpha)
    conv = np.convolve(d, b[1:])[: p.n]
    out = np.concatenate([[0.0], -scale * conv])[::-1].copy()
    return v.with_values(out)


def rl_derivative_left(v: GridFunction, p: FracParams) -> GridFunction:
    """Left Riemann-Liouville derivative via the Caputo relation
    D^a v = CD^a v + v(0) t^(-a) / Gamma(1-a).

    When v(0) != 0 the value at t = 0 is singular: node 0 carries +/-inf as a
    non-finite flag and the usable values start at t_1.
    """
    _require_match(v, p)
    dv = caputo_left(v, p).values.copy()
    v0 = v.values[0]
    if v0 != 0.0:
        t = np.linspace(0.0, p.T, p.n + 1)
        dv[1:] += v0 * t[1:] ** (-p.alpha) / gamma(1.0 - p.alpha)
        dv[0] = math.inf * np.sign(v0)
        return _gridfunction_unchecked(v.T, v.n, dv)
    return v.with_values(dv)


def composition_residual(v: GridFunction, p: FracParams) -> float:
    """Max-node residual of the composition identity
    I^alpha (CD^alpha v) = v - v(0)."""
    recomposed = rl_integral_left(caputo_left(v, p), p)
    return float(np.max(np.abs(recomposed.values - (v.values - v.values[0]))))


# ---------------------------------------------------------------------------
# dense operator matrices (for weak forms / basis assembly)

@lru_cache(maxsize=32)
def _caputo_left_matrix(alpha: float, T: float, n: int) -> np.ndarray:
    b = _l1_weights(1.0 - alpha, n)
    scale = (T / n) ** (-alpha) / gamma(2.0 - alpha)
    C = np.zeros((n + 1, n + 1))
    j = np.arange(1, n + 1)
    for k in range(0, n + 1):
        rows = j[j >= max(k, 1)]
        if k == 0:
            C[rows, 0] = -b[rows]
        else:
            C[rows, k] = b[rows - k + 1] - b[rows - k]
            C[k, k] = b[1]
    return scale * C


def caputo_left_matrix(p: FracParams) -> np.ndarray:
    """Dense lower-triangular matrix D with (D v)_j = (CD^alpha v)(t_j)."""
    return _caputo_left_matrix(p.alpha, p.T, p.n)


@lru_cache(maxsize=32)
def _rl_left_matrix(alpha: float, T: float, n: int) -> np.ndarray:
    A, B = _linear_moments(alpha, n)
    scale = (T / n) ** alpha / gamma(alpha)
    L = np.zeros((n + 1, n + 1))
    for jj in range(1, n + 1):
        m = np.arange(1, jj + 1)
        L[jj, jj - m] += A[m]
        L[jj, jj - m + 1] += B[m]
    return scale * L


def rl_left_matrix(p: FracParams) -> np.ndarray:
    """Dense lower-triangular matrix for the left RL integral."""
    return _rl_left_matrix(p.alpha, p.T, p.n)
