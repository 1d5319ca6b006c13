"""Zonal (azimuthal-only) function algebra on S^p x S^q.

Functions of the two azimuthal angles (tau, rho) only are spanned by

    phi_{jk}(tau, rho) = G_j^{lam_p}(cos tau) * G_k^{lam_q}(cos rho),

with lam = (d-1)/2 the Gegenbauer index of a d-sphere (Chebyshev T when
lam = 0, i.e. d = 1).  phi_{jk} is the zonal line of the K-type V(j, k), so
this finite-dimensional sector is enough to pin every eigenvalue: the
conformal factor cos tau * cos rho, the Bochner Laplacian, and the conformal
vector field all preserve it.

Two independent realizations of the vector field are provided: a pure
coefficient-space route through the commutator identity

    [N, varpi] = 2 (grad_T + (n/2) varpi),

and a pointwise route through the Gegenbauer derivative identity on a
Gauss-Jacobi grid.  They share no code and serve as each other's oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import (
    eval_chebyt,
    eval_chebyu,
    eval_gegenbauer,
    gammaln,
    roots_jacobi,
)

from .geometry import KType, Signature, bochner_eigenvalue


class GridTooCoarse(ValueError):
    """Quadrature grid does not resolve the polynomial degrees in play."""


def gegenbauer_index(d: int) -> float:
    """Gegenbauer index lam = (d - 1)/2 of the zonal basis on a d-sphere."""
    if d < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {d}")
    return 0.5 * (d - 1)


def mult_by_cos(lam: float, c) -> np.ndarray:
    """Coefficients of x * f in the Gegenbauer (or Chebyshev, lam = 0) basis.

    Three-term recurrence: x G_j = (j+1)/(2(j+lam)) G_{j+1}
    + (j+2lam-1)/(2(j+lam)) G_{j-1}; the Chebyshev branch has the j = 0
    anomaly x T_0 = T_1.  Output degree grows by one.
    """
    c = np.asarray(c, dtype=float)
    out = np.zeros(len(c) + 1)
    if lam == 0:
        for j, cj in enumerate(c):
            if j == 0:
                out[1] += cj
            else:
                out[j + 1] += 0.5 * cj
                out[j - 1] += 0.5 * cj
    else:
        for j, cj in enumerate(c):
            out[j + 1] += (j + 1) / (2.0 * (j + lam)) * cj
            if j >= 1:
                out[j - 1] += (j + 2.0 * lam - 1) / (2.0 * (j + lam)) * cj
    return out


@lru_cache(maxsize=None)
def _cos_matrix(d: int, deg: int) -> np.ndarray:
    """Matrix of mult_by_cos on coefficient vectors of degree <= deg."""
    lam = gegenbauer_index(d)
    M = np.zeros((deg + 2, deg + 1))
    for j in range(deg + 1):
        unit = np.zeros(deg + 1)
        unit[j] = 1.0
        M[:, j] = mult_by_cos(lam, unit)
    return M


def gegenbauer_norm(d: int, j: int) -> float:
    """L^2 norm^2 of the degree-j basis polynomial under (1-x^2)^{(d-2)/2} dx."""
    lam = gegenbauer_index(d)
    if lam == 0:
        return np.pi if j == 0 else np.pi / 2.0
    return float(
        np.exp(
            np.log(np.pi)
            + (1.0 - 2.0 * lam) * np.log(2.0)
            + gammaln(j + 2.0 * lam)
            - np.log(j + lam)
            - 2.0 * gammaln(lam)
            - gammaln(j + 1.0)
        )
    )


def _poly_matrix(d: int, deg: int, x: np.ndarray) -> np.ndarray:
    """Vandermonde V[a, j] = G_j(x_a) for the d-sphere zonal basis."""
    lam = gegenbauer_index(d)
    V = np.empty((len(x), deg + 1))
    for j in range(deg + 1):
        if lam == 0:
            V[:, j] = eval_chebyt(j, x)
        else:
            V[:, j] = eval_gegenbauer(j, lam, x)
    return V


def _deriv_matrix(d: int, deg: int, x: np.ndarray) -> np.ndarray:
    """Vandermonde of d/dx G_j: 2 lam G_{j-1}^{lam+1}, or j U_{j-1} for Chebyshev."""
    lam = gegenbauer_index(d)
    D = np.zeros((len(x), deg + 1))
    for j in range(1, deg + 1):
        if lam == 0:
            D[:, j] = j * eval_chebyu(j - 1, x)
        else:
            D[:, j] = 2.0 * lam * eval_gegenbauer(j - 1, lam + 1.0, x)
    return D


@dataclass(eq=False, frozen=True)
class ZonalFunction:
    """Dense coefficient array over the tensor-product zonal basis."""

    sig: Signature
    coeffs: np.ndarray  # shape (jmax + 1, kmax + 1)

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", arr)

    @property
    def jmax(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def kmax(self) -> int:
        return self.coeffs.shape[1] - 1

    def parity_component(self, parity: int) -> "ZonalFunction":
        """Restriction to K-types with (j + k) mod 2 equal to ``parity``."""
        j = np.arange(self.jmax + 1)[:, None]
        k = np.arange(self.kmax + 1)[None, :]
        mask = ((j + k) % 2) == parity
        return ZonalFunction(self.sig, np.where(mask, self.coeffs, 0.0))

    def __add__(self, other: "ZonalFunction") -> "ZonalFunction":
        if self.sig != other.sig or self.coeffs.shape != other.coeffs.shape:
            raise ValueError("shape/signature mismatch")
        return ZonalFunction(self.sig, self.coeffs + other.coeffs)

    def __sub__(self, other: "ZonalFunction") -> "ZonalFunction":
        if self.sig != other.sig or self.coeffs.shape != other.coeffs.shape:
            raise ValueError("shape/signature mismatch")
        return ZonalFunction(self.sig, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "ZonalFunction":
        return ZonalFunction(self.sig, self.coeffs * float(scalar))

    __rmul__ = __mul__


def basis_element(sig: Signature, j: int, k: int, jmax=None, kmax=None) -> ZonalFunction:
    """The zonal basis function phi_{jk} as a coefficient array."""
    jmax = j if jmax is None else jmax
    kmax = k if kmax is None else kmax
    c = np.zeros((jmax + 1, kmax + 1))
    c[j, k] = 1.0
    return ZonalFunction(sig, c)


def multiply_by_varpi(f: ZonalFunction) -> ZonalFunction:
    """Multiplication by varpi = cos tau * cos rho; degrees grow by one each."""
    Mp = _cos_matrix(f.sig.p, f.jmax)
    Mq = _cos_matrix(f.sig.q, f.kmax)
    return ZonalFunction(f.sig, Mp @ f.coeffs @ Mq.T)


def apply_N(f: ZonalFunction) -> ZonalFunction:
    """Bochner Laplacian: diagonal with eigenvalue j(p-1+j) + k(q-1+k)."""
    j = np.arange(f.jmax + 1)
    k = np.arange(f.kmax + 1)
    nj = j * (f.sig.p - 1 + j)
    nk = k * (f.sig.q - 1 + k)
    return ZonalFunction(f.sig, f.coeffs * (nj[:, None] + nk[None, :]))


def apply_T_via_lemma(f: ZonalFunction) -> ZonalFunction:
    """The conformal vector field through the commutator identity.

    T f = (1/2)(N(varpi f) - varpi(N f)) - (n/2) varpi f, entirely in
    coefficient space.
    """
    vf = multiply_by_varpi(f)
    commutator = apply_N(vf) - multiply_by_varpi(apply_N(f))
    return 0.5 * commutator - (f.sig.n / 2.0) * vf


@dataclass(eq=False, frozen=True)
class QuadratureGrid:
    """Gauss-Jacobi nodes/weights for both angular factors, in x = cos theta."""

    sig: Signature
    x: np.ndarray
    wx: np.ndarray
    y: np.ndarray
    wy: np.ndarray
    max_degree_x: int
    max_degree_y: int


@lru_cache(maxsize=None)
def quadrature_grid(sig: Signature, jdeg: int, kdeg: int, margin: int = 4) -> QuadratureGrid:
    """Grid resolving degrees (jdeg, kdeg) with ``margin`` extra nodes per axis.

    The weight on each axis is (1-x^2)^{(d-2)/2}, matching the zonal measure
    sin^{d-1}(theta) d theta.
    """
    ax = 0.5 * (sig.p - 2)
    ay = 0.5 * (sig.q - 2)
    x, wx = roots_jacobi(jdeg + margin, ax, ax)
    y, wy = roots_jacobi(kdeg + margin, ay, ay)
    return QuadratureGrid(sig, x, wx, y, wy, jdeg, kdeg)


def evaluate(f: ZonalFunction, grid: QuadratureGrid) -> np.ndarray:
    """Sample f on the grid: samples[a, b] = f(x_a, y_b)."""
    if f.jmax > grid.max_degree_x or f.kmax > grid.max_degree_y:
        raise GridTooCoarse(
            f"grid resolves degrees ({grid.max_degree_x}, {grid.max_degree_y}), "
            f"function has ({f.jmax}, {f.kmax})"
        )
    Vx = _poly_matrix(f.sig.p, f.jmax, grid.x)
    Vy = _poly_matrix(f.sig.q, f.kmax, grid.y)
    return Vx @ f.coeffs @ Vy.T


def project(samples: np.ndarray, grid: QuadratureGrid, jmax: int, kmax: int) -> ZonalFunction:
    """Coefficients of grid samples by discrete orthogonality."""
    if jmax > grid.max_degree_x or kmax > grid.max_degree_y:
        raise GridTooCoarse(
            f"grid resolves degrees ({grid.max_degree_x}, {grid.max_degree_y}), "
            f"requested ({jmax}, {kmax})"
        )
    sig = grid.sig
    Vx = _poly_matrix(sig.p, jmax, grid.x)
    Vy = _poly_matrix(sig.q, kmax, grid.y)
    weighted = samples * grid.wx[:, None] * grid.wy[None, :]
    raw = Vx.T @ weighted @ Vy
    hx = np.array([gegenbauer_norm(sig.p, j) for j in range(jmax + 1)])
    hy = np.array([gegenbauer_norm(sig.q, k) for k in range(kmax + 1)])
    return ZonalFunction(sig, raw / (hx[:, None] * hy[None, :]))


def apply_T_numeric(f: ZonalFunction, grid: QuadratureGrid) -> np.ndarray:
    """Pointwise conformal vector field, through exact Gegenbauer derivatives.

    T f = cos(rho) sin(tau) d/d tau f + cos(tau) sin(rho) d/d rho f
        = -y (1 - x^2) f_x - x (1 - y^2) f_y   in x = cos tau, y = cos rho.

    Independent of apply_T_via_lemma; used as its oracle.
    """
    if f.jmax + 1 > grid.max_degree_x or f.kmax + 1 > grid.max_degree_y:
        raise GridTooCoarse(
            f"grid must resolve degrees ({f.jmax + 1}, {f.kmax + 1}), "
            f"resolves ({grid.max_degree_x}, {grid.max_degree_y})"
        )
    sig = f.sig
    Vx = _poly_matrix(sig.p, f.jmax, grid.x)
    Vy = _poly_matrix(sig.q, f.kmax, grid.y)
    Dx = _deriv_matrix(sig.p, f.jmax, grid.x)
    Dy = _deriv_matrix(sig.q, f.kmax, grid.y)
    fx = Dx @ f.coeffs @ Vy.T
    fy = Vx @ f.coeffs @ Dy.T
    x = grid.x[:, None]
    y = grid.y[None, :]
    return -y * (1.0 - x**2) * fx - x * (1.0 - y**2) * fy


def eigenfunction_residual(sig: Signature, v: KType, f: ZonalFunction) -> float:
    """|N phi - lambda phi| residual for a basis element; 0 in exact arithmetic."""
    lam = bochner_eigenvalue(sig, v)
    delta = apply_N(f).coeffs - lam * f.coeffs
    return float(np.max(np.abs(delta)))
