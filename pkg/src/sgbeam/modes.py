"""Eigenfunctions, their normalization, and the Green's solve for f'''' - zeta f'''''' = h.

Coefficients are stored against the anchored exponentials
exp(sigma_j (x - anchor_j)) used by :mod:`sgbeam.spectrum`, so they stay of
order one at any frequency. ``Mode.raw_coeffs`` converts them to the plain
basis exp(sigma_j x), which overflows for high modes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .charpoly import CharRoots
from .errors import (
    IllConditionedError,
    ImaginaryPartError,
    NonSimpleEigenvalueError,
    ZeroNormError,
)
from .model import check_zeta
from .quadrature import DEFAULT_RULE, QuadratureRule
from .spectrum import a_of_lambda, boundary_matrix

# smallest allowed ratio sigma_5 / sigma_6 of the boundary matrix at an eigenvalue
SIMPLICITY_RATIO = 1e4
IMAG_TOL = 1e-9


@dataclass(frozen=True)
class Mode:
    """Eigenfunction phi_n for eigenvalue lam, phi(x) = sum_j c_j exp(sigma_j (x - anchor_j))."""

    n: int
    lam: float
    zeta: float
    roots: CharRoots
    coeffs: np.ndarray
    anchors: np.ndarray
    norm_factor: float = 1.0
    sign: int = 1
    singular_ratio: float = np.inf

    @property
    def exponents(self) -> np.ndarray:
        return self.roots.exponents

    @property
    def raw_coeffs(self) -> np.ndarray:
        """Coefficients against exp(sigma_j x); may overflow for large lam."""
        with np.errstate(over="ignore"):
            return self.coeffs * np.exp(-self.exponents * self.anchors)

    @property
    def a(self) -> float:
        return float(a_of_lambda(self.lam, self.zeta))

    def __call__(self, x, m=0):
        return evaluate_mode(self, x, m)


def _conjugate_partner(sig):
    """Index of conj(sigma_j) in ``sig`` for each j."""
    d = np.abs(np.conj(sig)[:, None] - sig[None, :])
    return d.argmin(axis=1)


def mode_coefficients(zeta, lam, n=0) -> Mode:
    """Unnormalized eigenfunction at an eigenvalue, from the boundary-matrix null space.

    The phase is fixed so that phi'''(0) is real and positive; the
    coefficients are then symmetrized under conjugation so the function is
    real to rounding.
    """
    zeta = check_zeta(zeta)
    bm = boundary_matrix(zeta, lam)
    _, sv, vh = np.linalg.svd(bm.entries)
    ratio = sv[-2] / sv[-1] if sv[-1] > 0 else np.inf
    if ratio < SIMPLICITY_RATIO:
        raise NonSimpleEigenvalueError(
            f"null space at lambda={lam} is not one-dimensional "
            f"(sigma5/sigma6 = {ratio:.3g}); not a simple eigenvalue or not converged"
        )
    c = np.conj(vh[-1]) / bm.column_norms
    c = c / np.abs(c).max()
    sig, anchors = bm.exponents, bm.anchors
    d3 = np.sum(c * sig**3 * np.exp(-sig * anchors))
    if d3 == 0:
        raise ZeroNormError(f"phi'''(0) vanishes at lambda={lam}")
    c = c * np.conj(d3) / abs(d3)
    c = 0.5 * (c + np.conj(c[_conjugate_partner(sig)]))
    return Mode(n, float(lam), zeta, bm.roots, c, anchors, 1.0, 1, float(ratio))


def evaluate_mode(mode: Mode, x, m: int = 0, check: bool = True):
    """m-th derivative of the mode at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    sig, anc = mode.exponents, mode.anchors
    terms = (mode.coeffs * sig**m) * np.exp(sig * (x[..., None] - anc))
    val = terms.sum(axis=-1)
    if check:
        scale = np.abs(terms).sum(axis=-1)
        if np.any(np.abs(val.imag) > IMAG_TOL * np.maximum(scale, 1e-300)):
            worst = float(np.max(np.abs(val.imag) / np.maximum(scale, 1e-300)))
            raise ImaginaryPartError(
                f"mode {mode.n} derivative {m}: relative imaginary part {worst:.2e}"
            )
    return val.real


def normalize(mode: Mode, quad: QuadratureRule = DEFAULT_RULE) -> Mode:
    """Scale to unit L^2 norm with phi'''(0) > 0. Idempotent up to rounding."""
    phi = evaluate_mode(mode, quad.nodes)
    nrm2 = quad.integrate(phi * phi)
    if not np.isfinite(nrm2) or nrm2 <= 0:
        raise ZeroNormError(f"mode {mode.n} has zero or non-finite norm")
    scale = 1.0 / np.sqrt(nrm2)
    if evaluate_mode(mode, 0.0, 3) < 0:
        scale = -scale
    return replace(mode, coeffs=mode.coeffs * scale, norm_factor=mode.norm_factor * abs(scale), sign=1)


def gram_matrix(modes, quad: QuadratureRule = DEFAULT_RULE) -> np.ndarray:
    """Symmetrized L^2 Gram matrix of a sequence of modes."""
    phi = np.array([evaluate_mode(m, quad.nodes) for m in modes])
    G = (phi * quad.weights) @ phi.T
    return 0.5 * (G + G.T)


@dataclass(frozen=True)
class IdentityReport:
    """Boundary/energy identities of one normalized mode.

    * ``flux``: zeta phi'''(0)^2 - lam^2 - int (5 zeta phi'''^2 + 3 phi''^2)
    * ``energy``: int (phi''^2 + zeta phi'''^2) - lam^2
    * ``d3``: phi'''(0), which must not vanish.
    * ``bound_violation``: amount by which zeta phi'''(0)^2 leaves
      [4 lam^2, 6 lam^2], divided by lam^2 (zero when inside).
    """

    n: int
    lam: float
    flux: float
    energy: float
    d3: float
    zeta: float = 1.0

    @property
    def bound_ratio(self) -> float:
        """zeta phi'''(0)^2 / lam^2, which lies in [4, 6]."""
        return self.zeta * self.d3**2 / self.lam**2

    @property
    def bound_violation(self) -> float:
        r = self.bound_ratio
        return max(0.0, 4.0 - r, r - 6.0)

    @property
    def flux_rel(self) -> float:
        return abs(self.flux) / self.lam**2

    @property
    def energy_rel(self) -> float:
        return abs(self.energy) / self.lam**2


def boundary_identities(mode: Mode, quad: QuadratureRule = DEFAULT_RULE) -> IdentityReport:
    x = quad.nodes
    p2 = evaluate_mode(mode, x, 2)
    p3 = evaluate_mode(mode, x, 3)
    d3 = float(evaluate_mode(mode, 0.0, 3))
    lam2 = mode.lam**2
    z = mode.zeta
    i22 = quad.integrate(p2 * p2)
    i33 = quad.integrate(p3 * p3)
    flux = z * d3 * d3 - lam2 - (5 * z * i33 + 3 * i22)
    en = i22 + z * i33 - lam2
    return IdentityReport(mode.n, mode.lam, float(flux), float(en), d3, z)


def grid_function(values, quad: QuadratureRule = DEFAULT_RULE) -> Callable:
    """Callable interpolating samples at ``quad.nodes`` panel by panel (Lagrange on Gauss nodes)."""
    values = np.asarray(values, dtype=float).reshape(quad.panels, quad.order)
    t, _ = np.polynomial.legendre.leggauss(quad.order)
    w = np.array([1.0 / np.prod(t[j] - np.delete(t, j)) for j in range(quad.order)])
    width = (quad.b - quad.a) / quad.panels

    def h(x):
        x = np.asarray(x, dtype=float)
        pos = (x - quad.a) / width
        p = np.clip(np.floor(pos).astype(int), 0, quad.panels - 1)
        tt = 2.0 * (pos - p) - 1.0
        diff = tt[..., None] - t
        exact = np.isclose(diff, 0.0, atol=1e-15)
        diff = np.where(exact, 1.0, diff)
        kern = w / diff
        out = (kern * values[p]).sum(-1) / kern.sum(-1)
        hit = exact.any(-1)
        if np.any(hit):
            out = np.where(hit, (values[p] * exact).sum(-1), out)
        return out

    return h


def modal_function(modes, coeffs) -> Callable:
    """Callable x -> sum_k coeffs[k] phi_k(x)."""
    coeffs = np.asarray(coeffs, dtype=float)

    def h(x):
        return sum(c * evaluate_mode(m, x) for c, m in zip(coeffs, modes))

    return h


def _kernel(r, k, m):
    """m-th x-derivative of the Green kernel piece, r = x - s.

    For r >= 0: T(r) = -e^{-kr}/(2k^5) - r/k^4 - r^3/(6k^2);
    for r < 0:  G(r) = -e^{kr}/(2k^5). Both are bounded for any k.
    """
    pos = r >= 0
    rp = np.where(pos, r, 0.0)
    rn = np.where(pos, 0.0, r)
    e_m = np.exp(-k * rp)
    sgn = (-1.0) ** (m + 1)
    t = sgn * k ** (m - 5) * e_m / 2.0
    if m == 0:
        t = t - rp / k**4 - rp**3 / (6 * k**2)
    elif m == 1:
        t = t - 1.0 / k**4 - rp**2 / (2 * k**2)
    elif m == 2:
        t = t - rp / k**2
    elif m == 3:
        t = t - 1.0 / k**2
    g = -(k ** (m - 5)) * np.exp(k * rn) / 2.0
    return np.where(pos, t, g)


def _homogeneous(x, k, m):
    """m-th derivative of the basis 1, x, x^2, x^3, e^{k(x-1)}, e^{-kx} at x."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (6,))
    for p in range(4):
        if m <= p:
            coef = np.prod(np.arange(p - m + 1, p + 1)) if m else 1.0
            out[..., p] = coef * x ** (p - m)
    out[..., 4] = k**m * np.exp(k * (x - 1.0))
    out[..., 5] = (-k) ** m * np.exp(-k * x)
    return out


def _bc_rows(deriv, zeta):
    """Apply the six boundary conditions given deriv(point, m)."""
    return np.array(
        [
            deriv(0.0, 0),
            deriv(0.0, 1),
            deriv(0.0, 2),
            deriv(1.0, 2) - zeta * deriv(1.0, 4),
            zeta * deriv(1.0, 5) - deriv(1.0, 3),
            zeta * deriv(1.0, 3),
        ]
    )


@dataclass(frozen=True)
class GreensSolve:
    """Solution f of f'''' - zeta f'''''' = h with the cantilever boundary conditions."""

    zeta: float
    h: Callable
    coeffs: np.ndarray
    condition: float
    quad: QuadratureRule = DEFAULT_RULE

    @property
    def k(self) -> float:
        return 1.0 / np.sqrt(self.zeta)

    def _particular(self, x, m):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t, w = self.quad.nodes, self.quad.weights
        s_lo = x[:, None] * t[None, :]
        w_lo = x[:, None] * w[None, :]
        s_hi = x[:, None] + (1.0 - x[:, None]) * t[None, :]
        w_hi = (1.0 - x[:, None]) * w[None, :]
        k = self.k
        mm = min(m, 5) if m < 6 else 6
        val = (_kernel(x[:, None] - s_lo, k, mm) * self.h(s_lo) * w_lo).sum(1)
        # on s > x the r < 0 branch applies; force it even where r rounds to 0
        r_hi = np.minimum(x[:, None] - s_hi, -0.0)
        g = -(k ** (mm - 5)) * np.exp(k * r_hi) / 2.0
        val = val + (g * self.h(s_hi) * w_hi).sum(1)
        if m == 6:
            val = val + self.h(x)
        return -val / self.zeta

    def __call__(self, x, m: int = 0):
        if not 0 <= m <= 6:
            raise ValueError("derivative order must be in 0..6")
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = self._particular(x, m) + _homogeneous(x, self.k, m) @ self.coeffs
        return out[0] if scalar else out

    def bc_residuals(self) -> np.ndarray:
        return _bc_rows(lambda p, m: float(self(p, m)), self.zeta)

    def operator_residual(self, x) -> np.ndarray:
        """f'''' - zeta f'''''' - h at ``x``."""
        return self(x, 4) - self.zeta * self(x, 6) - self.h(np.asarray(x, dtype=float))


def greens_apply(zeta, h, quad: QuadratureRule = DEFAULT_RULE, max_condition: float = 1e12) -> GreensSolve:
    """Solve f'''' - zeta f'''''' = h on [0, 1] with the cantilever boundary conditions.

    ``h`` is a vectorized callable, or an array of samples at ``quad.nodes``
    (interpolated with :func:`grid_function`).
    """
    zeta = check_zeta(zeta)
    if not callable(h):
        h = grid_function(h, quad)
    k = 1.0 / np.sqrt(zeta)
    M = _bc_rows(lambda p, m: _homogeneous(p, k, m), zeta)
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > max_condition:
        raise IllConditionedError(f"boundary system condition number {cond:.3g}", condition=cond)
    partial = GreensSolve(zeta, h, np.zeros(6), cond, quad)
    rhs = -_bc_rows(lambda p, m: float(partial._particular(p, m)[0]), zeta)
    coeffs = np.linalg.solve(M, rhs)
    return GreensSolve(zeta, h, coeffs, cond, quad)
