"""Characteristic determinant and eigenvalues of f'''' - zeta f'''''' on the cantilever.

Eigenfunctions are combinations of the six exponentials exp(sigma_j x),
sigma_j in (s1, -s1, s2, -s2, s3, -s3). Growing exponentials (Re sigma > 0)
are anchored at the tip, i.e. written as exp(sigma (x - 1)), and decaying
ones at the root, so every entry of the boundary matrix stays of order one
however large lambda is. The discarded magnitudes are kept as log scales.

Because the column set is closed under conjugation through an odd
permutation, the determinant is purely imaginary for every lambda > 0; the
real root indicator is its imaginary part. Where the two positive u roots
merge (lambda_c = 2 / (sqrt(27) zeta)) the exponential basis degenerates and
the determinant has a spurious simple zero; the indicator is multiplied by
sign(lambda - lambda_c) so that point is not mistaken for an eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .charpoly import CharRoots, critical_lambda, roots
from .errors import (
    DegenerateRootsError,
    InvalidParameterError,
    MissedRootError,
    PhaseTrackingError,
    PrecisionExhaustedError,
)
from .model import check_zeta
from .quadrature import DEFAULT_RULE, QuadratureRule

SQRT3_PI = math.sqrt(3.0) * math.pi
# mode k (1-based) is matched by the closed-form seed with index n = k - 1
SEED_INDEX_OFFSET = 1
SCAN_SUBDIVISIONS = 16
DEGENERACY_TOL = 1e-6
PHASE_TOL = 1e-6

# (evaluation point, polynomial in sigma) for each boundary condition row
_BC_POINTS = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])


def _bc_polynomials(sig, zeta):
    return np.array(
        [
            np.ones_like(sig),
            sig,
            sig**2,
            sig**2 - zeta * sig**4,
            zeta * sig**5 - sig**3,
            zeta * sig**3,
        ]
    )


def _row_log_scales(rho, zeta):
    return np.log(
        [1.0, rho, rho**2, rho**2 + zeta * rho**4, rho**3 + zeta * rho**5, zeta * rho**3]
    )


def anchors_for(exponents) -> np.ndarray:
    """Anchor point (0 or 1) for each exponential: 1 where Re(sigma) > 0."""
    return (np.real(exponents) > 0).astype(float)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Scaled boundary-condition matrix.

    ``entries[r, j]`` is row r of the boundary conditions applied to the
    anchored exponential exp(sigma_j (x - anchor_j)), divided by a positive
    row factor exp(row_scales[r]) and normalized so each column has maximum
    modulus one. ``column_scales[j]`` is the log-magnitude removed from the
    unanchored column exp(sigma_j x).
    """

    entries: np.ndarray
    column_scales: np.ndarray
    row_scales: np.ndarray
    exponents: np.ndarray
    anchors: np.ndarray
    roots: CharRoots

    @property
    def lam(self) -> float:
        return self.roots.lam

    @property
    def zeta(self) -> float:
        return self.roots.zeta

    @property
    def log_scale(self) -> float:
        return float(self.column_scales.sum() + self.row_scales.sum())

    @property
    def column_norms(self) -> np.ndarray:
        """Factor dividing each anchored column (its largest modulus)."""
        return np.exp(self.column_scales - np.real(self.exponents) * self.anchors)

    def unscaled(self) -> np.ndarray:
        """Raw matrix for exp(sigma_j x); overflows for large lambda."""
        phase = np.exp(1j * np.imag(self.exponents) * self.anchors)
        return (
            self.entries
            * np.exp(self.row_scales)[:, None]
            * (np.exp(self.column_scales) * phase)[None, :]
        )

    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))


def boundary_matrix(zeta, lam, char_roots: CharRoots | None = None) -> BoundaryMatrix:
    zeta = check_zeta(zeta)
    if not lam > 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam!r}")
    cr = char_roots if char_roots is not None else roots(zeta, lam)
    sig = cr.exponents
    rho = float(np.abs(sig).max())
    gaps = np.abs(sig[:, None] - sig[None, :]) + np.eye(6) * rho
    if gaps.min() < DEGENERACY_TOL * rho:
        raise DegenerateRootsError(
            f"characteristic roots coincide at zeta={zeta}, lambda={lam} "
            f"(critical lambda {critical_lambda(zeta):.12g})"
        )
    anchors = anchors_for(sig)
    row_scales = _row_log_scales(rho, zeta)
    expo = np.exp(sig[None, :] * (_BC_POINTS[:, None] - anchors[None, :]))
    anchored = _bc_polynomials(sig, zeta) * expo / np.exp(row_scales)[:, None]
    norms = np.abs(anchored).max(axis=0)
    entries = anchored / norms[None, :]
    # equilibrate rows as well; the factors are positive so signs are kept
    row_eq = np.abs(entries).max(axis=1)
    entries = entries / row_eq[:, None]
    row_scales = row_scales + np.log(row_eq)
    norms2 = np.abs(entries).max(axis=0)
    entries = entries / norms2[None, :]
    norms = norms * norms2
    column_scales = np.log(norms) + np.real(sig) * anchors
    return BoundaryMatrix(entries, column_scales, row_scales, sig, anchors, cr)


def char_det(zeta, lam, ref_phase: complex | None = None, ref_lambda: float | None = None):
    """Real root indicator and log scale of the characteristic determinant.

    The indicator is Re(det * conj(p)) for the reference phase p, which is the
    unit phase of the determinant at ``ref_lambda`` when given, else ``1j``.
    Returns ``(indicator, log_scale)``; the unscaled determinant magnitude is
    |indicator| * exp(log_scale) on the reference line.
    """
    zeta = check_zeta(zeta)
    if ref_phase is None:
        if ref_lambda is not None:
            d_ref = boundary_matrix(zeta, ref_lambda).det()
            ref_phase = d_ref / abs(d_ref)
        else:
            ref_phase = 1j
    bm = boundary_matrix(zeta, lam)
    d = bm.det() * np.conj(ref_phase)
    hadamard = float(np.prod(np.linalg.norm(bm.entries, axis=0)))
    if abs(d.imag) > max(PHASE_TOL * abs(d), 1e-12 * hadamard):
        raise PhaseTrackingError(
            f"determinant phase left the reference line at lambda={lam} "
            f"(|off-line| / |det| = {abs(d.imag) / abs(d):.2e}); shrink the bracket"
        )
    sign = 1.0 if lam >= critical_lambda(zeta) else -1.0
    return sign * d.real, bm.log_scale


def indicator(zeta, lam) -> float:
    return char_det(zeta, lam)[0]


@dataclass(frozen=True)
class AsymptoticCharEq:
    """Large-frequency form of the characteristic equation in the variable a.

    a = (27 lam^2 / zeta - 2 / zeta^3)^(1/6), q = (1/2 + i sqrt(3)/6) a and
    m = 1/2 + i sqrt(3)/2.
    """

    a: float
    q: complex
    m: complex

    @classmethod
    def from_a(cls, a):
        a = float(a)
        return cls(a, complex(0.5, math.sqrt(3.0) / 6.0) * a, complex(0.5, math.sqrt(3.0) / 2.0))

    @classmethod
    def from_lambda(cls, lam, zeta=1.0):
        return cls.from_a(a_of_lambda(lam, zeta))

    def function(self) -> complex:
        """Full asymptotic characteristic function (all orders kept)."""
        a, q, m = self.a, self.q, self.m
        qb = q.conjugate()
        e = np.exp
        big = (
            e(2 * qb) + e(-2 * qb) + e(2 * q) + e(-2 * q)
            + 8 * (e(qb) + e(-qb) + e(q) + e(-q) + e(qb - q) + e(q - qb))
            + e(2 * qb - 2 * q) + e(2 * q - 2 * qb) + 18
        )
        rest = (
            -m * (e(2 * qb) + e(-2 * qb))
            - m.conjugate() * (e(-2 * q) + e(2 * q))
            - 2 * m * (e(qb) + e(-qb))
            - 2 * m.conjugate() * (e(-q) + e(q))
            + 2 * (e(qb - q) + e(q - qb))
            + e(2 * qb - 2 * q) + e(2 * q - 2 * qb)
        )
        return complex(-(a * a) / 6.0 * big + rest)

    def leading(self) -> float:
        """Dominant group divided by 2 a^2 e^a: cos(a/sqrt3) + 8 e^(-a/2) cos(a/(2 sqrt3))."""
        a = self.a
        return math.cos(a / math.sqrt(3.0)) + 8.0 * math.exp(-a / 2.0) * math.cos(a / (2.0 * math.sqrt(3.0)))


def a_of_lambda(lam, zeta):
    """a = (27 lam^2 / zeta - 2 / zeta^3)^(1/6); requires 27 zeta^2 lam^2 > 2."""
    rad = 27.0 * np.square(lam) / zeta - 2.0 / zeta**3
    if np.any(rad <= 0):
        raise InvalidParameterError("a is defined only for 27 zeta^2 lambda^2 > 2")
    return rad ** (1.0 / 6.0)


def lambda_of_a(a, zeta):
    return np.sqrt(zeta * np.power(a, 6) / 27.0 + 2.0 / (27.0 * zeta**2))


def lambda_of_kappa(kappa, zeta):
    """Frequency whose oscillatory root is s1 = i kappa (exact: lam^2 = kappa^4 + zeta kappa^6)."""
    kappa = np.asarray(kappa, dtype=float)
    return kappa**2 * np.sqrt(1.0 + zeta * kappa**2)


def kappa_of_lambda(lam, zeta):
    return float(roots(zeta, lam).s1.imag)


def asymptotic_seed(n, zeta=1.0):
    """Closed-form estimate (a_n, lambda_n) from a_n = sqrt3 pi (n + 1/2) + (2/pi^2)(n + 1/2)^-2.

    ``n`` is the index of the closed form; mode k of the beam corresponds to
    n = k - SEED_INDEX_OFFSET. The formula was derived for zeta = 1 and is
    only a heuristic starting point for other zeta.
    """
    if n < 0:
        raise InvalidParameterError("seed index must be non-negative")
    zeta = check_zeta(zeta)
    h = n + 0.5
    a = SQRT3_PI * h + (2.0 / math.pi**2) / h**2
    return a, float(lambda_of_a(a, zeta))


def seed_for_mode(k, zeta=1.0):
    return asymptotic_seed(k - SEED_INDEX_OFFSET, zeta)


@dataclass(frozen=True)
class SpectralBasis:
    zeta: float
    modes: tuple
    quad: QuadratureRule = DEFAULT_RULE
    tol: float = 1e-12
    low_modes: int = 0

    def __post_init__(self):
        lams = self.lambdas
        if np.any(lams <= 0) or np.any(np.diff(lams) <= 0):
            raise ValueError("eigenvalues must be positive and strictly increasing")

    def __len__(self):
        return len(self.modes)

    def __getitem__(self, k):
        """Mode with 1-based index ``k``."""
        if not 1 <= k <= len(self.modes):
            raise IndexError(f"mode index {k} outside 1..{len(self.modes)}")
        return self.modes[k - 1]

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([m.lam for m in self.modes])

    @property
    def a_values(self) -> np.ndarray:
        return a_of_lambda(self.lambdas, self.zeta)

    def seed_errors(self) -> np.ndarray:
        seeds = np.array([seed_for_mode(k, self.zeta)[0] for k in range(1, len(self) + 1)])
        return self.a_values - seeds

    def truncated(self, n):
        return SpectralBasis(self.zeta, self.modes[:n], self.quad, self.tol, min(self.low_modes, n))


@dataclass
class _Scanner:
    zeta: float
    tol: float
    evaluations: int = field(default=0)

    def f(self, lam):
        self.evaluations += 1
        lc = critical_lambda(self.zeta)
        # keep scan points away from the merge point, where the basis degenerates
        if abs(lam - lc) <= 1e-5 * lc:
            lam = lc * (1 + 1e-5) if lam >= lc else lc * (1 - 1e-5)
        return indicator(self.zeta, lam)

    def scan(self, k_lo, k_hi, step):
        """Sign changes of the indicator on [k_lo, k_hi] in the kappa variable."""
        n = max(1, int(math.ceil((k_hi - k_lo) / step)))
        kappas = np.linspace(k_lo, k_hi, n + 1)
        lams = lambda_of_kappa(kappas, self.zeta)
        vals = np.array([self.f(l) for l in lams])
        brackets = []
        for i in range(n):
            if vals[i] == 0.0:
                brackets.append((lams[i], lams[i]))
            elif vals[i] * vals[i + 1] < 0:
                brackets.append((lams[i], lams[i + 1]))
        return brackets, vals

    def refine(self, lo, hi):
        if lo == hi:
            return lo
        rtol = max(0.5 * self.tol, 4 * np.finfo(float).eps)
        return brentq(self.f, lo, hi, xtol=1e-300, rtol=rtol, maxiter=200)


def _check_precision(vals, k):
    if np.all(np.abs(vals) < 1e3 * np.finfo(float).eps) or not np.all(np.isfinite(vals)):
        raise PrecisionExhaustedError(
            f"characteristic determinant lost all significant digits near mode {k}",
            max_modes=k - 1,
        )


def _matches_seed(lam, k, zeta):
    """True when lam lies within a quarter seed spacing of the seed for mode k."""
    if 27 * zeta**2 * lam**2 <= 2:
        return False
    a_seed, _ = seed_for_mode(k, zeta)
    return abs(float(a_of_lambda(lam, zeta)) - a_seed) < SQRT3_PI / 4.0


def find_eigenvalues(zeta, n_modes, tol=1e-12):
    """First ``n_modes`` values of lambda, plus the number found by the low-mode scan.

    Low modes are found by marching the indicator in kappa (the wavenumber of
    the oscillatory root) with step pi/16, an eighth of the asymptotic mode
    spacing. Once two consecutive refined eigenvalues agree with their seeds
    to within a quarter of the seed gap, the remaining modes are taken from contiguous
    brackets between consecutive seed midpoints; each bracket is scanned in
    16 sub-steps and must contain exactly one sign change.
    """
    zeta = check_zeta(zeta)
    if n_modes < 1:
        raise InvalidParameterError("need at least one mode")
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    sc = _Scanner(zeta, tol)
    step = math.pi / SCAN_SUBDIVISIONS * 2.0
    found = []
    cursor = step / 64.0
    seeded = False
    while len(found) < n_modes and not seeded:
        brackets, vals = sc.scan(cursor, cursor + step, step / 2.0)
        _check_precision(vals, len(found) + 1)
        for lo, hi in brackets:
            found.append(sc.refine(lo, hi))
        cursor += step
        if len(found) >= 2 and brackets:
            seeded = all(_matches_seed(found[k - 1], k, zeta) for k in (len(found) - 1, len(found)))
    # everything below ``cursor`` (in kappa) has been scanned
    n_low = len(found)
    found = found[:n_modes]
    k = len(found)
    cursor_lam = float(lambda_of_kappa(cursor, zeta))
    while k < n_modes:
        k += 1
        a_k, _ = seed_for_mode(k, zeta)
        a_next, _ = seed_for_mode(k + 1, zeta)
        hi_lam = float(lambda_of_a(0.5 * (a_k + a_next), zeta))
        if hi_lam <= cursor_lam:
            raise MissedRootError(f"seed bracket for mode {k} lies below the scanned range")
        k_lo = kappa_of_lambda(cursor_lam, zeta)
        k_hi = kappa_of_lambda(hi_lam, zeta)
        brackets, vals = sc.scan(k_lo, k_hi, (k_hi - k_lo) / SCAN_SUBDIVISIONS)
        _check_precision(vals, k)
        if len(brackets) != 1:
            raise MissedRootError(
                f"bracket for mode {k} (lambda in [{cursor_lam:.6g}, {hi_lam:.6g}]) "
                f"holds {len(brackets)} sign changes, expected 1"
            )
        found.append(sc.refine(*brackets[0]))
        cursor_lam = hi_lam
    return np.array(found), min(n_low, n_modes)


def compute_spectrum(zeta, N, tol=1e-12, quad: QuadratureRule = DEFAULT_RULE) -> SpectralBasis:
    """First N eigenpairs, normalized, as a :class:`SpectralBasis`."""
    from .modes import mode_coefficients, normalize

    lams, n_low = find_eigenvalues(zeta, N, tol)
    modes = tuple(
        normalize(mode_coefficients(zeta, lam, n=k), quad) for k, lam in enumerate(lams, start=1)
    )
    return SpectralBasis(check_zeta(zeta), modes, quad, tol, n_low)


def loglog_fit(x, y):
    """Least-squares slope and R^2 of log y against log x."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), r2


@dataclass(frozen=True)
class GapProfile:
    k: np.ndarray
    gaps: np.ndarray
    gap_slope: float
    gap_r2: float
    lambda_slope: float

    @property
    def increasing(self) -> bool:
        return bool(np.all(np.diff(self.gaps) > 0))


def gap_profile(basis: SpectralBasis, k_min: int = 1, k_max: int | None = None) -> GapProfile:
    """Gaps lambda_{k+1} - lambda_k and log-log growth exponents over k_min..k_max."""
    lams = basis.lambdas
    if len(lams) < 3:
        raise InvalidParameterError("gap profile needs at least three modes")
    k_max = len(lams) if k_max is None else min(k_max, len(lams))
    ks = np.arange(k_min, k_max + 1)
    sel = lams[k_min - 1 : k_max]
    gaps = np.diff(sel)
    gap_slope, gap_r2 = loglog_fit(ks[:-1], gaps)
    lam_slope, _ = loglog_fit(ks, sel)
    return GapProfile(ks[:-1], gaps, gap_slope, gap_r2, lam_slope)
