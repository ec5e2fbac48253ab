"""Boundary observation operators on the eigenvectors of the state operator.

The state operator (f, g) -> (g, -A0 f) has eigenvalues mu_k = i lam_k for
k in Z*, with lam_{-k} = -lam_k, and unit eigenvectors

    psi_k = (phi_k / (i lam_k), phi_k) / sqrt(2),   phi_{-k} = -phi_k.

The three observations read a boundary quantity of the position component
at the clamped root:

* C1: shear-type force  zeta f'''''(0) - f'''(0)
* C2: classical moment  f''(0) - zeta f''''(0)
* C3: non-classical moment  zeta f'''(0)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientModesError, InvalidParameterError
from .model import check_zeta
from .modes import Mode, evaluate_mode
from .spectrum import SpectralBasis, gap_profile, loglog_fit

OPERATORS = ("C1", "C2", "C3")
MIN_MODES = 10
# operational thresholds for the verdicts
GROWTH_SLOPE = 0.5
GROWTH_R2 = 0.99
BOUNDED_SLOPE = 0.1
BAND_TOL = 1e-9


@dataclass(frozen=True)
class LiftedMode:
    k: int
    base: Mode

    @property
    def lam(self) -> float:
        """Signed frequency lam_k (negative for k < 0)."""
        return math.copysign(self.base.lam, self.k)

    @property
    def mu(self) -> complex:
        return 1j * self.lam

    @property
    def scaling(self) -> complex:
        """Factor multiplying phi_{|k|} in the position component."""
        return np.sign(self.k) / (math.sqrt(2.0) * self.mu)

    def position(self, x, m=0):
        return self.scaling * evaluate_mode(self.base, x, m)

    def velocity(self, x, m=0):
        return np.sign(self.k) / math.sqrt(2.0) * evaluate_mode(self.base, x, m)

    def norm_sq(self, quad=None) -> float:
        """Energy-space norm 1/2 int [|f''|^2 + zeta |f'''|^2 + |g|^2]."""
        quad = quad or _default_quad()
        x = quad.nodes
        z = self.base.zeta
        f2 = np.abs(self.position(x, 2)) ** 2
        f3 = np.abs(self.position(x, 3)) ** 2
        g = np.abs(self.velocity(x)) ** 2
        return float(0.5 * quad.integrate(f2 + z * f3 + g))


def _default_quad():
    from .quadrature import DEFAULT_RULE

    return DEFAULT_RULE


def lift(basis: SpectralBasis, k: int) -> LiftedMode:
    if k == 0 or abs(k) > len(basis):
        raise IndexError(f"mode index {k} outside +-1..{len(basis)}")
    return LiftedMode(k, basis[abs(k)])


def _check_operator(operator_id):
    if operator_id not in OPERATORS:
        raise InvalidParameterError(f"operator must be one of {OPERATORS}, got {operator_id!r}")


def observe_lifted(lm: LiftedMode, operator_id: str) -> complex:
    """C applied to the lifted mode (complex)."""
    _check_operator(operator_id)
    z = lm.base.zeta
    d = {m: lm.position(0.0, m) for m in (2, 3, 4, 5)}
    if operator_id == "C1":
        return z * d[5] - d[3]
    if operator_id == "C2":
        return d[2] - z * d[4]
    return z * d[3]


def observe_mode(basis: SpectralBasis, k: int, operator_id: str) -> float:
    """|C psi_k| for signed index k."""
    return float(abs(observe_lifted(lift(basis, k), operator_id)))


def observe_values(basis: SpectralBasis, operator_id: str) -> np.ndarray:
    """|C psi_k| for k = 1..N, computed directly from boundary derivatives."""
    _check_operator(operator_id)
    out = []
    for mode in basis.modes:
        z, lam = mode.zeta, mode.lam
        d3 = evaluate_mode(mode, 0.0, 3)
        if operator_id == "C1":
            val = z * evaluate_mode(mode, 0.0, 5) - d3
        elif operator_id == "C2":
            val = z * evaluate_mode(mode, 0.0, 4)
        else:
            val = z * d3
        out.append(abs(val) / (math.sqrt(2.0) * lam))
    return np.array(out)


def c3_band(zeta):
    """Theoretical range [sqrt(2 zeta), sqrt(3 zeta)] of |C3 psi_k|."""
    zeta = check_zeta(zeta)
    return math.sqrt(2.0 * zeta), math.sqrt(3.0 * zeta)


@dataclass(frozen=True)
class ObservationReport:
    operator_id: str
    values: np.ndarray
    growth_fit: float
    growth_r2: float
    verdict: str
    bounds: tuple | None
    theoretical_bounds: tuple | None
    gaps_divergent: bool
    tail_increasing: bool

    @property
    def bounds_consistent(self) -> bool | None:
        """Empirical bounds inside the theoretical band (C3 only)."""
        if self.bounds is None or self.theoretical_bounds is None:
            return None
        lo, hi = self.theoretical_bounds
        return bool(self.bounds[0] >= lo * (1 - BAND_TOL) and self.bounds[1] <= hi * (1 + BAND_TOL))

    def to_dict(self):
        return {
            "operator": self.operator_id,
            "values": [float(v) for v in self.values],
            "growth_slope": self.growth_fit,
            "growth_r2": self.growth_r2,
            "verdict": self.verdict,
            "bounds": None if self.bounds is None else [float(b) for b in self.bounds],
            "theoretical_bounds": None
            if self.theoretical_bounds is None
            else [float(b) for b in self.theoretical_bounds],
            "bounds_consistent": self.bounds_consistent,
            "gaps_divergent": self.gaps_divergent,
        }


def classify(basis: SpectralBasis, operator_id: str) -> ObservationReport:
    """Spectral admissibility / exact-observability verdict for one operator.

    * ``not_admissible``: the last ceil(N/2) values increase strictly and
      their log-log slope against a_k exceeds 0.5 with R^2 > 0.99.
    * ``admissible_exact``: values bounded away from zero, their tail slope
      below 0.1 in magnitude, and the eigenvalue gaps increasing.
    * otherwise ``inconclusive``.
    """
    _check_operator(operator_id)
    N = len(basis)
    if N < MIN_MODES:
        raise InsufficientModesError(f"classification needs at least {MIN_MODES} modes, got {N}")
    values = observe_values(basis, operator_id)
    tail = slice(N - math.ceil(N / 2), N)
    a = basis.a_values
    slope, r2 = loglog_fit(a[tail], values[tail])
    increasing = bool(np.all(np.diff(values[tail]) > 0))
    gp = gap_profile(basis)
    divergent = bool(np.all(np.diff(gp.gaps[tail.start - 1 :]) > 0) and gp.gap_slope > 0)
    theory = c3_band(basis.zeta) if operator_id == "C3" else None
    bounds = None
    if increasing and slope > GROWTH_SLOPE and r2 > GROWTH_R2:
        verdict = "not_admissible"
    elif values.min() > 0 and abs(slope) < BOUNDED_SLOPE and divergent:
        verdict = "admissible_exact"
        bounds = (float(values.min()), float(values.max()))
    else:
        verdict = "inconclusive"
    return ObservationReport(
        operator_id, values, slope, r2, verdict, bounds, theory, divergent, increasing
    )


@dataclass(frozen=True)
class ObservabilityConstants:
    zeta: float
    T: float
    threshold: float
    lower: float
    upper: float

    @property
    def guaranteed(self) -> bool:
        """True when T exceeds the threshold, so the lower bound is positive."""
        return self.lower > 0

    def to_dict(self):
        return {
            "zeta": self.zeta,
            "T": self.T,
            "threshold": self.threshold,
            "lower_const": self.lower,
            "upper_const": self.upper,
            "guaranteed": self.guaranteed,
            "note": None if self.guaranteed else "no exact-observability guarantee at this T",
        }


def observability_constants(zeta, T) -> ObservabilityConstants:
    """Constants of 2 zeta (T - t*) E <= int_0^T y^2 dt <= zeta (10 T + 2 t*) E, t* = max(2, 32/(4 + zeta))."""
    zeta = check_zeta(zeta)
    if not T > 0:
        raise InvalidParameterError("T must be positive")
    thr = max(2.0, 32.0 / (4.0 + zeta))
    return ObservabilityConstants(zeta, float(T), thr, 2.0 * zeta * (T - thr), zeta * (10.0 * T + 2.0 * thr))
