"""Roots of the characteristic polynomial zeta s^6 - s^4 + lambda^2 = 0.

The polynomial is a cubic in u = s^2,

    zeta u^3 - u^2 + lambda^2 = 0,

which always has one negative real root u1 (f(0) = lambda^2 > 0 and
f(-inf) = -inf). The remaining pair is real and positive for
lambda^2 < 4 / (27 zeta^2) and a complex-conjugate pair above that value.

Representative convention (one root per +/- pair):

* ``s1 = i sqrt(-u1)``: purely imaginary, positive imaginary part. This is
  the oscillatory branch.
* complex regime: ``s2`` is the principal square root of the u with positive
  imaginary part (so Re s2 > 0, Im s2 > 0) and ``s3 = conj(s2)``.
* real regime: ``s2 >= s3 > 0`` are the square roots of the two positive u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RadicandError, RootPairingError
from .model import check_zeta

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class CharRoots:
    s1: complex
    s2: complex
    s3: complex
    lam: float
    zeta: float
    asymptotic: bool = False

    @property
    def representatives(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3], dtype=complex)

    @property
    def exponents(self) -> np.ndarray:
        """All six roots in column order (s1, -s1, s2, -s2, s3, -s3)."""
        s1, s2, s3 = self.s1, self.s2, self.s3
        return np.array([s1, -s1, s2, -s2, s3, -s3], dtype=complex)

    @property
    def u(self) -> np.ndarray:
        return self.representatives**2

    @property
    def complex_pair(self) -> bool:
        return self.lam**2 > critical_lambda(self.zeta) ** 2

    def residuals(self) -> np.ndarray:
        """Relative residual of each representative in the sextic."""
        s = self.representatives
        terms = np.stack([self.zeta * s**6, -(s**4), np.full(3, self.lam**2)])
        scale = np.abs(terms).max(axis=0)
        resid = np.abs(terms.sum(axis=0))
        return np.divide(resid, scale, out=np.zeros(3), where=scale > 0)

    def to_dict(self):
        return {
            "zeta": self.zeta,
            "lambda": self.lam,
            "roots": [[float(r.real), float(r.imag)] for r in self.exponents],
        }


def critical_lambda(zeta: float) -> float:
    """Frequency where the two positive u roots merge: lambda^2 = 4 / (27 zeta^2)."""
    return 2.0 / (math.sqrt(27.0) * zeta)


def _polish(u, zeta, lam2, steps=2):
    """Newton steps on the cubic, kept only while they reduce the residual."""
    f = (zeta * u - 1.0) * u * u + lam2
    for _ in range(steps):
        df = (3.0 * zeta * u - 2.0) * u
        if df == 0:
            break
        cand = u - f / df
        f_cand = (zeta * cand - 1.0) * cand * cand + lam2
        if abs(f_cand) >= abs(f):
            break
        u, f = cand, f_cand
    return u


def _cubic_roots(zeta: float, lam: float):
    """(u1, u2, u3) with u1 < 0 real; see module docstring for the pair ordering."""
    lam2 = lam * lam
    if lam2 == 0.0:
        # s^4 (zeta s^2 - 1) = 0
        return 0j, complex(1.0 / zeta), 0j
    shift = 1.0 / (3.0 * zeta)
    # depressed cubic v^3 + p v + q = 0 with u = v + shift
    p = -1.0 / (3.0 * zeta**2)
    q = lam2 / zeta - 2.0 / (27.0 * zeta**3)
    r = math.sqrt(-p / 3.0)  # = 1 / (3 zeta)
    arg = 1.5 * q / (p * r)  # = (3q / 2p) sqrt(-3/p)
    if arg >= -1.0:
        # three real roots (trigonometric branch); arg <= 1 for every lam >= 0
        theta = math.acos(min(1.0, arg)) / 3.0
        # the largest root has no cancellation; deflate it so the two small
        # roots come from zeta u^2 + b u + c with b = -lam^2/u2^2, c = -lam^2/u2
        u2 = _polish(2.0 * r * math.cos(theta) + shift, zeta, lam2)
        b = -lam2 / (u2 * u2)
        c = -lam2 / u2
        qq = 0.5 * (math.sqrt(b * b - 4.0 * zeta * c) - b)
        u3 = _polish(qq / zeta, zeta, lam2)
        u1 = _polish(c / qq, zeta, lam2)
        return complex(u1), complex(u2), complex(u3)
    # one real root (hyperbolic branch); q > 0 here
    v1 = -2.0 * r * math.cosh(math.acosh(-arg) / 3.0)
    u1 = _polish(v1 + shift, zeta, lam2)
    total = 1.0 / zeta - u1  # u2 + u3
    prod = -lam2 / (zeta * u1)  # u2 * u3
    disc = total * total - 4.0 * prod
    u2 = complex(0.5 * total, 0.5 * math.sqrt(-disc)) if disc < 0 else complex(0.5 * (total + math.sqrt(disc)))
    if disc >= 0:  # only reachable through rounding right at the merge point
        u3 = complex(prod / u2.real)
    else:
        u2 = _polish(u2, zeta, lam2)
        u3 = u2.conjugate()
    return complex(u1), u2, u3


def roots(zeta, lam, tol: float = DEFAULT_TOL) -> CharRoots:
    """Exact roots of zeta s^6 - s^4 + lam^2 = 0 grouped as +/- pairs."""
    zeta = check_zeta(zeta)
    lam = float(lam)
    if lam < 0 or not math.isfinite(lam):
        raise ValueError(f"lambda must be finite and non-negative, got {lam!r}")
    u1, u2, u3 = _cubic_roots(zeta, lam)
    s1 = 1j * math.sqrt(max(-u1.real, 0.0))
    if u2.imag != 0.0:
        s2 = complex(np.sqrt(u2))
        s3 = s2.conjugate()
    else:
        s2 = complex(math.sqrt(max(u2.real, 0.0)))
        s3 = complex(math.sqrt(max(u3.real, 0.0)))
    out = CharRoots(s1, s2, s3, lam, zeta)
    bad = out.residuals() > tol
    if np.any(bad):
        raise RootPairingError(
            f"root residuals {out.residuals()} exceed tolerance {tol} at zeta={zeta}, lambda={lam}"
        )
    return out


def asymptotic_roots(zeta, lam) -> CharRoots:
    """Large-lambda closed form of the squared roots.

    With R = (27 zeta^2 lam^2 - 2)^(1/3):
        s1^2 = -R / (3 zeta),  s2^2, s3^2 = R (1 +/- i sqrt 3) / (6 zeta).
    These are the roots of the depressed cubic with the linear term dropped,
    so they miss the constant shift 1 / (3 zeta) of the exact u values and
    sum to zero rather than 1 / zeta.
    """
    zeta = check_zeta(zeta)
    lam = float(lam)
    radicand = 27.0 * zeta**2 * lam**2 - 2.0
    if radicand <= 0:
        raise RadicandError(f"27 zeta^2 lambda^2 - 2 = {radicand:.3g} must be positive")
    R = radicand ** (1.0 / 3.0)
    u1 = -R / (3.0 * zeta)
    u2 = R / (6.0 * zeta) * complex(1.0, math.sqrt(3.0))
    s1 = complex(np.sqrt(complex(u1)))
    s2 = complex(np.sqrt(u2))
    return CharRoots(s1, s2, s2.conjugate(), lam, zeta, asymptotic=True)
