"""Beam parameters, the dimensionless stiffness ratio, and energy functionals.

All quantities are dimensionless once :func:`nondimensionalize` has been
applied: the deflection is scaled by the length, the abscissa lives on
[0, 1] and time is rescaled by sqrt(K1 / (rho A L^4)).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateModelError, GridMismatchError, InvalidParameterError
from .quadrature import DEFAULT_RULE, QuadratureRule


@dataclass(frozen=True)
class MaterialParams:
    """Physical constants of a strain-gradient Euler-Bernoulli cantilever.

    ``l0``, ``l1``, ``l2`` are the additional material length scales of the
    higher-order stress tensors. Setting all three to zero gives back the
    classical beam, which this package refuses to handle.
    """

    E_young: float
    mu_shear: float
    I_area: float
    A_section: float
    rho: float
    L: float
    l0: float = 0.0
    l1: float = 0.0
    l2: float = 0.0

    def __post_init__(self):
        for name in ("E_young", "mu_shear", "I_area", "A_section", "rho", "L"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameterError(f"{name} must be positive, got {value!r}")
        for name in ("l0", "l1", "l2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidParameterError(f"{name} must be non-negative, got {value!r}")

    @property
    def K1(self) -> float:
        return self.E_young * self.I_area + self.mu_shear * self.A_section * (
            2 * self.l0**2 + (8 / 15) * self.l1**2 + self.l2**2
        )

    @property
    def K2(self) -> float:
        return self.mu_shear * self.I_area * (2 * self.l0**2 + (4 / 5) * self.l1**2)

    @property
    def time_scale(self) -> float:
        """Factor converting physical time to dimensionless time."""
        return math.sqrt(self.K1 / (self.rho * self.A_section * self.L**4))


@dataclass(frozen=True)
class BeamParams:
    """Dimensionless model: the stiffness ratio zeta = K2 / (K1 L^2).

    ``material`` records where zeta came from, if it was derived.
    """

    zeta: float
    material: MaterialParams | None = None

    def __post_init__(self):
        if not math.isfinite(self.zeta):
            raise InvalidParameterError(f"zeta must be finite, got {self.zeta!r}")
        if self.zeta == 0:
            raise DegenerateModelError("zeta = 0 is the classical beam limit and is not supported")
        if self.zeta < 0:
            raise InvalidParameterError(f"zeta must be positive, got {self.zeta!r}")


def check_zeta(zeta) -> float:
    return BeamParams(float(zeta)).zeta


def stiffness_ratio(K1: float, K2: float, L: float = 1.0) -> float:
    if K1 <= 0 or L <= 0:
        raise InvalidParameterError("K1 and L must be positive")
    if K2 < 0:
        raise InvalidParameterError("K2 must be non-negative")
    if K2 == 0:
        raise DegenerateModelError("K2 = 0 (l0 = l1 = 0): classical Euler-Bernoulli beam")
    return K2 / (K1 * L**2)


def nondimensionalize(material: MaterialParams) -> BeamParams:
    zeta = stiffness_ratio(material.K1, material.K2, material.L)
    return BeamParams(zeta, material)


def params_from_config(obj) -> BeamParams:
    """Build :class:`BeamParams` from ``{"zeta": z}`` or a material-parameter mapping."""
    if isinstance(obj, BeamParams):
        return obj
    if not isinstance(obj, dict):
        raise InvalidParameterError("config must be a JSON object")
    if "zeta" in obj:
        return BeamParams(float(obj["zeta"]))
    fields = MaterialParams.__dataclass_fields__
    unknown = set(obj) - set(fields)
    if unknown:
        raise InvalidParameterError(f"unknown material fields: {sorted(unknown)}")
    try:
        material = MaterialParams(**{k: float(v) for k, v in obj.items()})
    except TypeError as exc:
        raise InvalidParameterError(str(exc)) from None
    return nondimensionalize(material)


@dataclass(frozen=True)
class EnergySnapshot:
    kinetic: float
    strain: float

    @property
    def total(self) -> float:
        return self.kinetic + self.strain

    def to_dict(self):
        return {"K": self.kinetic, "U": self.strain, "E": self.total}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _grid_arrays(quad, *arrays):
    out = []
    for arr in arrays:
        arr = np.asarray(arr, dtype=float)
        if arr.shape[-1:] != (quad.size,):
            raise GridMismatchError(
                f"samples have length {arr.shape[-1] if arr.ndim else 0}, "
                f"quadrature grid has {quad.size}"
            )
        out.append(arr)
    return out


def energy(w2, w3, v, zeta, quad: QuadratureRule = DEFAULT_RULE) -> EnergySnapshot:
    """Kinetic and strain energy of a field sampled at ``quad.nodes``.

    ``w2`` and ``w3`` are the second and third spatial derivatives and ``v``
    the velocity. Derivatives must come from an analytic representation;
    differencing the displacement is not accurate enough for (w''')^2.
    """
    zeta = check_zeta(zeta)
    w2, w3, v = _grid_arrays(quad, w2, w3, v)
    kinetic = 0.5 * quad.integrate(v * v)
    strain = 0.5 * quad.integrate(w2 * w2 + zeta * w3 * w3)
    return EnergySnapshot(float(kinetic), float(strain))


def state_norm_sq(w2, w3, v, zeta, quad: QuadratureRule = DEFAULT_RULE) -> float:
    """Squared energy-space norm 1/2 int [(f'')^2 + zeta (f''')^2 + g^2] dx."""
    zeta = check_zeta(zeta)
    w2, w3, v = _grid_arrays(quad, w2, w3, v)
    return float(0.5 * quad.integrate(w2 * w2 + zeta * w3 * w3 + v * v))


def material_to_dict(material: MaterialParams):
    return asdict(material)
