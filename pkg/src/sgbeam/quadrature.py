"""Composite Gauss-Legendre quadrature on [a, b]."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule with ``panels`` equal panels of ``order`` nodes.

    The default (64 x 8) resolves eigenfunctions up to roughly mode 25.
    """

    panels: int = 64
    order: int = 8
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if self.panels < 1 or self.order < 1:
            raise ValueError("panels and order must be positive")
        if not self.b > self.a:
            raise ValueError("need b > a")

    @cached_property
    def _rule(self):
        t, w = np.polynomial.legendre.leggauss(self.order)
        edges = np.linspace(self.a, self.b, self.panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
        wx = (half[:, None] * w[None, :]).ravel()
        x.setflags(write=False)
        wx.setflags(write=False)
        return x, wx

    @property
    def nodes(self):
        return self._rule[0]

    @property
    def weights(self):
        return self._rule[1]

    @property
    def size(self):
        return self.panels * self.order

    def integrate(self, values):
        """Integrate samples taken at ``nodes`` (last axis)."""
        values = np.asarray(values)
        if values.shape[-1] != self.size:
            raise ValueError(f"expected {self.size} samples, got {values.shape[-1]}")
        return values @ self.weights

    def refined(self, factor=2):
        return QuadratureRule(self.panels * factor, self.order, self.a, self.b)

    def scaled_to(self, a, b):
        """Nodes and weights of the same composite rule mapped onto [a, b]."""
        s = (b - a) / (self.b - self.a)
        return a + (self.nodes - self.a) * s, self.weights * s


DEFAULT_RULE = QuadratureRule()
