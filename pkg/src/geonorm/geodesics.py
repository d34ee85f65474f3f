"""Geodesic segments between diagonalizable norms.

Two norms admit a common orthogonal basis; along the segment the weights
interpolate linearly while the basis stays fixed.  The resulting path is
the metric geodesic for every d_p, and evaluation at rational times stays
exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .norms import DiagNorm, NormError, codiagonalize


@dataclass(frozen=True)
class NormGeodesic:
    field: object
    basis: tuple
    weights0: tuple
    weights1: tuple

    def at(self, t) -> DiagNorm:
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise NormError(f"geodesic time {t} outside [0, 1]")
        w = tuple((1 - t) * a + t * b
                  for a, b in zip(self.weights0, self.weights1))
        return DiagNorm(self.field, self.basis, w)

    @property
    def start(self) -> DiagNorm:
        return DiagNorm(self.field, self.basis, self.weights0)

    @property
    def end(self) -> DiagNorm:
        return DiagNorm(self.field, self.basis, self.weights1)


def geodesic(n0: DiagNorm, n1: DiagNorm) -> NormGeodesic:
    basis, w0, w1 = codiagonalize(n0, n1)
    return NormGeodesic(n0.field, tuple(basis), tuple(w0), tuple(w1))
