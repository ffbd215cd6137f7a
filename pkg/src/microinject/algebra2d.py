"""Exact-width linear algebra kernel: 2-vectors and 2x2 matrices.

Plain-float frozen dataclasses rather than numpy arrays: every quantity in
this package is exactly two-dimensional, the hot loops are scalar either
way, and bit-reproducible simulation traces require full control over
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class SingularMatrix(ValueError):
    """Raised when a matrix determinant falls below the invertibility cutoff."""


@dataclass(frozen=True)
class Vec2:
    """A 2-vector with components (a0, a1); units depend on context."""

    a0: float
    a1: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.a0 + other.a0, self.a1 + other.a1)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.a0 - other.a0, self.a1 - other.a1)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.a0, -self.a1)

    def scale(self, s: float) -> "Vec2":
        return Vec2(s * self.a0, s * self.a1)

    def max_abs(self) -> float:
        return max(abs(self.a0), abs(self.a1))

    def is_finite(self) -> bool:
        return math.isfinite(self.a0) and math.isfinite(self.a1)


ZERO2 = Vec2(0.0, 0.0)


@dataclass(frozen=True)
class Mat2:
    """A 2x2 matrix in row-major entry order (m00, m01, m10, m11)."""

    m00: float
    m01: float
    m10: float
    m11: float

    def max_abs(self) -> float:
        return max(abs(self.m00), abs(self.m01), abs(self.m10), abs(self.m11))

    def is_finite(self) -> bool:
        return (
            math.isfinite(self.m00)
            and math.isfinite(self.m01)
            and math.isfinite(self.m10)
            and math.isfinite(self.m11)
        )


def identity() -> Mat2:
    return Mat2(1.0, 0.0, 0.0, 1.0)


def diag(d0: float, d1: float) -> Mat2:
    return Mat2(d0, 0.0, 0.0, d1)


def transpose(m: Mat2) -> Mat2:
    return Mat2(m.m00, m.m10, m.m01, m.m11)


def det(m: Mat2) -> float:
    return m.m00 * m.m11 - m.m01 * m.m10


def mat_vec_mul(m: Mat2, v: Vec2) -> Vec2:
    """Matrix-vector product m @ v."""
    return Vec2(m.m00 * v.a0 + m.m01 * v.a1, m.m10 * v.a0 + m.m11 * v.a1)


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    """Matrix product a @ b."""
    return Mat2(
        a.m00 * b.m00 + a.m01 * b.m10,
        a.m00 * b.m01 + a.m01 * b.m11,
        a.m10 * b.m00 + a.m11 * b.m10,
        a.m10 * b.m01 + a.m11 * b.m11,
    )


def singularity_threshold(m: Mat2) -> float:
    """Scale-relative determinant cutoff below which inversion is refused.

    Relative to the squared max-entry norm so that well-conditioned matrices
    with large entries are not misclassified as singular.
    """
    return 1e-12 * max(1.0, m.max_abs() ** 2)


def mat_inv(m: Mat2) -> Mat2:
    """Inverse via adjugate over determinant.

    Raises SingularMatrix when |det| does not exceed the scale-relative
    cutoff; callers must treat the corresponding transformation as
    non-invertible.
    """
    d = det(m)
    if not abs(d) > singularity_threshold(m):
        raise SingularMatrix(
            f"matrix is singular within tolerance (|det|={abs(d):.3e})"
        )
    return Mat2(m.m11 / d, -m.m01 / d, -m.m10 / d, m.m00 / d)
