"""Linear algebra over Minkowski 4-space with signature (-, +, +, +).

Vectors are plain length-4 sequences.  ``inner`` and ``det4`` only index and
multiply their arguments, so they work unchanged on numpy arrays, floats and
on :class:`nullhelix.jet.Jet` vectors.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import DegenerateSpan

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
SIGNATURE = (-1.0, 1.0, 1.0, 1.0)


class CausalCharacter(str, enum.Enum):
    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    NULL = "null"
    ZERO = "zero-vector"


def vec4(x1, x2, x3, x4):
    v = np.array([x1, x2, x3, x4], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite Vec4 component: {v}")
    return v


def inner(a, b):
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]


def norm(v):
    """sqrt(|g(v, v)|)."""
    return float(np.sqrt(abs(inner(v, v))))


def causal_character(v, tol=1e-12):
    if tol < 0:
        raise ValueError("tol must be non-negative")
    v = np.asarray(v, dtype=float)
    if np.max(np.abs(v)) <= tol:
        return CausalCharacter.ZERO
    q = inner(v, v)
    if abs(q) <= tol:
        return CausalCharacter.NULL
    return CausalCharacter.TIMELIKE if q < 0 else CausalCharacter.SPACELIKE


def raise_index(partials):
    """Metric dual of a covector: inner(raise_index(p), X) == p . X."""
    p = np.asarray(partials, dtype=float)
    return p * np.array(SIGNATURE)


def _minor3(cols, skip):
    rows = [r for r in range(4) if r != skip]
    (a, b, c) = cols
    r0, r1, r2 = rows
    return (
        a[r0] * (b[r1] * c[r2] - b[r2] * c[r1])
        - b[r0] * (a[r1] * c[r2] - a[r2] * c[r1])
        + c[r0] * (a[r1] * b[r2] - a[r2] * b[r1])
    )


def det4(a, b, c, d):
    """Determinant of the matrix whose columns are a, b, c, d (cofactor expansion)."""
    rest = (b, c, d)
    total = a[0] * _minor3(rest, 0)
    for r in range(1, 4):
        term = a[r] * _minor3(rest, r)
        total = total + term if r % 2 == 0 else total - term
    return total


def gram(*vectors):
    n = len(vectors)
    return [[inner(vectors[i], vectors[j]) for j in range(n)] for i in range(n)]


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def gram_det3(a, b, c):
    return _det3(gram(a, b, c))


def lorentz_cross(a, b, c):
    """Vector w with inner(w, x) == det4(x, a, b, c) for every x.

    Polynomial in the inputs, so it can be applied to jet vectors.
    """
    # det4(e_j, a, b, c) = (-1)^j * minor_j(a, b, c)
    cof = [_minor3((a, b, c), j) if j % 2 == 0 else -_minor3((a, b, c), j) for j in range(4)]
    return [-cof[0], cof[1], cof[2], cof[3]]


def complete_orthonormal(v1, v2, v3, orientation_det=-1, tol=1e-10):
    """Unit spacelike vector orthogonal to v1, v2, v3.

    The sign is chosen so that det4(v1, v2, v3, w) has the sign of
    ``orientation_det``.  Since g(w, w) = -Gram(v1, v2, v3) for the Lorentzian
    cross product, the span must be Lorentzian (negative Gram determinant).
    """
    if orientation_det not in (1, -1):
        raise ValueError("orientation_det must be +1 or -1")
    v1, v2, v3 = (np.asarray(v, dtype=float) for v in (v1, v2, v3))
    g3 = gram_det3(v1, v2, v3)
    if g3 > -tol:
        raise DegenerateSpan(
            f"Gram determinant {g3:.3e} of the spanning vectors is not negative beyond tol={tol:g}; "
            "no unit spacelike complement exists"
        )
    w = np.array(lorentz_cross(v1, v2, v3))
    w = w / np.sqrt(inner(w, w))
    # det4(v1, v2, v3, lorentz_cross(...)) = -g(w, w) < 0
    return w if orientation_det < 0 else -w
