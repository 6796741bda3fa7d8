"""Truncated Taylor series ("jets") in one variable.

A :class:`Jet` stores Taylor coefficients ``c[..., k]`` about a base point
``t0``; the k-th derivative is ``k! * c[..., k]``.  Leading axes are allowed, so
a Jet of shape (4,) is a 4-vector of series and broadcasts against scalar
series.  Arithmetic truncates to the smaller order of its operands.
"""
from __future__ import annotations

from math import factorial

import numpy as np

from .errors import DomainError


def _as_coeffs(x, order):
    if isinstance(x, Jet):
        return x.coeffs
    c = np.zeros(np.shape(x) + (order + 1,))
    c[..., 0] = x
    return c


class Jet:
    __slots__ = ("coeffs", "t0")
    __array_priority__ = 100  # numpy scalars defer to Jet operators

    def __init__(self, coeffs, t0=0.0):
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.t0 = float(t0)

    @classmethod
    def variable(cls, t0, order):
        c = np.zeros(order + 1)
        c[0] = t0
        if order >= 1:
            c[1] = 1.0
        return cls(c, t0)

    @classmethod
    def constant(cls, value, t0, order):
        return cls(_as_coeffs(value, order), t0)

    @classmethod
    def stack(cls, jets):
        order = min(j.order for j in jets)
        return cls(np.stack([j.coeffs[..., : order + 1] for j in jets]), jets[0].t0)

    @classmethod
    def from_derivatives(cls, derivs, t0=0.0):
        derivs = np.asarray(derivs, dtype=float)
        k = np.arange(derivs.shape[-1])
        return cls(derivs / np.array([factorial(i) for i in k]), t0)

    @property
    def order(self):
        return self.coeffs.shape[-1] - 1

    @property
    def shape(self):
        return self.coeffs.shape[:-1]

    @property
    def value(self):
        return self.coeffs[..., 0]

    def derivatives(self):
        k = np.arange(self.order + 1)
        return self.coeffs * np.array([float(factorial(i)) for i in k])

    def derivative(self, n=1):
        c = self.coeffs
        for _ in range(n):
            if c.shape[-1] < 2:
                raise ValueError("jet order exhausted by differentiation")
            c = c[..., 1:] * np.arange(1, c.shape[-1])
        return Jet(c, self.t0)

    def truncate(self, order):
        return Jet(self.coeffs[..., : order + 1], self.t0)

    def __getitem__(self, i):
        return Jet(self.coeffs[i], self.t0)

    def __len__(self):
        return self.coeffs.shape[0]

    def __repr__(self):
        return f"Jet(t0={self.t0!r}, coeffs={self.coeffs!r})"

    # arithmetic -----------------------------------------------------------

    def _pair(self, other):
        b = _as_coeffs(other, self.order)
        n = min(self.coeffs.shape[-1], b.shape[-1])
        return self.coeffs[..., :n], b[..., :n]

    def __add__(self, other):
        a, b = self._pair(other)
        return Jet(a + b, self.t0)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return Jet(a - b, self.t0)

    def __rsub__(self, other):
        a, b = self._pair(other)
        return Jet(b - a, self.t0)

    def __neg__(self):
        return Jet(-self.coeffs, self.t0)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * np.expand_dims(np.asarray(other, dtype=float), -1), self.t0)
        a, b = self._pair(other)
        outer = a[..., :, None] * b[..., None, :]
        return Jet(np.einsum("...ij,ijk->...k", outer, _cauchy_mask(a.shape[-1])), self.t0)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            if np.any(other == 0):
                raise DomainError("division by zero")
            return Jet(self.coeffs / np.expand_dims(other, -1), self.t0)
        return _divide(*self._pair(other), self.t0)

    def __rtruediv__(self, other):
        b, a = self._pair(other)
        return _divide(a, b, self.t0)

    def __pow__(self, p):
        if isinstance(p, Jet):
            raise TypeError("jet exponents are not supported; exponent must be a constant")
        p = float(p)
        if p.is_integer():
            n = int(p)
            result = _int_pow(self, abs(n))
            return 1.0 / result if n < 0 else result
        return self._real_pow(p)

    def _real_pow(self, p):
        a = self.coeffs
        a0 = a[..., 0]
        if np.any(a0 <= 0):
            raise DomainError(f"non-integer power {p:g} of a non-positive value")
        n = a.shape[-1]
        b = np.zeros_like(a)
        b[..., 0] = a0**p
        for k in range(1, n):
            j = np.arange(1, k + 1)
            b[..., k] = np.sum((p * j - (k - j)) * a[..., 1 : k + 1] * b[..., k - 1 :: -1][..., :k], axis=-1) / (k * a0)
        return Jet(b, self.t0)

    # elementary functions -------------------------------------------------

    def sqrt(self):
        if np.any(self.coeffs[..., 0] <= 0):
            raise DomainError("sqrt of a non-positive value (not differentiable)")
        return self._real_pow(0.5)

    def exp(self):
        a = self.coeffs
        n = a.shape[-1]
        e = np.zeros_like(a)
        e[..., 0] = np.exp(a[..., 0])
        for k in range(1, n):
            j = np.arange(1, k + 1)
            e[..., k] = np.sum(j * a[..., 1 : k + 1] * e[..., k - 1 :: -1][..., :k], axis=-1) / k
        return Jet(e, self.t0)

    def _sincos(self, hyperbolic):
        a = self.coeffs
        n = a.shape[-1]
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        if hyperbolic:
            s[..., 0], c[..., 0] = np.sinh(a[..., 0]), np.cosh(a[..., 0])
        else:
            s[..., 0], c[..., 0] = np.sin(a[..., 0]), np.cos(a[..., 0])
        sign = 1.0 if hyperbolic else -1.0
        for k in range(1, n):
            j = np.arange(1, k + 1)
            ja = j * a[..., 1 : k + 1]
            s[..., k] = np.sum(ja * c[..., k - 1 :: -1][..., :k], axis=-1) / k
            c[..., k] = sign * np.sum(ja * s[..., k - 1 :: -1][..., :k], axis=-1) / k
        return Jet(s, self.t0), Jet(c, self.t0)

    def sin(self):
        return self._sincos(False)[0]

    def cos(self):
        return self._sincos(False)[1]

    def sinh(self):
        return self._sincos(True)[0]

    def cosh(self):
        return self._sincos(True)[1]


_MASKS = {}


def _cauchy_mask(n):
    """M[i, j, k] = 1 where i + j == k: sums an outer product into a truncated Cauchy product."""
    m = _MASKS.get(n)
    if m is None:
        i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        m = np.zeros((n, n, n))
        keep = i + j < n
        m[i[keep], j[keep], (i + j)[keep]] = 1.0
        _MASKS[n] = m
    return m


def _divide(a, b, t0):
    b0 = b[..., 0]
    if np.any(b0 == 0):
        raise DomainError("division by a series with zero constant term")
    n = min(a.shape[-1], b.shape[-1])
    q = np.zeros(np.broadcast_shapes(a.shape, b.shape)[:-1] + (n,))
    for k in range(n):
        acc = a[..., k].copy() if np.ndim(a[..., k]) else a[..., k]
        if k:
            acc = acc - np.sum(b[..., 1 : k + 1] * q[..., k - 1 :: -1][..., :k], axis=-1)
        q[..., k] = acc / b0
    return Jet(q, t0)


def _int_pow(x, n):
    result = Jet.constant(np.ones(x.shape), x.t0, x.order)
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def fit_jet(ts, values, t0, order, degree=None, window=None):
    """Taylor jet at t0 from sampled data via a local least-squares polynomial.

    ``values`` has shape (len(ts), ...) .  Used to rebuild derivatives of a
    numerically integrated curve; accuracy is limited by the sampling.
    """
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    degree = degree if degree is not None else order + 4
    if window is not None:
        keep = np.abs(ts - t0) <= window
        ts, values = ts[keep], values[keep]
    if len(ts) <= degree:
        raise ValueError("not enough samples for the requested fit degree")
    scale = np.max(np.abs(ts - t0))
    x = (ts - t0) / scale
    V = np.vander(x, degree + 1, increasing=True)
    flat = values.reshape(len(ts), -1)
    coef, *_ = np.linalg.lstsq(V, flat, rcond=None)
    coef = coef[: order + 1] / scale ** np.arange(order + 1)[:, None]
    return Jet(coef.T.reshape(values.shape[1:] + (order + 1,)), t0)
