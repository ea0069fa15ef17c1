"""Truncated Taylor series on the unit disk.

A :class:`CoefficientSeries` holds the coefficients ``a_0 .. a_N`` of a
polynomial ``sum a_n z^n``.  ``N`` is the *budget*: every operation is exact
through its output budget and drops higher degrees without approximating
them.  Coefficients beyond the budget are read as zero, so a series may be
freely zero-padded.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidAutomorphism, ZeroConstantTerm

# S^2-mass below which a series counts as identically zero.
ZERO_MASS = 1e-20


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[complex] | np.ndarray):
        arr = np.array(coeffs, dtype=complex).reshape(-1)
        if arr.size == 0:
            arr = np.zeros(1, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def budget(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, n: int) -> complex:
        if 0 <= n < self.coeffs.size:
            return complex(self.coeffs[n])
        if n < 0:
            raise IndexError(n)
        return 0j

    def __iter__(self):
        return iter(complex(c) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"CoefficientSeries({self.coeffs.tolist()!r})"

    def padded(self, budget: int) -> "CoefficientSeries":
        """Return the same polynomial re-expressed at ``budget``.

        Raising the budget appends zeros; lowering it truncates.
        """
        return CoefficientSeries(_fit(self.coeffs, budget))

    def degree(self, tol: float = 0.0) -> int:
        """Index of the last coefficient with modulus above ``tol`` (0 if none)."""
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        return int(nz[-1]) if nz.size else 0

    def s2_mass(self) -> float:
        n = np.arange(self.coeffs.size, dtype=float)
        w = n * n
        w[0] = 1.0
        return float(np.sum(w * np.abs(self.coeffs) ** 2))

    def is_zero(self) -> bool:
        return self.s2_mass() < ZERO_MASS

    def allclose(self, other: "CoefficientSeries", atol: float = 1e-12) -> bool:
        size = max(len(self), len(other))
        return bool(np.allclose(_fit(self.coeffs, size - 1), _fit(other.coeffs, size - 1), rtol=0, atol=atol))

    # serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs.tolist()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CoefficientSeries":
        if not isinstance(data, dict) or "coeffs" not in data:
            raise ValueError('series literal must be an object with a "coeffs" key')
        out = []
        for item in data["coeffs"]:
            if isinstance(item, (int, float)):
                out.append(complex(float(item), 0.0))
            elif isinstance(item, Sequence) and len(item) == 2:
                out.append(complex(float(item[0]), float(item[1])))
            else:
                raise ValueError(f"bad coefficient entry {item!r}; expected [re, im]")
        return cls(out)

    @classmethod
    def from_json(cls, text: str) -> "CoefficientSeries":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_inline(cls, text: str) -> "CoefficientSeries":
        """Parse ``"re,im;re,im;..."``; a bare ``re`` means a real coefficient."""
        out = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = [p.strip() for p in chunk.split(",")]
            if len(parts) == 1:
                out.append(complex(float(parts[0]), 0.0))
            elif len(parts) == 2:
                out.append(complex(float(parts[0]), float(parts[1])))
            else:
                raise ValueError(f"bad coefficient {chunk!r}; expected re,im")
        if not out:
            raise ValueError("empty coefficient list")
        return cls(out)


@dataclass(frozen=True)
class DiskAutomorphism:
    """The disk automorphism ``z -> e^{i theta} (a - z) / (1 - conj(a) z)``."""

    a: complex = 0j
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "theta", float(self.theta))
        if not abs(self.a) < 1.0:
            raise InvalidAutomorphism(f"|a| = {abs(self.a)!r} must be < 1")

    @property
    def rotation(self) -> complex:
        return cmath.exp(1j * self.theta)

    def __call__(self, z):
        return self.rotation * (self.a - z) / (1 - np.conj(self.a) * z)

    @classmethod
    def identity(cls) -> "DiskAutomorphism":
        return cls(0j, math.pi)


def _fit(arr: np.ndarray, budget: int) -> np.ndarray:
    out = np.zeros(budget + 1, dtype=complex)
    m = min(arr.size, budget + 1)
    out[:m] = arr[:m]
    return out


def as_series(f) -> CoefficientSeries:
    return f if isinstance(f, CoefficientSeries) else CoefficientSeries(f)


def linear_combination(c1: complex, f, c2: complex, g) -> CoefficientSeries:
    f, g = as_series(f), as_series(g)
    budget = max(f.budget, g.budget)
    return CoefficientSeries(c1 * _fit(f.coeffs, budget) + c2 * _fit(g.coeffs, budget))


def multiply(f, g, budget: int) -> CoefficientSeries:
    """Cauchy product of ``f`` and ``g`` through degree ``budget``."""
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    f, g = as_series(f), as_series(g)
    a = f.coeffs[: budget + 1]
    b = g.coeffs[: budget + 1]
    return CoefficientSeries(_fit(np.convolve(a, b), budget))


def differentiate(f) -> CoefficientSeries:
    f = as_series(f)
    if f.budget == 0:
        return CoefficientSeries([0])
    n = np.arange(1, f.budget + 1)
    return CoefficientSeries(n * f.coeffs[1:])


def evaluate(f, z):
    """Horner evaluation; ``z`` may be a scalar or a numpy array."""
    f = as_series(f)
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in f.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc) if acc.ndim == 0 else acc


def reciprocal(f, budget: int) -> CoefficientSeries:
    """Taylor coefficients of ``1/f`` through ``budget``."""
    f = as_series(f)
    f0 = f[0]
    if f0 == 0:
        raise ZeroConstantTerm("reciprocal needs a nonzero constant term")
    a = _fit(f.coeffs, budget)
    g = np.zeros(budget + 1, dtype=complex)
    g[0] = 1.0 / f0
    for n in range(1, budget + 1):
        # sum_{k=1}^{n} a[k] g[n-k]
        g[n] = -np.dot(a[1 : n + 1], g[n - 1 :: -1][:n]) / f0
    return CoefficientSeries(g)


def divide_by_linear(f, w: complex) -> tuple[CoefficientSeries, complex]:
    """Synthetic division ``f(z) = (z - w) q(z) + r`` with ``r = f(w)``."""
    f = as_series(f)
    a = f.coeffs
    if f.budget == 0:
        return CoefficientSeries([0]), complex(a[0])
    q = np.zeros(f.budget, dtype=complex)
    carry = 0j
    for k in range(f.budget, 0, -1):
        carry = a[k] + w * carry
        q[k - 1] = carry
    remainder = a[0] + w * carry
    return CoefficientSeries(q), complex(remainder)


def mobius_taylor(phi: DiskAutomorphism, budget: int) -> CoefficientSeries:
    """Taylor coefficients of ``phi`` through ``budget``."""
    if not abs(phi.a) < 1.0:
        raise InvalidAutomorphism(f"|a| = {abs(phi.a)!r} must be < 1")
    u = phi.rotation
    a = phi.a
    out = np.zeros(budget + 1, dtype=complex)
    out[0] = u * a
    if budget >= 1:
        ab = a.conjugate()
        out[1:] = -u * (1 - abs(a) ** 2) * ab ** np.arange(budget)
    return CoefficientSeries(out)


def compose_with_automorphism(f, phi: DiskAutomorphism, budget: int) -> CoefficientSeries:
    """Taylor coefficients of ``f o phi`` through ``budget``.

    The result is the exact composition of the polynomial ``f`` (as stored)
    with ``phi``, truncated to ``budget``; there is no other error source.
    Horner's scheme on series: ``acc <- f[k] + phi * acc`` from the top down.
    """
    f = as_series(f)
    p = mobius_taylor(phi, budget).coeffs
    acc = np.zeros(budget + 1, dtype=complex)
    for c in f.coeffs[::-1]:
        acc = np.convolve(p, acc)[: budget + 1]
        acc[0] += c
    return CoefficientSeries(acc)


def automorphism_powers(phi: DiskAutomorphism, count: int, budget: int) -> np.ndarray:
    """Rows ``k = 0 .. count`` hold the coefficients of ``phi**k`` through ``budget``."""
    p = mobius_taylor(phi, budget).coeffs
    out = np.zeros((count + 1, budget + 1), dtype=complex)
    out[0, 0] = 1.0
    for k in range(1, count + 1):
        out[k] = np.convolve(out[k - 1], p)[: budget + 1]
    return out
