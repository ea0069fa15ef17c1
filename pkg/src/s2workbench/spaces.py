"""Norms, inner products and reproducing kernels on H^2, A^2_beta, D and S^2.

All four spaces are handled in coefficient form: a norm is a weighted l^2
sum of Taylor coefficients with diagonal weights ``w_n`` (``w_0 = 1``)::

    Hardy       1
    Bergman     n ** -(beta + 1)
    Dirichlet   n
    S2          n ** 2
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamples, InvalidBeta, OutsideDisk
from .series import CoefficientSeries, as_series, evaluate

SUP_NORM_CONSTANT = math.pi * math.sqrt(3) / 3
KERNEL_TAIL_TOL = 1e-12

_KINDS = ("hardy", "bergman", "dirichlet", "s2")


@dataclass(frozen=True)
class SpaceTag:
    kind: str
    beta: float | None = None

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in _KINDS:
            raise ValueError(f"unknown space {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "kind", kind)
        if kind == "bergman":
            beta = 0.0 if self.beta is None else float(self.beta)
            if not beta > -1:
                raise InvalidBeta(f"Bergman weight needs beta > -1, got {beta!r}")
            object.__setattr__(self, "beta", beta)
        else:
            object.__setattr__(self, "beta", None)

    def __str__(self):
        return f"bergman(beta={self.beta:g})" if self.kind == "bergman" else self.kind


HARDY = SpaceTag("hardy")
DIRICHLET = SpaceTag("dirichlet")
S2 = SpaceTag("s2")


def bergman(beta: float = 0.0) -> SpaceTag:
    return SpaceTag("bergman", beta)


@dataclass(frozen=True)
class NormReport:
    space: SpaceTag
    value: float
    budget: int

    def to_dict(self) -> dict:
        return {"space": self.space.kind, "beta": self.space.beta, "value": self.value, "budget": self.budget}


def weights(space: SpaceTag, budget: int) -> np.ndarray:
    n = np.arange(budget + 1, dtype=float)
    if space.kind == "hardy":
        w = np.ones_like(n)
    elif space.kind == "bergman":
        w = np.ones_like(n)
        w[1:] = n[1:] ** -(space.beta + 1)
    elif space.kind == "dirichlet":
        w = n.copy()
    else:
        w = n * n
    w[0] = 1.0
    return w


def series_norm(space: SpaceTag, f) -> NormReport:
    f = as_series(f)
    w = weights(space, f.budget)
    mags = np.abs(f.coeffs)
    top = float(np.max(mags))
    value = 0.0
    if top > 0:
        value = top * math.sqrt(float(np.sum(w * (mags / top) ** 2)))
    return NormReport(space, value, f.budget)


def norm(space: SpaceTag, f) -> float:
    """Shorthand for ``series_norm(space, f).value``."""
    return series_norm(space, f).value


def inner_product(space: SpaceTag, f, g) -> complex:
    f, g = as_series(f), as_series(g)
    size = max(len(f), len(g))
    a = f.padded(size - 1).coeffs
    b = g.padded(size - 1).coeffs
    return complex(np.sum(weights(space, size - 1) * a * np.conj(b)))


def boundary_values(f, samples: int) -> np.ndarray:
    """Values of ``f`` at the ``samples``-th roots of unity."""
    z = np.exp(2j * np.pi * np.arange(samples) / samples)
    return np.asarray(evaluate(f, z))


def sup_norm_estimate(f, samples: int = 4096) -> float:
    """Largest modulus over equally spaced boundary samples.

    By the maximum modulus principle this never exceeds the true sup norm,
    and it converges to it as ``samples`` grows.
    """
    if samples < 8:
        raise InsufficientSamples("sup-norm sampling needs at least 8 points")
    return float(np.max(np.abs(boundary_values(f, samples))))


def hardy_norm_quadrature(f, samples: int) -> float:
    """H^2 norm from the boundary integral, by the trapezoid rule at r = 1.

    Exact (up to rounding) for a polynomial of degree N once samples > 2N.
    """
    f = as_series(f)
    if samples <= 2 * f.budget:
        raise InsufficientSamples(f"need more than {2 * f.budget} samples for budget {f.budget}")
    mags = np.abs(boundary_values(f, samples))
    top = float(np.max(mags))
    if top == 0:
        return 0.0
    return top * math.sqrt(float(np.mean((mags / top) ** 2)))


def _check_disk(w: complex):
    if not abs(w) < 1.0:
        raise OutsideDisk(f"|w| = {abs(w)!r} must be < 1")


def s2_kernel_budget(w: complex, tol: float = KERNEL_TAIL_TOL) -> int:
    """Smallest N whose S^2 kernel tail bound ``|w|^(2N) / (N^2 (1 - |w|^2))`` is below ``tol``.

    The bound dominates ``sum_{n > N} |w|^(2n) / n^2``.
    """
    _check_disk(w)
    r2 = abs(w) ** 2
    if r2 == 0:
        return 1
    n = 1
    while r2**n / (n * n * (1 - r2)) >= tol:
        n += 1
    return n


def kernel_series(space: SpaceTag, w: complex, budget: int) -> CoefficientSeries:
    """Coefficients of the kernel reproducing evaluation at ``w`` for the series inner product.

    Coefficient n is ``conj(w)**n / w_n``; for S^2 that is ``conj(w)**n / n**2``.
    """
    _check_disk(w)
    n = np.arange(budget + 1)
    return CoefficientSeries(np.conj(complex(w)) ** n / weights(space, budget))


def kernel_value(space: SpaceTag, w: complex, z: complex, budget: int | None = None) -> complex:
    _check_disk(w)
    t = complex(w).conjugate() * complex(z)
    if space.kind == "hardy":
        return 1 / (1 - t)
    if space.kind == "bergman":
        return (1 - t) ** -(space.beta + 2)
    if space.kind == "dirichlet":
        return 1 + cmath.log(1 / (1 - t))
    if budget is None:
        budget = s2_kernel_budget(w)
    n = np.arange(1, budget + 1)
    return complex(1 + np.sum(t**n / (n * n)))


def kernel_norm_squared(space: SpaceTag, w: complex, budget: int | None = None) -> float:
    _check_disk(w)
    r2 = abs(w) ** 2
    if space.kind == "hardy":
        return 1 / (1 - r2)
    if space.kind == "bergman":
        return (1 - r2) ** -(space.beta + 2)
    if space.kind == "dirichlet":
        return 1 + math.log(1 / (1 - r2))
    if budget is None:
        budget = s2_kernel_budget(w)
    n = np.arange(1, budget + 1, dtype=float)
    return float(1 + np.sum(r2**n / (n * n)))
