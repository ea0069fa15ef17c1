"""Multiplication and weighted composition operators on S^2.

Matrices are written in the orthonormal S^2 basis ``e_0 = 1``,
``e_n = z^n / n`` (n >= 1).  A monomial coefficient ``c_j`` of ``z^j``
becomes the basis coefficient ``j * c_j`` because ``z^j = j e_j``.

The finite section of an operator is its compression to ``span(e_0..e_N)``,
so its largest singular value is a lower bound for the operator norm.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundViolation, BudgetTooSmall, NonConverged, ZeroConstantTerm
from .series import (
    CoefficientSeries,
    DiskAutomorphism,
    as_series,
    automorphism_powers,
    evaluate,
    linear_combination,
    multiply,
    reciprocal,
)
from .spaces import S2, norm, sup_norm_estimate

log = logging.getLogger(__name__)

MOP_UPPER_CONSTANT = math.sqrt(1 + 4 * math.pi**2 / 3)
WCO_UPPER_CONSTANT = math.sqrt(1 + 8 * math.pi**2 / 3)

RADIAL_STEPS = 64
ANGULAR_STEPS = 512
RESIDUAL_TOL = 1e-8
SQUARE_EVERY = 4


@dataclass(frozen=True, eq=False)
class FiniteSectionMatrix:
    entries: np.ndarray
    basis_note: str = "e_0 = 1, e_n = z^n / n"

    @property
    def section_size(self) -> int:
        return self.entries.shape[0] - 1

    def to_dict(self) -> dict:
        return {
            "n": self.section_size,
            "entries": [[[c.real, c.imag] for c in row] for row in self.entries.tolist()],
        }


@dataclass(frozen=True)
class OperatorNormEstimate:
    lower_bound: float
    paper_lower: float
    paper_upper: float
    section_size: int
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "lowerBound": self.lower_bound,
            "paperLower": self.paper_lower,
            "paperUpper": self.paper_upper,
            "sectionSize": self.section_size,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class Certificate:
    c: float
    resolvent_norm_bound: float
    residual: float
    inverse_norm_squared: float

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "resolventNormBound": self.resolvent_norm_bound,
            "residual": self.residual,
            "inverseNormSquared": self.inverse_norm_squared,
        }


@dataclass(frozen=True)
class Membership:
    lam: complex
    verdict: str  # "Inside" | "Outside" | "Uncertain"
    distance: float
    eps_in: float
    certificate: Certificate | None = None

    def to_dict(self) -> dict:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "verdict": self.verdict,
            "distance": self.distance,
            "epsIn": self.eps_in,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


@dataclass
class SpectrumReport:
    image_samples: np.ndarray
    queries: list = field(default_factory=list)

    def distinct_values(self, tol: float = 1e-12) -> list[complex]:
        out: list[complex] = []
        for v in self.image_samples:
            if all(abs(v - u) > tol for u in out):
                out.append(complex(v))
        return out

    def to_dict(self) -> dict:
        return {
            "imageSamples": [[v.real, v.imag] for v in self.image_samples.tolist()],
            "queries": [q.to_dict() for q in self.queries],
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["re", "im"])
            for v in self.image_samples.tolist():
                writer.writerow([repr(v.real), repr(v.imag)])


def _check_section(N: int):
    if N < 1:
        raise BudgetTooSmall(f"section size must be >= 1, got {N}")


def _basis_scale(N: int) -> np.ndarray:
    j = np.arange(N + 1, dtype=float)
    j[0] = 1.0
    return j


def multiplier_matrix(psi, N: int) -> FiniteSectionMatrix:
    """Compression of ``M_psi`` to ``span(e_0..e_N)``.

    ``entry[m][0] = m b_m``, ``entry[m][n] = (m / n) b_{m-n}`` for m >= n >= 1,
    zero above the diagonal (``entry[0][0] = b_0``).
    """
    _check_section(N)
    b = as_series(psi).padded(N).coeffs
    m = np.arange(N + 1)[:, None]
    n = np.arange(N + 1)[None, :]
    diff = m - n
    toeplitz = np.where(diff >= 0, b[np.clip(diff, 0, N)], 0)
    scale = _basis_scale(N)
    return FiniteSectionMatrix(toeplitz * (scale[:, None] / scale[None, :]))


def composition_columns(phi: DiskAutomorphism, N: int) -> np.ndarray:
    """Monomial coefficients (rows = degree) of ``e_n o phi`` for n = 0..N."""
    powers = automorphism_powers(phi, N, N)
    return powers.T / _basis_scale(N)[None, :]


def weighted_composition_matrix(psi, phi: DiskAutomorphism, N: int) -> FiniteSectionMatrix:
    """Compression of ``W_{psi,phi} f = psi (f o phi)`` to ``span(e_0..e_N)``.

    Column n holds the basis coefficients of ``psi * (e_n o phi)`` through
    degree N.  Degrees above N never feed back into lower ones, so the
    column equals truncate(psi * truncate(e_n o phi)).
    """
    _check_section(N)
    b = as_series(psi).padded(N).coeffs
    cols = composition_columns(phi, N)
    out = np.empty_like(cols)
    for n in range(N + 1):
        out[:, n] = np.convolve(b, cols[:, n])[: N + 1]
    return FiniteSectionMatrix(out * _basis_scale(N)[:, None])


def section_norm(A, tol: float = 1e-13, max_iter: int = 2000) -> float:
    """Largest singular value by power iteration on ``A^H A``.

    Starts from the normalized all-ones vector.  Each iterate ``||A x||`` is
    a lower bound for the largest singular value; iteration stops once
    successive estimates agree to relative ``tol``.  The Gram matrix is
    squared every ``SQUARE_EVERY`` steps to speed up clustered spectra.  Raises
    :class:`NonConverged` (carrying the best estimate) at ``max_iter``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = A.entries if isinstance(A, FiniteSectionMatrix) else np.asarray(A, dtype=complex)
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    if scale == 0.0:
        return 0.0
    # iterate on A / scale so tiny or huge entries neither underflow nor overflow
    try:
        return scale * _power_iteration(A / scale, tol, max_iter)
    except NonConverged as exc:
        raise NonConverged(str(exc), scale * exc.estimate) from None


def _power_iteration(A: np.ndarray, tol: float, max_iter: int) -> float:
    # every few steps the Gram matrix is squared, so step k applies a power
    # of A^H A that doubles periodically; clustered top singular values then
    # separate in a handful of steps instead of thousands
    gram = A.conj().T @ A
    x = np.ones(A.shape[1], dtype=complex) / math.sqrt(A.shape[1])
    prev = 0.0
    best = 0.0
    for it in range(max_iter):
        est = float(np.linalg.norm(A @ x))
        best = max(best, est)
        if est == 0.0:
            return 0.0
        if abs(est - prev) <= tol * est:
            return best
        prev = est
        x = gram @ x
        x /= np.linalg.norm(x)
        if it % SQUARE_EVERY == SQUARE_EVERY - 1:
            gram = gram @ gram
            gram /= np.max(np.abs(gram))
    raise NonConverged(f"power iteration did not settle in {max_iter} steps", best)


def _lower_bound(A) -> tuple[float, bool]:
    try:
        return section_norm(A), True
    except NonConverged as exc:
        log.warning("section norm not converged; using estimate %.17g", exc.estimate)
        return exc.estimate, False


def mop_norm_bounds(psi, N: int, tol: float = 1e-9, samples: int = 4096) -> OperatorNormEstimate:
    """Finite-section norm of ``M_psi`` next to the theoretical bounds

    ``max(||psi||_S2, ||psi||_inf) <= ||M_psi|| <= sqrt(1 + 4 pi^2 / 3) ||psi||_S2``.
    """
    psi = as_series(psi)
    lower, converged = _lower_bound(multiplier_matrix(psi, N))
    s2 = norm(S2, psi)
    est = OperatorNormEstimate(
        lower_bound=lower,
        paper_lower=max(s2, sup_norm_estimate(psi, samples)),
        paper_upper=MOP_UPPER_CONSTANT * s2,
        section_size=N,
        converged=converged,
    )
    _check_sandwich(est, tol)
    return est


def wco_upper_constant(phi: DiskAutomorphism) -> float:
    r = abs(phi.a)
    return math.sqrt((1 + 8 * math.pi**2 / 3) * (1 + r) / (1 - r))


def wco_norm_bounds(psi, phi: DiskAutomorphism, N: int, tol: float = 1e-9) -> OperatorNormEstimate:
    psi = as_series(psi)
    lower, converged = _lower_bound(weighted_composition_matrix(psi, phi, N))
    s2 = norm(S2, psi)
    est = OperatorNormEstimate(
        lower_bound=lower,
        paper_lower=s2,
        paper_upper=wco_upper_constant(phi) * s2,
        section_size=N,
        converged=converged,
    )
    _check_sandwich(est, tol)
    return est


def _check_sandwich(est: OperatorNormEstimate, tol: float):
    # the lower side only holds once the section has converged
    if est.lower_bound > est.paper_upper + tol or (
        est.converged and est.lower_bound < est.paper_lower - tol
    ):
        raise BoundViolation(
            f"section norm {est.lower_bound!r} outside [{est.paper_lower!r}, {est.paper_upper!r}]"
        )


def isometry_defect(psi) -> float:
    """How far ``M_psi`` is from preserving the norms of ``1`` and ``z``.

    Returns ``max(| ||psi||_S2 - 1 |, | ||z psi||_S2^2 - 1 |)`` where
    ``||z psi||_S2^2 = |a_0|^2 + sum (n+1)^2 |a_n|^2``.  Zero exactly for
    unimodular constants.
    """
    a = as_series(psi).coeffs
    n = np.arange(a.size, dtype=float)
    t = float(np.sum((n + 1) ** 2 * np.abs(a) ** 2))
    return max(abs(norm(S2, psi) - 1.0), abs(t - 1.0))


def compactness_diagnostic(psi, N: int) -> np.ndarray:
    """``d_n = ||psi e_n||_S2`` for n = 1..N.

    The basis vectors tend weakly to zero, so a compact ``M_psi`` would force
    ``d_n -> 0``.  Products are formed without truncation.
    """
    _check_section(N)
    psi = as_series(psi)
    out = np.empty(N)
    for n in range(1, N + 1):
        e_n = CoefficientSeries(np.r_[np.zeros(n), 1.0 / n])
        out[n - 1] = norm(S2, multiply(psi, e_n, psi.budget + n))
    return out


def point_spectrum(psi, tol: float = 1e-8) -> set[complex]:
    a = as_series(psi).coeffs
    n = np.arange(a.size, dtype=float)
    tail = float(np.sum(n[1:] ** 2 * np.abs(a[1:]) ** 2))
    if tail < tol * tol:
        return {complex(a[0])}
    return set()


def disk_grid(radial_steps: int = RADIAL_STEPS, angular_steps: int = ANGULAR_STEPS) -> np.ndarray:
    """Points ``(j / R) e^{2 pi i k / A}``, j = 0..R, k = 0..A-1 (origin once)."""
    r = np.arange(1, radial_steps + 1) / radial_steps
    theta = 2 * np.pi * np.arange(angular_steps) / angular_steps
    pts = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    return np.r_[0j, pts]


def spectrum_sample(psi, radial_steps: int = RADIAL_STEPS, angular_steps: int = ANGULAR_STEPS) -> SpectrumReport:
    if radial_steps < 1 or angular_steps < 8:
        raise ValueError("need radial_steps >= 1 and angular_steps >= 8")
    return SpectrumReport(np.asarray(evaluate(psi, disk_grid(radial_steps, angular_steps))))


def grid_guard(psi, radial_steps: int = RADIAL_STEPS, angular_steps: int = ANGULAR_STEPS) -> float:
    """Upper bound on how far ``psi`` can move between a point of the closed disk and its nearest grid point.

    Every point lies within ``1/(2R) + pi/A`` of the grid and ``|psi'|`` is
    at most ``sum n |a_n|`` on the closed disk.
    """
    a = as_series(psi).coeffs
    lipschitz = float(np.sum(np.arange(a.size) * np.abs(a)))
    return lipschitz * (0.5 / radial_steps + math.pi / angular_steps)


def spectrum_membership(
    psi,
    lam: complex,
    eps_in: float | None = None,
    budget: int = 256,
    radial_steps: int = RADIAL_STEPS,
    angular_steps: int = ANGULAR_STEPS,
) -> Membership:
    """Decide whether ``lam`` lies in ``psi(closed disk)``, the spectrum of ``M_psi``.

    ``Inside`` when the sampled image comes within ``eps_in`` of ``lam``.
    Otherwise the reciprocal ``g = 1/(psi - lam)`` is expanded to ``budget``
    and the untruncated product ``(psi - lam) g - 1`` is measured in S^2;
    a residual below 1e-8 certifies ``Outside``, anything larger is
    ``Uncertain``.  ``eps_in`` defaults to :func:`grid_guard`.
    """
    psi = as_series(psi)
    lam = complex(lam)
    if eps_in is None:
        eps_in = max(grid_guard(psi, radial_steps, angular_steps), 1e-12)
    if eps_in <= 0:
        raise ValueError("eps_in must be positive")
    shifted = linear_combination(1, psi, -lam, [1])
    if shifted[0] == 0:
        return Membership(lam, "Inside", 0.0, eps_in)
    samples = evaluate(psi, disk_grid(radial_steps, angular_steps))
    c = float(np.min(np.abs(samples - lam)))
    if c <= eps_in:
        return Membership(lam, "Inside", c, eps_in)
    try:
        g = reciprocal(shifted, budget)
    except ZeroConstantTerm:
        return Membership(lam, "Inside", c, eps_in)
    product = multiply(shifted, g, budget + psi.budget)
    residual = norm(S2, linear_combination(1, product, -1, [1]))
    s2 = norm(S2, psi)
    cert = Certificate(
        c=c,
        resolvent_norm_bound=1 / c**2 + s2**2 / c**4,
        residual=residual,
        inverse_norm_squared=norm(S2, g) ** 2,
    )
    verdict = "Outside" if residual < RESIDUAL_TOL else "Uncertain"
    return Membership(lam, verdict, c, eps_in, cert)
