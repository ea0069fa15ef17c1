"""Seeded property harness for the S^2 inequalities and characterizations.

Each ``check_*`` function draws random polynomials, evaluates one
inequality per trial and returns a :class:`TheoremReport`.  Everything is
a deterministic function of the :class:`TrialConfig`.

Random polynomials
------------------
``random_polynomial(seed, index, max_degree, scale)`` seeds numpy's PCG64
through ``SeedSequence([seed mod 2**64, index])`` and draws, in order:
the degree ``integers(0, max_degree + 1)``, then ``deg + 1`` real parts and
``deg + 1`` imaginary parts from ``uniform(-scale, scale)``.

Sub-seeds
---------
A check named ``theorem_id`` uses the sub-seed formed by the first 8 bytes
(big endian) of ``sha256(f"{seed}:{theorem_id}")``.  A failure's ``input``
field reads ``"<theorem_id>:<subseed>:<index>"``; feeding the sub-seed and
index back to :func:`random_polynomial` rebuilds the offending input.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BoundViolation
from .operators import (
    compactness_diagnostic,
    disk_grid,
    isometry_defect,
    mop_norm_bounds,
    point_spectrum,
    spectrum_membership,
    spectrum_sample,
    wco_norm_bounds,
)
from .series import (
    CoefficientSeries,
    DiskAutomorphism,
    compose_with_automorphism,
    differentiate,
    divide_by_linear,
    evaluate,
    linear_combination,
    multiply,
)
from .spaces import (
    DIRICHLET,
    HARDY,
    S2,
    SUP_NORM_CONSTANT,
    bergman,
    boundary_values,
    hardy_norm_quadrature,
    kernel_norm_squared,
    norm,
    s2_kernel_budget,
    sup_norm_estimate,
)

PRODUCT_RULE_CONSTANT = 2 * SUP_NORM_CONSTANT
MAX_COMPOSITION_RADIUS = 0.9

DEFAULT_AUTOMORPHISMS = (
    DiskAutomorphism(0.0, 0.0),
    DiskAutomorphism(0.3, 0.0),
    DiskAutomorphism(0.6, math.pi / 3),
    DiskAutomorphism(0.9j, math.pi / 3),
)


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 42
    trials: int = 500
    max_degree: int = 20
    scale: float = 1.0
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.trials < 1 or self.max_degree < 1 or not self.tolerance > 0:
            raise ValueError("need trials >= 1, max_degree >= 1 and tolerance > 0")


@dataclass
class TheoremReport:
    theorem_id: str
    trials: int = 0
    failures: list = field(default_factory=list)
    max_slack: float = math.inf
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, digest: str, measured: float, bound: float) -> None:
        """Count one trial of ``measured <= bound``."""
        self.trials += 1
        slack = bound - measured
        if not slack >= 0:  # also catches nan
            self.failures.append({"input": digest, "measured": measured, "bound": bound})
        if slack < self.max_slack:
            self.max_slack = slack

    def to_dict(self) -> dict:
        return {
            "theoremId": self.theorem_id,
            "trials": self.trials,
            "failures": self.failures,
            "maxSlack": self.max_slack if math.isfinite(self.max_slack) else None,
            "notes": self.notes,
            "passed": self.passed,
        }


def sub_seed(seed: int, theorem_id: str) -> int:
    digest = hashlib.sha256(f"{seed}:{theorem_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed % 2**64, *keys]))


def random_polynomial(seed: int, index: int, max_degree: int, scale: float) -> CoefficientSeries:
    rng = _rng(seed, index)
    deg = int(rng.integers(0, max_degree + 1))
    re = rng.uniform(-scale, scale, deg + 1)
    im = rng.uniform(-scale, scale, deg + 1)
    return CoefficientSeries(re + 1j * im)


def _digest(theorem_id: str, seed: int, index: int) -> str:
    return f"{theorem_id}:{seed}:{index}"


def _draw(config: TrialConfig, seed: int, index: int) -> CoefficientSeries:
    return random_polynomial(seed, index, config.max_degree, config.scale)


# Sup-norm constant ----------------------------------------------------------


def check_sup_norm(config: TrialConfig, samples: int = 4096) -> TheoremReport:
    tid = "Prop2.2"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    for i in range(config.trials):
        f = _draw(config, seed, i)
        rep.record(
            _digest(tid, seed, i),
            sup_norm_estimate(f, samples),
            SUP_NORM_CONSTANT * norm(S2, f) + config.tolerance,
        )
    return rep


# Kernel, composition and product-rule bounds --------------------------------


def check_product_rule(config: TrialConfig) -> TheoremReport:
    tid = "Lem2.3c"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    for i in range(config.trials):
        f = _draw(config, seed, 2 * i)
        g = _draw(config, seed, 2 * i + 1)
        fg = multiply(f, g, f.budget + g.budget)
        rep.record(
            _digest(tid, seed, 2 * i),
            norm(HARDY, differentiate(fg)),
            PRODUCT_RULE_CONSTANT * norm(S2, f) * norm(S2, g) + config.tolerance,
        )
    return rep


def composition_budget(f, phi: DiskAutomorphism, tail_tol: float, cap: int = 100_000) -> int:
    """Budget B at which the dropped part of ``(f o phi)'`` has H^2 mass below ``tail_tol``.

    ``f o phi`` is analytic on ``|z| < 1/|a|``.  For ``1 < r < 1/|a|`` the
    Cauchy estimate gives ``|c_j| <= M_r r^-j`` with
    ``M_r <= sum |f_k| rho^k`` and ``rho = (r - |a|) / (1 - |a| r)`` the
    largest ``|phi|`` on ``|z| = r``.  The dropped mass
    ``sum_{j>B} j^2 |c_j|^2`` is then at most
    ``M_r^2 (B+1)^2 q^(B+1) / (1 - q ((B+2)/(B+1))^2)`` with ``q = r^-2``.
    The radius r is scanned over a fixed grid and the smallest B kept.
    """
    f = CoefficientSeries(f) if not isinstance(f, CoefficientSeries) else f
    ra = abs(phi.a)
    if ra == 0:
        return f.budget
    absf = np.abs(f.coeffs)
    k = np.arange(absf.size)
    if not absf.any():
        return f.budget
    t = np.linspace(0.02, 0.98, 49)[:, None]
    r = 1 + t * (1 / ra - 1)
    rho = (r - ra) / (1 - ra * r)
    log_m = np.log(np.sum(absf[None, :] * rho ** k[None, :], axis=1, keepdims=True))
    log_q = -2 * np.log(r)
    start = f.budget
    while start < cap:
        b = np.arange(start, min(start + 1024, cap), dtype=float)[None, :]
        ratio = np.exp(log_q) * ((b + 2) / (b + 1)) ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            log_tail = 2 * log_m + 2 * np.log(b + 1) + (b + 1) * log_q - np.log1p(-ratio)
        ok = np.nonzero(np.any((ratio < 1) & (log_tail < math.log(tail_tol)), axis=0))[0]
        if ok.size:
            return int(b[0, ok[0]])
        start += 1024
    return cap


def check_composition_bound(config: TrialConfig, automorphisms=None) -> TheoremReport:
    tid = "Lem2.3b"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    if automorphisms is None:
        automorphisms = [DiskAutomorphism(a) for a in (0.0, 0.3, 0.6)]
    for j, phi in enumerate(automorphisms):
        ra = abs(phi.a)
        if ra > MAX_COMPOSITION_RADIUS:
            rep.notes.append(f"excluded |a| = {ra:.6g} > {MAX_COMPOSITION_RADIUS}: tail control degenerates")
            continue
        factor = (1 + ra) / (1 - ra)
        for i in range(config.trials):
            idx = j * config.trials + i
            f = _draw(config, seed, idx)
            budget = composition_budget(f, phi, config.tolerance / 10)
            composed = compose_with_automorphism(f, phi, budget)
            rep.record(
                _digest(tid, seed, idx),
                norm(HARDY, differentiate(composed)) ** 2,
                factor * norm(S2, f) ** 2 + config.tolerance,
            )
    rep.notes.append("composition budget from the Cauchy-estimate tail bound with tail < tolerance/10")
    return rep


def kernel_grid(radii: int = 100, angles: int = 16, r_max: float = 0.99) -> np.ndarray:
    r = np.linspace(0.0, r_max, radii)
    theta = 2 * np.pi * np.arange(angles) / angles
    return (r[:, None] * np.exp(1j * theta)[None, :]).ravel()


def check_kernel_bound(grid=None) -> TheoremReport:
    tid = "Lem2.3a"
    rep = TheoremReport(tid)
    if grid is None:
        grid = kernel_grid()
    for i, w in enumerate(grid):
        w = complex(w)
        rep.record(
            f"{tid}:w={w.real:.17g},{w.imag:.17g}",
            kernel_norm_squared(S2, w, s2_kernel_budget(w)),
            1 / (1 - abs(w) ** 2),
        )
    return rep


# Operator norm sandwiches ---------------------------------------------------


def _record_sandwich(rep: TheoremReport, digest: str, est, tol: float) -> None:
    # both sides folded into one margin: measured <= bound reads as margin >= 0
    margin = min(est.lower_bound - (est.paper_lower - tol), (est.paper_upper + tol) - est.lower_bound)
    rep.record(digest, -margin, 0.0)
    if not est.converged:
        rep.notes.append(f"{digest}: power iteration did not converge")


def check_mop_sandwich(config: TrialConfig, section: int | None = None) -> TheoremReport:
    tid = "Thm3.3"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    N = section or 3 * config.max_degree
    for i in range(config.trials):
        psi = _draw(config, seed, i)
        try:
            est = mop_norm_bounds(psi, N, tol=config.tolerance)
        except BoundViolation:
            est = mop_norm_bounds(psi, N, tol=math.inf)
        _record_sandwich(rep, _digest(tid, seed, i), est, config.tolerance)
    return rep


def check_wco_sandwich(config: TrialConfig, automorphisms=DEFAULT_AUTOMORPHISMS, section: int | None = None) -> TheoremReport:
    tid = "Thm3.1"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    N = section or 3 * config.max_degree
    for i in range(config.trials):
        psi = _draw(config, seed, i)
        for j, phi in enumerate(automorphisms):
            try:
                est = wco_norm_bounds(psi, phi, N, tol=config.tolerance)
            except BoundViolation:
                est = wco_norm_bounds(psi, phi, N, tol=math.inf)
            _record_sandwich(rep, f"{_digest(tid, seed, i)}:phi{j}", est, config.tolerance)
    return rep


def check_norm_sandwiches(config: TrialConfig, automorphisms=DEFAULT_AUTOMORPHISMS) -> list[TheoremReport]:
    return [check_mop_sandwich(config), check_wco_sandwich(config, automorphisms)]


# Factorization --------------------------------------------------------------


def check_factorization(config: TrialConfig, remainder_tol: float = 1e-10, recovery_tol: float = 1e-9) -> TheoremReport:
    """Build ``f = (z - w)^n g``, divide ``n`` times, compare with ``g``.

    Each trial records the worst of its three normalized margins (remainders,
    recovery error, ``|f(w)|``), so ``measured <= 1`` means all three held.
    """
    tid = "Prop2.4"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    for i in range(config.trials):
        rng = _rng(seed, i, 1)
        w = complex(*rng.uniform(-0.9, 0.9, 2)) * 0.9 / math.sqrt(2)
        order = int(rng.integers(1, 4))
        k = 0
        while True:
            idx = i * 1000 + k
            g = _draw(config, seed, idx)
            if abs(evaluate(g, w)) > 0.1:
                break
            k += 1
        f = g
        for _ in range(order):
            f = multiply(f, [-w, 1], f.budget + 1)
        h = f
        worst_rem = 0.0
        for _ in range(order):
            h, rem = divide_by_linear(h, w)
            worst_rem = max(worst_rem, abs(rem))
        err = norm(S2, linear_combination(1, h, -1, g))
        fw = abs(evaluate(f, w))
        measured = max(worst_rem / remainder_tol, err / recovery_tol, fw / remainder_tol)
        if not math.isfinite(norm(S2, h)):
            measured = math.inf
        rep.record(_digest(tid, seed, idx), measured, 1.0)
    rep.notes.append(f"margins normalized by remainder tol {remainder_tol:g} and recovery tol {recovery_tol:g}")
    return rep


# Spectrum and compactness ---------------------------------------------------


def check_point_spectrum(config: TrialConfig, tol: float = 1e-8) -> TheoremReport:
    """Constants have point spectrum ``{c}``; nonconstant symbols have none.

    Measured is 0 for a correct answer and 1 otherwise.
    """
    tid = "Thm4.1"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    for i in range(config.trials):
        psi = _draw(config, seed, i)
        c = psi[0]
        ok = point_spectrum([c], tol) == {c}
        if psi.degree() >= 1:
            ok = ok and point_spectrum(psi, tol) == set()
        rep.record(_digest(tid, seed, i), 0.0 if ok else 1.0, 0.0)
    return rep


def check_spectrum(config: TrialConfig) -> TheoremReport:
    """Membership verdicts for ``psi = z`` plus consistency on random symbols.

    Random trials query one sampled image point (must be ``Inside``) and one
    point ``1.5 * max|psi| + 1`` away from the origin (must not be refuted
    by a finer grid when ``Outside``).
    """
    tid = "Thm4.3"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    z = CoefficientSeries([0, 1])
    for lam in (0, 0.9, 0.99j):
        v = spectrum_membership(z, lam)
        rep.record(f"{tid}:z:lambda={lam}", 0.0 if v.verdict == "Inside" else 1.0, 0.0)
    for lam in (1.5, 2j):
        v = spectrum_membership(z, lam)
        ok = v.verdict == "Outside" and v.certificate.residual < 1e-8
        rep.record(f"{tid}:z:lambda={lam}", 0.0 if ok else 1.0, 0.0)
    trials = min(config.trials, 50)
    for i in range(trials):
        psi = _draw(config, seed, i)
        rng = _rng(seed, i, 2)
        image = spectrum_sample(psi, 16, 64).image_samples
        inside = complex(image[int(rng.integers(0, image.size))])
        v_in = spectrum_membership(psi, inside)
        ok = v_in.verdict == "Inside"
        bound = sup_norm_estimate(psi, 1024)
        far = (1.5 * bound + 1) * np.exp(2j * np.pi * rng.uniform())
        v_out = spectrum_membership(psi, far)
        if v_out.verdict == "Outside":
            finer = evaluate(psi, disk_grid(128, 1024))
            ok = ok and float(np.min(np.abs(finer - far))) >= v_out.certificate.c / 2
        rep.record(_digest(tid, seed, i), 0.0 if ok else 1.0, 0.0)
    return rep


def check_compactness(config: TrialConfig, N: int = 50) -> TheoremReport:
    """``d_n = ||psi e_n||`` stays away from zero unless ``psi = 0``.

    For ``psi = z`` the closed form ``(n + 1) / n`` is checked to 1e-12; for
    random nonzero symbols ``min d_n >= ||psi||_S2 / (N + 1)`` is required
    (since ``||psi e_n|| >= ||psi||_S2 / n`` by weight comparison).
    """
    tid = "Thm5"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    d = compactness_diagnostic([0, 1], N)
    n = np.arange(1, N + 1)
    rep.record(f"{tid}:z", float(np.max(np.abs(d - (n + 1) / n))), 1e-12)
    rep.record(f"{tid}:z:min", 1.0 - float(d.min()), 0.0)
    rep.record(f"{tid}:zero", float(np.max(compactness_diagnostic([0], N))), 0.0)
    for i in range(min(config.trials, 100)):
        psi = _draw(config, seed, i)
        if psi.is_zero():
            continue
        d = compactness_diagnostic(psi, N)
        rep.record(_digest(tid, seed, i), norm(S2, psi) / (N + 1) - float(d.min()), 0.0)
    return rep


# Isometries -----------------------------------------------------------------


def check_isometry(config: TrialConfig, angles: int = 16, min_tail: float = 1e-3) -> TheoremReport:
    """Unimodular constants have defect <= 1e-12, normalized nonconstant symbols >= 1e-4.

    Symbols with defect <= 1e-12 must also have zero tail mass and modulus 1
    on the boundary, so none of them vanishes (no isometric zero-divisor).
    """
    tid = "Thm6.1"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    for k in range(angles):
        psi = CoefficientSeries([np.exp(2j * np.pi * k / angles)])
        rep.record(f"{tid}:const{k}", isometry_defect(psi), 1e-12)
    skipped = 0
    for i in range(config.trials):
        psi = _draw(config, seed, i)
        s = norm(S2, psi)
        if s == 0:
            skipped += 1
            continue
        psi = CoefficientSeries(psi.coeffs / s)
        tail = psi.s2_mass() - abs(psi[0]) ** 2
        if tail < min_tail:
            skipped += 1
            continue
        defect = isometry_defect(psi)
        rep.record(_digest(tid, seed, i), 1e-4 - defect, 0.0)
        if defect <= 1e-12:
            vals = boundary_values(psi, 256)
            zero_free = tail == 0 and bool(np.all(np.abs(np.abs(vals) - 1) < 1e-12))
            rep.record(_digest(tid, seed, i) + ":divisor", 0.0 if zero_free else 1.0, 0.0)
    if skipped:
        rep.notes.append(f"{skipped} draws skipped: constant or tail mass below {min_tail:g}")
    return rep


# Cross checks -------------------------------------------------------------------


def check_cross(config: TrialConfig) -> TheoremReport:
    """Quadrature vs series H^2 norm, containment chain, and the S^2 norm identity."""
    tid = "Cross"
    seed = sub_seed(config.seed, tid)
    rep = TheoremReport(tid)
    b0 = bergman(0.0)
    for i in range(config.trials):
        f = _draw(config, seed, i)
        d = _digest(tid, seed, i)
        h = norm(HARDY, f)
        q = hardy_norm_quadrature(f, 2 * f.budget + 2)
        rep.record(d + ":quad", abs(q - h), 1e-10 * h if h else 1e-300)
        chain = [norm(b0, f), h, norm(DIRICHLET, f), norm(S2, f)]
        rep.record(d + ":chain", max(chain[k] - chain[k + 1] for k in range(3)), 0.0)
        lhs = norm(S2, f) ** 2
        rhs = abs(f[0]) ** 2 + norm(HARDY, differentiate(f)) ** 2
        rep.record(d + ":identity", abs(lhs - rhs), 1e-12 * max(lhs, 1.0))
    return rep


def run_all(config: TrialConfig = TrialConfig()) -> dict:
    reports = [
        check_sup_norm(config),
        check_product_rule(config),
        check_composition_bound(config),
        check_kernel_bound(),
        *check_norm_sandwiches(config),
        check_factorization(config),
        check_point_spectrum(config),
        check_spectrum(config),
        check_compactness(config),
        check_isometry(config),
        check_cross(config),
    ]
    return {"config": asdict(config), "reports": [r.to_dict() for r in reports]}


def all_passed(report: dict) -> bool:
    return all(r["passed"] for r in report["reports"])


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2)
