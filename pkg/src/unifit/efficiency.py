"""Local Bahadur efficiency of each test against each alternative family.

The local efficiency is lim_{θ→0} c_T(θ) / (2K(θ)) with c_T the Bahadur
exact slope and K the Kullback-Leibler distance; 2K(θ) = I(g)θ² + o(θ²).
Three slope shapes cover all seven tests:

* degenerate-kernel statistics (t1, t2, hs, cvm):
      efficiency = λ₁ · Δ / I,   Δ = ∬ φ*(s,t) h(s) h(t) ds dt,
  where λ₁ is the principal characteristic value of the projection
  operator (the kernel-degree factors cancel between the large-deviation
  coefficient and the drift);
* the sup-type statistic (ks): efficiency = 4 (sup_t |H(t)|)² / I;
* weighted quadratic / linear functionals (ad, qc).

Published reference values, where they exist, ride along in each report;
cells whose computed value differs beyond tolerance are flagged in
``notes``, never silently corrected.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import integrate, optimize

from .alternatives import AlternativeFamily, locally_optimal_density
from .competitors import hs_projection
from .errors import BadParameter, NegativeDelta, QuadratureDivergence, UnifitError
from .moment_tests import projection_phi_star
from .spectral import gauss_quad_2d, solve_hs_root, solve_tm_eigen

TEST_IDS = ("t1", "t2", "hs", "ks", "ad", "cvm", "qc")

#: Gauss-Legendre order per triangle for the 2-D quadratic forms
DEFAULT_ORDER = 60

#: |computed − published| beyond this adds a discrepancy note
PAPER_TOLERANCE = 0.02

#: published local efficiencies (rounded to the printed precision)
REFERENCE_EFFICIENCIES = {
    ("ad", "g1"): 0.40, ("ad", "g2"): 0.5, ("ad", "g3:beta=3"): 0.48, ("ad", "g4"): 0.49,
    ("ks", "g1"): 0.54, ("ks", "g2"): 0.75, ("ks", "g3:beta=3"): 0.74, ("ks", "g4"): 0.81,
    ("t2", "g1"): 0.81, ("t2", "g2"): 0.95, ("t2", "g3:beta=3"): 0.82, ("t2", "g4"): 0.96,
    ("qc", "g1"): 0.14, ("qc", "g2"): 0.0, ("qc", "g3:beta=3"): 0.06, ("qc", "g4"): 0.0,
    ("hs", "g1"): 0.37, ("hs", "g2"): 0.66, ("hs", "g3:beta=3"): 0.63, ("hs", "g4"): 0.76,
    ("t1", "g1"): 0.73, ("t1", "g2"): 0.98, ("t1", "g3:beta=3"): 0.94, ("t1", "g4"): 1.0,
    ("ad", "loc-gauss"): 0.96, ("ad", "loc-cauchy"): 0.66,
    ("ks", "loc-gauss"): 0.64, ("ks", "loc-cauchy"): 0.81,
    ("qc", "loc-gauss"): 0.0, ("qc", "loc-cauchy"): 0.0,
    ("hs", "loc-gauss"): 0.49, ("hs", "loc-cauchy"): 1.0,
    ("t1", "loc-gauss"): 0.955, ("t1", "loc-cauchy"): 0.76,
    ("t2", "loc-gauss"): 0.87, ("t2", "loc-cauchy"): 0.72,
}


@dataclass(frozen=True)
class EfficiencyReport:
    """One (test, family) cell with its intermediate quantities."""

    test_id: str
    family_id: str
    efficiency: float
    delta: float
    fisher: float
    paper_value: float | None = None
    notes: tuple[str, ...] = ()

    @property
    def abs_diff(self) -> float | None:
        if self.paper_value is None or not np.isfinite(self.efficiency):
            return None
        return abs(self.efficiency - self.paper_value)


def _finalize(test_id: str, family_id: str, efficiency: float, delta: float,
              fisher: float, notes: tuple[str, ...] = ()) -> EfficiencyReport:
    paper = REFERENCE_EFFICIENCIES.get((test_id, family_id))
    if paper is not None and abs(efficiency - paper) > PAPER_TOLERANCE:
        notes = notes + (
            f"computed {efficiency:.4f} differs from published {paper:g} "
            f"by {abs(efficiency - paper):.3f} (> {PAPER_TOLERANCE})",
        )
    if efficiency > 1.01:
        notes = notes + (f"exceeds the efficiency bound: {efficiency:.4f} > 1.01",)
    return EfficiencyReport(test_id, family_id, float(efficiency), float(delta),
                            float(fisher), paper, notes)


def eff_degenerate(lambda1: float, projection, fam: AlternativeFamily,
                   order: int = DEFAULT_ORDER, test_id: str = "") -> EfficiencyReport:
    """Efficiency λ₁·Δ/I of a degenerate-kernel statistic.

    Δ = ∬ projection(s,t) h(s) h(t) is evaluated by triangle-split
    Gauss-Legendre quadrature; it must be nonnegative for a positive
    semidefinite projection (raises :class:`NegativeDelta` otherwise).
    """
    h = fam.score_h

    def integrand(s, t):
        return projection(s, t) * h(s) * h(t)

    delta = gauss_quad_2d(integrand, order=order)
    if delta < -1e-10:
        raise NegativeDelta(
            f"<h, Sh> = {delta!r} < 0 for {test_id or 'degenerate test'} vs {fam.id}"
        )
    delta = max(delta, 0.0)
    return _finalize(test_id, fam.id, lambda1 * delta / fam.fisher_I, delta, fam.fisher_I)


def eff_ks(fam: AlternativeFamily, grid_size: int = 10_001) -> EfficiencyReport:
    """Efficiency 4 sup|H|² / I of the sup-distance statistic.

    The supremum is located on a uniform grid and polished by a bounded
    scalar search on the bracketing grid cell.
    """
    grid = np.linspace(0.0, 1.0, grid_size)
    absH = np.abs(np.asarray(fam.cum_score_H(grid), dtype=np.float64))
    k = int(np.argmax(absH))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid_size - 1)]

    def neg(t):
        return -abs(float(np.asarray(fam.cum_score_H(t))))

    res = optimize.minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-12})
    sup = max(absH[k], -res.fun)
    delta = sup * sup
    return _finalize("ks", fam.id, 4.0 * delta / fam.fisher_I, delta, fam.fisher_I)


def eff_ad(fam: AlternativeFamily) -> EfficiencyReport:
    """Efficiency [∫ H²/(t(1−t)) dt] / I of the weighted quadratic statistic.

    Uses the convention that reproduces the published table for g1-g4; the
    standard large-deviation coefficient would double every value (see the
    note attached to each report).
    """
    H = fam.cum_score_H

    def integrand(t):
        return float(np.asarray(H(t))) ** 2 / (t * (1.0 - t))

    with np.errstate(all="ignore"):
        value, abserr = integrate.quad(integrand, 0.0, 1.0, limit=500, full_output=False)
    if not np.isfinite(value) or abserr > 1e-6 * max(1.0, abs(value)):
        raise QuadratureDivergence(
            f"weighted-H² integral unreliable for {fam.id}: value={value!r}, err={abserr!r}"
        )
    note = ("halved large-deviation coefficient convention; the standard "
            "c = 2f(b) would double this value",)
    return _finalize("ad", fam.id, value / fam.fisher_I, value, fam.fisher_I, note)


def eff_qc(fam: AlternativeFamily) -> EfficiencyReport:
    """Efficiency 5 b'² / I of the folded maximum-correlation statistic,
    with drift slope b' = 6 ∫ h(u)(1 − u + u²) du."""
    h = fam.score_h

    def integrand(u):
        return float(np.asarray(h(u))) * (1.0 - u + u * u)

    value, _ = integrate.quad(integrand, 0.0, 1.0, limit=500)
    bprime = 6.0 * value
    return _finalize("qc", fam.id, 5.0 * bprime**2 / fam.fisher_I, bprime, fam.fisher_I)


def efficiency_for(test_id: str, fam: AlternativeFamily,
                   order: int = DEFAULT_ORDER) -> EfficiencyReport:
    """Dispatch one (test, family) cell to its slope model."""
    if test_id == "t1":
        return eff_degenerate(solve_tm_eigen(1).lambda1, partial(projection_phi_star, 1),
                              fam, order=order, test_id="t1")
    if test_id == "t2":
        return eff_degenerate(solve_tm_eigen(2).lambda1, partial(projection_phi_star, 2),
                              fam, order=order, test_id="t2")
    if test_id == "cvm":
        report = eff_degenerate(solve_tm_eigen(1).lambda1, partial(projection_phi_star, 1),
                                fam, order=order, test_id="cvm")
        note = ("shares the order-1 projection kernel; no published reference value",)
        return EfficiencyReport(report.test_id, report.family_id, report.efficiency,
                                report.delta, report.fisher, report.paper_value,
                                report.notes + note)
    if test_id == "hs":
        return eff_degenerate(solve_hs_root(), hs_projection, fam, order=order, test_id="hs")
    if test_id == "ks":
        return eff_ks(fam)
    if test_id == "ad":
        return eff_ad(fam)
    if test_id == "qc":
        return eff_qc(fam)
    raise BadParameter(f"unknown test id {test_id!r}; expected one of {TEST_IDS}")


def efficiency_table(tests, families, order: int = DEFAULT_ORDER) -> list[EfficiencyReport]:
    """Cross table of reports; per-cell failures become NaN rows with a note."""
    reports = []
    for fam in families:
        for test_id in tests:
            try:
                reports.append(efficiency_for(test_id, fam, order=order))
            except UnifitError as exc:
                reports.append(EfficiencyReport(
                    test_id, fam.id, float("nan"), float("nan"), fam.fisher_I,
                    REFERENCE_EFFICIENCIES.get((test_id, fam.id)),
                    (f"failed: {exc}",),
                ))
    return reports


def locally_optimal_efficiency(m: int, order: int = DEFAULT_ORDER) -> EfficiencyReport:
    """Efficiency of the order-m test against its own locally optimal family."""
    fam = locally_optimal_density(m, 0.0)
    return eff_degenerate(solve_tm_eigen(m).lambda1, partial(projection_phi_star, m),
                          fam, order=order, test_id=f"t{m}")
