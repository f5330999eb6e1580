"""Goodness-of-fit tests for uniformity via order-statistic moment identities.

Core pieces: validated samples and empirical CDF (:mod:`unifit.samples`),
the moment-identity U-statistics (:mod:`unifit.moment_tests`), five
competitor statistics (:mod:`unifit.competitors`), parametric alternative
families (:mod:`unifit.alternatives`), the eigenvalue engine
(:mod:`unifit.spectral`), local Bahadur efficiency (:mod:`unifit.efficiency`),
Monte Carlo calibration (:mod:`unifit.montecarlo`), and a periodogram-based
white-noise test (:mod:`unifit.timeseries`).
"""

__version__ = "0.1.0"

from .samples import Sample, ecdf, load_observations, make_sample, pit_transform
from .moment_tests import (
    characterization_residual,
    kernel_phi,
    projection_phi_star,
    t_statistic,
)
from .competitors import (
    ad_statistic,
    cvm_statistic,
    hs_kernel,
    hs_projection,
    hs_statistic,
    ks_statistic,
    qc_statistic,
)
from .alternatives import (
    AlternativeFamily,
    family,
    kl_distance,
    locally_optimal_density,
    parse_family_spec,
    reciprocal_cosine_density,
    sample_from,
)
from .spectral import (
    BoundaryProblem,
    SpectralSolution,
    gauss_quad_2d,
    solve_hs_root,
    solve_tm_eigen,
    tm_eigenvalues,
)
from .efficiency import (
    EfficiencyReport,
    eff_ad,
    eff_degenerate,
    eff_ks,
    eff_qc,
    efficiency_for,
    efficiency_table,
)
from .montecarlo import (
    McConfig,
    PowerCurve,
    TestOutcome,
    critical_value,
    p_value,
    power_study,
)
from .timeseries import Periodogram, cumulative_ratios, periodogram, whitenoise_test

__all__ = [
    "AlternativeFamily", "BoundaryProblem", "EfficiencyReport", "McConfig",
    "Periodogram", "PowerCurve", "Sample", "SpectralSolution", "TestOutcome",
    "ad_statistic", "characterization_residual", "critical_value",
    "cumulative_ratios", "cvm_statistic", "ecdf", "eff_ad", "eff_degenerate",
    "eff_ks", "eff_qc", "efficiency_for", "efficiency_table", "family",
    "gauss_quad_2d", "hs_kernel", "hs_projection", "hs_statistic",
    "kernel_phi", "kl_distance", "ks_statistic", "load_observations",
    "locally_optimal_density", "make_sample", "p_value", "parse_family_spec",
    "periodogram", "pit_transform", "power_study", "projection_phi_star",
    "qc_statistic", "reciprocal_cosine_density", "sample_from",
    "solve_hs_root", "solve_tm_eigen", "t_statistic", "tm_eigenvalues",
    "whitenoise_test",
]
