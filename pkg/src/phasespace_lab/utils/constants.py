"""Static constants: scenario descriptions, default sweeps and tolerances."""

from phasespace_lab.models.scenario import Scenario

SCENARIO_DESCRIPTIONS: dict[Scenario, str] = {
    Scenario.INTERFERENCE_LIMIT: "L^p(Ω) norm of antipodal interference blocks against 2·C_p·‖Wg‖_{L^p(Ω)}",
    Scenario.SEMICONTINUITY: "weakly null antipodal sequence keeping Wigner concentration; Born–Jordan contrast",
    Scenario.MAXIMIZE: "multistart projected gradient ascent of ‖Wf‖_{L^p(Ω)}/‖f‖²",
    Scenario.LINFTY: "attained Wigner L^∞ supremum 2 by a shifted even profile",
    Scenario.TAU_SUP: "τ-Wigner L^∞ family approaching (τ(1−τ))^{-1/2} without attaining it",
    Scenario.BJ_SUP: "Born–Jordan L^∞ family approaching π without attaining it",
    Scenario.LIEB_CHECK: "Lieb bounds (2^{p−1}/p)^{1/p} on seeded random signals",
    Scenario.COVARIANCE_CHECK: "covariance of Wigner and τ-Wigner under time-frequency shifts",
    Scenario.CHAIN_GRAPH: "surviving-pair graphs of synthetic escaping trajectories form chains",
}

# Pass/fail tolerances when the config gives none
DEFAULT_TOLERANCES: dict[Scenario, float] = {
    Scenario.INTERFERENCE_LIMIT: 0.02,
    Scenario.SEMICONTINUITY: 0.03,
    Scenario.MAXIMIZE: 1e-3,
    Scenario.LINFTY: 1e-6,
    Scenario.TAU_SUP: 0.05,
    Scenario.BJ_SUP: 0.05,
    Scenario.LIEB_CHECK: 1e-9,
    Scenario.COVARIANCE_CHECK: 1e-8,
    Scenario.CHAIN_GRAPH: 0.0,
}

DEFAULT_R_LIST = [2.0, 4.0, 8.0, 16.0, 32.0]

# Interference defects may not grow from this r on, except below MONOTONE_FLOOR_SHARE
# of the tolerance, where the fringe sampling error dominates
MONOTONE_FROM_R = 8.0
MONOTONE_FLOOR_SHARE = 0.1

DEFAULT_XI_LIST = [2.0, 4.0, 8.0, 16.0]
DEFAULT_FAMILY_SIZE = 6
DEFAULT_LIEB_P = [1.0, 2.0, 4.0, 8.0]
DEFAULT_TAU = 0.25

DEFAULT_TRIALS: dict[Scenario, int] = {
    Scenario.LIEB_CHECK: 200,
    Scenario.COVARIANCE_CHECK: 20,
    Scenario.CHAIN_GRAPH: 1000,
}

# Weak-convergence witnesses: Gaussians centred on {−2,…,2}²
WITNESS_RANGE = range(-2, 3)
WEAK_PROXY_LIMIT = 1e-3

# Born–Jordan contrast: share of the Wigner limit it must stay below
BJ_CONTRAST_SHARE = 0.10
# The τ-integrand of a cross term at separation 2r peaks in a band of width ~1/(4r)
# around τ = 1/2; 16-point panels with 16·r nodes resolve it
BJ_CONTRAST_ORDER = 16
BJ_CONTRAST_NODES_PER_UNIT = 16

# Chain-graph synthetic trajectories
CHAIN_STEPS = 16
CHAIN_SCALE_MAX = 100.0
CHAIN_TAU_BANDS = ((0.05, 0.4), (0.6, 0.95))
