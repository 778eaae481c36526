"""Named numerical tolerances shared across the library.

The values here are the defaults used by the scenario verdicts and the CLI;
individual runs may override them by name (``--tol name=value``), and every
override is recorded in the verdict file.
"""
from __future__ import annotations

# State validation
HERMITICITY = 1e-12
TRACE = 1e-10
PSD_FLOOR = 1e-10          # eigenvalues in [-PSD_FLOOR, 0] clamp to 0; below is an error
NORM = 1e-12               # pure-state normalization
UNITARITY = 1e-10
PURIFY_ROUNDTRIP = 1e-10

# Correlation measures
DISCORD_ZERO = 1e-7        # classification threshold for zero discord / CC
MUTUAL_INFO_ZERO = 1e-9    # product-state detection
DISCORD_MATCH = 2e-4       # optimizer vs closed-form / analytic values
ORACLE_GRID_MATCH = 1e-4   # optimizer vs exhaustive qubit grid (grid_n = 256)
PROBABILITY_CUTOFF = 1e-14 # measurement outcomes below this contribute nothing
LAZY_COMMUTATOR = 1e-9

# Dynamics
LINDBLAD_TRACE = 1e-8
LINDBLAD_PSD = 1e-7
PROPAGATOR_FACTORIZATION = 1e-9
UNITARY_REDUCTION = 1e-9   # gamma = 0 Lindblad vs unitary evolution
ROBUSTNESS_RESIDUAL = 1e-8
CHOI_PSD = 1e-7

# Scenario-specific
CORRELATION_ZERO = 1e-9    # decoupled runs: every correlation measure below this
LEMMA2_GAP_FACTOR = 5.0    # |S - kappa*eps| <= factor * eps^2 for uniform weights
DISD_RATIO_LOW = 1.5
DISD_RATIO_HIGH = 3.0

DEFAULTS: dict[str, float] = {
    "hermiticity": HERMITICITY,
    "trace": TRACE,
    "psd_floor": PSD_FLOOR,
    "unitarity": UNITARITY,
    "discord_zero": DISCORD_ZERO,
    "mutual_info_zero": MUTUAL_INFO_ZERO,
    "discord_match": DISCORD_MATCH,
    "oracle_grid_match": ORACLE_GRID_MATCH,
    "lazy_commutator": LAZY_COMMUTATOR,
    "lindblad_trace": LINDBLAD_TRACE,
    "lindblad_psd": LINDBLAD_PSD,
    "propagator_factorization": PROPAGATOR_FACTORIZATION,
    "unitary_reduction": UNITARY_REDUCTION,
    "robustness_residual": ROBUSTNESS_RESIDUAL,
    "choi_psd": CHOI_PSD,
    "correlation_zero": CORRELATION_ZERO,
    "lemma2_gap_factor": LEMMA2_GAP_FACTOR,
    "disd_ratio_low": DISD_RATIO_LOW,
    "disd_ratio_high": DISD_RATIO_HIGH,
}


def resolve(overrides: dict[str, float] | None = None) -> dict[str, float]:
    """Merge user overrides onto the defaults, rejecting unknown names."""
    table = dict(DEFAULTS)
    if overrides:
        for name, value in overrides.items():
            if name not in table:
                raise KeyError(f"unknown tolerance {name!r}; known: {sorted(table)}")
            table[name] = float(value)
    return table
