"""Random walks on finite matrix groups and SU(2): spectral gaps, character
tables, diameters, root-system exponents, and equidistribution experiments."""

from .groups import (
    EnumerationCapError,
    GenSet,
    GroupTable,
    InvalidModulusError,
    build_slq,
    cyclic,
    quotient_map,
    slq_order,
    symmetric_group,
)
from .measures import (
    Measure,
    QuotientChain,
    WalkSchedule,
    calibrate_C0,
    convolution_power,
    convolve,
    delta,
    pushforward,
    symmetrize,
    uniform,
    uniform_on,
)
from .spectra import (
    folklore_sandwich,
    regular_trace,
    spectral_gap,
    trace_decay_experiment,
    verify_sarnak_xue,
)
from .characters import character_table, clifford_bound_check, quasirandom_cert
from .diameter import diameter as cayley_diameter
from .diameter import distances, prime_splitting_check
from .rootsys import (
    build_rootsystem,
    exponent_A,
    verify_roots_lemma,
    weyl_dimension,
)
from .su2 import (
    CompactMeasure,
    SU2Element,
    approx_identity_check,
    chi_r_trace,
    diam_eps,
    gap_r,
    solovay_kitaev_fit,
)

__version__ = "0.1.0"

__all__ = [
    "EnumerationCapError",
    "GenSet",
    "GroupTable",
    "InvalidModulusError",
    "Measure",
    "QuotientChain",
    "WalkSchedule",
    "CompactMeasure",
    "SU2Element",
    "approx_identity_check",
    "build_rootsystem",
    "build_slq",
    "calibrate_C0",
    "character_table",
    "chi_r_trace",
    "clifford_bound_check",
    "convolution_power",
    "convolve",
    "cyclic",
    "delta",
    "cayley_diameter",
    "diam_eps",
    "distances",
    "exponent_A",
    "folklore_sandwich",
    "gap_r",
    "prime_splitting_check",
    "pushforward",
    "quasirandom_cert",
    "quotient_map",
    "regular_trace",
    "slq_order",
    "solovay_kitaev_fit",
    "spectral_gap",
    "symmetric_group",
    "symmetrize",
    "trace_decay_experiment",
    "uniform",
    "uniform_on",
    "verify_roots_lemma",
    "verify_sarnak_xue",
    "weyl_dimension",
]
