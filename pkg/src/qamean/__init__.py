"""Weighted quasi-arithmetic means, neutral maps, and the scales they determine."""

from .errors import (
    ConvergenceError,
    DomainError,
    ExcludedInvolutionError,
    InputError,
    MeanOverflowError,
    NearExtremeError,
    NoRootError,
    QAMeanError,
    RangeError,
    TargetOutOfRangeError,
    WitnessNotFoundError,
)
from .family import Branch, Case, Extreme, ScaleFamily, build, generator_at, mean_at
from .generator import (
    AffineFit,
    Direction,
    Generator,
    affine,
    compose,
    exp,
    identity,
    is_affine_equivalent,
    ln,
    negate,
    periodic,
    power,
)
from .interval import POSITIVE, REAL, Interval
from .means import WeightedSample, mean, power_mean, read_sample_csv
from .neutral import NeutralMap, apply, from_coeffs, is_neutral_for, kth_root, root_sequence
from .solver import solve, sweep

__version__ = "0.1.0"
