"""Pigeonhole statistics of frac(n^alpha) and their random-lattice limit law.

Empirical side: stream the first floor(sN) fractional parts into N circle
buckets and record occupancy statistics.  Limit side: sample affine
unimodular lattices from Haar measure and count points in triangular regions.
The two sides estimate the same limit quantities and cross-validate each
other numerically.
"""
from .affine import GroupElement, a_of, identity, inverse, multiply, n_of, phi, sigma, u_of
from .errors import (
    CapacityError,
    ConditioningStarvedError,
    ConfigError,
    SamplerError,
    SingularLatticeError,
)
from .horocycle import HorocycleSectionSpec, LINEAR_SECTION, SQRT_SECTION, nu_N, sample_point
from .kernels import BACKEND
from .lattice import (
    AffineLattice,
    ApproxRegion,
    HaarSample,
    Rectangle,
    RegionUnion,
    Triangle,
    TriangleDifferenceUnion,
    canonicalize,
    count_in_region,
    enumerate_points,
    from_group_element,
    integer_lattice,
    jump_points,
    sample_haar,
)
from .mc import (
    DEFAULT_SEED,
    McEstimate,
    estimate_Ej,
    estimate_intensity,
    estimate_void,
    minkowski_demo,
)
from .process import IntervalUnion, ProcessSample, empirical_jumps, increment_moments, void_fraction
from .seqstats import PigeonholeHistogram, bucket_of, frac_pow, frac_sqrt, histogram

__version__ = "0.1.0"
