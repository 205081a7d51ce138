"""Integral-point obstructions on punctured abelian varieties over number fields.

Point counts on reductions, the set R_A of primes that obstruct integral points,
emptiness certificates, cyclic-field censuses by conductor and Frobenian densities.
"""

from .arith import ResourceError, memory_budget, sieve_primes
from .counting import CurveSpec, LocalFrobeniusData, local_data, order_table
from .density import (
    DensityReport,
    build_free_witness,
    empirical_free_fraction,
    enumerate_free_fraction_sl2,
    enumerate_free_fraction_sp4,
    thinning_experiment,
)
from .fields import census, conductor_multiplicity_N, count_subfields_M
from .kernels import BACKEND
from .obstruction import (
    ObstructionCertificate,
    certify_cyclic,
    certify_cyclotomic,
    find_condition_ii_witness,
    scan_RA,
)
from .registry import CurveRegistry, builtin_curve

__version__ = "0.1.0"
