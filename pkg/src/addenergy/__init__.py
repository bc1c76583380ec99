"""Exact higher additive energies, dissociated bases and connected subsets."""

__version__ = "0.1.0"

from .connectivity import (
    ConnectivityParams,
    check_connected,
    check_strong_implies_weak,
    check_strongly_connected,
    extract_almost_basis,
    extract_connected_subset,
    konyagin_containment,
    replay_extraction,
)
from .dissociation import (
    is_dissociated,
    maximal_dissociated_subset,
    span_contains,
    span_enumerate,
    check_rudin,
    small_basis_bound,
)
from .energy import (
    IntFn,
    T,
    brute_energy,
    check_holder,
    check_tk_vs_t2,
    convolve,
    correlate,
    doubling_energy_bound,
    energy,
    iterated_self_conv,
    zeta,
)
from .errors import AddEnergyError, CapacityError, ConfigError, DomainError, GuardTripError, UsageError
from .generators import GeneratorSpec, generate, make
from .groups import GroupSet, GroupSpec, elem_add, elem_neg, sumset
from .partition import partition_min_sigma, strong_partition
from .pipeline import recheck, run_main_pipeline

__all__ = [name for name in dir() if not name.startswith("_")]
