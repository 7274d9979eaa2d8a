"""Element allocation, beamforming and placement for jointly deployed
active/passive intelligent reflecting surfaces."""

from .allocation import Allocation, AllocationSolution, closed_form_split, \
    exhaustive_search, round_to_integer, solve_continuous, solve_integer
from .benchmarks import BenchmarkResult, run_benchmark
from .channel import ChannelTriple, build_channels, steering, upa_response
from .errors import (AmplitudeBelowOne, ConditionUndefined, ConfigError,
                     DimensionMismatch, DistanceTooSmall, InfeasibleBudget,
                     IrsAllocError, NoFeasiblePlacement, SearchSpaceTooLarge)
from .placement import AOTrace, PlacementGrid, alternating_optimize, \
    optimize_placement_given_allocation
from .reflection import ReflectionConfig, configure, optimal_alpha_tapr, \
    optimal_beta_tpar, optimal_phases, validate_amplitude
from .scenario import (SCHEMES, TAPR, TPAR, SystemParams, Topology,
                       build_topology, db_to_linear, dbm_to_watts,
                       direction_angles, free_space_ref_gain, linear_to_db,
                       load_scenario, unit_from_angles, watts_to_dbm)
from .snr import (LinkBudget, RegimeReport, SchemeComparison,
                  approx_snr_suboptimal, check_lemma1, compare_schemes,
                  simulate_empirical_snr, snr_approx, snr_closed_form,
                  snr_exact_matrix)

__version__ = "0.1.0"
