"""Cone-preference multi-objective solvers with decision-space dispersion (C-DWU, C-NSGAII)."""

from .algorithms import AlgorithmConfig, RunRecord, crowding_distance, run_c_dwu, run_c_nsgaii
from .cone import (
    DegeneratePointError,
    PreferenceCone,
    angular_distance,
    dwu_penalty,
    front_penalty,
    in_cone,
    penalized_front_level,
)
from .dispersion import SectorRecord, dispersion_table, sector_classify
from .domain import FrontPartition, Individual, Population, dominates
from .dominance import nondominated_sort, raw_dominance, strength
from .dwu import SelectionSet, c_w_d, dwu_select, uniformity, w_d
from .metrics import MetricReport, ReferenceSet, final_uniformity, igd, roi_membership_rate, roi_reference_set
from .problems import Problem, make_problem, sample_pf
from .variation import VariationConfig, binary_tournament, polynomial_mutation, sbx_crossover

__version__ = "0.1.0"
