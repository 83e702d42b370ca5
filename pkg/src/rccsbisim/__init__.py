"""Decision procedures for bisimilarities of finite-state randomized CCS."""

from .branching import almost_sure_reach, eps_graph, l_transition, q_transition, quotient, signature
from .divergence import det_div_tree, div_bran_bisim, div_branching_partition, find_div_split
from .lts import Lts, build_lts, immediate_silent_transitions, plts_transitions
from .partition import Partition, class_mass, split
from .relations import RELATIONS, compute, equivalent, partition_for
from .syntax import TAU, Fix, NdChoice, Nil, PChoice, Term, Var, load_definitions, parse, pretty, unfold, validate
from .tauec import Base, comp_mec, exh_bisim, exh_partition, find_mec_split, tau_graph
from .weak import lift_equal, weak_combined_exists, weak_quotient

__all__ = [name for name in dir() if not name.startswith("_")]
