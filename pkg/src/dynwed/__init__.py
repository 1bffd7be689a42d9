"""Dynamic bounded weighted edit distance with Monge boundary machinery.

The package maintains a string X under character edits so that, for any
target Z presented as a short edit script on X, the weighted edit distance
ed^w(X, Z) capped at a fixed threshold k is answered exactly, along with
an optimal alignment.  Supporting layers: exact scaled-integer weights,
brute-force oracles, SMAWK/min-plus Monge kernels, hierarchical
boundary-distance trees, a persistent range-composition tree, wave
algorithms over fingerprinted ropes, an adversarial instance generator,
and a CLI for running workload files.
"""

from .core import (
    INF,
    DEL,
    INS,
    SUB,
    Edit,
    EditScript,
    WeightTable,
    alignment_cost,
    apply_edit,
    apply_edits,
    cap_weights,
    k_equiv,
    symbols,
    validate_weights,
)
from .boundary import BoundaryTree, build_boundary_tree, dyadic_fragment_params, split_simple
from .box_oracle import BoxOracle, build_box_oracle
from .dp_oracle import (
    AugGridSpec,
    brute_boundary_matrix,
    brute_min_batched,
    brute_self_ed,
    brute_sed_k,
    ed_bounded,
    ed_full,
)
from .dyn_wed import DynWed, DynWedMulti
from .hardgen import BatchedInstance, HardPair, gen_batched, gen_dagger_stream, lift, verify_small
from .monge import Z, is_monge, minplus, sem_mul, smawk_row_minima, vec_minplus
from .pillar_lv import FRope, Fragment, lcp, lcp_reverse, lv_ed, sed_k, self_ed
from .range_tree import RangeTree, rt_build, rt_concat, rt_query, rt_split
from .session import Session, session_new
from .workload import Workload, parse_workload

__all__ = [
    "INF",
    "DEL",
    "INS",
    "SUB",
    "Edit",
    "EditScript",
    "WeightTable",
    "alignment_cost",
    "apply_edit",
    "apply_edits",
    "cap_weights",
    "k_equiv",
    "symbols",
    "validate_weights",
    "BoundaryTree",
    "build_boundary_tree",
    "dyadic_fragment_params",
    "split_simple",
    "BoxOracle",
    "build_box_oracle",
    "AugGridSpec",
    "brute_boundary_matrix",
    "brute_min_batched",
    "brute_self_ed",
    "brute_sed_k",
    "ed_bounded",
    "ed_full",
    "DynWed",
    "DynWedMulti",
    "BatchedInstance",
    "HardPair",
    "gen_batched",
    "gen_dagger_stream",
    "lift",
    "verify_small",
    "Z",
    "is_monge",
    "minplus",
    "sem_mul",
    "smawk_row_minima",
    "vec_minplus",
    "FRope",
    "Fragment",
    "lcp",
    "lcp_reverse",
    "lv_ed",
    "sed_k",
    "self_ed",
    "RangeTree",
    "rt_build",
    "rt_concat",
    "rt_query",
    "rt_split",
    "Session",
    "session_new",
    "Workload",
    "parse_workload",
]
