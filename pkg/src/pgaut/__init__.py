"""Finite p-group workbench over power-commutator presentations.

The package computes with groups of order p^n (n <= 12, p^n <= 4096) given
by refined power-commutator presentations: full multiplication tables,
structural subgroups, automorphism groups by exhaustive backtracking, and a
verification harness for a family of order identities relating |G| and
|Aut(G)|.
"""

from .presentation import (
    PcPresentation,
    PresentationError,
    Word,
    central_product_presentation,
    direct_product_presentation,
    parse_corpus,
    parse_presentation,
    serialize_presentation,
)
from .engine import (
    CollectionError,
    ConsistencyReport,
    EnumerationError,
    Group,
    collect,
    consistency_check,
    enumerate_group,
)
from .structure import (
    AbelianInvariants,
    CentralProductData,
    StructureError,
    Subgroup,
    abelian_direct_factor_split,
    abelian_invariants,
    agemo,
    center,
    central_product_decomposition,
    centralizer,
    derived_subgroup,
    frattini,
    full_subgroup,
    intersect,
    is_abelian_group,
    maximal_subgroups,
    omega1,
    omega_layer,
    quotient,
    second_center,
    subgroup_as_group,
    subgroup_generated,
    trivial_subgroup,
)
from .automorphism import (
    AdneyYenResult,
    AutCapError,
    AutGroup,
    Automorphism,
    RestrictedAut,
    adney_yen_check,
    automorphism_group,
    count_by_generating_tuples,
    hom_count_abelian,
    homs_to_center,
    inner_automorphisms,
    out_order,
    p_part,
    restricted_aut,
)
from .webb import (
    TauBranch,
    WebbCriterion,
    WebbMaps,
    tau_for_mueller_pair,
    webb_criterion,
    webb_maps,
)
from .harness import (
    Classification,
    TheoremReport,
    classify,
    group_record,
    report_csv,
    report_json,
    run_corpus,
    verify_abelian_maximal_chain,
    verify_divisibility,
    verify_elem_abelian_centre_chain,
)

__all__ = [
    "PcPresentation",
    "PresentationError",
    "Word",
    "central_product_presentation",
    "direct_product_presentation",
    "parse_corpus",
    "parse_presentation",
    "serialize_presentation",
    "CollectionError",
    "ConsistencyReport",
    "EnumerationError",
    "Group",
    "collect",
    "consistency_check",
    "enumerate_group",
    "AbelianInvariants",
    "CentralProductData",
    "StructureError",
    "Subgroup",
    "abelian_direct_factor_split",
    "abelian_invariants",
    "agemo",
    "center",
    "central_product_decomposition",
    "centralizer",
    "derived_subgroup",
    "frattini",
    "full_subgroup",
    "intersect",
    "is_abelian_group",
    "maximal_subgroups",
    "omega1",
    "omega_layer",
    "quotient",
    "second_center",
    "subgroup_as_group",
    "subgroup_generated",
    "trivial_subgroup",
    "AdneyYenResult",
    "AutCapError",
    "AutGroup",
    "Automorphism",
    "RestrictedAut",
    "adney_yen_check",
    "automorphism_group",
    "count_by_generating_tuples",
    "hom_count_abelian",
    "homs_to_center",
    "inner_automorphisms",
    "out_order",
    "p_part",
    "restricted_aut",
    "TauBranch",
    "WebbCriterion",
    "WebbMaps",
    "tau_for_mueller_pair",
    "webb_criterion",
    "webb_maps",
    "Classification",
    "TheoremReport",
    "classify",
    "group_record",
    "report_csv",
    "report_json",
    "run_corpus",
    "verify_abelian_maximal_chain",
    "verify_divisibility",
    "verify_elem_abelian_centre_chain",
]
