"""Decision engine for co-axial cone-angle multisets and charge configurations.

Exact admissibility decisions (arrangements plus the integer bound on the
residue shape), a permutation-factorization oracle for branch data at small
degree, and a numerical realizer for critical points of logarithmic
potentials.
"""

__version__ = "0.1.0"

from coneangles.arrangements import (
    AngleMultiset,
    Arrangement,
    GeneralArrangement,
    MPClass,
    ResidueVector,
    enumerate_general_arrangements,
    enumerate_reduced_arrangements,
    gauss_bonnet,
    mp_classify,
    odd_lattice_distance,
    reduce_arrangement,
    residue_vector,
    split_integer_noninteger,
)
from coneangles.decider import (
    PartitionP,
    Reason,
    Verdict,
    angles_to_partition,
    decide_admissible,
    decide_partition_admissible,
    exceptional_vectors,
)
from coneangles.exactreal import (
    BasisContext,
    BasisMismatchError,
    Commensurable,
    ExactReal,
    commensurability_class,
)
from coneangles.hurwitz import (
    KERNEL_BACKEND,
    BranchData,
    BranchVerdict,
    PermutationWitness,
    SearchCapExceeded,
    branch_data_from,
    decide_branch_data,
    hurwitz_realizable_bruteforce,
    song_xu_decide,
    verify_witness,
)
from coneangles.realizer import (
    Configuration,
    DevelopingMap,
    RealizeConfig,
    developing_map_description,
    numerator_polynomial,
    q4_double_zero_exists,
    realize,
    verify_realization,
)

__all__ = [
    "AngleMultiset",
    "Arrangement",
    "BasisContext",
    "BasisMismatchError",
    "BranchData",
    "BranchVerdict",
    "Commensurable",
    "Configuration",
    "DevelopingMap",
    "ExactReal",
    "GeneralArrangement",
    "KERNEL_BACKEND",
    "MPClass",
    "PartitionP",
    "PermutationWitness",
    "RealizeConfig",
    "Reason",
    "ResidueVector",
    "SearchCapExceeded",
    "Verdict",
    "angles_to_partition",
    "branch_data_from",
    "commensurability_class",
    "decide_admissible",
    "decide_branch_data",
    "decide_partition_admissible",
    "developing_map_description",
    "enumerate_general_arrangements",
    "enumerate_reduced_arrangements",
    "exceptional_vectors",
    "gauss_bonnet",
    "hurwitz_realizable_bruteforce",
    "mp_classify",
    "numerator_polynomial",
    "odd_lattice_distance",
    "q4_double_zero_exists",
    "realize",
    "reduce_arrangement",
    "residue_vector",
    "song_xu_decide",
    "split_integer_noninteger",
    "verify_realization",
    "verify_witness",
]
