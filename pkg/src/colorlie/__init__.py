"""colorlie: exact-arithmetic toolkit for graded n-ary bracket algebras.

Finite-dimensional algebras are given by structure constants over an
abelian grading group with a skew-symmetric bicharacter supplying the
signs, together with two commuting even twist maps.  The package checks
the defining identities, runs the standard constructions (quotients,
arity reduction, twisting, tensor and direct sums, doubling extensions),
handles modules over such algebras, and solves for derivation-type
operator spaces with exact rational linear algebra.
"""

from .grading import (
    Bicharacter,
    GradingGroup,
    GroupElement,
    bichar_eval,
    bichar_validate,
    builtin_bicharacter,
    element_add,
    trivial_bicharacter,
)
from .linalg import (
    MatrixQ,
    RowReducer,
    SubspaceQ,
    coordinates_in,
    nullspace,
    rref,
    solve_linear,
    subspace_intersect,
    subspace_membership,
    subspace_sum,
)
from .algebra import (
    AxiomReport,
    BracketTable,
    CheckResult,
    ColorAlgebra,
    GradedSubspace,
    HomogeneousMap,
    Witness,
    ab_center,
    center,
    centralizer,
    central_sequence,
    check_axioms,
    check_ideal_theorem,
    check_jacobi_alternate,
    check_multiplicative,
    derived_sequence,
    eval_bracket,
    full_space,
    is_ideal,
    is_morphism,
    is_multiplicative,
    is_subalgebra,
    skew_symmetric_table,
)
from .constructions import (
    AssocAlgebra,
    BiHomAssocColorAlgebra,
    ConstructionError,
    averaging_twist,
    check_averaging,
    check_semi_morphism,
    direct_sum,
    graph_is_subalgebra,
    lie_from_bihom_assoc,
    power_twist,
    quotient,
    reduce_arity,
    semi_morphism_twist,
    t_extension,
    tensor_with_commutative,
    yau_twist,
)
from .modules import (
    ActionTable,
    BiHomModule,
    adjoint_module,
    check_module_axioms,
    direct_sum_modules,
    eval_action,
    power_twist_module,
    semidirect_algebra,
    twist_module,
)
from .derivations import (
    GDerSolution,
    GDerTuple,
    OperatorBasis,
    OperatorQuery,
    OperatorSolver,
    QDerPair,
    QDerSolution,
    candidate_degrees,
    closure_check,
    commuting_maps_basis,
    derhat_maps,
    eps_commutator,
    gder_identity_residual,
    operator_identity_residual,
    operator_space_algebra,
    qder_embedding_check,
    qder_identity_residual,
    solve_gder,
    solve_operator_space,
    solve_qder,
    tensor_centroid_check,
)
from .docio import DefinitionDocument, DocumentError, dump, load, save_algebra

__version__ = "0.1.0"
