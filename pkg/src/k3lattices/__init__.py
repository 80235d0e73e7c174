"""Exact arithmetic for even integral lattices arising in K3 surface theory."""

from .catalog import (
    MukaiVector,
    SheafNumerics,
    TodorovSpec,
    admissible_todorov_pairs,
    build_double_point_lattice,
    build_todorov_lattice,
    discriminant_hypersurface_degree,
    diag_lattice,
    kummer_double_point_lattice,
    mukai_pairing,
    polarization_genus,
    sheaf_numerics,
    standard_lattice,
)
from .discform import (
    FiniteQuadraticForm,
    discriminant_form,
    fqf_isomorphic,
    milgram_signature,
    min_generators,
)
from .embed import find_primitive_embedding
from .errors import LatticeError
from .intmat import (
    IntMatrix,
    determinant,
    hermite_normal_form,
    kernel_and_solve,
    smith_normal_form,
)
from .isometry import (
    Isometry,
    automorphism_group,
    induced_disc_action,
    short_vectors,
    surjectivity_onto_disc,
)
from .lattice import (
    Embedding,
    GramLattice,
    Overlattice,
    Signature,
    direct_sum,
    embedding_index,
    is_primitive,
    orthogonal_complement,
    overlattice_from_glue,
    saturation,
)
from .verify import (
    Budgets,
    CriterionVerdict,
    PartnerCount,
    VerificationReport,
    criterion_unique_class_and_surjective,
    criterion_unique_primitive_embedding,
    fm_partner_count,
    verify_kummer_example,
    verify_todorov_theorem,
)

__all__ = [
    "Budgets",
    "CriterionVerdict",
    "Embedding",
    "FiniteQuadraticForm",
    "GramLattice",
    "IntMatrix",
    "Isometry",
    "LatticeError",
    "MukaiVector",
    "Overlattice",
    "PartnerCount",
    "SheafNumerics",
    "Signature",
    "TodorovSpec",
    "VerificationReport",
    "admissible_todorov_pairs",
    "automorphism_group",
    "build_double_point_lattice",
    "build_todorov_lattice",
    "criterion_unique_class_and_surjective",
    "criterion_unique_primitive_embedding",
    "determinant",
    "diag_lattice",
    "direct_sum",
    "discriminant_form",
    "discriminant_hypersurface_degree",
    "embedding_index",
    "find_primitive_embedding",
    "fm_partner_count",
    "fqf_isomorphic",
    "hermite_normal_form",
    "induced_disc_action",
    "is_primitive",
    "kernel_and_solve",
    "kummer_double_point_lattice",
    "milgram_signature",
    "min_generators",
    "mukai_pairing",
    "orthogonal_complement",
    "overlattice_from_glue",
    "polarization_genus",
    "saturation",
    "sheaf_numerics",
    "short_vectors",
    "smith_normal_form",
    "standard_lattice",
    "surjectivity_onto_disc",
    "verify_kummer_example",
    "verify_todorov_theorem",
]

__version__ = "0.1.0"
