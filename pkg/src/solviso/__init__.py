"""Isomorphism testing and canonical forms for finite solvable groups.

The pipeline: a Sylow basis splits the group at a prime threshold into a
large-prime part P1 and a small-prime part P2; composition series of P2
and ordered generating sequences of P1 are enumerated; each candidate is
decided by encoding the data as a low-degree colored graph and comparing
exact canonical forms.  A generator-enumeration brute force serves as
the independent oracle throughout.
"""

from ._kernels import available_backends, backend_name
from .decomposition import AlphaDecomposition, alpha_decomp_iso, alpha_split
from .errors import (
    BadParams,
    MalformedEncoding,
    MissingInverse,
    NoIdentity,
    NonAssociative,
    NoSuchPrime,
    NotGenerating,
    NotLatinSquare,
    NotNested,
    NotPairIso,
    NotSolvable,
    ProductMismatch,
    SolvisoError,
    WitnessVerificationFailed,
)
from .graphenc import (
    AugmentedPair,
    ColoredGraph,
    DecodedPair,
    apply_X_to_iso,
    build_T_P1,
    build_T_S2,
    build_X,
    decode_Y,
    dump_text,
    leaf_product,
)
from .graphiso import (
    CanonicalGraph,
    are_graphs_isomorphic,
    canonize_colored_graph,
    color_refine,
)
from .group_core import (
    GroupTable,
    PrimeFactorization,
    Subgroup,
    derived_series,
    factorize,
    format_cayley,
    is_normal,
    is_solvable,
    load_cayley,
    parse_cayley,
    product_set,
    relabel,
    save_cayley,
    subgroup_closure,
    validate_table,
)
from .iso_engine import (
    CanonicalDecompForm,
    CanonicalGroupForm,
    CanonicalPairForm,
    canon_alpha_decomp,
    canon_augmented_pair,
    canon_group,
    choose_alpha,
    generator_enumeration_iso,
    solvable_iso,
    verify_isomorphism,
)
from .ordering import (
    GeneratingSequence,
    WordOrder,
    all_generating_sequences,
    enumerate_generating_sequences,
    greedy_generating_sequence,
    word_ranks,
)
from .series import (
    AlphaCompositionPair,
    CompositionSeries,
    alpha_pair_iso_loop,
    enumerate_composition_series,
    enumerate_subgroup_chains,
    is_composition_series,
)
from .sylow import SylowBasis, all_sylow_bases, all_sylow_subgroups, sylow_basis, sylow_subgroup

__version__ = "0.1.0"
