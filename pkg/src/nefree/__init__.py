"""Finite NE-free posets: modules, decomposition trees, substitution,
embeddings, chain/antichain normal forms and sibling constructions."""

from .classify import (
    Classification,
    SiblingReport,
    canonical_form,
    check_self_embeddings,
    classify,
    sibling_report,
    sibling_witnesses_disconnected,
    smallest_context,
)
from .decomposition import (
    DecompTree,
    all_modules,
    check_dense_valuation,
    decomposition_tree,
    gallai_quotient,
    is_module,
    robust_modules,
    strong_modules,
)
from .errors import (
    AnchorError,
    ArityError,
    CCGCError,
    CycleError,
    NotCographError,
    NotNFreeError,
    NotStrongError,
    OrderError,
    ParseError,
    RegimeError,
    SizeError,
    StructureError,
)
from .expr import evaluate, parse, to_text
from .generators import (
    BitPattern,
    TruncationWindow,
    cf_linear_window,
    cf_window,
    family_pairwise_noniso,
    gen_A,
    gen_B,
    gen_named,
)
from .io import format_poset_file, parse_poset_file, read_poset_file
from .orders import (
    BinaryStructure,
    Graph,
    Poset,
    antichain,
    chain,
    comparability_graph,
    from_strict_pairs,
    has_ccgc,
    is_cograph,
    is_connected,
    is_nfree,
    n_poset,
)
from .oracle import enumerate_posets, find_embedding, find_isomorphism, is_isomorphic
from .substitution import LabelledChain, direct_sum, linear_sum, poset_substitute, sum_labelled_chain

__version__ = "0.1.0"
