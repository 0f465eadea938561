"""Proof-term synthesis for negation-free intuitionistic propositional logic.

Propositions are simple types over atoms, arrows, products and sums; a proof
of a proposition is a closed well-typed lambda term of that type.  The
toolkit searches for proofs with a best-first loop over partial terms, ranked
by cost functions that may consult an external guide term, and ships the
dataset generation and evaluation machinery for training such guides.
"""

from .repair import RepairResult, nearest_term, seq_edit_distance
from .search import (
    CorruptedOracle,
    ExternalGuide,
    FixedGuide,
    NullGuide,
    SynthesisConfig,
    SynthesisResult,
    gen_candidates,
    make_guide,
    synthesize,
)
from .terms import (
    App,
    Arrow,
    CasePair,
    CaseSum,
    HOLE,
    Hole,
    InjL,
    InjR,
    Lam,
    Pair,
    Prod,
    Sum,
    Term,
    TVar,
    TypeExpr,
    Var,
    alpha_eq,
    canonical_key,
    find_beta_eta_redex,
    free_vars,
    size,
)
from .tokens import (
    ParseError,
    parse_term,
    parse_type,
    term_from_text,
    term_to_text,
    tokenize_term,
    tokenize_type,
    type_from_text,
    type_to_text,
)
from .treedist import CostKind, cost, imitate, kernel_backend, tree_edit_distance
from .typecheck import Context, MVar, check_partial, infer_type, unify
from .datagen import (
    DatasetEntry,
    EvalReport,
    count_terms,
    enumerate_closed_terms,
    evaluate_outputs,
    read_dataset,
    sample_term,
    test_dataset,
    training_dataset,
    write_dataset,
)

__version__ = "0.1.0"
