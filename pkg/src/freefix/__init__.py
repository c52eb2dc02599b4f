"""Fixed subgroups of free groups: Stallings graphs, Whitehead moves and closures."""

from ._kernels import BACKEND
from .budget import DEFAULT, Budget
from .closure import (
    Verdict,
    acl_membership,
    auto_fixed_verdict,
    endo_closure_upper,
    endo_fixed_verdict,
    reduce_witnesses,
    validate_report,
)
from .errors import (
    AlphabetMismatchError,
    BudgetExceededError,
    CertificateError,
    FreeFixError,
    InconclusiveError,
    NotASubgroupError,
    UndefinedRootError,
    WordParseError,
)
from .extensions import ExtensionSet, algebraic_extensions, fringe, is_free_factor
from .fixpoints import (
    ExactFix,
    FixApproximation,
    NotFound,
    StableImageResult,
    exact_fix_inner,
    find_retraction,
    fix_approx,
    fixed_words,
    reduce_family,
    stable_image,
)
from .stallings import (
    SubgroupGraph,
    basis,
    build_subgroup,
    contains,
    equals,
    image,
    intersect,
    rank,
    rewrite_in,
)
from .whitehead import (
    PeakGraph,
    WhiteheadAuto,
    minimize_tuple,
    peak_graph,
    stabilizer_generators,
    whitehead_autos,
)
from .words import Alphabet, Morphism, Word, apply, compose, is_automorphism, reduce, root

__all__ = [name for name in dir() if not name.startswith("_")]
