"""Graph rewriting with polarized cloning.

A rewrite step polarizes the host graph around a match, takes the polarized
pushback of the rule's left leg (cloning matched nodes with the incident
edges their signs ask for) and glues in the right-hand side by a pushout.
"""

__version__ = "0.1.0"

from .catops import (
    PushbackResult,
    PushoutResult,
    is_polarized_pullback,
    polarized_pushback,
    pullback,
    pushback,
    pushout,
)
from .dot import export_dot
from .encodings import HpoRule, SqpoRule, encode_hpo, encode_sqpo, sqpo_step_reference
from .errors import RewriteError
from .graph import (
    Graph,
    Morphism,
    compose,
    decompose_along_matching,
    edge_sum,
    edges_between,
    identity,
    is_monomorphism,
    sum_graphs,
    validate_morphism,
)
from .ident import Ident, fresh, ident, tag
from .polarity import (
    PolarizedGraph,
    PolarizedMorphism,
    decompose_polarized,
    forget_polarization,
    is_polarized_matching,
    maximal_polarization,
    validate_polarized_graph,
)
from .rewriting import (
    RewriteStep,
    Rule,
    derive,
    find_matchings,
    infer_lhs_polarity,
    reachable_gc,
    rewrite_step,
    validate_rule,
    verify_step,
)
from .search import are_isomorphic, count_morphisms, enumerate_morphisms
from .textfmt import Document, load_document, parse_document, serialize_document
from .universal import Bound, Report, verify_universal
