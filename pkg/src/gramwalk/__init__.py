"""Grammar-constrained random-walk centrality on semantic networks."""

from .model import Node, Triple, StructuralError, iri, blank, literal
from .store import SemanticNetwork, SchemaView
from .ntriples import ParseError, parse_triples, serialize_triples
from .grammar import (
    Attribute,
    Context,
    Diagnostic,
    Grammar,
    GrammarEdge,
    GrammarError,
    IncrCountRule,
    ReresolveRule,
    SubmitCountsRule,
    TraverseRule,
    parse_grammar,
    serialize_grammar,
    validate_grammar,
)
from .walker import (
    RunConfig,
    RunResult,
    StepOutcome,
    UnrunnableGrammarError,
    WalkerState,
    has_converged,
    normalize,
    run,
    spawn_walker,
    step,
)
from .oracle import (
    ChainCapacityError,
    ExpandedChain,
    OracleResult,
    TransitionMatrix,
    UnsupportedGrammarError,
    blend_teleport,
    compare_rankings,
    counted_distribution,
    expand_chain,
    implied_network,
    oracle_ranking,
    power_iteration,
    transition_matrix,
)
from .estimators import ChainOracleRanker, GrammarWalkRanker

__version__ = "0.1.0"

__all__ = [
    "Node", "Triple", "StructuralError", "iri", "blank", "literal",
    "SemanticNetwork", "SchemaView",
    "ParseError", "parse_triples", "serialize_triples",
    "Attribute", "Context", "Diagnostic", "Grammar", "GrammarEdge",
    "GrammarError", "IncrCountRule", "ReresolveRule", "SubmitCountsRule",
    "TraverseRule", "parse_grammar", "serialize_grammar", "validate_grammar",
    "RunConfig", "RunResult", "StepOutcome", "UnrunnableGrammarError",
    "WalkerState", "has_converged", "normalize", "run", "spawn_walker", "step",
    "ChainCapacityError", "ExpandedChain", "OracleResult", "TransitionMatrix",
    "UnsupportedGrammarError", "blend_teleport", "compare_rankings",
    "counted_distribution", "expand_chain", "implied_network",
    "oracle_ranking", "power_iteration", "transition_matrix",
    "ChainOracleRanker", "GrammarWalkRanker",
    "__version__",
]
