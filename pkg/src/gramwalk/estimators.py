"""scikit-learn style wrappers around the walker engine and the oracle.

Both estimators take the grammar as a constructor parameter and fit on a
SemanticNetwork, exposing the resulting distribution as `ranking_`. They
follow the estimator contract far enough to participate in get_params /
set_params / clone; there is no transform step because the output is a
per-vertex score, not a feature matrix.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from sklearn.base import BaseEstimator

from .grammar import Grammar
from .model import Node
from .oracle import expand_chain, counted_distribution
from .store import SemanticNetwork
from .walker import RunConfig, RunResult, run


class _RankerMixin:
    ranking_: Dict[Node, float]

    def top(self, n: Optional[int] = None) -> List[Tuple[Node, float]]:
        """Vertices by descending score, ties broken lexicographically."""
        items = sorted(self.ranking_.items(), key=lambda kv: (-kv[1], kv[0]))
        return items if n is None else items[:n]

    def predict(self, vertices) -> List[float]:
        """Scores for the given vertices (0.0 when unranked)."""
        return [self.ranking_.get(v, 0.0) for v in vertices]


class GrammarWalkRanker(BaseEstimator, _RankerMixin):
    """Monte-Carlo vertex ranking by grammar-constrained random walkers."""

    def __init__(
        self,
        grammar: Optional[Grammar] = None,
        epsilon: float = 0.001,
        seed: int = 0,
        max_steps: int = 5_000_000,
        check_every: int = 100,
        walkers: int = 1,
    ):
        self.grammar = grammar
        self.epsilon = epsilon
        self.seed = seed
        self.max_steps = max_steps
        self.check_every = check_every
        self.walkers = walkers

    def fit(self, network: SemanticNetwork, y=None) -> "GrammarWalkRanker":
        if self.grammar is None:
            raise ValueError("grammar must be set before fit")
        cfg = RunConfig(
            epsilon=self.epsilon,
            rng_seed=self.seed,
            max_steps=self.max_steps,
            check_every=self.check_every,
            walkers=self.walkers,
        )
        self.result_: RunResult = run(network, self.grammar, cfg)
        self.ranking_ = dict(self.result_.normalized)
        self.converged_ = self.result_.converged
        return self


class ChainOracleRanker(BaseEstimator, _RankerMixin):
    """Exact vertex ranking via chain expansion and power iteration."""

    def __init__(
        self,
        grammar: Optional[Grammar] = None,
        max_states: int = 100_000,
        tol: float = 1e-12,
    ):
        self.grammar = grammar
        self.max_states = max_states
        self.tol = tol

    def fit(self, network: SemanticNetwork, y=None) -> "ChainOracleRanker":
        if self.grammar is None:
            raise ValueError("grammar must be set before fit")
        self.chain_ = expand_chain(network, self.grammar, max_states=self.max_states)
        self.ranking_ = counted_distribution(self.chain_, tol=self.tol)
        return self
