"""Grammar-constrained random walker engine.

A walker keeps two aligned histories: its path through the instance
network (vertex, incoming edge label, direction) and its path through the
grammar (context, grammar-edge predicate, direction). Local counts
accumulate at IncrCount contexts and only reach the global rank vector
when a SubmitCounts rule fires; a halted walker's local counts are
discarded.
"""
from __future__ import annotations

import enum
import json
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from .grammar import (
    NOT,
    OUT,
    Context,
    Grammar,
    GrammarEdge,
    IncrCountRule,
    ReresolveRule,
    SubmitCountsRule,
    TraverseRule,
    validate_grammar,
)
from .model import IRI, Node, Triple
from .store import SemanticNetwork


class UnrunnableGrammarError(RuntimeError):
    """No entry context resolves to any vertex of the network."""


class StepOutcome(enum.Enum):
    MOVED = "moved"
    COUNTED = "counted"
    SUBMITTED = "submitted"
    RERESOLVED = "reresolved"
    HALTED = "halted"


# History records: (vertex-or-context, incoming label, direction). Entry
# records carry label None and direction None.
GRecord = Tuple[Node, Optional[Node], Optional[str]]
PsiRecord = Tuple[str, Optional[Node], Optional[str]]


@dataclass
class WalkerState:
    g_history: List[GRecord] = field(default_factory=list)
    psi_history: List[PsiRecord] = field(default_factory=list)
    local_counts: Dict[Node, int] = field(default_factory=dict)
    rule_cursor: int = 0

    @property
    def current_vertex(self) -> Node:
        return self.g_history[-1][0]

    @property
    def current_context_id(self) -> str:
        return self.psi_history[-1][0]


@dataclass
class RunConfig:
    epsilon: float = 0.001
    rng_seed: int = 0
    max_steps: int = 5_000_000
    check_every: int = 100
    walkers: int = 1

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_steps < 1 or self.check_every < 1 or self.walkers < 1:
            raise ValueError("max_steps, check_every and walkers must be >= 1")


@dataclass
class RunResult:
    counts: Dict[Node, int]
    normalized: Dict[Node, float]
    total_steps: int
    submits: int
    converged: bool
    # Audit counters (not part of the serialized document).
    increments_total: int = 0
    increments_discarded: int = 0
    reresolve_draws: int = 0
    reresolve_taken: int = 0
    halts: int = 0

    def to_json(self) -> str:
        doc = {
            "counts": {node_key(v): c for v, c in self.counts.items()},
            "normalized": {node_key(v): round_sig(x) for v, x in self.normalized.items()},
            "steps": self.total_steps,
            "submits": self.submits,
            "converged": self.converged,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def node_key(n: Node) -> str:
    if n.kind == IRI:
        return n.value
    if n.kind == "blank":
        return "_:" + n.value
    return str(n)


def round_sig(x: float, digits: int = 12) -> float:
    return float(f"{x:.{digits}g}")


def _resolutions(net: SemanticNetwork, resource: Node) -> List[Node]:
    """Sorted s(V | context) for a forResource term."""
    if resource.is_literal():
        return [resource] if resource in net.object_index else []
    return sorted(net.instances_of(resource))


def spawn_walker(net: SemanticNetwork, g: Grammar, rng: random.Random) -> WalkerState:
    """Enter the grammar at a uniformly chosen entry context, then at a
    uniformly chosen resolution of that context."""
    entries = g.entry_contexts()
    if not entries:
        raise UnrunnableGrammarError("grammar has no entry context")
    runnable = [(ctx, _resolutions(net, ctx.for_resource)) for ctx in entries]
    runnable = [(ctx, res) for ctx, res in runnable if res]
    if not runnable:
        raise UnrunnableGrammarError("no entry context resolves to any vertex")
    ctx, resolutions = runnable[rng.randrange(len(runnable))]
    vertex = resolutions[rng.randrange(len(resolutions))]
    return WalkerState(
        g_history=[(vertex, None, None)],
        psi_history=[(ctx.id, None, None)],
    )


def _sets_at(
    w: WalkerState,
    context: Context,
    dest_index: int,
    vertex_at=None,
    kinds: Optional[Set[str]] = None,
) -> Tuple[Set[Node], Set[Node]]:
    """X (forbidden) and O (required) sets for resolving `context` at
    history index dest_index; an attribute with steps m references the
    vertex m records before the one being resolved."""
    if vertex_at is None:
        history = w.g_history

        def vertex_at(i):
            return history[i][0]

    forbidden: Set[Node] = set()
    required: Set[Node] = set()
    for attr in context.attributes:
        if kinds is not None and attr.kind not in kinds:
            continue
        back = dest_index - attr.steps
        if back < 0:
            continue
        if attr.kind == NOT:
            forbidden.add(vertex_at(back))
        else:
            required.add(vertex_at(back))
    return forbidden, required


def constraint_sets(w: WalkerState, next_context: Context) -> Tuple[Set[Node], Set[Node]]:
    """(X, O) for moving the walker into next_context on its next step."""
    return _sets_at(w, next_context, len(w.g_history))


def _base_candidates(
    net: SemanticNetwork, g: Grammar, rule: TraverseRule, vertex: Node
) -> List[Tuple[Triple, GrammarEdge]]:
    """Candidates before Is/Not filtering (depends only on rule+vertex)."""
    found: List[Tuple[Triple, GrammarEdge]] = []
    for edge in rule.edges:
        target = g.contexts[edge.target_context]
        if edge.direction == OUT:
            for t in net.out_triples(vertex):
                if net.predicate_matches(t.predicate, edge.predicate) and net.resource_matches(
                    t.object, target.for_resource
                ):
                    found.append((t, edge))
        else:
            for t in net.in_triples(vertex):
                if net.predicate_matches(t.predicate, edge.predicate) and net.resource_matches(
                    t.subject, target.for_resource
                ):
                    found.append((t, edge))
    found.sort()
    return found


def traversal_candidates(
    net: SemanticNetwork,
    g: Grammar,
    w: WalkerState,
    rule: TraverseRule,
    base: Optional[List[Tuple[Triple, GrammarEdge]]] = None,
) -> List[Tuple[Triple, GrammarEdge]]:
    """All (triple, grammar-edge) pairs the walker may take from its
    current vertex; selection among them is uniform."""
    if base is None:
        base = _base_candidates(net, g, rule, w.current_vertex)
    out: List[Tuple[Triple, GrammarEdge]] = []
    sets_cache: Dict[str, Tuple[Set[Node], Set[Node]]] = {}
    for t, edge in base:
        if edge.target_context not in sets_cache:
            sets_cache[edge.target_context] = constraint_sets(w, g.contexts[edge.target_context])
        forbidden, required = sets_cache[edge.target_context]
        b = t.object if edge.direction == OUT else t.subject
        if b in forbidden:
            continue
        if required and b not in required:
            continue
        out.append((t, edge))
    return out


def apply_traverse(w: WalkerState, chosen: Tuple[Triple, GrammarEdge]) -> WalkerState:
    t, edge = chosen
    b = t.object if edge.direction == OUT else t.subject
    w.g_history.append((b, t.predicate, edge.direction))
    w.psi_history.append((edge.target_context, edge.predicate, edge.direction))
    w.rule_cursor = 0
    return w


def incr_count(w: WalkerState) -> WalkerState:
    v = w.current_vertex
    w.local_counts[v] = w.local_counts.get(v, 0) + 1
    w.rule_cursor += 1
    return w


def submit_counts(w: WalkerState, global_counts: Dict[Node, int]) -> Dict[Node, int]:
    for v, c in w.local_counts.items():
        global_counts[v] = global_counts.get(v, 0) + c
    w.local_counts = {}
    w.rule_cursor += 1
    return global_counts


# A re-resolved window path: one (vertex, incoming label) per window
# position; the first position's incoming label is None (it predates the
# window and is left untouched).
Path = Tuple[Tuple[Node, Optional[Node]], ...]


def enumerate_window_paths(
    net: SemanticNetwork,
    g: Grammar,
    pattern: List[PsiRecord],
    start_index: int,
    obeys: Set[str],
    vertex_before=None,
) -> List[Path]:
    """All network paths matching a grammar-history window.

    `pattern` lists the window's psi records (context, grammar predicate,
    direction); `start_index` is the history index of the first record.
    `vertex_before(i)` supplies pre-window vertices for attribute offsets
    that reach behind the window (only consulted when obeys is non-empty).
    """
    results: List[Path] = []
    contexts = [g.contexts[rec[0]] for rec in pattern]

    def vertex_at(prefix: List[Tuple[Node, Optional[Node]]], index: int) -> Node:
        offset = index - start_index
        if offset < 0:
            if vertex_before is None:
                raise IndexError("attribute offset reaches before the window")
            return vertex_before(index)
        return prefix[offset][0]

    def admissible(prefix, position: int, vertex: Node) -> bool:
        if not obeys:
            return True
        ctx = contexts[position - start_index]
        probe = prefix + [(vertex, None)]
        forbidden, required = _sets_at(
            None, ctx, position, vertex_at=lambda i: vertex_at(probe, i), kinds=obeys
        )
        if vertex in forbidden:
            return False
        if required and vertex not in required:
            return False
        return True

    def extend(prefix: List[Tuple[Node, Optional[Node]]], pos: int):
        if pos - start_index == len(pattern):
            results.append(tuple(prefix))
            return
        _, wpred, direction = pattern[pos - start_index]
        target = contexts[pos - start_index]
        prev = prefix[-1][0]
        if direction == OUT:
            steps = [
                (t.object, t.predicate)
                for t in net.out_triples(prev)
                if net.predicate_matches(t.predicate, wpred)
                and net.resource_matches(t.object, target.for_resource)
            ]
        else:
            steps = [
                (t.subject, t.predicate)
                for t in net.in_triples(prev)
                if net.predicate_matches(t.predicate, wpred)
                and net.resource_matches(t.subject, target.for_resource)
            ]
        for vertex, label in sorted(steps):
            if admissible(prefix, pos, vertex):
                extend(prefix + [(vertex, label)], pos + 1)

    for first in _resolutions(net, contexts[0].for_resource):
        if admissible([], start_index, first):
            extend([(first, None)], start_index + 1)
    results.sort()
    return results


def reresolve_paths(
    net: SemanticNetwork, g: Grammar, w: WalkerState, rule: ReresolveRule
) -> List[Path]:
    """Legal replacement paths for the walker's last `steps` history
    records; always contains the walker's current path."""
    n = len(w.psi_history) - 1
    start = n - rule.steps
    if start < 0:
        raise ValueError("history shorter than the re-resolution window")
    history = w.g_history
    return enumerate_window_paths(
        net,
        g,
        w.psi_history[start:],
        start,
        set(rule.obeys),
        vertex_before=lambda i: history[i][0],
    )


def apply_reresolve(w: WalkerState, q: Path) -> WalkerState:
    """Overwrite the g-history window with path q; psi history and local
    counts are untouched."""
    start = len(w.g_history) - len(q)
    for offset, (vertex, label) in enumerate(q):
        idx = start + offset
        old = w.g_history[idx]
        w.g_history[idx] = (vertex, old[1] if offset == 0 else label, old[2])
    return w


def _fresh_stats() -> Dict[str, int]:
    return {
        "increments": 0,
        "discarded": 0,
        "reresolve_draws": 0,
        "reresolve_taken": 0,
        "halts": 0,
    }


def step(
    net: SemanticNetwork,
    g: Grammar,
    w: WalkerState,
    global_counts: Dict[Node, int],
    rng: random.Random,
    stats: Optional[Dict[str, int]] = None,
    cache: Optional[dict] = None,
) -> Tuple[WalkerState, StepOutcome]:
    """Execute one rule of the walker's current context.

    An exhausted rule sequence or an empty traversal set halts the walker:
    its local counts are discarded and a fresh walker is spawned.
    """
    ctx = g.contexts[w.current_context_id]

    def halt() -> Tuple[WalkerState, StepOutcome]:
        if stats is not None:
            stats["discarded"] += sum(w.local_counts.values())
            stats["halts"] += 1
        return spawn_walker(net, g, rng), StepOutcome.HALTED

    if w.rule_cursor >= len(ctx.rules):
        return halt()
    rule = ctx.rules[w.rule_cursor]

    if isinstance(rule, TraverseRule):
        base = None
        if cache is not None:
            key = (ctx.id, w.current_vertex)
            base = cache.get(key)
            if base is None:
                base = _base_candidates(net, g, rule, w.current_vertex)
                cache[key] = base
        candidates = traversal_candidates(net, g, w, rule, base=base)
        if not candidates:
            return halt()
        chosen = candidates[rng.randrange(len(candidates))]
        return apply_traverse(w, chosen), StepOutcome.MOVED

    if isinstance(rule, IncrCountRule):
        incr_count(w)
        if stats is not None:
            stats["increments"] += 1
        return w, StepOutcome.COUNTED

    if isinstance(rule, SubmitCountsRule):
        submit_counts(w, global_counts)
        return w, StepOutcome.SUBMITTED

    if isinstance(rule, ReresolveRule):
        w.rule_cursor += 1
        if len(w.psi_history) - 1 < rule.steps:
            return w, StepOutcome.RERESOLVED
        if stats is not None:
            stats["reresolve_draws"] += 1
        if rng.random() >= rule.probability:
            return w, StepOutcome.RERESOLVED
        paths = None
        if cache is not None and not rule.obeys:
            n = len(w.psi_history) - 1
            key = ("Q", tuple(w.psi_history[n - rule.steps:]))
            paths = cache.get(key)
        if paths is None:
            paths = reresolve_paths(net, g, w, rule)
            if cache is not None and not rule.obeys:
                cache[key] = paths
        chosen = paths[rng.randrange(len(paths))]
        apply_reresolve(w, chosen)
        if stats is not None:
            stats["reresolve_taken"] += 1
        return w, StepOutcome.RERESOLVED

    raise TypeError(f"unknown rule {rule!r}")


def normalize(counts: Dict[Node, int]) -> Dict[Node, float]:
    total = sum(counts.values())
    if total <= 0:
        return {}
    return {v: c / total for v, c in counts.items()}


def has_converged(
    prev: Dict[Node, float], curr: Dict[Node, float], epsilon: float
) -> bool:
    """Euclidean distance over the union of supports, absent entries 0."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    keys = set(prev) | set(curr)
    sq = sum((prev.get(k, 0.0) - curr.get(k, 0.0)) ** 2 for k in keys)
    return math.sqrt(sq) < epsilon


def run(net: SemanticNetwork, g: Grammar, cfg: RunConfig) -> RunResult:
    """Drive walkers until the normalized global vector stabilizes at a
    SubmitCounts checkpoint or the step budget runs out. Deterministic for
    a fixed (seed, walkers)."""
    errors = [d for d in validate_grammar(g, net) if d.severity == "error"]
    if errors:
        raise ValueError("grammar fails validation: " + "; ".join(map(str, errors)))

    rngs = [random.Random(f"{cfg.rng_seed}:{i}") for i in range(cfg.walkers)]
    states = [spawn_walker(net, g, rng) for rng in rngs]
    global_counts: Dict[Node, int] = {}
    stats = _fresh_stats()
    cache: dict = {}

    prev_norm: Optional[Dict[Node, float]] = None
    submits = 0
    steps = 0
    converged = False
    while steps < cfg.max_steps and not converged:
        for i in range(cfg.walkers):
            states[i], outcome = step(
                net, g, states[i], global_counts, rngs[i], stats=stats, cache=cache
            )
            steps += 1
            if outcome is StepOutcome.SUBMITTED:
                submits += 1
                if submits % cfg.check_every == 0:
                    curr = normalize(global_counts)
                    if prev_norm is not None and has_converged(prev_norm, curr, cfg.epsilon):
                        converged = True
                        break
                    prev_norm = curr
            if steps >= cfg.max_steps:
                break

    return RunResult(
        counts=dict(sorted(global_counts.items())),
        normalized=dict(sorted(normalize(global_counts).items())),
        total_steps=steps,
        submits=submits,
        converged=converged,
        increments_total=stats["increments"],
        increments_discarded=stats["discarded"],
        reresolve_draws=stats["reresolve_draws"],
        reresolve_taken=stats["reresolve_taken"],
        halts=stats["halts"],
    )
