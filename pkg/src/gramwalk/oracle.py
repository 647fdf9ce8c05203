"""Exact reference results for walker runs.

The grammar and network are expanded into an explicit finite Markov chain
whose states carry enough trailing history to evaluate every Is/Not
constraint exactly. Power iteration on that chain (restricted to counting
states) yields the distribution a converged walker run must approach.
Re-resolution rules with an empty obeys set are expanded exactly as
probabilistic window rewrites.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from .grammar import (
    OUT,
    Grammar,
    IncrCountRule,
    ReresolveRule,
    SubmitCountsRule,
)
from .model import Node
from .store import SemanticNetwork
from .walker import _base_candidates, _sets_at, enumerate_window_paths

# One chain-state history record: (context id, vertex, grammar predicate
# used to arrive, direction). Entry records have predicate/direction None.
Record = Tuple[str, Node, Optional[Node], Optional[str]]
State = Tuple[Record, ...]


def _state_key(state: State):
    # Records mix Nodes with Nones, so plain tuple comparison fails.
    return tuple((cid, str(v), str(p), str(d)) for cid, v, p, d in state)


class ChainCapacityError(RuntimeError):
    pass


class UnsupportedGrammarError(RuntimeError):
    pass


@dataclass
class ExpandedChain:
    states: List[State]
    transitions: Dict[State, Dict[State, float]]
    counted: Set[State]
    memory_bound: int
    recurrent: Set[State]
    attracting_components: int
    strongly_connected: bool
    aperiodic: bool

    def state_vertex(self, s: State) -> Node:
        return s[-1][1]


def _check_submit_cycles(g: Grammar):
    """Every grammar cycle must pass a SubmitCounts context, otherwise a
    walker could count forever without submitting."""
    graph = nx.DiGraph()
    graph.add_nodes_from(g.contexts)
    for ctx in g.contexts.values():
        t = ctx.traverse_rule()
        if t:
            for e in t.edges:
                graph.add_edge(ctx.id, e.target_context)
    no_submit = [cid for cid, c in g.contexts.items() if not c.has_rule(SubmitCountsRule)]
    sub = graph.subgraph(no_submit)
    try:
        cycle = nx.find_cycle(sub)
    except nx.NetworkXNoCycle:
        return
    members = " -> ".join(edge[0] for edge in cycle)
    raise UnsupportedGrammarError(f"grammar cycle without SubmitCounts: {members}")


def _window_sets(g: Grammar, window: State, target_context: str):
    ctx = g.contexts[target_context]
    dest = len(window)
    return _sets_at(None, ctx, dest, vertex_at=lambda i: window[i][1])


def _traverse_branches(
    net: SemanticNetwork, g: Grammar, window: State, k: int
) -> List[Tuple[State, float]]:
    ctx = g.contexts[window[-1][0]]
    rule = ctx.traverse_rule()
    if rule is None:
        raise UnsupportedGrammarError(
            f"context {ctx.id} has no Traverse rule: walkers halt there"
        )
    vertex = window[-1][1]
    candidates = []
    for t, edge in _base_candidates(net, g, rule, vertex):
        forbidden, required = _window_sets(g, window, edge.target_context)
        b = t.object if edge.direction == OUT else t.subject
        if b in forbidden:
            continue
        if required and b not in required:
            continue
        candidates.append((t, edge))
    if not candidates:
        raise UnsupportedGrammarError(
            f"dead end at context {ctx.id}, vertex {vertex}: walkers halt there "
            "and discarded counts have no chain analogue"
        )
    p = 1.0 / len(candidates)
    out = []
    for t, edge in candidates:
        b = t.object if edge.direction == OUT else t.subject
        record: Record = (edge.target_context, b, edge.predicate, edge.direction)
        out.append(((window + (record,))[-(k + 1):], p))
    return out


def _reresolve_branches(
    net: SemanticNetwork, g: Grammar, window: State, rule: ReresolveRule
) -> List[Tuple[State, float]]:
    """Branch a window into its kept and re-resolved variants."""
    if len(window) - 1 < rule.steps:
        return [(window, 1.0)]
    start = len(window) - 1 - rule.steps
    pattern = [(rec[0], rec[2], rec[3]) for rec in window[start:]]
    paths = enumerate_window_paths(net, g, pattern, start, set(rule.obeys),
                                   vertex_before=lambda i: window[i][1])
    branches: List[Tuple[State, float]] = [(window, 1.0 - rule.probability)]
    share = rule.probability / len(paths)
    for q in paths:
        rewritten = list(window)
        for offset, (vertex, _label) in enumerate(q):
            cid, _v, wpred, direction = rewritten[start + offset]
            rewritten[start + offset] = (cid, vertex, wpred, direction)
        branches.append((tuple(rewritten), share))
    return branches


def expand_chain(
    net: SemanticNetwork, g: Grammar, max_states: int = 100_000
) -> ExpandedChain:
    """Breadth-first product construction of the walker Markov chain."""
    for ctx in g.contexts.values():
        for rule in ctx.rules:
            if isinstance(rule, ReresolveRule) and rule.obeys:
                raise UnsupportedGrammarError(
                    f"context {ctx.id}: Reresolve with a non-empty obeys set "
                    "is outside the oracle's scope"
                )
    _check_submit_cycles(g)
    k = g.max_lookback()

    from .walker import _resolutions

    initial: List[State] = []
    for ctx in g.entry_contexts():
        for v in _resolutions(net, ctx.for_resource):
            initial.append(((ctx.id, v, None, None),))
    if not initial:
        raise UnsupportedGrammarError("no entry context resolves to any vertex")

    transitions: Dict[State, Dict[State, float]] = {}
    counted: Set[State] = set()
    queue = list(initial)
    seen: Set[State] = set(initial)
    while queue:
        state = queue.pop()
        ctx = g.contexts[state[-1][0]]
        if ctx.has_rule(IncrCountRule):
            counted.add(state)
        branches: List[Tuple[State, float]] = [(state, 1.0)]
        for rule in ctx.rules:
            if isinstance(rule, ReresolveRule):
                branches = [
                    (win2, p * q)
                    for win, p in branches
                    for win2, q in _reresolve_branches(net, g, win, rule)
                ]
        outgoing: Dict[State, float] = {}
        for win, p in branches:
            for nxt, q in _traverse_branches(net, g, win, k):
                outgoing[nxt] = outgoing.get(nxt, 0.0) + p * q
        transitions[state] = outgoing
        for nxt in outgoing:
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > max_states:
                    raise ChainCapacityError(f"chain exceeds {max_states} states")
                queue.append(nxt)

    states = sorted(seen, key=_state_key)
    graph = nx.DiGraph()
    graph.add_nodes_from(states)
    for s, outs in transitions.items():
        for t in outs:
            graph.add_edge(s, t)
    condensation = nx.condensation(graph)
    attracting = [
        comp for comp, deg in condensation.out_degree() if deg == 0
    ]
    recurrent: Set[State] = set()
    aperiodic = True
    for comp in attracting:
        members = condensation.nodes[comp]["members"]
        recurrent.update(members)
        if not nx.is_aperiodic(graph.subgraph(members)):
            aperiodic = False
    return ExpandedChain(
        states=states,
        transitions=transitions,
        counted=counted,
        memory_bound=k,
        recurrent=recurrent,
        attracting_components=len(attracting),
        strongly_connected=len(attracting) == 1,
        aperiodic=aperiodic,
    )


@dataclass
class TransitionMatrix:
    order: List[Node]
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        n = len(self.order)
        if self.entries.shape != (n, n):
            raise ValueError("matrix shape does not match vertex order")


def transition_matrix(
    network: Dict[Node, Dict[Node, float]],
    sink_policy: str = "uniform-teleport",
) -> TransitionMatrix:
    """Row-stochastic matrix of a weighted directed network; rows of
    vertices with no outgoing weight become uniform."""
    if sink_policy != "uniform-teleport":
        raise ValueError(f"unknown sink policy {sink_policy!r}")
    verts: Set[Node] = set(network)
    for outs in network.values():
        verts.update(outs)
    if not verts:
        raise ValueError("empty network")
    order = sorted(verts)
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    m = np.zeros((n, n))
    for u, outs in network.items():
        total = sum(outs.values())
        if total > 0:
            for v, w in outs.items():
                m[index[u], index[v]] = w / total
    for i in range(n):
        if m[i].sum() == 0:
            m[i, :] = 1.0 / n
    return TransitionMatrix(order, m)


def blend_teleport(a: TransitionMatrix, delta: float) -> TransitionMatrix:
    """C = delta*A + (1-delta)*B with B the uniform complete network."""
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    n = len(a.order)
    return TransitionMatrix(list(a.order), delta * a.entries + (1.0 - delta) / n)


@dataclass
class PowerIterationResult:
    distribution: Dict[Node, float]
    iterations: int
    converged: bool
    periodic: bool = False

    @property
    def vector(self) -> np.ndarray:
        return np.array(list(self.distribution.values()))


def power_iteration(
    m: TransitionMatrix,
    tol: float = 1e-10,
    max_iters: int = 10_000,
    lazy: bool = False,
) -> PowerIterationResult:
    """Stationary distribution of a row-stochastic matrix from a uniform
    start. Period-2 oscillation is resolved by averaging the last two
    iterates; lazy=True iterates (M+I)/2 instead, which has the same
    stationary distribution and converges for any period.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = len(m.order)
    mat = m.entries
    if lazy:
        mat = 0.5 * (mat + np.eye(n))
    x = np.full(n, 1.0 / n)
    prev = None
    for it in range(1, max_iters + 1):
        nxt = x @ mat
        if np.abs(nxt - x).sum() < tol:
            return PowerIterationResult(_as_dist(m.order, nxt), it, True)
        if prev is not None and np.abs(nxt - prev).sum() < tol:
            avg = 0.5 * (nxt + x)
            return PowerIterationResult(_as_dist(m.order, avg), it, True, periodic=True)
        prev = x
        x = nxt
    return PowerIterationResult(_as_dist(m.order, x), max_iters, False)


def _as_dist(order, vec) -> Dict[Node, float]:
    return {k: float(x) for k, x in zip(order, vec)}


def _chain_matrix(chain: ExpandedChain, states: Sequence[State]) -> np.ndarray:
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    m = np.zeros((n, n))
    for s in states:
        for t, p in chain.transitions.get(s, {}).items():
            if t in index:
                m[index[s], index[t]] += p
    return m


def stationary_states(
    chain: ExpandedChain, tol: float = 1e-12, max_iters: int = 200_000
) -> Dict[State, float]:
    """Stationary distribution over the chain's recurrent states."""
    states = sorted(chain.recurrent, key=_state_key)
    if not states:
        return {}
    m = _chain_matrix(chain, states)
    fake_order = list(range(len(states)))
    result = power_iteration(
        TransitionMatrix(fake_order, m), tol=tol, max_iters=max_iters,
        lazy=not chain.aperiodic,
    )
    return {s: result.distribution[i] for i, s in zip(fake_order, states)}


def counted_distribution(
    chain: ExpandedChain, tol: float = 1e-12, max_iters: int = 200_000
) -> Dict[Node, float]:
    """Long-run share of count increments per vertex: stationary mass of
    the counting states, aggregated by current vertex and normalized."""
    stat = stationary_states(chain, tol=tol, max_iters=max_iters)
    mass: Dict[Node, float] = {}
    for s, p in stat.items():
        if s in chain.counted:
            v = chain.state_vertex(s)
            mass[v] = mass.get(v, 0.0) + p
    total = sum(mass.values())
    if total <= 0:
        return {}
    return {v: p / total for v, p in sorted(mass.items())}


def implied_network(
    chain: ExpandedChain, tol: float = 1e-12
) -> Dict[Node, Dict[Node, float]]:
    """Collapse the chain onto the counted vertices.

    First-passage probabilities between counting states are computed by
    absorbing the uncounted states; consecutive counting states that revisit
    the same vertex deterministically (the grammar re-confirming a vertex it
    just counted) are merged into one visit. Remaining states are grouped by
    vertex, averaging rows by stationary occupancy when a vertex still owns
    several states.
    """
    recurrent = sorted(chain.recurrent, key=_state_key)
    counted = [s for s in recurrent if s in chain.counted]
    uncounted = [s for s in recurrent if s not in chain.counted]
    if not counted:
        return {}
    m = _chain_matrix(chain, recurrent)
    idx = {s: i for i, s in enumerate(recurrent)}
    ci = [idx[s] for s in counted]
    ui = [idx[s] for s in uncounted]
    m_cc = m[np.ix_(ci, ci)]
    if ui:
        m_cu = m[np.ix_(ci, ui)]
        m_uu = m[np.ix_(ui, ui)]
        m_uc = m[np.ix_(ui, ci)]
        f = m_cc + m_cu @ np.linalg.solve(np.eye(len(ui)) - m_uu, m_uc)
    else:
        f = m_cc

    labels = [chain.state_vertex(s) for s in counted]
    f, labels = _merge_deterministic_revisits(f, labels)

    by_vertex: Dict[Node, List[int]] = {}
    for i, v in enumerate(labels):
        by_vertex.setdefault(v, []).append(i)
    if all(len(ix) == 1 for ix in by_vertex.values()):
        weights = {v: ix[0] for v, ix in by_vertex.items()}
        rows = {v: f[i] for v, i in weights.items()}
    else:
        order = list(range(len(labels)))
        result = power_iteration(
            TransitionMatrix(order, f), tol=tol, max_iters=200_000, lazy=True
        )
        occ = np.array([result.distribution[i] for i in order])
        rows = {}
        for v, ix in by_vertex.items():
            w = occ[ix]
            w = w / w.sum() if w.sum() > 0 else np.full(len(ix), 1.0 / len(ix))
            rows[v] = (w[:, None] * f[ix]).sum(axis=0)

    network: Dict[Node, Dict[Node, float]] = {}
    for v, row in rows.items():
        out: Dict[Node, float] = {}
        for j, p in enumerate(row):
            if p > 0:
                out[labels[j]] = out.get(labels[j], 0.0) + float(p)
        network[v] = out
    return network


def _merge_deterministic_revisits(f: np.ndarray, labels: List[Node]):
    """Merge state s into t when s -> t with probability 1 and both carry
    the same vertex: the two counting events are one implied-network visit."""
    f = f.copy()
    labels = list(labels)
    changed = True
    while changed:
        changed = False
        n = len(labels)
        for s in range(n):
            row = f[s]
            t = int(np.argmax(row))
            if t == s or labels[t] != labels[s]:
                continue
            if not math.isclose(row[t], 1.0, abs_tol=1e-9):
                continue
            f[:, t] += f[:, s]
            keep = [i for i in range(n) if i != s]
            f = f[np.ix_(keep, keep)]
            labels = [labels[i] for i in keep]
            changed = True
            break
    return f, labels


def compare_rankings(
    a: Dict[Node, float],
    b: Dict[Node, float],
    tie_tol: float = 0.0,
) -> Dict[str, object]:
    """L1/L2 distance over the union of supports plus descending-rank
    agreement. Values within tie_tol of their neighbour are treated as
    tied; ties are broken lexicographically."""
    keys = sorted(set(a) | set(b))
    diffs = [a.get(k, 0.0) - b.get(k, 0.0) for k in keys]
    l1 = float(sum(abs(d) for d in diffs))
    l2 = float(math.sqrt(sum(d * d for d in diffs)))
    return {
        "l1": l1,
        "l2": l2,
        "rank_agreement": _rank_order(a, keys, tie_tol) == _rank_order(b, keys, tie_tol),
    }


def _rank_order(dist: Dict[Node, float], keys: List[Node], tie_tol: float) -> List[Node]:
    items = sorted(keys, key=lambda k: (-dist.get(k, 0.0), k))
    if tie_tol <= 0:
        return items
    out: List[Node] = []
    group: List[Node] = []
    for k in items:
        if group and dist.get(group[-1], 0.0) - dist.get(k, 0.0) > tie_tol:
            out.extend(sorted(group))
            group = []
        group.append(k)
    out.extend(sorted(group))
    return out


@dataclass
class OracleResult:
    normalized: Dict[Node, float]
    strongly_connected: bool
    aperiodic: bool
    states: int


def oracle_ranking(
    net: SemanticNetwork,
    g: Grammar,
    max_states: int = 100_000,
    tol: float = 1e-12,
) -> OracleResult:
    """Exact counted-vertex distribution for (network, grammar)."""
    chain = expand_chain(net, g, max_states=max_states)
    dist = counted_distribution(chain, tol=tol)
    return OracleResult(
        normalized=dist,
        strongly_connected=chain.strongly_connected,
        aperiodic=chain.aperiodic,
        states=len(chain.states),
    )
