"""Walker grammar model: parse, validate and serialize grammars expressed
as triples in the rwr vocabulary.

A grammar is a set of contexts. Each context binds to a resource of the
instance network (forResource), carries an ordered rule sequence (an
rdf:Seq) and an optional set of Is/Not attributes constraining how the
context may be resolved.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .model import (
    IRI,
    RDF,
    RDF_PROPERTY,
    RDF_SEQ,
    RDF_TYPE,
    RDFS,
    RDFS_RESOURCE,
    Node,
    Triple,
    iri,
    literal,
)
from .ntriples import serialize_triples
from .store import SemanticNetwork

DEFAULT_RWR_BASE = "urn:rwr:"

OUT = "+"
IN = "-"

IS = "is"
NOT = "not"

_MEMBER_RE = re.compile(r"^_(\d+)$")


class GrammarError(ValueError):
    def __init__(self, subject: str, message: str):
        super().__init__(f"{subject}: {message}")
        self.subject = subject


class Vocabulary:
    """rwr term IRIs under a configurable base."""

    TERMS = (
        "Context", "EntryContext", "forResource", "hasRules", "Traverse",
        "hasEdge", "OutEdge", "InEdge", "hasPredicate", "hasObject",
        "hasSubject", "IncrCount", "SubmitCounts", "Reresolve",
        "probability", "steps", "obeys", "hasAttributes", "hasAttribute",
        "Is", "Not",
    )

    def __init__(self, base: str = DEFAULT_RWR_BASE):
        self.base = base
        for term in self.TERMS:
            setattr(self, term, iri(base + term))


@dataclass(frozen=True, order=True)
class Attribute:
    kind: str  # IS or NOT
    steps: int


@dataclass(frozen=True, order=True)
class GrammarEdge:
    direction: str  # OUT or IN
    predicate: Node
    target_context: str


@dataclass(frozen=True)
class TraverseRule:
    edges: Tuple[GrammarEdge, ...]


@dataclass(frozen=True)
class IncrCountRule:
    pass


@dataclass(frozen=True)
class SubmitCountsRule:
    pass


@dataclass(frozen=True)
class ReresolveRule:
    probability: float
    steps: int
    obeys: FrozenSet[str] = frozenset()


Rule = object  # any of the four rule dataclasses


@dataclass(frozen=True)
class Context:
    id: str
    for_resource: Node
    is_entry: bool = False
    rules: Tuple[Rule, ...] = ()
    attributes: FrozenSet[Attribute] = frozenset()

    def traverse_rule(self) -> Optional[TraverseRule]:
        for r in self.rules:
            if isinstance(r, TraverseRule):
                return r
        return None

    def has_rule(self, rule_type) -> bool:
        return any(isinstance(r, rule_type) for r in self.rules)


@dataclass
class Grammar:
    contexts: Dict[str, Context] = field(default_factory=dict)

    @property
    def entry_context_ids(self) -> Set[str]:
        return {cid for cid, c in self.contexts.items() if c.is_entry}

    def entry_contexts(self) -> List[Context]:
        return [self.contexts[cid] for cid in sorted(self.entry_context_ids)]

    def max_lookback(self) -> int:
        """Largest step offset referenced by any Is/Not/Reresolve."""
        k = 0
        for c in self.contexts.values():
            for a in c.attributes:
                k = max(k, a.steps)
            for r in c.rules:
                if isinstance(r, ReresolveRule):
                    k = max(k, r.steps)
        return k

    def has_reresolve(self) -> bool:
        return any(
            isinstance(r, ReresolveRule)
            for c in self.contexts.values()
            for r in c.rules
        )


def entry_contexts(g: Grammar) -> List[Context]:
    return g.entry_contexts()


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning" | "info"
    subject: str
    message: str

    def __str__(self):
        return f"{self.severity}: {self.subject}: {self.message}"


def _objects(net: SemanticNetwork, s: Node, p: Node) -> List[Node]:
    return sorted(t.object for t in net.out_triples(s) if t.predicate == p)


def _one_object(net: SemanticNetwork, s: Node, p: Node) -> Optional[Node]:
    objs = _objects(net, s, p)
    return objs[0] if objs else None


def _types(net: SemanticNetwork, s: Node) -> Set[Node]:
    return {t.object for t in net.out_triples(s) if t.predicate.value == RDF_TYPE}


def _parse_int(node: Node, subject: str, what: str) -> int:
    if not node.is_literal():
        raise GrammarError(subject, f"{what} must be a literal")
    try:
        value = int(node.value)
    except ValueError:
        raise GrammarError(subject, f"non-numeric {what} literal {node.value!r}")
    if value < 1:
        raise GrammarError(subject, f"{what} must be >= 1, got {value}")
    return value


def _parse_probability(node: Node, subject: str) -> float:
    if not node.is_literal():
        raise GrammarError(subject, "probability must be a literal")
    try:
        value = float(node.value)
    except ValueError:
        raise GrammarError(subject, f"non-numeric probability literal {node.value!r}")
    if not (0.0 < value <= 1.0):
        raise GrammarError(subject, f"probability must be in (0, 1], got {value}")
    return value


def _seq_members(net: SemanticNetwork, seq: Node, subject: str) -> List[Node]:
    numbered: Dict[int, Node] = {}
    for t in net.out_triples(seq):
        if not t.predicate.value.startswith(RDF):
            continue
        m = _MEMBER_RE.match(t.predicate.value[len(RDF):])
        if m:
            numbered[int(m.group(1))] = t.object
    members = []
    for i in range(1, len(numbered) + 1):
        if i not in numbered:
            present = ", ".join(f"rdf:_{j}" for j in sorted(numbered))
            raise GrammarError(subject, f"rule sequence gap: missing rdf:_{i} (have {present})")
        members.append(numbered[i])
    return members


def parse_grammar(
    net: SemanticNetwork,
    base: str = DEFAULT_RWR_BASE,
    lenient: bool = False,
) -> Grammar:
    """Build a Grammar from rwr-vocabulary triples.

    With lenient=True the historical typo forms rdfs:hasEdge and
    rdf:forResource are accepted as aliases of the rwr properties.
    """
    v = Vocabulary(base)
    for_resource_preds = [v.forResource]
    has_edge_preds = [v.hasEdge]
    if lenient:
        for_resource_preds.append(iri(RDF + "forResource"))
        has_edge_preds.append(iri(RDFS + "hasEdge"))

    def first_of(s: Node, preds: List[Node]) -> Optional[Node]:
        for p in preds:
            obj = _one_object(net, s, p)
            if obj is not None:
                return obj
        return None

    context_nodes = sorted(
        {
            t.subject
            for t in net.triples
            if t.predicate.value == RDF_TYPE and t.object in (v.Context, v.EntryContext)
        }
    )
    context_ids = {c.value for c in context_nodes}
    if not context_nodes:
        raise GrammarError(base, "no rwr:Context declarations found")

    contexts: Dict[str, Context] = {}
    for cnode in context_nodes:
        cid = cnode.value
        for_resource = first_of(cnode, for_resource_preds)
        if for_resource is None:
            raise GrammarError(cid, "missing rwr:forResource")
        is_entry = v.EntryContext in _types(net, cnode)

        rules: List[Rule] = []
        seq = _one_object(net, cnode, v.hasRules)
        if seq is not None:
            for rnode in _seq_members(net, seq, cid):
                rules.append(_parse_rule(net, v, rnode, context_ids, has_edge_preds))
        if sum(isinstance(r, TraverseRule) for r in rules) > 1:
            raise GrammarError(cid, "more than one Traverse rule in a context")
        traverse_positions = [i for i, r in enumerate(rules) if isinstance(r, TraverseRule)]
        if traverse_positions and traverse_positions[0] != len(rules) - 1:
            raise GrammarError(cid, "rules after Traverse are unreachable")

        attributes: Set[Attribute] = set()
        attrs_node = _one_object(net, cnode, v.hasAttributes)
        if attrs_node is not None:
            for anode in _objects(net, attrs_node, v.hasAttribute):
                types = _types(net, anode)
                if v.Is in types:
                    kind = IS
                elif v.Not in types:
                    kind = NOT
                else:
                    raise GrammarError(anode.value, "attribute must be typed rwr:Is or rwr:Not")
                steps_node = _one_object(net, anode, v.steps)
                if steps_node is None:
                    raise GrammarError(anode.value, "attribute missing rwr:steps")
                attributes.add(Attribute(kind, _parse_int(steps_node, anode.value, "rwr:steps")))

        contexts[cid] = Context(
            id=cid,
            for_resource=for_resource,
            is_entry=is_entry,
            rules=tuple(rules),
            attributes=frozenset(attributes),
        )
    return Grammar(contexts)


def _parse_rule(
    net: SemanticNetwork,
    v: Vocabulary,
    rnode: Node,
    context_ids: Set[str],
    has_edge_preds: List[Node],
) -> Rule:
    types = _types(net, rnode)
    rid = rnode.value
    if v.Traverse in types:
        edges: List[GrammarEdge] = []
        edge_nodes: List[Node] = []
        for p in has_edge_preds:
            edge_nodes.extend(_objects(net, rnode, p))
        for enode in sorted(set(edge_nodes)):
            etypes = _types(net, enode)
            if v.OutEdge in etypes:
                direction, target_pred = OUT, v.hasObject
            elif v.InEdge in etypes:
                direction, target_pred = IN, v.hasSubject
            else:
                raise GrammarError(enode.value, "edge must be typed rwr:OutEdge or rwr:InEdge")
            predicate = _one_object(net, enode, v.hasPredicate)
            if predicate is None:
                raise GrammarError(enode.value, "edge missing rwr:hasPredicate")
            target = _one_object(net, enode, target_pred)
            if target is None:
                raise GrammarError(
                    enode.value,
                    "edge missing rwr:hasObject" if direction == OUT else "edge missing rwr:hasSubject",
                )
            if target.value not in context_ids:
                raise GrammarError(enode.value, f"dangling edge target {target.value}")
            edges.append(GrammarEdge(direction, predicate, target.value))
        if not edges:
            raise GrammarError(rid, "Traverse rule has no edges")
        return TraverseRule(tuple(sorted(edges)))
    if v.IncrCount in types:
        return IncrCountRule()
    if v.SubmitCounts in types:
        return SubmitCountsRule()
    if v.Reresolve in types:
        prob_node = _one_object(net, rnode, v.probability)
        steps_node = _one_object(net, rnode, v.steps)
        if prob_node is None:
            raise GrammarError(rid, "Reresolve missing rwr:probability")
        if steps_node is None:
            raise GrammarError(rid, "Reresolve missing rwr:steps")
        obeys: Set[str] = set()
        for onode in _objects(net, rnode, v.obeys):
            if onode == v.Is:
                obeys.add(IS)
            elif onode == v.Not:
                obeys.add(NOT)
            else:
                raise GrammarError(rid, f"rwr:obeys must name rwr:Is or rwr:Not, got {onode}")
        return ReresolveRule(
            probability=_parse_probability(prob_node, rid),
            steps=_parse_int(steps_node, rid, "rwr:steps"),
            obeys=frozenset(obeys),
        )
    raise GrammarError(rid, "rule node has no recognized rwr rule type")


def serialize_grammar(g: Grammar, base: str = DEFAULT_RWR_BASE) -> str:
    """Serialize a Grammar back to triple text; parse_grammar round-trips."""
    v = Vocabulary(base)
    triples: List[Triple] = []

    def add(s: Node, p: Node, o: Node):
        triples.append(Triple(s, p, o))

    for cid in sorted(g.contexts):
        ctx = g.contexts[cid]
        cnode = iri(cid)
        add(cnode, iri(RDF_TYPE), v.EntryContext if ctx.is_entry else v.Context)
        if ctx.is_entry:
            add(cnode, iri(RDF_TYPE), v.Context)
        add(cnode, v.forResource, ctx.for_resource)
        if ctx.rules:
            seq = iri(f"{cid}/rules")
            add(cnode, v.hasRules, seq)
            add(seq, iri(RDF_TYPE), iri(RDF_SEQ))
            for i, rule in enumerate(ctx.rules, start=1):
                rnode = iri(f"{cid}/rule_{i}")
                add(seq, iri(f"{RDF}_{i}"), rnode)
                _serialize_rule(v, rule, rnode, add)
        if ctx.attributes:
            attrs = iri(f"{cid}/attributes")
            add(cnode, v.hasAttributes, attrs)
            for i, attr in enumerate(sorted(ctx.attributes), start=1):
                anode = iri(f"{cid}/attribute_{i}")
                add(attrs, v.hasAttribute, anode)
                add(anode, iri(RDF_TYPE), v.Is if attr.kind == IS else v.Not)
                add(anode, v.steps, literal(str(attr.steps)))
    return serialize_triples(triples)


def _serialize_rule(v: Vocabulary, rule: Rule, rnode: Node, add):
    if isinstance(rule, TraverseRule):
        add(rnode, iri(RDF_TYPE), v.Traverse)
        for j, edge in enumerate(rule.edges, start=1):
            enode = iri(f"{rnode.value}/edge_{j}")
            add(rnode, v.hasEdge, enode)
            if edge.direction == OUT:
                add(enode, iri(RDF_TYPE), v.OutEdge)
                add(enode, v.hasObject, iri(edge.target_context))
            else:
                add(enode, iri(RDF_TYPE), v.InEdge)
                add(enode, v.hasSubject, iri(edge.target_context))
            add(enode, v.hasPredicate, edge.predicate)
    elif isinstance(rule, IncrCountRule):
        add(rnode, iri(RDF_TYPE), v.IncrCount)
    elif isinstance(rule, SubmitCountsRule):
        add(rnode, iri(RDF_TYPE), v.SubmitCounts)
    elif isinstance(rule, ReresolveRule):
        add(rnode, iri(RDF_TYPE), v.Reresolve)
        add(rnode, v.probability, literal(repr(rule.probability)))
        add(rnode, v.steps, literal(str(rule.steps)))
        for kind in sorted(rule.obeys):
            add(rnode, v.obeys, v.Is if kind == IS else v.Not)
    else:
        raise TypeError(f"unknown rule {rule!r}")


def _arrival_depth_reachable(g: Grammar, target: str, depth: int) -> bool:
    """Can `target` ever be reached at history index >= depth?

    Walks the context graph forward from the entry contexts, capping the
    step counter at `depth`.
    """
    edges: Dict[str, Set[str]] = {}
    for ctx in g.contexts.values():
        t = ctx.traverse_rule()
        if t:
            edges.setdefault(ctx.id, set()).update(e.target_context for e in t.edges)
    seen: Set[Tuple[str, int]] = set()
    stack = [(cid, 0) for cid in g.entry_context_ids]
    while stack:
        cid, d = stack.pop()
        if (cid, d) in seen:
            continue
        seen.add((cid, d))
        if cid == target and d >= depth:
            return True
        for nxt in edges.get(cid, ()):
            stack.append((nxt, min(d + 1, depth)))
    return False


def validate_grammar(
    g: Grammar,
    net: Optional[SemanticNetwork] = None,
) -> List[Diagnostic]:
    """Static checks; returns diagnostics instead of raising."""
    diags: List[Diagnostic] = []
    if not g.entry_context_ids:
        diags.append(Diagnostic("error", "<grammar>", "no entry context"))

    wildcards = {RDFS_RESOURCE, RDF_PROPERTY}
    for cid in sorted(g.contexts):
        ctx = g.contexts[cid]
        t = ctx.traverse_rule()
        if t:
            for edge in t.edges:
                if edge.target_context not in g.contexts:
                    diags.append(
                        Diagnostic("error", cid, f"Traverse target {edge.target_context} does not exist")
                    )
        for attr in sorted(ctx.attributes):
            if not _arrival_depth_reachable(g, cid, attr.steps):
                diags.append(
                    Diagnostic(
                        "warning",
                        cid,
                        f"{attr.kind} attribute steps={attr.steps} exceeds every "
                        "possible history length at this context and never binds",
                    )
                )
        for rule in ctx.rules:
            if isinstance(rule, ReresolveRule):
                if not _arrival_depth_reachable(g, cid, rule.steps):
                    diags.append(
                        Diagnostic(
                            "error",
                            cid,
                            f"Reresolve steps={rule.steps} exceeds every possible "
                            "history length at this context",
                        )
                    )
                if not rule.obeys:
                    diags.append(
                        Diagnostic("info", cid, "Reresolve respects no context attributes (obeys is empty)")
                    )
        if net is not None:
            res = ctx.for_resource
            if res.kind == IRI and res.value not in wildcards:
                if not net.instances_of(res):
                    diags.append(
                        Diagnostic("warning", cid, f"forResource {res.value} has no instances in the network")
                    )
            if t:
                used_predicates = {
                    tr.predicate for tr in net.triples
                }
                for edge in t.edges:
                    p = edge.predicate
                    if p.value in wildcards:
                        continue
                    known = p in used_predicates or any(
                        net.is_subproperty_of(q, p) for q in used_predicates if q.kind == IRI
                    )
                    if not known:
                        diags.append(
                            Diagnostic("warning", cid, f"edge predicate {p.value} never occurs in the network")
                        )
    return diags
