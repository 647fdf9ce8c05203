"""Built-in example networks and grammars.

The scholarly fixtures model researchers at universities writing conference
articles; the coauthorship grammars rank researchers by walking the
implicit coauthor network. All builders are deterministic, so serialized
fixture files are byte-identical across runs.
"""
from __future__ import annotations

from typing import Callable, Dict

from .grammar import (
    IN,
    IS,
    NOT,
    OUT,
    Attribute,
    Context,
    Grammar,
    GrammarEdge,
    IncrCountRule,
    ReresolveRule,
    SubmitCountsRule,
    TraverseRule,
    serialize_grammar,
)
from .model import (
    RDF_PROPERTY,
    RDF_TYPE,
    RDFS_RESOURCE,
    RDFS_SUBCLASSOF,
    Node,
    Triple,
    iri,
)
from .ntriples import serialize_triples
from .store import SemanticNetwork

LANL = "http://www.lanl.gov/"
EX = "http://example.org/"


def _t(net: SemanticNetwork, s: Node, p: Node, o: Node):
    net.add_triple(Triple(s, p, o))


def _lanl(name: str) -> Node:
    return iri(LANL + name)


def _ex(name: str) -> Node:
    return iri(EX + name)


_TYPE = iri(RDF_TYPE)
_SUBCLASS = iri(RDFS_SUBCLASSOF)

UNIVERSITY = _lanl("University")
RESEARCHER = _lanl("Researcher")
ARTICLE = _lanl("Article")
CONF_ARTICLE = _lanl("ConferenceArticle")
JOURNAL_ARTICLE = _lanl("JournalArticle")
WROTE = _lanl("wrote")
LOCATED_AT = _lanl("locatedAt")


def scholarly_ontology() -> SemanticNetwork:
    """Class and property vocabulary shared by the scholarly fixtures."""
    net = SemanticNetwork()
    rdfs_class = iri("http://www.w3.org/2000/01/rdf-schema#Class")
    _t(net, UNIVERSITY, _TYPE, rdfs_class)
    _t(net, RESEARCHER, _TYPE, rdfs_class)
    _t(net, ARTICLE, _TYPE, rdfs_class)
    _t(net, CONF_ARTICLE, _TYPE, rdfs_class)
    _t(net, JOURNAL_ARTICLE, _TYPE, rdfs_class)
    _t(net, CONF_ARTICLE, _SUBCLASS, ARTICLE)
    _t(net, JOURNAL_ARTICLE, _SUBCLASS, ARTICLE)
    _t(net, WROTE, _TYPE, iri(RDF_PROPERTY))
    _t(net, LOCATED_AT, _TYPE, iri(RDF_PROPERTY))
    _t(net, WROTE, iri("http://www.w3.org/2000/01/rdf-schema#domain"), RESEARCHER)
    _t(net, WROTE, iri("http://www.w3.org/2000/01/rdf-schema#range"), ARTICLE)
    _t(net, LOCATED_AT, iri("http://www.w3.org/2000/01/rdf-schema#domain"), RESEARCHER)
    _t(net, LOCATED_AT, iri("http://www.w3.org/2000/01/rdf-schema#range"), UNIVERSITY)
    return net


def _scholarly_instances(
    net: SemanticNetwork,
    homes: Dict[str, str],
    authorships: Dict[str, tuple],
):
    universities = sorted(set(homes.values()))
    for u in universities:
        _t(net, _lanl(u), _TYPE, UNIVERSITY)
    for r, u in sorted(homes.items()):
        _t(net, _lanl(r), _TYPE, RESEARCHER)
        _t(net, _lanl(r), LOCATED_AT, _lanl(u))
    for c, authors in sorted(authorships.items()):
        _t(net, _lanl(c), _TYPE, CONF_ARTICLE)
        for r in authors:
            _t(net, _lanl(r), WROTE, _lanl(c))


def toy3() -> SemanticNetwork:
    """Three researchers forming a coauthor triangle across two
    universities: c1={r1,r2}, c2={r2,r3}, c3={r1,r3}."""
    net = scholarly_ontology()
    _scholarly_instances(
        net,
        homes={"r1": "U1", "r2": "U1", "r3": "U2"},
        authorships={"c1": ("r1", "r2"), "c2": ("r2", "r3"), "c3": ("r1", "r3")},
    )
    return net


def toy2x2() -> SemanticNetwork:
    """The toy3 triangle plus an isolated coauthor pair r4-r5 at a second
    university; a walker without teleportation never switches component."""
    net = scholarly_ontology()
    _scholarly_instances(
        net,
        homes={"r1": "U1", "r2": "U1", "r3": "U1", "r4": "U2", "r5": "U2"},
        authorships={
            "c1": ("r1", "r2"),
            "c2": ("r2", "r3"),
            "c3": ("r1", "r3"),
            "c4": ("r4", "r5"),
        },
    )
    return net


def halty() -> SemanticNetwork:
    """A single-author article (c1) that strands walkers arriving there
    from r1: no second author exists, so the walker halts."""
    net = scholarly_ontology()
    _scholarly_instances(
        net,
        homes={"r1": "U1", "r2": "U1"},
        authorships={"c1": ("r1",), "c2": ("r1", "r2")},
    )
    return net


OMEGA = _ex("omega")


def fig10() -> SemanticNetwork:
    """Four vertices where vertex a has one incoming and two outgoing
    omega edges, giving exactly three traversal candidates."""
    net = SemanticNetwork()
    _t(net, _ex("j"), OMEGA, _ex("a"))
    _t(net, _ex("a"), OMEGA, _ex("e"))
    _t(net, _ex("a"), OMEGA, _ex("f"))
    return net


def fig10_grammar() -> Grammar:
    """Single traversal step from vertex a following omega both ways."""
    start = EX + "Start_0"
    nxt = EX + "Next_1"
    return Grammar({
        start: Context(
            id=start,
            for_resource=_ex("a"),
            is_entry=True,
            rules=(
                TraverseRule((
                    GrammarEdge(OUT, OMEGA, nxt),
                    GrammarEdge(IN, OMEGA, nxt),
                )),
            ),
        ),
        nxt: Context(id=nxt, for_resource=iri(RDFS_RESOURCE)),
    })


def regular6() -> SemanticNetwork:
    """A 6-vertex network with mixed edge labels where every vertex has
    in- and out-degree 2 (directed cycle plus a chord involution), so the
    undirected walk and its teleported variants are all uniform."""
    net = SemanticNetwork()
    labels = [_ex("p"), _ex("q")]
    for i in range(6):
        _t(net, _ex(f"v{i}"), labels[i % 2], _ex(f"v{(i + 1) % 6}"))
        _t(net, _ex(f"v{i}"), _ex("r"), _ex(f"v{(i + 3) % 6}"))
    return net


_U0 = LANL + "University_0"
_R1 = LANL + "Researcher_1"
_C2 = LANL + "ConferenceArticle_2"
_R3 = LANL + "Researcher_3"


def _coaut_contexts(article_rules) -> Dict[str, Context]:
    return {
        _U0: Context(
            id=_U0,
            for_resource=UNIVERSITY,
            is_entry=True,
            rules=(
                SubmitCountsRule(),
                TraverseRule((GrammarEdge(IN, LOCATED_AT, _R1),)),
            ),
        ),
        _R1: Context(
            id=_R1,
            for_resource=RESEARCHER,
            rules=(
                IncrCountRule(),
                TraverseRule((GrammarEdge(OUT, WROTE, _C2),)),
            ),
            attributes=frozenset({Attribute(IS, 2)}),
        ),
        _C2: Context(
            id=_C2,
            for_resource=CONF_ARTICLE,
            rules=tuple(article_rules),
        ),
        _R3: Context(
            id=_R3,
            for_resource=RESEARCHER,
            rules=(
                IncrCountRule(),
                TraverseRule((GrammarEdge(OUT, LOCATED_AT, _U0),)),
            ),
            attributes=frozenset({Attribute(NOT, 2)}),
        ),
    }


def coaut() -> Grammar:
    """Eigenvector centrality over the coauthor network: count each
    researcher on the way out and the way back, submit at universities."""
    article = (TraverseRule((GrammarEdge(IN, WROTE, _R3),)),)
    return Grammar(_coaut_contexts(article))


def coaut_prime() -> Grammar:
    """coaut plus PageRank-style teleportation: with probability 0.15 the
    last two history steps are re-resolved to any matching
    university/researcher/article path before leaving the article."""
    article = (
        ReresolveRule(probability=0.15, steps=2, obeys=frozenset()),
        TraverseRule((GrammarEdge(IN, WROTE, _R3),)),
    )
    return Grammar(_coaut_contexts(article))


def psi_empty() -> Grammar:
    """Undirected, label-blind PageRank: count, submit, maybe re-resolve
    the last step, then cross any edge in either direction."""
    cid = LANL + "Resource_0"
    return Grammar({
        cid: Context(
            id=cid,
            for_resource=iri(RDFS_RESOURCE),
            is_entry=True,
            rules=(
                IncrCountRule(),
                SubmitCountsRule(),
                ReresolveRule(probability=0.15, steps=1, obeys=frozenset()),
                TraverseRule((
                    GrammarEdge(OUT, iri(RDF_PROPERTY), cid),
                    GrammarEdge(IN, iri(RDF_PROPERTY), cid),
                )),
            ),
        ),
    })


def _net_text(builder: Callable[[], SemanticNetwork]) -> Callable[[], str]:
    return lambda: serialize_triples(builder().triples)


def _grammar_text(builder: Callable[[], Grammar]) -> Callable[[], str]:
    return lambda: serialize_grammar(builder())


EXAMPLES: Dict[str, Callable[[], str]] = {
    "scholarly-ontology": _net_text(scholarly_ontology),
    "toy3": _net_text(toy3),
    "toy2x2": _net_text(toy2x2),
    "halty": _net_text(halty),
    "fig10": _net_text(fig10),
    "regular6": _net_text(regular6),
    "coaut": _grammar_text(coaut),
    "coaut-prime": _grammar_text(coaut_prime),
    "psi-empty": _grammar_text(psi_empty),
    "fig10-grammar": _grammar_text(fig10_grammar),
}
