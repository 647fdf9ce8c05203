import pytest

from gramwalk import SemanticNetwork, StructuralError, Triple, iri, literal
from gramwalk.fixtures import (
    ARTICLE,
    CONF_ARTICLE,
    LANL,
    RESEARCHER,
    UNIVERSITY,
    WROTE,
    _lanl,
)

HAS_FRIEND = _lanl("hasFriend")
MARKO = _lanl("marko")
JOHAN = _lanl("johan")


def test_add_triple_builds_indices():
    net = SemanticNetwork()
    t = Triple(MARKO, HAS_FRIEND, JOHAN)
    net.add_triple(t)
    assert len(net) == 1
    assert net.vertices() == {MARKO, JOHAN}
    assert t in net.out_triples(MARKO)
    assert t in net.in_triples(JOHAN)


def test_add_triple_deduplicates():
    net = SemanticNetwork()
    net.add_triple(Triple(MARKO, HAS_FRIEND, JOHAN))
    net.add_triple(Triple(MARKO, HAS_FRIEND, JOHAN))
    assert len(net) == 1


def test_literal_subject_rejected():
    with pytest.raises(StructuralError):
        Triple(literal("Marko"), HAS_FRIEND, JOHAN)


def test_blank_predicate_rejected():
    from gramwalk import blank
    with pytest.raises(StructuralError):
        Triple(MARKO, blank("b0"), JOHAN)


def test_out_in_triples_unknown_vertex_empty(toy3):
    assert toy3.out_triples(_lanl("nobody")) == set()
    assert toy3.in_triples(_lanl("nobody")) == set()


def test_out_triples_toy3_r2(toy3):
    got = toy3.out_triples(_lanl("r2"))
    assert got == {
        Triple(_lanl("r2"), WROTE, _lanl("c1")),
        Triple(_lanl("r2"), WROTE, _lanl("c2")),
        Triple(_lanl("r2"), _lanl("locatedAt"), _lanl("U1")),
        Triple(_lanl("r2"), iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"), RESEARCHER),
    }


def test_in_triples_toy3_c1(toy3):
    got = {t for t in toy3.in_triples(_lanl("c1")) if t.predicate == WROTE}
    assert got == {
        Triple(_lanl("r1"), WROTE, _lanl("c1")),
        Triple(_lanl("r2"), WROTE, _lanl("c1")),
    }


def test_is_instance_of_subclass_closure(toy3):
    assert toy3.is_instance_of(_lanl("c1"), ARTICLE)
    assert toy3.is_instance_of(_lanl("c1"), CONF_ARTICLE)
    assert not toy3.is_instance_of(_lanl("c1"), RESEARCHER)


def test_is_instance_of_self(toy3):
    # A forResource naming a concrete vertex resolves to that vertex.
    assert toy3.is_instance_of(_lanl("r1"), _lanl("r1"))


def test_instances_of_university(toy3):
    assert toy3.instances_of(UNIVERSITY) == {_lanl("U1"), _lanl("U2")}


def test_instances_of_article_via_closure(toy3):
    assert toy3.instances_of(ARTICLE) == {_lanl("c1"), _lanl("c2"), _lanl("c3")}


def test_instances_of_unknown_class(toy3):
    assert toy3.instances_of(_lanl("Spaceship")) == set()


def test_instances_of_excludes_pure_schema_vertices(toy3):
    # The class IRI University never occurs as an instance-level vertex,
    # so it must not resolve to itself.
    assert UNIVERSITY not in toy3.instances_of(UNIVERSITY)


def test_subproperty_reflexive_and_asserted():
    net = SemanticNetwork()
    wrote_chapter = _lanl("wroteChapter")
    net.add_triple(Triple(
        wrote_chapter,
        iri("http://www.w3.org/2000/01/rdf-schema#subPropertyOf"),
        WROTE,
    ))
    assert net.is_subproperty_of(WROTE, WROTE)
    assert net.is_subproperty_of(wrote_chapter, WROTE)
    assert not net.is_subproperty_of(WROTE, wrote_chapter)


def test_subproperty_transitive_chain():
    net = SemanticNetwork()
    sub = iri("http://www.w3.org/2000/01/rdf-schema#subPropertyOf")
    a, b, c = _lanl("a"), _lanl("b"), _lanl("c")
    net.add_triple(Triple(a, sub, b))
    net.add_triple(Triple(b, sub, c))
    assert net.is_subproperty_of(a, c)


def test_schema_invalidated_on_mutation():
    net = SemanticNetwork()
    sub = iri("http://www.w3.org/2000/01/rdf-schema#subClassOf")
    assert not net.schema.is_subclass_of(LANL + "X", LANL + "Y")
    net.add_triple(Triple(_lanl("X"), sub, _lanl("Y")))
    assert net.schema.is_subclass_of(LANL + "X", LANL + "Y")
