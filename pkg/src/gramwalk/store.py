"""In-memory semantic network with subject/object indices and RDFS-style
subsumption queries (subclass, subproperty, type membership).

The network is meant to be loaded once and then shared read-only between
walkers; closures are recomputed lazily after mutation.
"""
from __future__ import annotations

from typing import Dict, Iterable, Optional, Set

from .model import (
    IRI,
    RDF_PROPERTY,
    RDF_TYPE,
    RDFS_RESOURCE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    SCHEMA_PREDICATES,
    Node,
    StructuralError,
    Triple,
)


def _transitive_closure(edges: Dict[str, Set[str]]) -> Dict[str, Set[str]]:
    """Reflexive-transitive closure of a term -> direct-supers map."""
    closure: Dict[str, Set[str]] = {}

    def reach(term: str) -> Set[str]:
        if term in closure:
            return closure[term]
        seen = {term}
        stack = list(edges.get(term, ()))
        while stack:
            sup = stack.pop()
            if sup in seen:
                continue
            seen.add(sup)
            stack.extend(edges.get(sup, ()))
        closure[term] = seen
        return seen

    for term in list(edges):
        reach(term)
    return closure


class SchemaView:
    """Precomputed subsumption closures over a triple set.

    Both closures are reflexive and transitive. Terms never mentioned in a
    subclass/subproperty assertion are still reflexively related to
    themselves.
    """

    def __init__(self, triples: Iterable[Triple]):
        sub_class: Dict[str, Set[str]] = {}
        sub_prop: Dict[str, Set[str]] = {}
        self.type_assertions: Dict[Node, Set[Node]] = {}
        for t in triples:
            p = t.predicate.value
            if p == RDF_TYPE:
                self.type_assertions.setdefault(t.subject, set()).add(t.object)
            elif p == RDFS_SUBCLASSOF and t.object.kind == IRI:
                sub_class.setdefault(t.subject.value, set()).add(t.object.value)
            elif p == RDFS_SUBPROPERTYOF and t.object.kind == IRI:
                sub_prop.setdefault(t.subject.value, set()).add(t.object.value)
        self.subclass_closure = _transitive_closure(sub_class)
        self.subproperty_closure = _transitive_closure(sub_prop)

    def is_subclass_of(self, cls: str, sup: str) -> bool:
        if cls == sup:
            return True
        return sup in self.subclass_closure.get(cls, ())

    def is_subproperty_of(self, p: str, q: str) -> bool:
        if p == q:
            return True
        return q in self.subproperty_closure.get(p, ())


class SemanticNetwork:
    """A set of triples with subject and object indices.

    Duplicate inserts are silently deduplicated (the triple list is a set).
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self.triples: Set[Triple] = set()
        self.subject_index: Dict[Node, Set[Triple]] = {}
        self.object_index: Dict[Node, Set[Triple]] = {}
        self._schema: Optional[SchemaView] = None
        self._plain_vertices: Optional[Set[Node]] = None
        for t in triples:
            self.add_triple(t)

    def __len__(self):
        return len(self.triples)

    def __contains__(self, t: Triple):
        return t in self.triples

    def add_triple(self, t: Triple) -> "SemanticNetwork":
        if not isinstance(t, Triple):
            raise StructuralError(f"not a triple: {t!r}")
        if t in self.triples:
            return self
        self.triples.add(t)
        self.subject_index.setdefault(t.subject, set()).add(t)
        self.object_index.setdefault(t.object, set()).add(t)
        self._schema = None
        self._plain_vertices = None
        return self

    @property
    def schema(self) -> SchemaView:
        if self._schema is None:
            self._schema = SchemaView(self.triples)
        return self._schema

    def out_triples(self, v: Node) -> Set[Triple]:
        return set(self.subject_index.get(v, ()))

    def in_triples(self, v: Node) -> Set[Triple]:
        return set(self.object_index.get(v, ()))

    def vertices(self) -> Set[Node]:
        """All non-literal nodes occurring in subject or object position."""
        out = set(self.subject_index)
        out.update(v for v in self.object_index if not v.is_literal())
        return out

    def _instance_vertices(self) -> Set[Node]:
        # Nodes used in subject/object position of a non-schema triple.
        # A class IRI that only ever appears as the object of rdf:type (or
        # other schema statements) is vocabulary, not a graph vertex.
        if self._plain_vertices is None:
            verts: Set[Node] = set()
            for t in self.triples:
                if t.predicate.value in SCHEMA_PREDICATES:
                    continue
                verts.add(t.subject)
                if not t.object.is_literal():
                    verts.add(t.object)
            self._plain_vertices = verts
        return self._plain_vertices

    def is_instance_of(self, v: Node, cls: Node) -> bool:
        """Subsumption-aware type test; also true when v equals cls."""
        if cls.kind != IRI:
            raise StructuralError(f"class term must be an IRI: {cls}")
        if v == cls:
            return True
        if cls.value == RDFS_RESOURCE and not v.is_literal():
            return True
        schema = self.schema
        for asserted in schema.type_assertions.get(v, ()):
            if asserted.kind == IRI and schema.is_subclass_of(asserted.value, cls.value):
                return True
        return False

    def instances_of(self, cls: Node) -> Set[Node]:
        """All vertices typed (directly or via subclass closure) as cls,
        plus cls itself when it occurs as an ordinary graph vertex."""
        if cls.kind != IRI:
            raise StructuralError(f"class term must be an IRI: {cls}")
        schema = self.schema
        if cls.value == RDFS_RESOURCE:
            found = set(self._instance_vertices())
        else:
            found = {
                v
                for v, classes in schema.type_assertions.items()
                if any(
                    c.kind == IRI and schema.is_subclass_of(c.value, cls.value)
                    for c in classes
                )
            }
        if cls in self._instance_vertices():
            found.add(cls)
        return found

    def is_subproperty_of(self, p: Node, q: Node) -> bool:
        if p.kind != IRI or q.kind != IRI:
            raise StructuralError("subproperty test requires IRI nodes")
        return self.schema.is_subproperty_of(p.value, q.value)

    def predicate_matches(self, omega: Node, wanted: Node) -> bool:
        """True when a triple labelled omega satisfies a grammar edge
        asking for predicate `wanted` (rdf:Property acts as a wildcard)."""
        if wanted.kind == IRI and wanted.value in (RDF_PROPERTY, RDFS_RESOURCE):
            return True
        return self.is_subproperty_of(omega, wanted)

    def resource_matches(self, v: Node, resource: Node) -> bool:
        """True when vertex v is an acceptable resolution of a grammar
        forResource term. Literals match only by exact equality."""
        if v.is_literal():
            return v == resource
        return self.is_instance_of(v, resource)
