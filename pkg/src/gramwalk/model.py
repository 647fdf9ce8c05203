"""Core RDF-ish value types: nodes and triples.

Nodes are immutable values; two nodes are equal iff their kind, value and
(for literals) datatype are equal. Triples are immutable (subject,
predicate, object) statements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

IRI = "iri"
BLANK = "blank"
LITERAL = "literal"

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF + "type"
RDF_SEQ = RDF + "Seq"
RDF_PROPERTY = RDF + "Property"
RDFS_SUBCLASSOF = RDFS + "subClassOf"
RDFS_SUBPROPERTYOF = RDFS + "subPropertyOf"
RDFS_RESOURCE = RDFS + "Resource"
RDFS_DOMAIN = RDFS + "domain"
RDFS_RANGE = RDFS + "range"

#: Predicates whose triples carry schema information rather than plain
#: instance-to-instance edges.
SCHEMA_PREDICATES = frozenset(
    {RDF_TYPE, RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF, RDFS_DOMAIN, RDFS_RANGE}
)


class StructuralError(ValueError):
    """A triple violates a structural constraint (e.g. literal subject)."""


@dataclass(frozen=True, order=True)
class Node:
    kind: str
    value: str
    datatype: Optional[str] = field(default=None)

    def is_literal(self):
        return self.kind == LITERAL

    def __str__(self):
        if self.kind == IRI:
            return f"<{self.value}>"
        if self.kind == BLANK:
            return f"_:{self.value}"
        if self.datatype:
            return f'"{self.value}"^^<{self.datatype}>'
        return f'"{self.value}"'


def iri(value: str) -> Node:
    return Node(IRI, value)


def blank(value: str) -> Node:
    return Node(BLANK, value)


def literal(value: str, datatype: Optional[str] = None) -> Node:
    return Node(LITERAL, value, datatype)


@dataclass(frozen=True, order=True)
class Triple:
    subject: Node
    predicate: Node
    object: Node

    def __post_init__(self):
        if self.subject.kind == LITERAL:
            raise StructuralError(f"literal not allowed as subject: {self.subject}")
        if self.predicate.kind != IRI:
            raise StructuralError(f"predicate must be an IRI: {self.predicate}")

    def __str__(self):
        return f"{self.subject} {self.predicate} {self.object} ."
