"""Line-oriented triple parser and serializer.

One statement per line, terminated by '.':

    <full-iri> <full-iri> (<full-iri> | "lexical"^^<dt-iri> | "lexical" | _:id) .

`@prefix name: <iri-base> .` lines declare prefixes; `prefix:local` expands
by plain concatenation. `#` starts a comment. Serialization always emits
full IRIs, so parse(serialize(triples)) is the identity on triple sets.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional

from .model import Node, Triple, blank, iri, literal
from .store import SemanticNetwork

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _LineScanner:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.lineno, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text) or self.text[self.pos] == "#"

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def take_until(self, ch: str, what: str) -> str:
        start = self.pos
        end = self.text.find(ch, start)
        if end < 0:
            raise self.error(f"unterminated {what}")
        self.pos = end + 1
        return self.text[start:end]

    def take_quoted(self) -> str:
        out: List[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated literal")
            ch = self.text[self.pos]
            self.pos += 1
            if ch == '"':
                return "".join(out)
            if ch == "\\":
                if self.pos >= len(self.text):
                    raise self.error("dangling escape")
                esc = self.text[self.pos]
                self.pos += 1
                if esc not in _ESCAPES:
                    raise self.error(f"unknown escape \\{esc}")
                out.append(_ESCAPES[esc])
            else:
                out.append(ch)

    def take_bare(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in " \t":
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a term")
        return self.text[start:self.pos]


def _expand(name: str, prefixes: Dict[str, str], scanner: _LineScanner) -> str:
    if ":" not in name:
        raise scanner.error(f"expected prefixed name, got {name!r}")
    prefix, local = name.split(":", 1)
    if prefix not in prefixes:
        raise scanner.error(f"undeclared prefix {prefix!r}")
    return prefixes[prefix] + local


def _parse_iri_term(scanner: _LineScanner, prefixes: Dict[str, str]) -> str:
    scanner.skip_ws()
    if scanner.pos < len(scanner.text) and scanner.text[scanner.pos] == "<":
        scanner.pos += 1
        return scanner.take_until(">", "IRI")
    return _expand(scanner.take_bare(), prefixes, scanner)


def _parse_term(scanner: _LineScanner, prefixes: Dict[str, str]) -> Node:
    scanner.skip_ws()
    if scanner.pos >= len(scanner.text):
        raise scanner.error("expected a term")
    ch = scanner.text[scanner.pos]
    if ch == "<":
        scanner.pos += 1
        return iri(scanner.take_until(">", "IRI"))
    if ch == '"':
        scanner.pos += 1
        lex = scanner.take_quoted()
        datatype: Optional[str] = None
        if scanner.text[scanner.pos:scanner.pos + 2] == "^^":
            scanner.pos += 2
            datatype = _parse_iri_term(scanner, prefixes)
        return literal(lex, datatype)
    if scanner.text[scanner.pos:scanner.pos + 2] == "_:":
        scanner.pos += 2
        return blank(scanner.take_bare())
    return iri(_expand(scanner.take_bare(), prefixes, scanner))


def parse_triples(text: str) -> SemanticNetwork:
    """Parse a triple document into a SemanticNetwork.

    Raises ParseError with 1-based line and column on malformed input.
    """
    net = SemanticNetwork()
    prefixes: Dict[str, str] = {}
    # Split on \n only: str.splitlines would also break lines on \x85,
    # U+2028 etc., which may legitimately occur inside literals.
    for lineno, raw in enumerate(text.split("\n"), start=1):
        raw = raw.rstrip("\r")
        scanner = _LineScanner(raw, lineno)
        if scanner.at_end():
            continue
        if scanner.text[scanner.pos:].startswith("@prefix"):
            scanner.pos += len("@prefix")
            scanner.skip_ws()
            name = scanner.take_until(":", "prefix name").strip()
            scanner.expect("<")
            base = scanner.take_until(">", "prefix IRI")
            scanner.expect(".")
            if not scanner.at_end():
                raise scanner.error("trailing content after '.'")
            prefixes[name] = base
            continue
        subject = _parse_term(scanner, prefixes)
        if subject.is_literal():
            raise scanner.error("literal not allowed in subject position")
        predicate = _parse_term(scanner, prefixes)
        if predicate.kind != "iri":
            raise scanner.error("predicate must be an IRI")
        obj = _parse_term(scanner, prefixes)
        scanner.expect(".")
        if not scanner.at_end():
            raise scanner.error("trailing content after '.'")
        net.add_triple(Triple(subject, predicate, obj))
    return net


def _format_node(n: Node) -> str:
    if n.kind == "iri":
        return f"<{n.value}>"
    if n.kind == "blank":
        return f"_:{n.value}"
    lex = "".join(_UNESCAPES.get(c, c) for c in n.value)
    if n.datatype:
        return f'"{lex}"^^<{n.datatype}>'
    return f'"{lex}"'


def serialize_triples(triples: Iterable[Triple]) -> str:
    """Deterministic (sorted) serialization; round-trips through parse."""
    lines = sorted(
        f"{_format_node(t.subject)} {_format_node(t.predicate)} {_format_node(t.object)} ."
        for t in triples
    )
    return "\n".join(lines) + ("\n" if lines else "")
