"""RDF text I/O: N-Triples and a Turtle subset.

Input grammar (Turtle subset): prefix directives (both ``@prefix`` and
``PREFIX`` spellings), IRIs, prefixed names, blank node labels, literals
with ``^^`` datatype or ``@`` language tag, ``a``, predicate-object
lists with ``;`` and object lists with ``,``. No collections, no
anonymous blanks, no quoted triples, no bare numeric literals.

Output is canonical N-Triples: one statement per line, sorted by
subject, predicate, object term order, so two stores holding the same
statements serialize byte-identically.

Blank node labels are scoped to one parse: every parse maps incoming
labels to fresh ones, so re-loading a document never merges its blank
nodes with previously loaded ones.
"""

from __future__ import annotations

import itertools
import threading

from .errors import ParseError, UnknownPrefixError
from .namespaces import RDF_TYPE, XSD_STRING
from .terms import Blank, Iri, Literal, Quad, Term, triple_sort_key

Triple = tuple[Term, Term, Term]

_parse_counter = itertools.count()
_parse_counter_lock = threading.Lock()


def _fresh_scope() -> str:
    with _parse_counter_lock:
        return f"p{next(_parse_counter)}"


# ---------------------------------------------------------------------
# escapes

_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
          '"': '"', "'": "'", "\\": "\\"}


def _unescape(raw: str, line: int) -> str:
    if "\\" not in raw:
        return raw
    out = []
    i = 0
    n = len(raw)
    while i < n:
        c = raw[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= n:
            raise ParseError("dangling escape", line)
        e = raw[i + 1]
        if e in _ECHAR:
            out.append(_ECHAR[e])
            i += 2
        elif e == "u":
            out.append(chr(int(raw[i + 2:i + 6], 16)))
            i += 6
        elif e == "U":
            out.append(chr(int(raw[i + 2:i + 10], 16)))
            i += 10
        else:
            raise ParseError(f"bad escape \\{e}", line)
    return "".join(out)


def _escape_literal(s: str) -> str:
    out = []
    for c in s:
        if c == "\\":
            out.append("\\\\")
        elif c == '"':
            out.append('\\"')
        elif c == "\n":
            out.append("\\n")
        elif c == "\r":
            out.append("\\r")
        elif c == "\t":
            out.append("\\t")
        elif ord(c) < 0x20:
            out.append(f"\\u{ord(c):04X}")
        else:
            out.append(c)
    return "".join(out)


def _escape_iri(s: str) -> str:
    out = []
    for c in s:
        if c in '<>"{}|^`\\' or ord(c) <= 0x20:
            out.append(f"\\u{ord(c):04X}")
        else:
            out.append(c)
    return "".join(out)


def term_to_ntriples(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{_escape_iri(term.value)}>"
    if isinstance(term, Blank):
        return f"_:{term.label}"
    lex = f'"{_escape_literal(term.lexical)}"'
    if term.lang:
        return f"{lex}@{term.lang}"
    if term.datatype != XSD_STRING:
        return f"{lex}^^<{_escape_iri(term.datatype)}>"
    return lex


# ---------------------------------------------------------------------
# tokenizer (shared by both input formats)

IRIREF = "iriref"
PNAME = "pname"
BLANK_LABEL = "blank"
STRING = "string"
LANGTAG = "langtag"
PUNCT = "punct"
KEYWORD = "keyword"
EOF = "eof"

_PN_LOCAL_EXTRA = set("_-%")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, msg):
        raise ParseError(msg, self.line, self.col)

    def _advance(self, n=1):
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _skip_ws(self):
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c in " \t\r\n":
                self._advance()
            elif c == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def next(self):
        """-> (kind, value, line, col)"""
        self._skip_ws()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return (EOF, "", line, col)
        text = self.text
        c = text[self.pos]

        if c == "<":
            end = text.find(">", self.pos + 1)
            if end < 0:
                self.error("unterminated IRI")
            raw = text[self.pos + 1:end]
            if any(ch in ' \n\t"{}' for ch in raw):
                self.error("invalid character in IRI")
            self._advance(end - self.pos + 1)
            return (IRIREF, _unescape(raw, line), line, col)

        if c == '"':
            i = self.pos + 1
            while i < len(text):
                if text[i] == "\\":
                    i += 2
                    continue
                if text[i] == '"':
                    break
                i += 1
            else:
                self.error("unterminated string literal")
            if i >= len(text):
                self.error("unterminated string literal")
            raw = text[self.pos + 1:i]
            self._advance(i - self.pos + 1)
            return (STRING, _unescape(raw, line), line, col)

        if c == "_" and text.startswith("_:", self.pos):
            i = self.pos + 2
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] in "_-"):
                i += 1
            if i == start:
                self.error("empty blank node label")
            label = text[start:i]
            self._advance(i - self.pos)
            return (BLANK_LABEL, label, line, col)

        if c == "@":
            i = self.pos + 1
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "-"):
                i += 1
            word = text[start:i]
            self._advance(i - self.pos)
            if word == "prefix":
                return (KEYWORD, "@prefix", line, col)
            return (LANGTAG, word, line, col)

        if text.startswith("^^", self.pos):
            self._advance(2)
            return (PUNCT, "^^", line, col)

        if c in ".;,[]()":
            self._advance()
            return (PUNCT, c, line, col)

        # prefixed name, 'a', or bare keyword (PREFIX)
        if c.isalpha() or c == ":" or c == "_" or ord(c) > 127:
            i = self.pos
            while i < len(text) and (text[i].isalnum() or text[i] in _PN_LOCAL_EXTRA
                                     or text[i] in ":." or ord(text[i]) > 127):
                i += 1
            word = text[self.pos:i]
            while word.endswith("."):  # statement dot glued to a pname
                word = word[:-1]
                i -= 1
            self._advance(i - self.pos)
            if ":" in word:
                return (PNAME, word, line, col)
            return (KEYWORD, word, line, col)

        self.error(f"unexpected character {c!r}")


# ---------------------------------------------------------------------
# parsers

class _TurtleParser:
    def __init__(self, text: str, base_prefixes: dict[str, str] | None = None):
        self.lexer = _Lexer(text)
        self.prefixes = dict(base_prefixes or {})
        self.scope = _fresh_scope()
        self.blanks: dict[str, Blank] = {}
        self.tok = self.lexer.next()

    def _advance(self):
        self.tok = self.lexer.next()

    def _expect_punct(self, value):
        kind, val, line, col = self.tok
        if kind != PUNCT or val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", line, col)
        self._advance()

    def _resolve_pname(self, pname, line, col):
        prefix, _, local = pname.partition(":")
        base = self.prefixes.get(prefix)
        if base is None:
            raise UnknownPrefixError(f"unknown prefix {prefix!r}", line, col)
        return Iri(base + local)

    def _blank(self, label) -> Blank:
        node = self.blanks.get(label)
        if node is None:
            node = Blank(f"{self.scope}b{len(self.blanks)}")
            self.blanks[label] = node
        return node

    def _term(self, *, as_predicate=False) -> Term:
        kind, val, line, col = self.tok
        if kind == IRIREF:
            self._advance()
            try:
                return Iri(val)
            except ValueError as exc:
                raise ParseError(str(exc), line, col)
        if kind == PNAME:
            self._advance()
            return self._resolve_pname(val, line, col)
        if kind == KEYWORD and val == "a" and as_predicate:
            self._advance()
            return Iri(RDF_TYPE)
        if as_predicate:
            raise ParseError(f"expected predicate, found {val!r}", line, col)
        if kind == BLANK_LABEL:
            self._advance()
            return self._blank(val)
        if kind == STRING:
            self._advance()
            nkind, nval, nline, ncol = self.tok
            if nkind == LANGTAG:
                self._advance()
                return Literal(val, lang=nval)
            if nkind == PUNCT and nval == "^^":
                self._advance()
                dt = self._term()
                if not isinstance(dt, Iri):
                    raise ParseError("datatype must be an IRI", nline, ncol)
                return Literal(val, datatype=dt.value)
            return Literal(val)
        raise ParseError(f"expected term, found {val!r}", line, col)

    def _directive(self) -> bool:
        kind, val, line, col = self.tok
        if kind == KEYWORD and val == "@prefix":
            self._advance()
            self._prefix_binding()
            self._expect_punct(".")
            return True
        if kind == KEYWORD and val.upper() == "PREFIX":
            self._advance()
            self._prefix_binding()
            return True
        return False

    def _prefix_binding(self):
        kind, val, line, col = self.tok
        if kind != PNAME or not val.endswith(":"):
            raise ParseError("expected prefix declaration", line, col)
        name = val[:-1]
        self._advance()
        kind, iri, line, col = self.tok
        if kind != IRIREF:
            raise ParseError("expected IRI in prefix declaration", line, col)
        self._advance()
        self.prefixes[name] = iri

    def parse(self) -> list[Triple]:
        triples: list[Triple] = []
        while self.tok[0] != EOF:
            if self._directive():
                continue
            subject = self._term()
            if isinstance(subject, Literal):
                raise ParseError("literal subject not allowed",
                                 self.tok[2], self.tok[3])
            while True:
                predicate = self._term(as_predicate=True)
                while True:
                    obj = self._term()
                    triples.append((subject, predicate, obj))
                    if self.tok[:2] == (PUNCT, ","):
                        self._advance()
                        continue
                    break
                if self.tok[:2] == (PUNCT, ";"):
                    self._advance()
                    # tolerate a trailing ';' before '.'
                    if self.tok[:2] == (PUNCT, "."):
                        break
                    continue
                break
            self._expect_punct(".")
        return triples


def parse_turtle(text: str, base_prefixes: dict[str, str] | None = None) -> list[Triple]:
    return _TurtleParser(text, base_prefixes).parse()


def parse_ntriples(text: str) -> list[Triple]:
    """Strict line-oriented parsing; no prefixes, no relative IRIs."""
    triples: list[Triple] = []
    scope = _fresh_scope()
    blanks: dict[str, Blank] = {}

    def blank(label):
        node = blanks.get(label)
        if node is None:
            node = Blank(f"{scope}b{len(blanks)}")
            blanks[label] = node
        return node

    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lexer = _Lexer(line)
        lexer.line = lineno

        def next_term(as_predicate=False):
            kind, val, ln, col = lexer.next()
            if kind == IRIREF:
                try:
                    return Iri(val)
                except ValueError as exc:
                    raise ParseError(str(exc), lineno, col)
            if kind == BLANK_LABEL and not as_predicate:
                return blank(val)
            if kind == STRING and not as_predicate:
                save = (lexer.pos, lexer.line, lexer.col)
                nkind, nval, _, ncol = lexer.next()
                if nkind == LANGTAG:
                    return Literal(val, lang=nval)
                if nkind == PUNCT and nval == "^^":
                    dkind, dval, _, dcol = lexer.next()
                    if dkind != IRIREF:
                        raise ParseError("expected datatype IRI", lineno, dcol)
                    return Literal(val, datatype=dval)
                lexer.pos, lexer.line, lexer.col = save
                return Literal(val)
            raise ParseError(f"unexpected token {val!r}", lineno, col)

        s = next_term()
        p = next_term(as_predicate=True)
        o = next_term()
        kind, val, _, col = lexer.next()
        if (kind, val) != (PUNCT, "."):
            raise ParseError("expected terminating '.'", lineno, col)
        kind, val, _, col = lexer.next()
        if kind != EOF:
            raise ParseError(f"trailing content {val!r}", lineno, col)
        triples.append((s, p, o))
    return triples


# ---------------------------------------------------------------------
# store-level operations

FORMAT_NTRIPLES = "ntriples"
FORMAT_TURTLE = "turtle-subset"


def load_rdf(store, text: str, fmt: str, graph: Iri,
             base_prefixes: dict[str, str] | None = None) -> int:
    """Parse fully, then insert; a syntax error mutates nothing.

    Returns the number of statements that were genuinely new.
    """
    store.require_registered(graph)
    if fmt == FORMAT_NTRIPLES:
        triples = parse_ntriples(text)
    elif fmt in (FORMAT_TURTLE, "turtle"):
        triples = parse_turtle(text, base_prefixes)
    else:
        raise ValueError(f"unsupported format: {fmt}")
    added = 0
    with store.write_locked():
        for s, p, o in triples:
            if store.insert(Quad(s, p, o, graph)):
                added += 1
    return added


def serialize_ntriples(triples) -> str:
    lines = [
        f"{term_to_ntriples(s)} {term_to_ntriples(p)} {term_to_ntriples(o)} ."
        for s, p, o in sorted(set(triples), key=triple_sort_key)
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def serialize(store, graph: Iri, fmt: str = FORMAT_NTRIPLES) -> str:
    if fmt != FORMAT_NTRIPLES:
        raise ValueError(f"unsupported serialization format: {fmt}")
    store.require_registered(graph)
    return serialize_ntriples(store.triples(graph))
