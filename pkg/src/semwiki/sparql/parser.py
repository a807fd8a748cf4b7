"""Recursive-descent parser for the SPARQL subset.

Accepted forms: SELECT (star or explicit projection), CONSTRUCT,
DESCRIBE, and INSERT ... WHERE updates, with group patterns built from
triple blocks, OPTIONAL, UNION, GRAPH scoping, FILTER NOT EXISTS and a
trailing single-variable VALUES block. Property paths support sequence
``/`` and parenthesized alternation ``|``.

Whitespace and case of keywords are insignificant; ``#`` starts a line
comment. The statement dot between triple blocks may be omitted where
the start of the next triple is unambiguous, which published queries in
the wild rely on.

A well-known prefix environment (rdf, rdfs, owl, xsd plus the bundled
vocabularies) is predefined, as deployed endpoints commonly do; explicit
PREFIX declarations override it, and any other undeclared prefix is an
error.
"""

from __future__ import annotations

from ..errors import ParseError, UnknownPrefixError
from ..namespaces import RDF_TYPE, WELL_KNOWN_PREFIXES, XSD_STRING
from ..rio import _unescape
from ..terms import Iri, Literal, Term
from .ast import (CONSTRUCT, DESCRIBE, INSERT_WHERE, SELECT, Bgp, Compare,
                  FilterNotExists, GraphScope, Group, Optional_, PathAlt,
                  PathSeq, Query, Union, ValuesBlock, Var, pattern_vars)

VAR = "var"
IRIREF = "iriref"
PNAME = "pname"
STRING = "string"
LANGTAG = "langtag"
PUNCT = "punct"
WORD = "word"
EOF = "eof"

_KEYWORDS = {"SELECT", "CONSTRUCT", "DESCRIBE", "INSERT", "WHERE", "OPTIONAL",
             "UNION", "FILTER", "NOT", "EXISTS", "VALUES", "GRAPH", "PREFIX"}

_NAME_EXTRA = set("_-%")


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

    def skip_ws(self):
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c in " \t\r\n":
                self._advance()
            elif c == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def peek_char(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def read_compare_op(self):
        """Raw '<' or '>' — only valid inside FILTER(...)."""
        self.skip_ws()
        c = self.peek_char()
        if c not in "<>":
            self.error("expected comparison operator")
        self._advance()
        return c

    def next(self):
        self.skip_ws()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return (EOF, "", line, col)
        text = self.text
        c = text[self.pos]

        if c in "?$":
            i = self.pos + 1
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            if i == start:
                self.error("empty variable name")
            name = text[start:i]
            self._advance(i - self.pos)
            return (VAR, name, line, col)

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
            if i >= len(text):
                self.error("unterminated string literal")
            raw = text[self.pos + 1:i]
            self._advance(i - self.pos + 1)
            return (STRING, _unescape(raw, line), line, col)

        if c == "@":
            i = self.pos + 1
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "-"):
                i += 1
            word = text[start:i]
            self._advance(i - self.pos)
            return (LANGTAG, word, line, col)

        if text.startswith("^^", self.pos):
            self._advance(2)
            return (PUNCT, "^^", line, col)

        if c in "{}().;,|/*":
            self._advance()
            return (PUNCT, c, line, col)

        if c.isalpha() or c == ":" or c == "_" or ord(c) > 127:
            i = self.pos
            while i < len(text) and (text[i].isalnum() or text[i] in _NAME_EXTRA
                                     or text[i] in ":." or ord(text[i]) > 127):
                i += 1
            word = text[self.pos:i]
            while word.endswith("."):
                word = word[:-1]
                i -= 1
            self._advance(i - self.pos)
            if ":" in word:
                return (PNAME, word, line, col)
            return (WORD, word, line, col)

        self.error(f"unexpected character {c!r}")


class _Parser:
    def __init__(self, text, extra_prefixes=None, rule_mode=False):
        self.lexer = _Lexer(text)
        self.prefixes = dict(WELL_KNOWN_PREFIXES)
        if extra_prefixes:
            self.prefixes.update(extra_prefixes)
        self.declared: dict[str, str] = {}
        self.rule_mode = rule_mode
        self.tok = self.lexer.next()

    # -- token helpers ---------------------------------------------------

    def _advance(self):
        self.tok = self.lexer.next()

    def _error(self, msg):
        raise ParseError(msg, self.tok[2], self.tok[3])

    def _at_punct(self, value):
        return self.tok[0] == PUNCT and self.tok[1] == value

    def _expect_punct(self, value):
        if not self._at_punct(value):
            self._error(f"expected {value!r}, found {self.tok[1]!r}"
                        if self.tok[0] != EOF else f"expected {value!r} at end of input")
        self._advance()

    def _at_keyword(self, *names):
        return self.tok[0] == WORD and self.tok[1].upper() in names

    def _take_keyword(self, *names):
        if not self._at_keyword(*names):
            self._error(f"expected {' or '.join(names)}")
        word = self.tok[1].upper()
        self._advance()
        return word

    # -- terms -------------------------------------------------------------

    def _resolve_pname(self, pname):
        prefix, _, local = pname.partition(":")
        base = self.declared.get(prefix, self.prefixes.get(prefix))
        if base is None:
            raise UnknownPrefixError(f"unknown prefix {prefix!r}",
                                     self.tok[2], self.tok[3])
        return Iri(base + local)

    def _iri(self) -> Iri:
        kind, val, line, col = self.tok
        if kind == IRIREF:
            self._advance()
            try:
                return Iri(val)
            except ValueError as exc:
                raise ParseError(str(exc), line, col)
        if kind == PNAME:
            iri = self._resolve_pname(val)
            self._advance()
            return iri
        self._error(f"expected IRI, found {val!r}")

    def _term(self) -> Term | Var:
        kind, val, line, col = self.tok
        if kind == VAR:
            self._advance()
            return Var(val)
        if kind in (IRIREF, PNAME):
            return self._iri()
        if kind == STRING:
            self._advance()
            nkind, nval, _, _ = self.tok
            if nkind == LANGTAG:
                self._advance()
                return Literal(val, lang=nval)
            if nkind == PUNCT and nval == "^^":
                self._advance()
                dt = self._iri()
                return Literal(val, datatype=dt.value)
            return Literal(val)
        self._error(f"expected term, found {val!r}" if val else
                    "expected term at end of input")

    # -- paths ---------------------------------------------------------

    def _path_elt(self):
        if self._at_punct("("):
            self._advance()
            options = [self._path()]
            while self._at_punct("|"):
                self._advance()
                options.append(self._path())
            self._expect_punct(")")
            if len(options) == 1:
                return options[0]
            return PathAlt(tuple(options))
        return self._iri()

    def _path(self):
        steps = [self._path_elt()]
        while self._at_punct("/"):
            self._advance()
            steps.append(self._path_elt())
        if len(steps) == 1:
            return steps[0]
        return PathSeq(tuple(steps))

    def _verb(self):
        kind, val, _, _ = self.tok
        if kind == WORD and val == "a":
            self._advance()
            return Iri(RDF_TYPE)
        if kind == VAR:
            self._advance()
            return Var(val)
        return self._path()

    # -- triple blocks ---------------------------------------------------

    def _triples_same_subject(self, *, template=False):
        """-> list of triple patterns for one subject."""
        subject = self._term()
        if isinstance(subject, Literal):
            self._error("literal subject not allowed")
        triples = []
        while True:
            verb = self._verb()
            if template and isinstance(verb, (PathSeq, PathAlt)):
                self._error("property path not allowed in a template")
            while True:
                obj = self._term()
                triples.append((subject, verb, obj))
                if self._at_punct(","):
                    self._advance()
                    continue
                break
            if self._at_punct(";"):
                self._advance()
                if self._at_punct(".") or self._at_punct("}"):
                    break
                continue
            break
        return triples

    def _triples_block(self, *, template=False):
        triples = []
        while True:
            triples.extend(self._triples_same_subject(template=template))
            if self._at_punct("."):
                self._advance()
            if self.tok[0] in (VAR, IRIREF, PNAME, STRING):
                continue  # tolerated missing dot between triples
            break
        return triples

    # -- group patterns ----------------------------------------------------

    def _group(self) -> Group:
        self._expect_punct("{")
        elements = []
        while not self._at_punct("}"):
            if self.tok[0] == EOF:
                self._error("expected '}' at end of input")
            if self._at_keyword("OPTIONAL"):
                self._advance()
                elements.append(Optional_(self._group()))
            elif self._at_keyword("FILTER"):
                self._advance()
                elements.append(self._filter())
            elif self._at_keyword("GRAPH"):
                self._advance()
                kind, val, _, _ = self.tok
                if kind == VAR:
                    target = Var(val)
                    self._advance()
                else:
                    target = self._iri()
                elements.append(GraphScope(target, self._group()))
            elif self._at_keyword("VALUES"):
                self._error("VALUES is only allowed after the WHERE clause")
            elif self._at_punct("{"):
                node = self._group()
                while self._at_keyword("UNION"):
                    self._advance()
                    node = Union(node, self._group())
                elements.append(node)
            elif self.tok[0] in (VAR, IRIREF, PNAME, STRING) or \
                    (self.tok[0] == WORD and self.tok[1] == "a"):
                elements.append(Bgp(self._triples_block()))
            else:
                self._error(f"unexpected {self.tok[1]!r} in group pattern")
            if self._at_punct("."):
                self._advance()
        self._expect_punct("}")
        return Group(elements)

    def _filter(self):
        if self._at_keyword("NOT"):
            self._advance()
            self._take_keyword("EXISTS")
            return FilterNotExists(self._group())
        if self._at_punct("("):
            if not self.rule_mode:
                self._error("only FILTER NOT EXISTS is supported in queries")
            self._advance()
            kind, val, _, _ = self.tok
            if kind != VAR:
                self._error("expected variable in comparison")
            left = Var(val)
            # the operator is read at character level: '<' would
            # otherwise lex as the start of an IRI
            op = self.lexer.read_compare_op()
            self.tok = self.lexer.next()
            kind, val, _, _ = self.tok
            if kind != VAR:
                self._error("expected variable in comparison")
            right = Var(val)
            self._advance()
            self._expect_punct(")")
            return Compare(left, op, right)
        self._error("only FILTER NOT EXISTS is supported")

    # -- query forms -------------------------------------------------------

    def _prologue(self):
        while self._at_keyword("PREFIX"):
            self._advance()
            kind, val, line, col = self.tok
            if kind != PNAME or not val.endswith(":"):
                self._error("expected prefix name")
            name = val[:-1]
            self._advance()
            kind, iri, line, col = self.tok
            if kind != IRIREF:
                self._error("expected IRI in PREFIX declaration")
            self._advance()
            self.declared[name] = iri

    def _values_clause(self):
        if not self._at_keyword("VALUES"):
            return None
        self._advance()
        kind, val, _, _ = self.tok
        if kind != VAR:
            self._error("expected variable after VALUES")
        var = Var(val)
        self._advance()
        self._expect_punct("{")
        terms = []
        while not self._at_punct("}"):
            term = self._term()
            if isinstance(term, Var):
                self._error("VALUES terms must be constants")
            terms.append(term)
        self._expect_punct("}")
        return ValuesBlock(var, terms)

    def parse(self) -> Query:
        self._prologue()
        if self._at_keyword("SELECT"):
            query = self._select()
        elif self._at_keyword("CONSTRUCT"):
            query = self._construct()
        elif self._at_keyword("DESCRIBE"):
            query = self._describe()
        elif self._at_keyword("INSERT"):
            query = self._insert_where()
        else:
            self._error("expected SELECT, CONSTRUCT, DESCRIBE or INSERT")
        query.values = self._values_clause()
        if self.tok[0] != EOF:
            self._error(f"trailing content {self.tok[1]!r}")
        query.prefixes = {**self.prefixes, **self.declared}
        self._check_scope(query)
        return query

    def _select(self):
        self._advance()
        projection = None
        if self._at_punct("*"):
            self._advance()
        else:
            projection = []
            while self.tok[0] == VAR:
                projection.append(Var(self.tok[1]))
                self._advance()
            if not projection:
                self._error("expected '*' or variables after SELECT")
        if self._at_keyword("WHERE"):
            self._advance()
        return Query(SELECT, projection=projection, where=self._group())

    def _construct(self):
        self._advance()
        template = self._template()
        self._take_keyword("WHERE")
        return Query(CONSTRUCT, template=template, where=self._group())

    def _insert_where(self):
        self._advance()
        template = self._template()
        self._take_keyword("WHERE")
        return Query(INSERT_WHERE, template=template, where=self._group())

    def _template(self):
        self._expect_punct("{")
        if self._at_punct("}"):
            self._advance()
            return []
        triples = self._triples_block(template=True)
        self._expect_punct("}")
        return triples

    def _describe(self):
        self._advance()
        targets = []
        while True:
            kind, val, _, _ = self.tok
            if kind == VAR:
                targets.append(Var(val))
                self._advance()
            elif kind in (IRIREF, PNAME):
                targets.append(self._iri())
            else:
                break
        if not targets:
            self._error("expected DESCRIBE targets")
        where = Group([])
        if self._at_keyword("WHERE"):
            self._advance()
            where = self._group()
        elif self._at_punct("{"):
            where = self._group()
        return Query(DESCRIBE, describe_targets=targets, where=where)

    def _check_scope(self, query: Query):
        in_scope = set(pattern_vars(query.where))
        if query.values is not None:
            in_scope.add(query.values.var)
        if query.projection:
            for v in query.projection:
                if v not in in_scope:
                    raise ParseError(f"projected variable ?{v.name} not in scope")
        for s, p, o in query.template:
            for t in (s, p, o):
                if isinstance(t, Var) and t not in in_scope:
                    raise ParseError(f"template variable ?{t.name} not in scope")
        for t in query.describe_targets:
            if isinstance(t, Var) and t not in in_scope:
                raise ParseError(f"DESCRIBE variable ?{t.name} not in scope")


def parse_query(text: str, extra_prefixes: dict[str, str] | None = None,
                rule_mode: bool = False) -> Query:
    return _Parser(text, extra_prefixes, rule_mode).parse()


def parse_triple_templates(text: str,
                           extra_prefixes: dict[str, str] | None = None):
    """Bare triple patterns (template syntax), e.g. for import shapes."""
    parser = _Parser("{ " + text + " }", extra_prefixes)
    template = parser._template()
    if parser.tok[0] != EOF:
        parser._error(f"trailing content {parser.tok[1]!r}")
    return template
