"""Bottom-up evaluation of the SPARQL subset over a quad store.

Solutions are multisets of partial bindings (dicts keyed by Var). Basic
graph patterns match against the set union of the active graphs; UNION
is bag union, OPTIONAL a left join, FILTER NOT EXISTS drops rows whose
instantiated child pattern has any solution, and GRAPH re-targets its
child (a variable target ranges over the registered graphs and binds
the variable). Property paths expand during matching: sequence as a
join through an internal intermediate, alternation as union.

FILTER NOT EXISTS filters apply after the other elements of their
group, as in the standard algebra.
"""

from __future__ import annotations

import threading
from decimal import Decimal, InvalidOperation

from ..namespaces import XSD_DATE, XSD_DECIMAL, XSD_INTEGER
from ..terms import Blank, Iri, Literal, Quad, Term
from .ast import (Bgp, Compare, FilterNotExists, GraphScope, Group, Optional_,
                  PathAlt, PathSeq, Query, SolutionSet, Union, ValuesBlock,
                  Var, pattern_vars)

Row = dict

_tls = threading.local()


def _default_graphs(store, graphs):
    if graphs is not None:
        return tuple(graphs)
    return tuple(store.registered_graphs())


def _match_union(store, graphs, s, p, o):
    """Distinct triples matching the pattern across the graph union.

    Results are memoized per store version (the fixpoint engine and
    NOT-EXISTS guards repeat the same lookups heavily); the cache lives
    in thread-local storage and resets whenever the store mutates.
    """
    version = store.version
    if getattr(_tls, "store", None) is not store or _tls.version != version:
        _tls.store = store
        _tls.version = version
        _tls.cache = {}
    key = (graphs, s, p, o)
    cached = _tls.cache.get(key)
    if cached is not None:
        return cached
    if len(graphs) == 1:
        result = store.match_terms_nolock(s, p, o, graphs[0])
    else:
        seen = {}
        for g in graphs:
            for triple in store.match_terms_nolock(s, p, o, g):
                seen.setdefault(triple)
        result = list(seen)
    _tls.cache[key] = result
    return result


def _resolve(term, row):
    if isinstance(term, Var):
        return row.get(term)
    return term


def _extend(row, pattern_term, value):
    """Bind pattern_term to value on a copy of row; None on mismatch."""
    if isinstance(pattern_term, Var):
        bound = row.get(pattern_term)
        if bound is None:
            row = dict(row)
            row[pattern_term] = value
            return row
        return row if bound == value else None
    return row if pattern_term == value else None


_mid_counter = 0


def _fresh_mid():
    # leading space is impossible in parsed variable names, so internal
    # path intermediates can never collide with user variables
    global _mid_counter
    _mid_counter += 1
    return Var(f" mid{_mid_counter}")


def _eval_triple(store, graphs, row, pattern):
    s, p, o = pattern
    if isinstance(p, (PathSeq, PathAlt)):
        return _eval_path(store, graphs, row, s, p, o)
    # positions bound by the row (or constant) are pushed into the
    # match, so only still-free variables need binding afterwards
    sv = row.get(s) if type(s) is Var else s
    pv = row.get(p) if type(p) is Var else p
    ov = row.get(o) if type(o) is Var else o
    matches = _match_union(store, graphs, sv, pv, ov)
    svar = s if (sv is None and type(s) is Var) else None
    pvar = p if (pv is None and type(p) is Var) else None
    ovar = o if (ov is None and type(o) is Var) else None
    if svar is None and pvar is None and ovar is None:
        return [row] if matches else []
    out = []
    for ms, mp, mo in matches:
        extended = dict(row)
        if svar is not None:
            extended[svar] = ms
        if pvar is not None:
            current = extended.get(pvar)
            if current is None:
                extended[pvar] = mp
            elif current != mp:
                continue
        if ovar is not None:
            current = extended.get(ovar)
            if current is None:
                extended[ovar] = mo
            elif current != mo:
                continue
        out.append(extended)
    return out


_seq_splits: dict = {}


def _seq_split(path):
    cached = _seq_splits.get(path)
    if cached is None:
        steps = path.steps
        tail = steps[1] if len(steps) == 2 else PathSeq(steps[1:])
        head = steps[0] if len(steps) == 2 else PathSeq(steps[:-1])
        cached = (steps[0], tail, head, steps[-1])
        _seq_splits[path] = cached
    return cached


def _eval_path(store, graphs, row, s, path, o):
    if isinstance(path, Iri):
        return _eval_triple(store, graphs, row, (s, path, o))
    if isinstance(path, PathAlt):
        out = []
        for option in path.options:
            out.extend(_eval_path(store, graphs, row, s, option, o))
        return out
    # sequence: thread an internal intermediate through the steps,
    # starting from whichever end is bound (joins commute)
    if len(path.steps) == 1:
        return _eval_path(store, graphs, row, s, path.steps[0], o)
    first, tail, head, last = _seq_split(path)
    mid = _fresh_mid()
    out = []
    if _resolve(s, row) is None and _resolve(o, row) is not None:
        for r1 in _eval_path(store, graphs, row, mid, last, o):
            mval = r1.pop(mid)
            out.extend(_eval_path(store, graphs, r1, s, head, mval))
        return out
    for r1 in _eval_path(store, graphs, row, s, first, mid):
        mval = r1.pop(mid)
        out.extend(_eval_path(store, graphs, r1, mval, tail, o))
    return out


def _order_patterns(patterns, bound):
    """Greedy selectivity ordering: prefer patterns with more bound
    positions, plain predicates over paths. Join order does not affect
    BGP semantics, only cost."""
    remaining = list(patterns)
    ordered = []
    bound = set(bound)
    while remaining:
        def score(pattern):
            s, p, o = pattern
            n = 0
            for term, weight in ((s, 4), (p, 2), (o, 1)):
                if not isinstance(term, Var) or term in bound:
                    n += weight
            if isinstance(p, (PathSeq, PathAlt)):
                n -= 2
            return n

        best = max(remaining, key=score)
        remaining.remove(best)
        ordered.append(best)
        for term in best:
            if isinstance(term, Var):
                bound.add(term)
    return ordered


def _eval_bgp(store, graphs, rows, bgp):
    bound = rows[0].keys() if rows else ()
    for pattern in _order_patterns(bgp.patterns, bound):
        next_rows = []
        for row in rows:
            next_rows.extend(_eval_triple(store, graphs, row, pattern))
        rows = next_rows
    return rows


def _compatible(a, b):
    for k, v in a.items():
        bv = b.get(k)
        if bv is not None and bv != v:
            return False
    return True


def _merge(a, b):
    out = dict(a)
    out.update(b)
    return out


def _join(left, right):
    return [_merge(a, b) for a in left for b in right if _compatible(a, b)]


def _left_join(left, right):
    out = []
    for a in left:
        extensions = [_merge(a, b) for b in right if _compatible(a, b)]
        if extensions:
            out.extend(extensions)
        else:
            out.append(a)
    return out


def _substitute(node, row):
    def sub_term(t):
        if isinstance(t, Var) and t in row:
            return row[t]
        return t

    if isinstance(node, Bgp):
        return Bgp([(sub_term(s), sub_term(p) if isinstance(p, Var) else p,
                     sub_term(o)) for s, p, o in node.patterns])
    if isinstance(node, Group):
        return Group([_substitute(el, row) for el in node.elements])
    if isinstance(node, Optional_):
        return Optional_(_substitute(node.child, row))
    if isinstance(node, Union):
        return Union(_substitute(node.left, row), _substitute(node.right, row))
    if isinstance(node, FilterNotExists):
        return FilterNotExists(_substitute(node.child, row))
    if isinstance(node, GraphScope):
        return GraphScope(sub_term(node.target), _substitute(node.child, row))
    if isinstance(node, Compare):
        return Compare(sub_term(node.left), node.op, sub_term(node.right))
    return node


def _comparable_value(term):
    if not isinstance(term, Literal):
        return None
    if term.datatype in (XSD_INTEGER, XSD_DECIMAL):
        try:
            return ("number", Decimal(term.lexical))
        except InvalidOperation:
            return None
    if term.datatype == XSD_DATE:
        return ("date", term.lexical)
    return None


def _compare_holds(comp, row):
    left = comp.left if not isinstance(comp.left, Var) else row.get(comp.left)
    right = comp.right if not isinstance(comp.right, Var) else row.get(comp.right)
    lv = _comparable_value(left) if left is not None else None
    rv = _comparable_value(right) if right is not None else None
    if lv is None or rv is None or lv[0] != rv[0]:
        return False
    if comp.op == "<":
        return lv[1] < rv[1]
    return lv[1] > rv[1]


def _eval_node(store, graphs, node):
    if isinstance(node, Bgp):
        return _eval_bgp(store, graphs, [{}], node)
    if isinstance(node, Group):
        return _eval_group(store, graphs, node)
    if isinstance(node, Union):
        return (_eval_node(store, graphs, node.left)
                + _eval_node(store, graphs, node.right))
    if isinstance(node, Optional_):
        return _eval_node(store, graphs, node.child)
    if isinstance(node, GraphScope):
        return _eval_graph_scope(store, graphs, node)
    raise TypeError(f"cannot evaluate {type(node).__name__} standalone")


def _eval_graph_scope(store, graphs, node):
    if isinstance(node.target, Iri):
        return _eval_node(store, (node.target,), node.child)
    out = []
    for g in store.registered_graphs():
        for row in _eval_node(store, (g,), node.child):
            r = _extend(row, node.target, g)
            if r is not None:
                out.append(r)
    return out


def _single_guard_pattern(child):
    """The (s, p, o) of a one-pattern NOT EXISTS child, or None.

    Only usable when no variable repeats (repeated unbound variables
    need real joins, not independent wildcards)."""
    if not (isinstance(child, Group) and len(child.elements) == 1):
        return None
    element = child.elements[0]
    if not (isinstance(element, Bgp) and len(element.patterns) == 1):
        return None
    s, p, o = element.patterns[0]
    if isinstance(p, (PathSeq, PathAlt)):
        return None
    variables = [t for t in (s, p, o) if isinstance(t, Var)]
    if len(variables) != len(set(variables)):
        return None
    return (s, p, o)


def _eval_group(store, graphs, group):
    rows = [{}]
    filters = []
    for element in group.elements:
        if isinstance(element, FilterNotExists):
            filters.append(element)
        elif isinstance(element, Compare):
            filters.append(element)
        elif isinstance(element, Bgp):
            rows = _eval_bgp(store, graphs, rows, element)
        elif isinstance(element, Optional_):
            rows = _left_join(rows, _eval_node(store, graphs, element.child))
        else:
            rows = _join(rows, _eval_node(store, graphs, element))
    for flt in filters:
        if isinstance(flt, Compare):
            rows = [row for row in rows if _compare_holds(flt, row)]
            continue
        guard = _single_guard_pattern(flt.child)
        if guard is not None:
            s, p, o = guard
            s_is_var = type(s) is Var
            p_is_var = type(p) is Var
            o_is_var = type(o) is Var
            rows = [row for row in rows
                    if not _match_union(store, graphs,
                                        row.get(s) if s_is_var else s,
                                        row.get(p) if p_is_var else p,
                                        row.get(o) if o_is_var else o)]
        else:
            rows = [row for row in rows
                    if not _eval_node(store, graphs,
                                      _substitute(flt.child, row))]
    return rows


def _solutions(store, ast, graphs):
    rows = _eval_group(store, graphs, ast.where)
    if ast.values is not None:
        value_rows = [{ast.values.var: t} for t in ast.values.terms]
        rows = _join(rows, value_rows)
    return rows


def evaluate_select(store, ast: Query, default_graphs=None) -> SolutionSet:
    if ast.form != "select":
        raise ValueError("not a SELECT query")
    graphs = _default_graphs(store, default_graphs)
    with store.read_locked():
        rows = _solutions(store, ast, graphs)
    if ast.projection is None:
        variables = pattern_vars(ast.where)
        if ast.values is not None and ast.values.var not in variables:
            variables.append(ast.values.var)
    else:
        variables = list(ast.projection)
    wanted = set(variables)
    projected = [{v: t for v, t in row.items() if v in wanted} for row in rows]
    return SolutionSet(variables, projected)


def _instantiate(template, rows):
    triples = {}
    for row in rows:
        for s, p, o in template:
            ts = _resolve(s, row)
            tp = _resolve(p, row) if isinstance(p, Var) else p
            to = _resolve(o, row)
            if ts is None or tp is None or to is None:
                continue  # incomplete instantiation
            if isinstance(ts, Literal) or not isinstance(tp, Iri):
                continue  # ill-formed triple
            triples.setdefault((ts, tp, to))
    return list(triples)


def evaluate_construct(store, ast: Query, default_graphs=None):
    if ast.form != "construct":
        raise ValueError("not a CONSTRUCT query")
    graphs = _default_graphs(store, default_graphs)
    with store.read_locked():
        rows = _solutions(store, ast, graphs)
        return _instantiate(ast.template, rows)


def _cbd(store, graphs, node, triples, visited):
    """Concise bounded description: outgoing triples, recursing
    through blank-node objects."""
    if node in visited or isinstance(node, Literal):
        return
    visited.add(node)
    for t in _match_union(store, graphs, node, None, None):
        triples.setdefault(t)
        if isinstance(t[2], Blank):
            _cbd(store, graphs, t[2], triples, visited)


def evaluate_describe(store, ast: Query, default_graphs=None):
    if ast.form != "describe":
        raise ValueError("not a DESCRIBE query")
    graphs = _default_graphs(store, default_graphs)
    with store.read_locked():
        rows = _solutions(store, ast, graphs)
        targets = {}
        for target in ast.describe_targets:
            if isinstance(target, Var):
                for row in rows:
                    term = row.get(target)
                    if term is not None:
                        targets.setdefault(term)
            else:
                targets.setdefault(target)
        triples = {}
        visited = set()
        for node in targets:
            _cbd(store, graphs, node, triples, visited)
        return list(triples)


def execute_insert_where(store, ast: Query, target_graph, default_graphs=None) -> int:
    if ast.form != "insertWhere":
        raise ValueError("not an INSERT ... WHERE update")
    store.require_registered(target_graph)
    graphs = _default_graphs(store, default_graphs)
    added = 0
    with store.write_locked():
        rows = _solutions(store, ast, graphs)
        for s, p, o in _instantiate(ast.template, rows):
            if store.insert(Quad(s, p, o, target_graph)):
                added += 1
    return added
