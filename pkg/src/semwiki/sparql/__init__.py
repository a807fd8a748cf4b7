from .ast import (Bgp, Compare, FilterNotExists, GraphScope, Group, Optional_,
                  PathAlt, PathSeq, Query, SolutionSet, Union, ValuesBlock, Var)
from .eval import (evaluate_construct, evaluate_describe, evaluate_select,
                   execute_insert_where)
from .parser import parse_query

__all__ = [
    "Var", "PathSeq", "PathAlt", "Bgp", "Group", "Optional_", "Union",
    "FilterNotExists", "GraphScope", "Compare", "ValuesBlock", "Query",
    "SolutionSet", "parse_query", "evaluate_select", "evaluate_construct",
    "evaluate_describe", "execute_insert_where",
]
