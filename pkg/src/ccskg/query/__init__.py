"""SPARQL-subset query engine: parser, evaluator and result serialization."""
from .ast import Filter, Inverse, OneOrMore, OrderKey, Query, Sequence, TriplePattern, Var, ZeroOrMore
from .evaluate import QueryEvaluationError, Result, evaluate, evaluate_insert, where_solutions
from .parser import QuerySyntaxError, parse_query, parse_term, parse_update
from .results import MEDIA_TYPE, term_json, to_json, to_json_obj, to_table
from .values import EvaluationError, compare, order_key

__all__ = [name for name in dir() if not name.startswith("_")]
