"""Surface syntax: the ``.csp`` model format and the query language."""

from .model import (
    Model,
    ModelAST,
    elaborate,
    export_json,
    export_text,
    model_from_json,
    parse_model,
    render_model,
    space_to_ast,
)
from .query import QueryAST, QueryResult, eval_expr, eval_query, parse_query

__all__ = [
    "Model",
    "ModelAST",
    "QueryAST",
    "QueryResult",
    "elaborate",
    "eval_expr",
    "eval_query",
    "export_json",
    "export_text",
    "model_from_json",
    "parse_model",
    "parse_query",
    "render_model",
    "space_to_ast",
]
