"""Данные: основные термы и встроенное переписывание (булевы, натуральные)."""

from psfcoord.data.terms import (
    FALSE,
    TRUE,
    ZERO,
    DataTerm,
    GuardExpr,
    Placeholder,
    Var,
    eval_guard,
    evaluate,
    from_int,
    render_term,
    substitute,
    to_int,
)
