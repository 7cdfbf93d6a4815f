"""Основные термы данных и встроенные правила переписывания.

Терм - дерево конструкторов (``edit-module``, ``tbterm(compile)``, ``succ(^0)``).
Пользовательских уравнений нет: нормальная форма вычисляется встроенным набором
правил для натуральных и булевых значений.

Правила :func:`evaluate`:

* ``nat(x)`` прозрачен: ``nat(t) -> t``;
* ``succ``/``pred``/``^0`` - арифметика Пеано, ``pred(^0) -> ^0`` с предупреждением;
* ``gt(a, b)`` над numerals сравнивает числа, над не-numerals дает ``false``
  с предупреждением;
* ``eq(a, b)`` - структурное равенство нормальных форм;
* остальные конструкторы (включая ``tbterm``) инертны, вычисляются только аргументы.

Переменные (:class:`Var`) появляются в телах параметризованных определений и
заменяются :func:`substitute`; плейсхолдеры (:class:`Placeholder`) живут только
в правилах отображения уточнения.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Union

from psfcoord.errors import UnboundVariable
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class DataTerm:
    """Терм-конструктор: имя и упорядоченные аргументы (пусто для констант)."""

    name: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        return render_term(self)


@dataclass(frozen=True, slots=True)
class Var:
    """Переменная данных - формальный параметр определения процесса."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Placeholder:
    """Слот ``$n`` в шаблоне правила отображения."""

    index: int

    def __str__(self) -> str:
        return f"${self.index}"


Term = Union[DataTerm, Var, Placeholder]


@dataclass(frozen=True, slots=True)
class GuardExpr:
    """Условие охраны ``[ lhs = rhs ]``."""

    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"[{render_term(self.lhs)} = {render_term(self.rhs)}]"


ZERO = DataTerm("^0")
TRUE = DataTerm("true")
FALSE = DataTerm("false")

#: Встроенные конструкторы с правилами или особым смыслом
BUILTINS = frozenset({"true", "false", "^0", "succ", "pred", "gt", "eq", "nat", "tbterm"})


def render_term(term: Term) -> str:
    if isinstance(term, DataTerm):
        if not term.args:
            return term.name
        return f"{term.name}({', '.join(render_term(a) for a in term.args)})"
    return str(term)


def from_int(value: int) -> DataTerm:
    """``k`` -> ``succ(...succ(^0))`` (k раз)."""
    term = ZERO
    for _ in range(value):
        term = DataTerm("succ", (term,))
    return term


def to_int(term: Term) -> int | None:
    """Numeral в нормальной форме -> int, иначе ``None``."""
    count = 0
    while isinstance(term, DataTerm):
        if term.name == "^0" and not term.args:
            return count
        if term.name == "succ" and len(term.args) == 1:
            count += 1
            term = term.args[0]
            continue
        return None
    return None


def evaluate(term: Term) -> Term:
    """Нормальная форма основного терма (функция тотальна)."""
    if not isinstance(term, DataTerm):
        # переменные и плейсхолдеры - не основные термы, оставляем как есть
        return term

    args = tuple(evaluate(a) for a in term.args)
    name = term.name

    if name == "nat" and len(args) == 1:
        return args[0]

    if name == "pred" and len(args) == 1:
        (inner,) = args
        if isinstance(inner, DataTerm) and inner.name == "succ" and len(inner.args) == 1:
            return inner.args[0]
        if inner == ZERO:
            logger.warning("pred(^0) насыщен до ^0 (уменьшение нулевого счетчика)")
            return ZERO
        return DataTerm(name, args)

    if name == "gt" and len(args) == 2:
        left, right = to_int(args[0]), to_int(args[1])
        if left is None or right is None:
            logger.warning(
                "gt над не-numeral термами %s, %s: считаю false",
                render_term(args[0]),
                render_term(args[1]),
            )
            return FALSE
        return TRUE if left > right else FALSE

    if name == "eq" and len(args) == 2:
        return TRUE if args[0] == args[1] else FALSE

    return DataTerm(name, args)


def eval_guard(guard: GuardExpr) -> bool:
    """Истинна ли охрана: нормальные формы сторон структурно равны."""
    return evaluate(guard.lhs) == evaluate(guard.rhs)


def substitute_term(term: Term, env: Mapping[str, Term]) -> Term:
    if isinstance(term, Var):
        if term.name not in env:
            raise UnboundVariable(term.name)
        return env[term.name]
    if isinstance(term, DataTerm) and term.args:
        return DataTerm(term.name, tuple(substitute_term(a, env) for a in term.args))
    return term


def substitute(target, env: Mapping[str, Term]):
    """Подстановка значений вместо переменных в терм данных, охрану или терм процесса.

    Args:
        target: :class:`DataTerm`/:class:`Var`, :class:`GuardExpr` или терм процесса.
        env: Отображение имя переменной -> основной терм.

    Returns:
        Объект того же вида без свободных переменных.

    Raises:
        UnboundVariable: Переменная не связана в ``env``.
    """
    if isinstance(target, (DataTerm, Var, Placeholder)):
        return substitute_term(target, env)
    if isinstance(target, GuardExpr):
        return GuardExpr(substitute_term(target.lhs, env), substitute_term(target.rhs, env))
    # термы процессов знают, как подставить в себя
    from psfcoord.semantics.process import substitute_process

    return substitute_process(target, env)
