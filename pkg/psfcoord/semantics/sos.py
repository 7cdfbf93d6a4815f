"""Структурная операционная семантика термов процессов.

Правила (стандартные для ACP):

* действие делает один шаг и завершается;
* ``p . q`` - шаги ``p``, после завершения ``p`` шаги ``q``;
* ``p + q`` - объединение шагов;
* ``p || q`` - чередование плюс по одному шагу на каждую коммуницирующую пару;
* ``x * y`` - шаги ``x`` с возвратом в ``x * y`` и шаги ``y`` (выход);
* ``[c] -> p`` - шаги ``p``, если охрана истинна;
* вызов - развертка определения с подставленными аргументами (без шага);
* ``delta`` - шагов нет.

Инкапсуляция применяется на верхнем уровне конфигурации.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from collections.abc import Mapping
from typing import TYPE_CHECKING

from psfcoord.data.terms import eval_guard, evaluate, substitute_term
from psfcoord.errors import ArityMismatch, RecursionFuseBlown, UndefinedProcess
from psfcoord.semantics.actions import SYSTEM_TERMINATED, ActionLabel, communicate
from psfcoord.semantics.canonical import Configuration, Transition
from psfcoord.semantics.process import (
    HALT,
    SKIP,
    Action,
    Alt,
    Call,
    Delta,
    Guard,
    Halt,
    Par,
    Process,
    Seq,
    Skip,
    Star,
    par,
    seq,
    substitute_process,
)
from psfcoord.utils.log_config import get_logger

if TYPE_CHECKING:
    from psfcoord.lang.ast import ProcessDef
    from psfcoord.lang.resolve import FlatSpec


logger = get_logger(__name__)

Step = tuple[ActionLabel, Process]

MEMO_SIZE = 262_144


class Semantics:
    """Окружение определений и вычисление шагов.

    Результаты шагов мемоизируются по терму; кэш ограничен ``memo_size`` записями
    и вытесняет давно не использованные. Экземпляр можно разделять между потоками.
    """

    def __init__(
        self,
        definitions: Mapping[tuple[str, int], ProcessDef],
        recursion_fuse: int = 10_000,
        memo_size: int = MEMO_SIZE,
    ):
        if memo_size <= 0:
            raise ValueError("memo_size must be positive")
        self._defs = dict(definitions)
        self._arities: dict[str, set[int]] = {}
        for name, arity in self._defs:
            self._arities.setdefault(name, set()).add(arity)
        self.recursion_fuse = recursion_fuse
        self.memo_size = memo_size
        self._memo: OrderedDict[Process, tuple[Step, ...]] = OrderedDict()
        self._lock = threading.Lock()

    @property
    def definitions(self) -> Mapping[tuple[str, int], ProcessDef]:
        return self._defs

    def definition(self, name: str, arity: int) -> ProcessDef:
        found = self._defs.get((name, arity))
        if found is not None:
            return found
        if name in self._arities:
            raise ArityMismatch(name, arity, sorted(self._arities[name]))
        raise UndefinedProcess(name)

    def unfold(self, call: Call) -> Process:
        definition = self.definition(call.name, len(call.args))
        if not definition.formals:
            return definition.body
        env = {f.name: evaluate(substitute_term(a, {})) for f, a in zip(definition.formals, call.args)}
        return substitute_process(definition.body, env)

    def configuration(self, term: Process, blocked: frozenset[str] = frozenset()) -> Configuration:
        return Configuration(term, self, blocked)

    # --- шаги --------------------------------------------------------------------

    def steps(self, term: Process) -> tuple[Step, ...]:
        """Все шаги терма до инкапсуляции."""
        try:
            return self._steps(term, ())
        except RecursionError as exc:
            name = term.name if isinstance(term, Call) else "?"
            raise RecursionFuseBlown(name) from exc

    def _steps(self, term: Process, stack: tuple[Call, ...]) -> tuple[Step, ...]:
        with self._lock:
            cached = self._memo.get(term)
            if cached is not None:
                self._memo.move_to_end(term)
                return cached
        result = tuple(self._compute(term, stack))
        with self._lock:
            self._memo[term] = result
            while len(self._memo) > self.memo_size:
                self._memo.popitem(last=False)
        return result

    def memo_len(self) -> int:
        return len(self._memo)

    def clear_memo(self) -> None:
        with self._lock:
            self._memo.clear()

    def _compute(self, term: Process, stack: tuple[Call, ...]) -> list[Step]:
        if isinstance(term, (Delta, Skip, Halt)):
            return []

        if isinstance(term, Action):
            return [(term.label.evaluated(), SKIP)]

        if isinstance(term, Seq):
            if isinstance(term.left, Skip):
                return list(self._steps(term.right, stack))
            return [(label, seq(target, term.right)) for label, target in self._steps(term.left, stack)]

        if isinstance(term, Alt):
            return list(self._steps(term.left, stack)) + list(self._steps(term.right, stack))

        if isinstance(term, Par):
            left = self._steps(term.left, stack)
            right = self._steps(term.right, stack)
            out = [(label, par(target, term.right)) for label, target in left]
            out.extend((label, par(term.left, target)) for label, target in right)
            for a, left_target in left:
                for b, right_target in right:
                    result = communicate(a, b)
                    if result is not None:
                        out.append((result, par(left_target, right_target)))
            return out

        if isinstance(term, Star):
            out = [
                (label, term if isinstance(target, Skip) else Seq(target, term))
                for label, target in self._steps(term.body, stack)
            ]
            out.extend(self._steps(term.exit, stack))
            return out

        if isinstance(term, Guard):
            if not eval_guard(term.cond):
                return []
            return list(self._steps(term.then, stack))

        if isinstance(term, Call):
            call = Call(term.name, tuple(evaluate(a) for a in term.args))
            if call in stack or len(stack) >= self.recursion_fuse:
                logger.error("Неохраняемая рекурсия при развертке %s", call.name)
                raise RecursionFuseBlown(call.name)
            return list(self._steps(self.unfold(call), (*stack, call)))

        raise TypeError(f"unknown process term: {term!r}")

    def enabled(self, config: Configuration) -> list[Transition]:
        """Разрешенные переходы конфигурации после инкапсуляции."""
        out = []
        for label, target in self.steps(config.term):
            if label.name in config.blocked:
                continue
            if label.name == SYSTEM_TERMINATED:
                target = HALT
            out.append(Transition(label, config.with_term(target)))
        return out


def enabled(config: Configuration) -> list[Transition]:
    return config.semantics.enabled(config)


def is_final(config: Configuration) -> bool:
    """Успешно завершенное или остановленное после shutdown состояние."""
    return isinstance(config.term, (Skip, Halt))


def root_configuration(
    flat: FlatSpec,
    process: str | None = None,
    recursion_fuse: int = 10_000,
    blocked: frozenset[str] | None = None,
    memo_size: int = MEMO_SIZE,
) -> Configuration:
    """Начальная конфигурация корневого (или указанного) процесса.

    Множество инкапсуляции по умолчанию определяется окружением процесса.
    """
    name = process or flat.root
    if name is None:
        raise UndefinedProcess("<root>")
    semantics = Semantics(flat.defs, recursion_fuse, memo_size)
    return semantics.configuration(Call(name), flat.blocked(name) if blocked is None else blocked)
