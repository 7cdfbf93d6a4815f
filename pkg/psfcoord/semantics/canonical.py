"""Канонические конфигурации и переходы.

Конфигурации сравниваются по канонической форме терма: операнды ``+`` и ``||``
упорядочены по записи, ``x + x`` и ``x + delta`` сокращены, аргументы вызовов и
нагрузки действий вычислены. Сам терм хранится в исходном (текстовом) порядке,
чтобы политика first-enabled следовала порядку записи.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING

from psfcoord.data.terms import evaluate
from psfcoord.semantics.actions import ActionLabel
from psfcoord.semantics.process import (
    DELTA,
    Action,
    Alt,
    Call,
    Delta,
    Guard,
    Par,
    Process,
    Seq,
    Star,
    alt_of,
    flatten,
    par_of,
    render_process,
)

if TYPE_CHECKING:
    from psfcoord.semantics.sos import Semantics


@lru_cache(maxsize=262_144)
def canonical(term: Process) -> Process:
    if isinstance(term, Alt):
        items: list[Process] = []
        for item in (canonical(x) for x in flatten(term, Alt)):
            if item not in items:
                items.append(item)
        if len(items) > 1:
            items = [x for x in items if not isinstance(x, Delta)] or [DELTA]
        return alt_of(sorted(items, key=render_process))
    if isinstance(term, Par):
        return par_of(sorted((canonical(x) for x in flatten(term, Par)), key=render_process))
    if isinstance(term, Seq):
        return Seq(canonical(term.left), canonical(term.right))
    if isinstance(term, Star):
        return Star(canonical(term.body), canonical(term.exit))
    if isinstance(term, Guard):
        return Guard(term.cond, canonical(term.then))
    if isinstance(term, Call):
        return Call(term.name, tuple(evaluate(a) for a in term.args))
    if isinstance(term, Action):
        return Action(term.label.evaluated())
    return term


@dataclass(frozen=True, eq=False)
class Configuration:
    """Состояние системы: терм, окружение определений и множество блокируемых действий."""

    term: Process
    semantics: Semantics = field(repr=False)
    blocked: frozenset[str] = frozenset()
    key: Process = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "key", canonical(self.term))
        object.__setattr__(self, "_hash", hash((self.key, self.blocked)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.blocked == other.blocked and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def enabled(self) -> list[Transition]:
        return self.semantics.enabled(self)

    def with_term(self, term: Process) -> Configuration:
        return Configuration(term, self.semantics, self.blocked)

    def render(self) -> str:
        return render_process(self.key)

    def state_id(self) -> str:
        """Короткий стабильный идентификатор состояния для JSON-трасс."""
        return hashlib.sha1(self.render().encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True, slots=True)
class Transition:
    label: ActionLabel
    target: Configuration
