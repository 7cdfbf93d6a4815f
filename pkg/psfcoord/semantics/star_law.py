"""Проверка закона развертки бинарной итерации ``x * y = x . (x * y) + y``.

Сравниваются множества трасс (последовательностей меток) глубины не больше ``k``
у ``x * y`` и у ``x . (x * y) + y``.
"""

from __future__ import annotations

from psfcoord.errors import ExplorationBoundExceeded
from psfcoord.semantics.process import Alt, Process, Seq, Star
from psfcoord.semantics.sos import Semantics


MAX_DEPTH = 12


def traces(term: Process, depth: int, semantics: Semantics | None = None) -> set[tuple[str, ...]]:
    """Все трассы терма длины не больше ``depth`` (включая пустую)."""
    semantics = semantics or Semantics({})
    out: set[tuple[str, ...]] = {()}
    frontier: set[tuple[tuple[str, ...], Process]] = {((), term)}
    for _ in range(depth):
        next_frontier: set[tuple[tuple[str, ...], Process]] = set()
        for trace, current in frontier:
            for label, target in semantics.steps(current):
                extended = (*trace, label.render())
                out.add(extended)
                next_frontier.add((extended, target))
        frontier = next_frontier
        if not frontier:
            break
    return out


def unfold_star_law_check(x: Process, y: Process, depth: int, semantics: Semantics | None = None) -> bool:
    """Совпадают ли трассы ``x * y`` и ``x . (x * y) + y`` до глубины ``depth``.

    Raises:
        ExplorationBoundExceeded: ``depth`` больше 12.
    """
    if depth > MAX_DEPTH:
        raise ExplorationBoundExceeded(f"star law check depth {depth} exceeds {MAX_DEPTH}")
    star = Star(x, y)
    unfolded = Alt(Seq(x, star), y)
    return traces(star, depth, semantics) == traces(unfolded, depth, semantics)
