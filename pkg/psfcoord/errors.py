"""Иерархия исключений psfcoord.

Все ошибки пакета наследуются от :class:`PsfCoordError` и умеют печатать себя
в формате диагностик компилятора ``file:line:col: message``. Позиция в исходнике
(:class:`SourcePos`) необязательна: ошибки семантики и исследования пространства
состояний обычно не привязаны к тексту.

Группы:

* синтаксис и кодировка - :class:`SpecSyntaxError`, :class:`SourceEncodingError`;
* разрешение импортов - наследники :class:`ResolveError`;
* данные и процессы - :class:`UnboundVariable`, наследники :class:`SemanticsError`;
* исследование - :class:`ExplorationBoundExceeded`, :class:`InvalidChoice`;
* уточнение - наследники :class:`MappingError`;
* ToolBus - наследники :class:`ToolBusError`;
* извлечение скрипта - :class:`NonTailRecursion`.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourcePos:
    """Позиция в исходном тексте (строки и колонки считаются с 1)."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class PsfCoordError(Exception):
    """Базовая ошибка пакета."""

    def __init__(self, message: str, pos: SourcePos | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.pos = pos

    def diagnostic(self) -> str:
        if self.pos is None:
            return self.message
        return f"{self.pos}: {self.message}"

    def __str__(self) -> str:
        return self.diagnostic()


# ---------- синтаксис ----------


class SpecSyntaxError(PsfCoordError):
    def __init__(
        self,
        pos: SourcePos | None,
        found: str,
        expected: str | None = None,
    ) -> None:
        message = f"syntax error: unexpected {found}"
        if expected:
            message += f", expected {expected}"
        super().__init__(message, pos)
        self.found = found
        self.expected = expected


class SourceEncodingError(PsfCoordError):
    """Файл не является текстом в UTF-8; позиция указывает на первый плохой байт."""

    def __init__(self, pos: SourcePos, byte: int) -> None:
        super().__init__(f"invalid UTF-8: cannot decode byte 0x{byte:02x}", pos)
        self.byte = byte


# ---------- разрешение модулей ----------


class ResolveError(PsfCoordError):
    pass


class UnresolvedImport(ResolveError):
    def __init__(self, name: str, pos: SourcePos | None = None) -> None:
        super().__init__(f"unresolved import: module '{name}' is not declared", pos)
        self.name = name


class UnboundFormal(ResolveError):
    def __init__(self, name: str, module: str, pos: SourcePos | None = None) -> None:
        super().__init__(f"formal parameter '{name}' of module '{module}' is not bound", pos)
        self.name = name
        self.module = module


class RenameOfUndeclared(ResolveError):
    def __init__(self, name: str, module: str, pos: SourcePos | None = None) -> None:
        super().__init__(f"cannot rename '{name}': not an exported process of '{module}'", pos)
        self.name = name
        self.module = module


class CyclicImport(ResolveError):
    def __init__(self, path: list[str], pos: SourcePos | None = None) -> None:
        super().__init__("cyclic import: " + " -> ".join(path), pos)
        self.path = path


class DuplicateDeclaration(ResolveError):
    def __init__(self, kind: str, name: str, pos: SourcePos | None = None) -> None:
        super().__init__(f"{kind} '{name}' is declared more than once", pos)
        self.kind = kind
        self.name = name


class SortError(ResolveError):
    pass


class UndeclaredName(ResolveError):
    def __init__(self, name: str, process: str, pos: SourcePos | None = None) -> None:
        super().__init__(f"'{name}' used in '{process}' is neither a process nor an atom", pos)
        self.name = name
        self.process = process


# ---------- данные и процессы ----------


class UnboundVariable(PsfCoordError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unbound data variable '{name}'")
        self.name = name


class SemanticsError(PsfCoordError):
    pass


class UndefinedProcess(SemanticsError):
    def __init__(self, name: str) -> None:
        super().__init__(f"undefined process '{name}'")
        self.name = name


class ArityMismatch(SemanticsError):
    def __init__(self, name: str, arity: int, known: list[int]) -> None:
        super().__init__(
            f"process '{name}' called with {arity} argument(s); defined arities: {known}"
        )
        self.name = name
        self.arity = arity


class RecursionFuseBlown(SemanticsError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unguarded recursion while unfolding process '{name}'")
        self.name = name


# ---------- исследование ----------


class ExplorationBoundExceeded(PsfCoordError):
    pass


class InvalidChoice(PsfCoordError):
    def __init__(self, choice: str) -> None:
        super().__init__(f"invalid choice: {choice!r}")
        self.choice = choice


# ---------- уточнение ----------


class MappingError(PsfCoordError):
    pass


class DuplicatePattern(MappingError):
    pass


class PlaceholderNotBound(MappingError):
    pass


class UnmappedAction(MappingError):
    """Действия без правила отображения; ``occurrences`` - (компонента, действие)."""

    def __init__(self, occurrences: list[tuple[str, str]]) -> None:
        listing = "; ".join(f"{component}: {action}" for component, action in occurrences)
        super().__init__(f"unmapped action(s): {listing}")
        self.occurrences = occurrences


class AmbiguousAbstraction(MappingError):
    pass


# ---------- ToolBus ----------


class ToolBusError(PsfCoordError):
    pass


class MixedVocabulary(ToolBusError):
    def __init__(self, process: str, action: str) -> None:
        super().__init__(f"process '{process}' uses primitive of the other side: {action}")
        self.process = process
        self.action = action


class MissingBinding(ToolBusError):
    def __init__(self, formal: str) -> None:
        super().__init__(f"missing binding: {formal}")
        self.formal = formal


class DuplicateComponent(ToolBusError):
    def __init__(self, name: str) -> None:
        super().__init__(f"duplicate component: {name}")
        self.name = name


# ---------- скрипт ----------


class NonTailRecursion(PsfCoordError):
    def __init__(self, process: str, location: str) -> None:
        super().__init__(f"process '{process}' is not tail-recursive: {location}")
        self.process = process
        self.location = location
