"""Абстрактный синтаксис модульных спецификаций.

Термы процессов живут в :mod:`psfcoord.semantics.process`, здесь - модульная
обвязка: объявления, импорты с привязками и переименованиями, определения.
Позиции исходника (``pos``) не участвуют в сравнении узлов.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from psfcoord.errors import SourcePos
from psfcoord.semantics.process import Process


SORTS = ("ID", "DATA", "BOOLEAN", "NAT")


@dataclass(frozen=True, slots=True)
class SortDecl:
    name: str
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class FunctionDecl:
    name: str
    arg_sorts: tuple[str, ...]
    result: str
    pos: SourcePos | None = field(default=None, compare=False)

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True, slots=True)
class AtomDecl:
    name: str
    arg_sorts: tuple[str, ...] = ()
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class ProcessDecl:
    """Объявление имени процесса в секции ``processes``."""

    name: str
    pos: SourcePos | None = field(default=None, compare=False)


Decl = Union[SortDecl, FunctionDecl, AtomDecl, ProcessDecl]


@dataclass(frozen=True, slots=True)
class Formal:
    name: str
    sort: str | None = None


@dataclass(frozen=True, slots=True)
class ProcessDef:
    name: str
    formals: tuple[Formal, ...]
    body: Process
    pos: SourcePos | None = field(default=None, compare=False)

    @property
    def arity(self) -> int:
        return len(self.formals)

    @property
    def key(self) -> tuple[str, int]:
        return (self.name, self.arity)


@dataclass(frozen=True, slots=True)
class ParameterBlock:
    """``parameters Name begin processes ... atoms ... end Name``."""

    name: str
    processes: tuple[str, ...] = ()
    atoms: tuple[AtomDecl, ...] = ()
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class ImportClause:
    """Импорт модуля, возможно с экземпляризацией.

    ``Architecture { System bound by [System -> IDESystem] to IDESystem
    renamed by [Architecture -> IDE] }``: ``parameter`` = System,
    ``bindings`` = ((System, IDESystem),), ``to_module`` = IDESystem,
    ``renamings`` = ((Architecture, IDE),).
    """

    target: str
    parameter: str | None = None
    bindings: tuple[tuple[str, str], ...] = ()
    to_module: str | None = None
    renamings: tuple[tuple[str, str], ...] = ()
    pos: SourcePos | None = field(default=None, compare=False)

    @property
    def is_instance(self) -> bool:
        return bool(self.bindings or self.renamings or self.parameter)


@dataclass(frozen=True, slots=True)
class ModuleDecl:
    kind: str  # "data" | "process"
    name: str
    exports: tuple[Decl, ...] = ()
    imports: tuple[ImportClause, ...] = ()
    parameters: tuple[ParameterBlock, ...] = ()
    sorts: tuple[SortDecl, ...] = ()
    functions: tuple[FunctionDecl, ...] = ()
    atoms: tuple[AtomDecl, ...] = ()
    processes: tuple[ProcessDecl, ...] = ()
    definitions: tuple[ProcessDef, ...] = ()
    pos: SourcePos | None = field(default=None, compare=False)

    def all_decls(self) -> tuple[Decl, ...]:
        return self.exports + self.sorts + self.functions + self.atoms + self.processes

    def exported_names(self) -> set[str]:
        return {d.name for d in self.exports}

    def atom_decls(self) -> list[AtomDecl]:
        return [d for d in self.all_decls() if isinstance(d, AtomDecl)]

    def function_decls(self) -> list[FunctionDecl]:
        return [d for d in self.all_decls() if isinstance(d, FunctionDecl)]

    def sort_decls(self) -> list[SortDecl]:
        return [d for d in self.all_decls() if isinstance(d, SortDecl)]

    def process_names(self) -> set[str]:
        """Объявленные и определенные имена процессов модуля (без параметров)."""
        names = {d.name for d in self.all_decls() if isinstance(d, ProcessDecl)}
        return names | {d.name for d in self.definitions}

    def parameter_processes(self) -> set[str]:
        return {p for block in self.parameters for p in block.processes}


@dataclass(frozen=True, slots=True)
class Spec:
    """Разобранная спецификация: модули в порядке появления."""

    modules: tuple[ModuleDecl, ...] = ()
    prelude_loaded: bool = False
    source: str | None = field(default=None, compare=False)

    def module(self, name: str) -> ModuleDecl | None:
        for module in self.modules:
            if module.name == name:
                return module
        return None

    def merged(self, other: Spec) -> Spec:
        return Spec(self.modules + other.modules, self.prelude_loaded or other.prelude_loaded, self.source)
