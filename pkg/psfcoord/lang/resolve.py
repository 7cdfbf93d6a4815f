"""Разрешение импортов: сплющивание модулей в одно глобальное пространство имен.

Шаги:

1. каждый модуль пользователя без параметров экземпляризуется; импорты
   экземпляризуются раньше импортирующего модуля;
2. экземпляр модуля определяется ключом (модуль, привязки, переименования):
   повторный импорт с тем же ключом переиспользует экземпляр, с другим - дает
   непересекающуюся копию (скрытые имена второй и следующих копий получают
   суффикс ``-N``);
3. формальные параметры-процессы заменяются привязанными именами, экспортируемые
   процессы переименовываются по ``renamed by``;
4. вызовы импортированных атомов превращаются в действия, проверяются арности
   вызовов и функций данных.

Видимость импортов не проверяется: после сплющивания имена глобальны.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from psfcoord.data.terms import DataTerm, Term, Var
from psfcoord.errors import (
    ArityMismatch,
    CyclicImport,
    DuplicateDeclaration,
    RenameOfUndeclared,
    ResolveError,
    SortError,
    UnboundFormal,
    UndeclaredName,
    UnresolvedImport,
)
from psfcoord.lang.ast import SORTS, AtomDecl, FunctionDecl, ImportClause, ModuleDecl, ProcessDef, Spec
from psfcoord.lang.parser import calls_to_atoms, parse_spec_file
from psfcoord.lang.prelude import ENVIRONMENT_PROCESSES, load_prelude
from psfcoord.semantics.actions import ARCH_BLOCKED, TOOLBUS_BLOCKED
from psfcoord.semantics.process import Action, Call, Guard, Process, iter_calls, iter_nodes, map_process
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)

BLOCKED_BY_LEVEL = {"architecture": ARCH_BLOCKED, "toolbus": TOOLBUS_BLOCKED}


@dataclass(frozen=True, slots=True)
class Instance:
    """Экземпляр модуля в сплющенной спецификации."""

    module: str
    bindings: tuple[tuple[str, str], ...] = ()
    renamings: tuple[tuple[str, str], ...] = ()
    names: tuple[tuple[str, str], ...] = ()

    def binding(self, formal: str) -> str | None:
        return dict(self.bindings).get(formal)

    def name_of(self, local: str) -> str:
        return dict(self.names).get(local, local)


@dataclass
class FlatSpec:
    """Сплющенная спецификация.

    Attributes:
        defs: Определения по ключу (имя, арность).
        origins: Ключ определения -> исходный модуль (компонента при уточнении).
        atoms: Атомы по имени.
        functions: Функции данных по имени.
        sorts: Объявленные сорта.
        root: Корневой процесс (главный процесс последнего модуля) или ``None``.
        environments: Процесс-окружение -> уровень (``architecture``/``toolbus``).
        instances: Экземпляры модулей с привязками.
    """

    defs: dict[tuple[str, int], ProcessDef] = field(default_factory=dict)
    origins: dict[tuple[str, int], str] = field(default_factory=dict)
    atoms: dict[str, AtomDecl] = field(default_factory=dict)
    functions: dict[str, FunctionDecl] = field(default_factory=dict)
    sorts: tuple[str, ...] = ()
    root: str | None = None
    environments: dict[str, str] = field(default_factory=dict)
    instances: tuple[Instance, ...] = ()

    def process_names(self) -> set[str]:
        return {name for name, _ in self.defs}

    def definition(self, name: str, arity: int = 0) -> ProcessDef | None:
        return self.defs.get((name, arity))

    def level(self, process: str | None = None) -> str | None:
        """Уровень окружения корня (или указанного процесса)."""
        return self.environments.get(process or self.root or "")

    def blocked(self, process: str | None = None) -> frozenset[str]:
        level = self.level(process)
        return BLOCKED_BY_LEVEL[level] if level else frozenset()

    def bound_system(self, process: str | None = None) -> str | None:
        """Процесс, привязанный к параметру окружения (System/Application)."""
        target = process or self.root
        for instance in self.instances:
            if instance.bindings and any(
                local in ENVIRONMENT_PROCESSES and name == target for local, name in instance.names
            ):
                return instance.bindings[0][1]
        return None

    def tool_instances(self) -> list[Instance]:
        return [i for i in self.instances if i.module == "NewTool"]

    def copy(self) -> FlatSpec:
        return FlatSpec(
            dict(self.defs),
            dict(self.origins),
            dict(self.atoms),
            dict(self.functions),
            self.sorts,
            self.root,
            dict(self.environments),
            self.instances,
        )


class Resolver:
    def __init__(self, spec: Spec):
        self.user_modules = list(spec.modules)
        self.modules: dict[str, ModuleDecl] = {}
        for module in self.user_modules:
            if module.name in self.modules:
                raise DuplicateDeclaration("module", module.name, module.pos)
            self.modules[module.name] = module
        for module in load_prelude().modules:
            if module.name in self.modules and not spec.prelude_loaded:
                raise DuplicateDeclaration("module", module.name, self.modules[module.name].pos)
            self.modules.setdefault(module.name, module)

        self.flat = FlatSpec()
        self._sorts: list[str] = []
        self._done: dict[tuple, dict[str, str]] = {}
        self._instance_count: dict[str, int] = {}
        self._instances: list[Instance] = []

    # --- экземпляры --------------------------------------------------------------

    def run(self) -> FlatSpec:
        last_names: dict[str, str] | None = None
        last_module: ModuleDecl | None = None
        for module in self.user_modules:
            if module.parameters:
                continue
            last_names = self.instantiate(module, {}, {}, [], module.pos)
            last_module = module

        self.flat.sorts = tuple(self._sorts)
        self.flat.instances = tuple(self._instances)
        if last_module is not None and last_names is not None:
            self.flat.root = self._root_of(last_module, last_names)
        self._finish()
        logger.info(
            "Разрешено: процессов %d, атомов %d, функций %d, корень %s",
            len(self.flat.defs),
            len(self.flat.atoms),
            len(self.flat.functions),
            self.flat.root,
        )
        return self.flat

    def _root_of(self, module: ModuleDecl, names: dict[str, str]) -> str | None:
        exported = [d.name for d in module.exports if d.name in module.process_names()]
        if exported:
            return names.get(exported[0], exported[0])
        if module.definitions:
            return names.get(module.definitions[0].name, module.definitions[0].name)
        for clause in reversed(module.imports):
            if clause.is_instance:
                key = self._instance_key(clause.target, *self._translate(clause, names))
                target = self.modules[clause.target]
                imported = self._done.get(key, {})
                main = [d.name for d in target.exports if d.name in target.process_names()]
                if main:
                    return imported.get(main[0], main[0])
        return None

    @staticmethod
    def _instance_key(name: str, bindings: dict[str, str], renamings: dict[str, str]) -> tuple:
        return (name, tuple(sorted(bindings.items())), tuple(sorted(renamings.items())))

    def _translate(self, clause: ImportClause, names: dict[str, str]) -> tuple[dict[str, str], dict[str, str]]:
        bindings = {formal: names.get(actual, actual) for formal, actual in clause.bindings}
        return bindings, dict(clause.renamings)

    def instantiate(
        self,
        module: ModuleDecl,
        bindings: dict[str, str],
        renamings: dict[str, str],
        path: list[str],
        pos,
    ) -> dict[str, str]:
        key = self._instance_key(module.name, bindings, renamings)
        if key in self._done:
            return self._done[key]
        if module.name in path:
            raise CyclicImport([*path, module.name], pos)

        formals = module.parameter_processes()
        for formal in bindings:
            if formal not in formals:
                raise ResolveError(f"'{formal}' is not a formal parameter of module '{module.name}'", pos)
        for formal in sorted(formals):
            if formal not in bindings:
                raise UnboundFormal(formal, module.name, pos)
        exported = {d.name for d in module.exports}
        for old in renamings:
            if old not in exported or old not in module.process_names():
                raise RenameOfUndeclared(old, module.name, pos)

        count = self._instance_count.get(module.name, 0) + 1
        self._instance_count[module.name] = count

        names: dict[str, str] = {}
        for name in module.process_names():
            if name in exported:
                names[name] = renamings.get(name, name)
            else:
                names[name] = name if count == 1 else f"{name}-{count}"
        names.update(bindings)

        inner_path = [*path, module.name]
        for clause in module.imports:
            target = self.modules.get(clause.target)
            if target is None:
                raise UnresolvedImport(clause.target, clause.pos)
            if clause.to_module:
                provider = self.modules.get(clause.to_module)
                if provider is None:
                    raise UnresolvedImport(clause.to_module, clause.pos)
                if not provider.parameters:
                    self.instantiate(provider, {}, {}, inner_path, clause.pos)
            sub_bindings, sub_renamings = self._translate(clause, names)
            self.instantiate(target, sub_bindings, sub_renamings, inner_path, clause.pos)

        self._declare(module)
        for definition in module.definitions:
            self._add_definition(module, definition, names)

        for local, level in ENVIRONMENT_PROCESSES.items():
            if local in {d.name for d in module.definitions}:
                self.flat.environments[names.get(local, local)] = level

        self._done[key] = names
        self._instances.append(
            Instance(
                module.name,
                tuple(sorted(bindings.items())),
                tuple(sorted(renamings.items())),
                tuple(sorted((k, v) for k, v in names.items() if k in exported)),
            )
        )
        return names

    def _declare(self, module: ModuleDecl) -> None:
        for sort in module.sort_decls():
            if sort.name not in self._sorts:
                self._sorts.append(sort.name)
        for decl in module.function_decls():
            self._register(self.flat.functions, "function", decl)
        for decl in module.atom_decls():
            self._register(self.flat.atoms, "atom", decl)
        for block in module.parameters:
            for decl in block.atoms:
                self._register(self.flat.atoms, "atom", decl)

    @staticmethod
    def _register(table: dict, kind: str, decl) -> None:
        existing = table.get(decl.name)
        if existing is None:
            table[decl.name] = decl
        elif existing != decl:
            raise DuplicateDeclaration(kind, decl.name, decl.pos)

    def _add_definition(self, module: ModuleDecl, definition: ProcessDef, names: dict[str, str]) -> None:
        renamed = names.get(definition.name, definition.name)
        body = map_process(
            definition.body,
            lambda node: Call(names.get(node.name, node.name), node.args) if isinstance(node, Call) else None,
        )
        new = ProcessDef(renamed, definition.formals, body, definition.pos)
        if new.key in self.flat.defs:
            raise DuplicateDeclaration("process", renamed, definition.pos)
        self.flat.defs[new.key] = new
        self.flat.origins[new.key] = module.name

    # --- проверки ----------------------------------------------------------------

    def _finish(self) -> None:
        finish_flat(self.flat)


def finish_flat(flat: FlatSpec) -> None:
    """Атомы из импортов - в действия; проверки вызовов, арностей и сортов."""
    processes = flat.process_names()
    atoms = set(flat.atoms)
    arities: dict[str, set[int]] = {}
    for name, arity in flat.defs:
        arities.setdefault(name, set()).add(arity)

    for key, definition in list(flat.defs.items()):
        body = calls_to_atoms(definition.body, atoms, processes)
        for call in iter_calls(body):
            if call.key in flat.defs:
                continue
            if call.name in arities:
                raise ArityMismatch(call.name, len(call.args), sorted(arities[call.name]))
            raise UndeclaredName(call.name, definition.name, definition.pos)
        _check_terms(flat, definition, body)
        if body is not definition.body:
            flat.defs[key] = ProcessDef(definition.name, definition.formals, body, definition.pos)

    for decl in flat.functions.values():
        unknown = [s for s in (*decl.arg_sorts, decl.result) if s not in flat.sorts and s not in SORTS]
        if unknown:
            raise SortError(f"function '{decl.name}' uses unknown sort(s) {unknown}", decl.pos)


def _terms_of(body: Process) -> Iterable[Term]:
    for node in iter_nodes(body):
        if isinstance(node, Action):
            yield from node.label.terms()
        elif isinstance(node, Call):
            yield from node.args
        elif isinstance(node, Guard):
            yield node.cond.lhs
            yield node.cond.rhs


def _sort_of(flat: FlatSpec, term: Term, var_sorts: dict[str, str | None]) -> str | None:
    if isinstance(term, Var):
        return var_sorts.get(term.name)
    if isinstance(term, DataTerm) and term.name in flat.functions:
        return flat.functions[term.name].result
    return None


def _check_term(flat: FlatSpec, term: Term, var_sorts: dict[str, str | None], definition: ProcessDef) -> None:
    if not isinstance(term, DataTerm):
        return
    decl = flat.functions.get(term.name)
    if decl is not None:
        if decl.arity != len(term.args):
            raise SortError(
                f"function '{term.name}' expects {decl.arity} argument(s), got {len(term.args)} "
                f"in '{definition.name}'",
                definition.pos,
            )
        for arg, expected in zip(term.args, decl.arg_sorts):
            actual = _sort_of(flat, arg, var_sorts)
            if actual and expected != "DATA" and actual != expected:
                raise SortError(
                    f"argument of '{term.name}' has sort {actual}, expected {expected} in '{definition.name}'",
                    definition.pos,
                )
    for arg in term.args:
        _check_term(flat, arg, var_sorts, definition)


def _check_terms(flat: FlatSpec, definition: ProcessDef, body: Process) -> None:
    var_sorts = {f.name: f.sort for f in definition.formals}
    for term in _terms_of(body):
        _check_term(flat, term, var_sorts, definition)


def resolve(spec: Spec | FlatSpec) -> FlatSpec:
    """Сплющить спецификацию.

    Повторное разрешение сплющенной спецификации возвращает равную копию.

    Raises:
        UnresolvedImport, UnboundFormal, RenameOfUndeclared, CyclicImport,
        DuplicateDeclaration, SortError, UndeclaredName, ArityMismatch.
    """
    if isinstance(spec, FlatSpec):
        flat = spec.copy()
        finish_flat(flat)
        return flat
    return Resolver(spec).run()


def load_spec(paths: Iterable[Path | str]) -> Spec:
    """Разобрать несколько файлов в одну спецификацию."""
    spec = Spec()
    for path in paths:
        spec = spec.merged(parse_spec_file(path))
    return spec


def load_flat(paths: Iterable[Path | str]) -> FlatSpec:
    return resolve(load_spec(paths))
