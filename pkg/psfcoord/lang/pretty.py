"""Печать AST обратно в текст спецификации.

Повторный разбор напечатанного текста дает структурно равный AST. Альтернативы
верхнего уровня тела определения переносятся по строкам, как в исходных
спецификациях; остальное печатается в одну строку.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from psfcoord.lang.ast import (
    AtomDecl,
    Decl,
    FunctionDecl,
    ImportClause,
    ModuleDecl,
    ProcessDecl,
    ProcessDef,
    SortDecl,
    Spec,
)
from psfcoord.semantics.process import LEVEL_SEQ, LEVEL_STAR, Alt, Process, Star, render_operand, render_process

if TYPE_CHECKING:
    from psfcoord.lang.resolve import FlatSpec


INDENT = "  "

_DECL_SECTION = {SortDecl: "sorts", FunctionDecl: "functions", AtomDecl: "atoms", ProcessDecl: "processes"}


def render_decl(decl: Decl) -> str:
    if isinstance(decl, FunctionDecl):
        return f"{decl.name} : {' # '.join(decl.arg_sorts)}{' ' if decl.arg_sorts else ''}-> {decl.result}"
    if isinstance(decl, AtomDecl) and decl.arg_sorts:
        return f"{decl.name} : {' # '.join(decl.arg_sorts)}"
    return decl.name


def _decl_sections(decls: tuple[Decl, ...] | list[Decl], depth: int) -> list[str]:
    lines: list[str] = []
    current: str | None = None
    for decl in decls:
        section = _DECL_SECTION[type(decl)]
        if section != current:
            lines.append(INDENT * depth + section)
            current = section
        lines.append(INDENT * (depth + 1) + render_decl(decl))
    return lines


def render_import(clause: ImportClause) -> str:
    if not clause.is_instance:
        return clause.target
    parts = [clause.target, "{"]
    if clause.parameter:
        parts.append(clause.parameter)
    if clause.bindings:
        pairs = ", ".join(f"{a} -> {b}" for a, b in clause.bindings)
        parts.append(f"bound by [ {pairs} ]")
    if clause.to_module:
        parts.append(f"to {clause.to_module}")
    if clause.renamings:
        pairs = ", ".join(f"{a} -> {b}" for a, b in clause.renamings)
        parts.append(f"renamed by [ {pairs} ]")
    parts.append("}")
    return " ".join(parts)


def render_body(body: Process, depth: int) -> str:
    """Тело определения; альтернативы верхнего уровня - по одной на строку."""
    pad = INDENT * depth
    if isinstance(body, Alt):
        items: list[Process] = []
        node = body
        while isinstance(node, Alt):
            items.append(node.right)
            node = node.left
        items.append(node)
        rendered = [render_operand(item, LEVEL_STAR) for item in reversed(items)]
        return pad + f"\n{pad}+ ".join(rendered)
    if isinstance(body, Star) and isinstance(body.body, Alt):
        inner = render_body(body.body, depth + 1)
        return f"{pad}(\n{inner}\n{pad}) * {render_operand(body.exit, LEVEL_SEQ)}"
    return pad + render_process(body)


def render_definition(definition: ProcessDef, depth: int = 2) -> str:
    head = definition.name
    if definition.formals:
        formals = ", ".join(f"{f.name}: {f.sort}" if f.sort else f.name for f in definition.formals)
        head = f"{head}({formals})"
    return f"{INDENT * depth}{head} =\n{render_body(definition.body, depth + 1)}"


def render_module(module: ModuleDecl) -> str:
    lines = [f"{module.kind} module {module.name}", "begin"]
    if module.exports:
        lines += [f"{INDENT}exports", f"{INDENT}begin"]
        lines += _decl_sections(module.exports, 2)
        lines.append(f"{INDENT}end")
    if module.imports:
        lines.append(f"{INDENT}imports")
        rendered = [render_import(c) for c in module.imports]
        lines += [f"{INDENT * 2}{text}{',' if i < len(rendered) - 1 else ''}" for i, text in enumerate(rendered)]
    for block in module.parameters:
        lines += [f"{INDENT}parameters {block.name}", f"{INDENT}begin"]
        if block.processes:
            lines += [f"{INDENT * 2}processes"] + [f"{INDENT * 3}{p}" for p in block.processes]
        if block.atoms:
            lines += _decl_sections(block.atoms, 2)
        lines.append(f"{INDENT}end {block.name}")
    lines += _decl_sections(module.sorts + module.functions + module.atoms + module.processes, 1)
    if module.definitions:
        lines.append(f"{INDENT}definitions")
        lines += [render_definition(d) for d in module.definitions]
    lines.append(f"end {module.name}")
    return "\n".join(lines)


def render_spec(spec: Spec) -> str:
    """Текст всей спецификации (модули через пустую строку)."""
    if not spec.modules:
        return ""
    return "\n\n".join(render_module(m) for m in spec.modules) + "\n"


def render_flat(flat: FlatSpec, name: str | None = None) -> str:
    """Плоская спецификация как пара модулей (данные + процессы), пригодная к разбору."""
    name = name or flat.root or "Flat"
    data_name = f"{name}Data"
    data = ModuleDecl(
        kind="data",
        name=data_name,
        exports=tuple(SortDecl(s) for s in flat.sorts) + tuple(flat.functions.values()),
    )
    process = ModuleDecl(
        kind="process",
        name=name,
        exports=tuple(ProcessDecl(n) for n in sorted({k[0] for k in flat.defs})),
        imports=(ImportClause(data_name),),
        atoms=tuple(flat.atoms.values()),
        definitions=tuple(flat.defs.values()),
    )
    return render_spec(Spec((data, process)))

