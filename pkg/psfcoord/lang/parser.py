"""Парсер языка спецификаций и файлов отображения (ply.yacc).

Приоритеты операторов процессов (от слабого к сильному): ``||``, ``+``, ``*``
(левоассоциативная бинарная итерация), ``.``. Охрана ``[l = r] -> P`` - префикс
уровня ``.``.

Имя в позиции действия разбирается так:

* примитив (``snd``, ``rec``, ``tb-*``, ``tooltb-*``, ``snd-quit``...) -
  :class:`~psfcoord.semantics.process.Action` с типизированной нагрузкой;
* имя из секции ``atoms`` модуля - свободный атом;
* все остальное - :class:`~psfcoord.semantics.process.Call`; атомы, пришедшие
  через импорты, превращаются в действия при разрешении модулей.

Таблицы LALR строятся один раз на процесс; разбор сериализован блокировкой.
"""

from __future__ import annotations

import threading
from pathlib import Path

import ply.yacc as yacc

from psfcoord.data.terms import DataTerm, GuardExpr, Placeholder, Term, Var
from psfcoord.errors import SourceEncodingError, SourcePos, SpecSyntaxError
from psfcoord.lang.ast import (
    AtomDecl,
    Formal,
    FunctionDecl,
    ImportClause,
    ModuleDecl,
    ParameterBlock,
    ProcessDecl,
    ProcessDef,
    SortDecl,
    Spec,
)
from psfcoord.lang.lexer import SpecLexer, tokens
from psfcoord.semantics.actions import (
    PAYLOAD_KINDS,
    TOOLTB_ALIASES,
    ActionLabel,
    Args,
    Conn,
    Msg,
    TermPayload,
    ToolSide,
)
from psfcoord.semantics.process import (
    DELTA,
    Action,
    Alt,
    Call,
    Guard,
    Par,
    Process,
    Seq,
    Star,
    map_process,
)
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)


class ConnArg:
    """Аргумент ``a >> b`` внутри snd/rec (существует только во время разбора)."""

    __slots__ = ("source", "target")

    def __init__(self, source: Term, target: Term):
        self.source = source
        self.target = target


class RawMapAction:
    """Действие из правила отображения до сборки метки."""

    __slots__ = ("name", "args", "pos")

    def __init__(self, name: str, args: list, pos: SourcePos):
        self.name = name
        self.args = args
        self.pos = pos


_SECTION_KEYS = ("exports", "imports", "parameters", "sorts", "functions", "atoms", "processes", "definitions")


def build_label(name: str, args: list, pos: SourcePos | None, *, free_atom: bool = True) -> ActionLabel:
    """Метка действия из имени и разобранных аргументов с проверкой формы нагрузки."""
    if name in TOOLTB_ALIASES:
        canonical = TOOLTB_ALIASES[name]
        logger.info("%s: '%s' принят как синоним '%s' (заметка по корпусу)", pos, name, canonical)
        name = canonical

    if name not in PAYLOAD_KINDS:
        if any(isinstance(a, ConnArg) for a in args):
            raise SpecSyntaxError(pos, found=f"connection argument of '{name}'", expected="snd or rec")
        return ActionLabel(name, Args(tuple(args)) if args else None)

    kind = PAYLOAD_KINDS[name]
    plain = [a for a in args if not isinstance(a, ConnArg)]

    if kind is Conn:
        if len(args) != 2 or not isinstance(args[0], ConnArg) or isinstance(args[1], ConnArg):
            raise SpecSyntaxError(pos, found=f"{name} with {len(args)} argument(s)", expected="(a >> b, term)")
        return ActionLabel(name, Conn(args[0].source, args[0].target, args[1]))

    if len(plain) != len(args):
        raise SpecSyntaxError(pos, found=f"connection argument of '{name}'", expected="data terms")

    expected_arity = {None: 0, Msg: 3, ToolSide: 2, TermPayload: 1}[kind]
    if len(args) != expected_arity:
        raise SpecSyntaxError(
            pos, found=f"{name} with {len(args)} argument(s)", expected=f"{expected_arity} argument(s)"
        )
    if kind is None:
        return ActionLabel(name)
    if kind is Msg:
        return ActionLabel(name, Msg(*args))
    if kind is ToolSide:
        return ActionLabel(name, ToolSide(*args))
    return ActionLabel(name, TermPayload(args[0]))


def bind_formals(body: Process, names: set[str]) -> Process:
    """Константы с именами формальных параметров превращаются в переменные."""
    if not names:
        return body

    def term(t: Term) -> Term:
        if isinstance(t, DataTerm):
            if not t.args and t.name in names:
                return Var(t.name)
            return DataTerm(t.name, tuple(term(a) for a in t.args))
        return t

    def visit(node: Process) -> Process | None:
        if isinstance(node, Action):
            return Action(node.label.map_terms(term))
        if isinstance(node, Call):
            return Call(node.name, tuple(term(a) for a in node.args))
        if isinstance(node, Guard):
            return Guard(GuardExpr(term(node.cond.lhs), term(node.cond.rhs)), map_process(node.then, visit))
        return None

    return map_process(body, visit)


def calls_to_atoms(body: Process, atoms: set[str], processes: set[str] = frozenset()) -> Process:
    """Вызовы объявленных атомов (не процессов) превращаются в свободные действия."""

    def visit(node: Process) -> Process | None:
        if isinstance(node, Call) and node.name in atoms and node.name not in processes:
            return Action(ActionLabel(node.name, Args(node.args) if node.args else None))
        return None

    return map_process(body, visit)


class SpecGrammar:
    """Грамматика ply; один экземпляр на построенную таблицу."""

    tokens = tokens

    def __init__(self) -> None:
        self.lexer: SpecLexer | None = None
        self.parser = None

    # --- позиции -----------------------------------------------------------------

    def _pos(self, p, index: int) -> SourcePos | None:
        if self.lexer is None:
            return None
        return self.lexer.position(p.lineno(index), p.lexpos(index))

    # --- спецификация --------------------------------------------------------------

    def p_spec(self, p):
        """spec : modules
        | empty"""
        p[0] = tuple(p[1] or ())

    def p_modules(self, p):
        """modules : modules module
        | module"""
        p[0] = p[1] + [p[2]] if len(p) == 3 else [p[1]]

    def p_module(self, p):
        """module : module_kind MODULE IDENT BEGIN sections END opt_ident"""
        if p[7] is not None and p[7] != p[3]:
            raise SpecSyntaxError(self._pos(p, 6), found=f"'end {p[7]}'", expected=f"'end {p[3]}'")
        p[0] = self._make_module(p[1], p[3], p[5], self._pos(p, 3))

    def p_module_kind(self, p):
        """module_kind : DATA
        | PROCESS"""
        p[0] = p[1]

    def p_opt_ident(self, p):
        """opt_ident : IDENT
        | empty"""
        p[0] = p[1]

    def p_empty(self, p):
        "empty :"
        p[0] = None

    def p_sections(self, p):
        """sections : sections section
        | empty"""
        p[0] = (p[1] or []) + [p[2]] if len(p) == 3 else []

    def p_section_exports(self, p):
        """section : EXPORTS BEGIN decl_sections END"""
        decls = [d for _key, items in p[3] for d in items]
        p[0] = ("exports", decls)

    def p_section_imports(self, p):
        """section : IMPORTS import_list"""
        p[0] = ("imports", p[2])

    def p_section_parameters(self, p):
        """section : PARAMETERS IDENT BEGIN decl_sections END IDENT"""
        processes = tuple(d.name for key, items in p[4] if key == "processes" for d in items)
        atoms = tuple(d for key, items in p[4] if key == "atoms" for d in items)
        p[0] = ("parameters", [ParameterBlock(p[2], processes, atoms, self._pos(p, 2))])

    def p_section_decls(self, p):
        """section : decl_section"""
        p[0] = p[1]

    def p_section_definitions(self, p):
        """section : DEFINITIONS definitions
        | DEFINITIONS empty"""
        p[0] = ("definitions", p[2] or [])

    def p_decl_sections(self, p):
        """decl_sections : decl_sections decl_section
        | empty"""
        p[0] = (p[1] or []) + [p[2]] if len(p) == 3 else []

    def p_decl_section_sorts(self, p):
        """decl_section : SORTS name_list"""
        p[0] = ("sorts", [SortDecl(name, pos) for name, pos in p[2]])

    def p_decl_section_processes(self, p):
        """decl_section : PROCESSES name_list"""
        p[0] = ("processes", [ProcessDecl(name, pos) for name, pos in p[2]])

    def p_decl_section_functions(self, p):
        """decl_section : FUNCTIONS function_decls"""
        p[0] = ("functions", p[2])

    def p_decl_section_atoms(self, p):
        """decl_section : ATOMS atom_decls"""
        p[0] = ("atoms", p[2])

    def p_name_list(self, p):
        """name_list : name_list IDENT
        | IDENT"""
        if len(p) == 3:
            p[0] = p[1] + [(p[2], self._pos(p, 2))]
        else:
            p[0] = [(p[1], self._pos(p, 1))]

    def p_function_decls(self, p):
        """function_decls : function_decls function_decl
        | function_decl"""
        p[0] = p[1] + [p[2]] if len(p) == 3 else [p[1]]

    def p_function_decl(self, p):
        """function_decl : function_name COLON sort_args ARROW IDENT"""
        name, pos = p[1]
        p[0] = FunctionDecl(name, tuple(p[3]), p[5], pos)

    def p_function_name(self, p):
        """function_name : IDENT
        | ZERO"""
        p[0] = (p[1], self._pos(p, 1))

    def p_sort_args(self, p):
        """sort_args : sort_args HASH IDENT
        | IDENT
        | empty"""
        if len(p) == 4:
            p[0] = p[1] + [p[3]]
        else:
            p[0] = [] if p[1] is None else [p[1]]

    def p_atom_decls(self, p):
        """atom_decls : atom_decls atom_decl
        | atom_decl"""
        p[0] = p[1] + [p[2]] if len(p) == 3 else [p[1]]

    def p_atom_decl(self, p):
        """atom_decl : IDENT
        | IDENT COLON atom_sorts"""
        p[0] = AtomDecl(p[1], tuple(p[3]) if len(p) == 4 else (), self._pos(p, 1))

    def p_atom_sorts(self, p):
        """atom_sorts : atom_sorts HASH IDENT
        | IDENT"""
        p[0] = p[1] + [p[3]] if len(p) == 4 else [p[1]]

    # --- импорты -----------------------------------------------------------------

    def p_import_list(self, p):
        """import_list : import_list COMMA import_item
        | import_item"""
        p[0] = p[1] + [p[3]] if len(p) == 4 else [p[1]]

    def p_import_item_plain(self, p):
        """import_item : IDENT"""
        p[0] = ImportClause(p[1], pos=self._pos(p, 1))

    def p_import_item_instance(self, p):
        """import_item : IDENT LBRACE opt_ident opt_bound opt_to opt_renamed RBRACE"""
        p[0] = ImportClause(
            p[1],
            parameter=p[3],
            bindings=tuple(p[4] or ()),
            to_module=p[5],
            renamings=tuple(p[6] or ()),
            pos=self._pos(p, 1),
        )

    def p_opt_bound(self, p):
        """opt_bound : BOUND BY LBRACKET pairs RBRACKET
        | empty"""
        p[0] = p[4] if len(p) == 6 else None

    def p_opt_to(self, p):
        """opt_to : TO IDENT
        | empty"""
        p[0] = p[2] if len(p) == 3 else None

    def p_opt_renamed(self, p):
        """opt_renamed : RENAMED BY LBRACKET pairs RBRACKET
        | empty"""
        p[0] = p[4] if len(p) == 6 else None

    def p_pairs(self, p):
        """pairs : pairs COMMA pair
        | pair"""
        p[0] = p[1] + [p[3]] if len(p) == 4 else [p[1]]

    def p_pair(self, p):
        """pair : IDENT ARROW IDENT"""
        p[0] = (p[1], p[3])

    # --- определения -------------------------------------------------------------

    def p_definitions(self, p):
        """definitions : definitions definition
        | definition"""
        p[0] = p[1] + [p[2]] if len(p) == 3 else [p[1]]

    def p_definition_plain(self, p):
        """definition : IDENT EQUALS proc"""
        p[0] = ProcessDef(p[1], (), p[3], self._pos(p, 1))

    def p_definition_params(self, p):
        """definition : IDENT LPAREN formals RPAREN EQUALS proc"""
        formals = tuple(p[3])
        body = bind_formals(p[6], {f.name for f in formals})
        p[0] = ProcessDef(p[1], formals, body, self._pos(p, 1))

    def p_formals(self, p):
        """formals : formals COMMA formal
        | formal"""
        p[0] = p[1] + [p[3]] if len(p) == 4 else [p[1]]

    def p_formal(self, p):
        """formal : IDENT
        | IDENT COLON IDENT"""
        p[0] = Formal(p[1], p[3] if len(p) == 4 else None)

    # --- термы процессов ---------------------------------------------------------

    def p_process_text(self, p):
        """process_text : proc"""
        p[0] = p[1]

    def p_proc(self, p):
        """proc : proc PAR alt
        | alt"""
        p[0] = Par(p[1], p[3]) if len(p) == 4 else p[1]

    def p_alt(self, p):
        """alt : alt PLUS star
        | star"""
        p[0] = Alt(p[1], p[3]) if len(p) == 4 else p[1]

    def p_star(self, p):
        """star : star TIMES seq
        | seq"""
        p[0] = Star(p[1], p[3]) if len(p) == 4 else p[1]

    def p_seq(self, p):
        """seq : prim DOT seq
        | prim"""
        p[0] = Seq(p[1], p[3]) if len(p) == 4 else p[1]

    def p_seq_guard(self, p):
        """seq : LBRACKET dterm EQUALS dterm RBRACKET ARROW seq"""
        p[0] = Guard(GuardExpr(p[2], p[4]), p[7])

    def p_prim_group(self, p):
        """prim : LPAREN proc RPAREN"""
        p[0] = p[2]

    def p_prim_delta(self, p):
        """prim : DELTA"""
        p[0] = DELTA

    def p_prim_name(self, p):
        """prim : IDENT
        | IDENT LPAREN act_args RPAREN"""
        args = p[3] if len(p) == 5 else []
        p[0] = self._prim(p[1], args, self._pos(p, 1))

    def _prim(self, name: str, args: list, pos: SourcePos | None) -> Process:
        if name in PAYLOAD_KINDS or name in TOOLTB_ALIASES:
            return Action(build_label(name, args, pos))
        if any(isinstance(a, ConnArg) for a in args):
            raise SpecSyntaxError(pos, found=f"connection argument of '{name}'", expected="snd or rec")
        return Call(name, tuple(args))

    def p_act_args(self, p):
        """act_args : act_args COMMA act_arg
        | act_arg"""
        p[0] = p[1] + [p[3]] if len(p) == 4 else [p[1]]

    def p_act_arg(self, p):
        """act_arg : dterm
        | dterm SHIFT dterm"""
        p[0] = ConnArg(p[1], p[3]) if len(p) == 4 else p[1]

    def p_dterm_const(self, p):
        """dterm : IDENT"""
        p[0] = DataTerm(p[1])

    def p_dterm_app(self, p):
        """dterm : IDENT LPAREN dterms RPAREN"""
        p[0] = DataTerm(p[1], tuple(p[3]))

    def p_dterm_zero(self, p):
        """dterm : ZERO"""
        p[0] = DataTerm("^0")

    def p_dterm_placeholder(self, p):
        """dterm : PLACEHOLDER"""
        p[0] = Placeholder(p[1])

    def p_dterms(self, p):
        """dterms : dterms COMMA dterm
        | dterm"""
        p[0] = p[1] + [p[3]] if len(p) == 4 else [p[1]]

    # --- файл отображения --------------------------------------------------------

    def p_mapping(self, p):
        """mapping : map_sections
        | empty"""
        p[0] = p[1] or []

    def p_map_sections(self, p):
        """map_sections : map_sections map_section
        | map_section"""
        p[0] = p[1] + [p[2]] if len(p) == 3 else [p[1]]

    def p_map_section_default(self, p):
        """map_section : DEFAULT map_rules"""
        p[0] = (None, p[2])

    def p_map_section_component(self, p):
        """map_section : COMPONENT IDENT map_rules"""
        p[0] = (p[2], p[3])

    def p_map_rules(self, p):
        """map_rules : map_rules map_rule
        | empty"""
        p[0] = (p[1] or []) + [p[2]] if len(p) == 3 else []

    def p_map_rule(self, p):
        """map_rule : map_action ARROW map_replacement SEMI"""
        p[0] = (p[1], p[3])

    def p_map_replacement(self, p):
        """map_replacement : map_replacement DOT map_action
        | map_action"""
        p[0] = p[1] + [p[3]] if len(p) == 4 else [p[1]]

    def p_map_action(self, p):
        """map_action : IDENT
        | IDENT LPAREN act_args RPAREN"""
        args = p[3] if len(p) == 5 else []
        p[0] = RawMapAction(p[1], args, self._pos(p, 1))

    # --- ошибки ------------------------------------------------------------------

    def p_error(self, tok):
        expected = self._expected_tokens()
        if tok is None:
            pos = self.lexer.end_position() if self.lexer else None
            raise SpecSyntaxError(pos, found="end of input", expected=expected)
        pos = self.lexer.position(tok.lineno, tok.lexpos) if self.lexer else None
        raise SpecSyntaxError(pos, found=repr(str(tok.value)), expected=expected)

    def _expected_tokens(self) -> str | None:
        stack = getattr(self.parser, "statestack", None)
        if not stack:
            return None
        names = sorted(t for t in self.parser.action[stack[-1]] if t != "$end")
        if not names:
            return None
        return " or ".join(names[:6]) + (" ..." if len(names) > 6 else "")

    # --- сборка модуля -----------------------------------------------------------

    def _make_module(self, kind: str, name: str, sections: list, pos: SourcePos | None) -> ModuleDecl:
        grouped: dict[str, list] = {key: [] for key in _SECTION_KEYS}
        for key, items in sections:
            grouped[key].extend(items)

        definitions = grouped["definitions"]
        if kind == "data" and definitions:
            raise SpecSyntaxError(definitions[0].pos, found="process definition in data module")

        local_atoms = {d.name for d in grouped["atoms"]}
        local_atoms |= {d.name for d in grouped["exports"] if isinstance(d, AtomDecl)}
        local_atoms |= {a.name for block in grouped["parameters"] for a in block.atoms}
        defined = {d.name for d in definitions}
        definitions = [
            ProcessDef(d.name, d.formals, calls_to_atoms(d.body, local_atoms, defined), d.pos) for d in definitions
        ]

        return ModuleDecl(
            kind=kind,
            name=name,
            exports=tuple(grouped["exports"]),
            imports=tuple(grouped["imports"]),
            parameters=tuple(grouped["parameters"]),
            sorts=tuple(grouped["sorts"]),
            functions=tuple(grouped["functions"]),
            atoms=tuple(grouped["atoms"]),
            processes=tuple(grouped["processes"]),
            definitions=tuple(definitions),
            pos=pos,
        )


_BUILD_LOCK = threading.Lock()
_PARSE_LOCK = threading.Lock()
_PARSERS: dict[str, SpecGrammar] = {}


def _grammar(start: str) -> SpecGrammar:
    with _BUILD_LOCK:
        grammar = _PARSERS.get(start)
        if grammar is None:
            grammar = SpecGrammar()
            grammar.parser = yacc.yacc(
                module=grammar,
                start=start,
                write_tables=False,
                debug=False,
                errorlog=yacc.NullLogger(),
            )
            _PARSERS[start] = grammar
        return grammar


def _run(start: str, text: str, filename: str):
    grammar = _grammar(start)
    with _PARSE_LOCK:
        grammar.lexer = SpecLexer(filename)
        grammar.lexer.input(text)
        return grammar.parser.parse(text, lexer=grammar.lexer)


def parse_spec(text: str, filename: str = "<string>") -> Spec:
    """Разобрать текст спецификации.

    Args:
        text: Исходный текст (один или несколько модулей).
        filename: Имя файла для диагностик.

    Returns:
        Spec с модулями в порядке появления.

    Raises:
        SpecSyntaxError: Ошибка разбора; частичный результат не возвращается.
    """
    modules = _run("spec", text, filename)
    logger.info("%s: разобрано модулей: %d", filename, len(modules))
    return Spec(tuple(modules), source=filename)


def read_source(path: Path | str) -> str:
    """Прочитать исходный файл в UTF-8.

    Raises:
        SourceEncodingError: Файл не декодируется; позиция - строка и колонка первого плохого байта.
    """
    path = Path(path)
    data = path.read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        column = exc.start - (head.rfind(b"\n") + 1) + 1
        raise SourceEncodingError(SourcePos(str(path), line, column), data[exc.start]) from exc


def parse_spec_file(path: Path | str) -> Spec:
    return parse_spec(read_source(path), str(path))


def parse_process(text: str, filename: str = "<string>") -> Process:
    """Разобрать отдельный терм процесса (без модульной обвязки)."""
    return _run("process_text", text, filename)


def parse_mapping_sections(text: str, filename: str = "<string>") -> list[tuple[str | None, list]]:
    """Сырые секции файла отображения: ``[(component | None, [(pattern, replacement)])]``."""
    return _run("mapping", text, filename)

