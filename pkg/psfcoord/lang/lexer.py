"""Лексер языка спецификаций (ply.lex).

Идентификаторы могут содержать дефисы между фрагментами (``edit-module``,
``PT-ModuleManager``, ``tb-snd-msg``); ``--`` до конца строки - комментарий.
"""

from __future__ import annotations

import ply.lex as lex

from psfcoord.errors import SourcePos, SpecSyntaxError


RESERVED = {
    "data": "DATA",
    "process": "PROCESS",
    "module": "MODULE",
    "begin": "BEGIN",
    "end": "END",
    "exports": "EXPORTS",
    "imports": "IMPORTS",
    "atoms": "ATOMS",
    "processes": "PROCESSES",
    "functions": "FUNCTIONS",
    "definitions": "DEFINITIONS",
    "sorts": "SORTS",
    "parameters": "PARAMETERS",
    "bound": "BOUND",
    "by": "BY",
    "to": "TO",
    "renamed": "RENAMED",
    "delta": "DELTA",
    "component": "COMPONENT",
    "default": "DEFAULT",
}

tokens = (
    "IDENT",
    "ZERO",
    "PLACEHOLDER",
    "PAR",
    "SHIFT",
    "ARROW",
    "DOT",
    "PLUS",
    "TIMES",
    "LPAREN",
    "RPAREN",
    "LBRACKET",
    "RBRACKET",
    "LBRACE",
    "RBRACE",
    "COMMA",
    "COLON",
    "EQUALS",
    "HASH",
    "SEMI",
) + tuple(RESERVED.values())


class SpecLexer:
    """Обертка над ply-лексером, знающая имя файла для диагностик."""

    tokens = tokens

    t_ignore = " \t\r\f"

    t_PAR = r"\|\|"
    t_SHIFT = r">>"
    t_ARROW = r"->"
    t_DOT = r"\."
    t_PLUS = r"\+"
    t_TIMES = r"\*"
    t_LPAREN = r"\("
    t_RPAREN = r"\)"
    t_LBRACKET = r"\["
    t_RBRACKET = r"\]"
    t_LBRACE = r"\{"
    t_RBRACE = r"\}"
    t_COMMA = r","
    t_COLON = r":"
    t_EQUALS = r"="
    t_HASH = r"\#"
    t_SEMI = r";"

    def __init__(self, filename: str = "<string>"):
        self.filename = filename
        self.data = ""
        self.lexer = lex.lex(module=self, debug=False, optimize=False, errorlog=lex.NullLogger())

    def t_COMMENT(self, t):
        r"--[^\n]*"

    def t_newline(self, t):
        r"\n+"
        t.lexer.lineno += len(t.value)

    def t_ZERO(self, t):
        r"\^0"
        return t

    def t_PLACEHOLDER(self, t):
        r"\$[0-9]+"
        t.value = int(t.value[1:])
        return t

    def t_IDENT(self, t):
        r"[A-Za-z_][A-Za-z0-9_]*(-[A-Za-z0-9_]+)*"
        t.type = RESERVED.get(t.value, "IDENT")
        return t

    def t_error(self, t):
        raise SpecSyntaxError(self.position(t.lineno, t.lexpos), found=repr(t.value[0]))

    # --- API ---------------------------------------------------------------------

    def input(self, data: str) -> None:
        self.data = data
        self.lexer.lineno = 1
        self.lexer.input(data)

    def token(self):
        return self.lexer.token()

    def column(self, lexpos: int) -> int:
        return lexpos - self.data.rfind("\n", 0, lexpos)

    def position(self, lineno: int, lexpos: int) -> SourcePos:
        return SourcePos(self.filename, lineno, self.column(lexpos))

    def end_position(self) -> SourcePos:
        lines = self.data.split("\n")
        return SourcePos(self.filename, len(lines), len(lines[-1]) + 1)

    def tokenize(self, data: str) -> list:
        """Все токены текста (удобно для отладки и тестов)."""
        self.input(data)
        return list(iter(self.token, None))
