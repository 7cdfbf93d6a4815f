"""Язык спецификаций: лексер, парсер, AST, прелюдия и разрешение импортов."""

from psfcoord.lang.ast import ModuleDecl, ProcessDef, Spec
from psfcoord.lang.parser import parse_process, parse_spec, parse_spec_file
from psfcoord.lang.prelude import load_prelude
from psfcoord.lang.pretty import render_flat, render_spec
from psfcoord.lang.resolve import FlatSpec, load_flat, load_spec, resolve
