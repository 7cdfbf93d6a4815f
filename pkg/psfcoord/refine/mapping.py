"""Таблицы отображения абстрактных действий в последовательности действий ToolBus.

Формат файла ``.map``::

    default
      snd($1 >> $2, $3) -> tb-snd-msg($1, $2, tbterm($3)) ;
    component Function
      push-quit -> tb-rec-event(MODULEMANAGER, tbterm(quit))
                 . tb-snd-ack-event(MODULEMANAGER, tbterm(quit)) ;

Порядок применения: сначала более специфичные шаблоны (больше литералов), правила
компоненты раньше правил по умолчанию. Два правила одной секции с равной
специфичностью, способные совпасть на одном действии, - ошибка загрузки.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

from psfcoord.data.terms import DataTerm, Placeholder, Term
from psfcoord.errors import DuplicatePattern, PlaceholderNotBound, SourcePos
from psfcoord.lang.parser import build_label, parse_mapping_sections, read_source
from psfcoord.semantics.actions import ActionLabel
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)

DEFAULT_MAPPING_TEXT = """\
default
  snd($1 >> $2, $3) -> tb-snd-msg($1, $2, tbterm($3)) ;
  rec($1 >> $2, $3) -> tb-rec-msg($1, $2, tbterm($3)) ;
"""


def match_term(pattern: Term, term: Term, bindings: dict[int, Term]) -> bool:
    if isinstance(pattern, Placeholder):
        bound = bindings.get(pattern.index)
        if bound is None:
            bindings[pattern.index] = term
            return True
        return bound == term
    if isinstance(pattern, DataTerm) and isinstance(term, DataTerm):
        if pattern.name != term.name or len(pattern.args) != len(term.args):
            return False
        return all(match_term(p, t, bindings) for p, t in zip(pattern.args, term.args))
    return pattern == term


def unify_terms(left: Term, right: Term) -> bool:
    """Грубая проверка, что два шаблона могут совпасть на одном терме."""
    if isinstance(left, Placeholder) or isinstance(right, Placeholder):
        return True
    if isinstance(left, DataTerm) and isinstance(right, DataTerm):
        if left.name != right.name or len(left.args) != len(right.args):
            return False
        return all(unify_terms(a, b) for a, b in zip(left.args, right.args))
    return left == right


def literal_count(term: Term) -> int:
    if isinstance(term, DataTerm):
        return 1 + sum(literal_count(a) for a in term.args)
    return 0


def placeholders(term: Term) -> set[int]:
    if isinstance(term, Placeholder):
        return {term.index}
    if isinstance(term, DataTerm):
        out: set[int] = set()
        for arg in term.args:
            out |= placeholders(arg)
        return out
    return set()


def fill(term: Term, bindings: Mapping[int, Term]) -> Term:
    if isinstance(term, Placeholder):
        return bindings[term.index]
    if isinstance(term, DataTerm) and term.args:
        return DataTerm(term.name, tuple(fill(a, bindings) for a in term.args))
    return term


@dataclass(frozen=True)
class MappingRule:
    """Правило ``pattern -> replacement``; ``component is None`` - правило по умолчанию."""

    pattern: ActionLabel
    replacement: tuple[ActionLabel, ...]
    component: str | None = None
    pos: SourcePos | None = field(default=None, compare=False)

    @property
    def specificity(self) -> int:
        return sum(literal_count(t) for t in self.pattern.terms())

    def match(self, label: ActionLabel) -> dict[int, Term] | None:
        if label.name != self.pattern.name or type(label.payload) is not type(self.pattern.payload):
            return None
        bindings: dict[int, Term] = {}
        pattern_terms = self.pattern.terms()
        label_terms = label.terms()
        if len(pattern_terms) != len(label_terms):
            return None
        if all(match_term(p, t, bindings) for p, t in zip(pattern_terms, label_terms)):
            return bindings
        return None

    def instantiate(self, bindings: Mapping[int, Term]) -> tuple[ActionLabel, ...]:
        return tuple(item.map_terms(lambda t: fill(t, bindings)) for item in self.replacement)

    def overlaps(self, other: MappingRule) -> bool:
        if self.pattern.name != other.pattern.name:
            return False
        mine, theirs = self.pattern.terms(), other.pattern.terms()
        return len(mine) == len(theirs) and all(unify_terms(a, b) for a, b in zip(mine, theirs))

    def render(self) -> str:
        return f"{self.pattern.render()} -> {' . '.join(r.render() for r in self.replacement)} ;"


@dataclass
class MappingTable:
    """Правила по компонентам и правила по умолчанию."""

    components: dict[str, list[MappingRule]] = field(default_factory=dict)
    defaults: list[MappingRule] = field(default_factory=list)

    def rules_for(self, component: str | None) -> list[MappingRule]:
        own = sorted(self.components.get(component or "", []), key=lambda r: -r.specificity)
        return own + sorted(self.defaults, key=lambda r: -r.specificity)

    def lookup(self, component: str | None, label: ActionLabel) -> tuple[MappingRule, dict[int, Term]] | None:
        for rule in self.rules_for(component):
            bindings = rule.match(label)
            if bindings is not None:
                return rule, bindings
        return None

    def all_rules(self) -> list[MappingRule]:
        return [r for rules in self.components.values() for r in rules] + list(self.defaults)

    def swapped(self, component: str, first: str, second: str) -> MappingTable:
        """Копия с обменом замен двух правил компоненты (по имени шаблона)."""
        rules = list(self.components[component])
        i = next(k for k, r in enumerate(rules) if r.pattern.render() == first)
        j = next(k for k, r in enumerate(rules) if r.pattern.render() == second)
        a, b = rules[i], rules[j]
        rules[i] = MappingRule(a.pattern, b.replacement, a.component, a.pos)
        rules[j] = MappingRule(b.pattern, a.replacement, b.component, b.pos)
        components = dict(self.components)
        components[component] = rules
        return MappingTable(components, list(self.defaults))


def _build_rule(raw_pattern, raw_replacement, component: str | None) -> MappingRule:
    pattern = build_label(raw_pattern.name, raw_pattern.args, raw_pattern.pos)
    replacement = tuple(build_label(r.name, r.args, r.pos) for r in raw_replacement)
    bound = {i for t in pattern.terms() for i in placeholders(t)}
    for item in replacement:
        for term in item.terms():
            missing = placeholders(term) - bound
            if missing:
                raise PlaceholderNotBound(
                    f"placeholder ${min(missing)} of '{item.render()}' does not occur in '{pattern.render()}'",
                    raw_pattern.pos,
                )
    return MappingRule(pattern, replacement, component, raw_pattern.pos)


def _check_duplicates(rules: list[MappingRule], section: str) -> None:
    for i, first in enumerate(rules):
        for second in rules[i + 1 :]:
            if first.specificity == second.specificity and first.overlaps(second):
                raise DuplicatePattern(
                    f"rules '{first.pattern.render()}' and '{second.pattern.render()}' in {section} "
                    "match the same action",
                    second.pos,
                )


def load_mapping(text: str, filename: str = "<string>") -> MappingTable:
    """Разобрать таблицу отображения.

    Если секции ``default`` нет, добавляются два встроенных правила для snd/rec.

    Raises:
        SpecSyntaxError: Ошибка разбора.
        DuplicatePattern: Неоднозначные правила одной секции.
        PlaceholderNotBound: Плейсхолдер замены не встречается в шаблоне.
    """
    table = MappingTable()
    has_default = False
    for component, raw_rules in parse_mapping_sections(text, filename):
        rules = [_build_rule(p, r, component) for p, r in raw_rules]
        if component is None:
            has_default = True
            table.defaults.extend(rules)
        else:
            table.components.setdefault(component, []).extend(rules)

    if not has_default:
        table.defaults = load_mapping(DEFAULT_MAPPING_TEXT, "<default>").defaults

    _check_duplicates(table.defaults, "default")
    for component, rules in table.components.items():
        _check_duplicates(rules, f"component {component}")
    logger.info(
        "%s: правил компонент %d, по умолчанию %d",
        filename,
        sum(len(r) for r in table.components.values()),
        len(table.defaults),
    )
    return table


def load_mapping_file(path: Path | str) -> MappingTable:
    return load_mapping(read_source(path), str(path))
