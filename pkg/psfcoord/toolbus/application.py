"""Сборка ToolBus-приложения из ограниченных компонент и его запуск."""

from __future__ import annotations

from dataclasses import dataclass, field

from psfcoord.errors import DuplicateComponent, MissingBinding
from psfcoord.explore.simulate import Policy, Trace, simulate
from psfcoord.lang.ast import ProcessDef
from psfcoord.lang.prelude import TOOLBUS_NODES
from psfcoord.lang.resolve import FlatSpec
from psfcoord.refine.refine import NAMING
from psfcoord.semantics.actions import SYSTEM_TERMINATED, TOOLBUS_BLOCKED, ActionLabel
from psfcoord.semantics.canonical import Configuration
from psfcoord.semantics.process import DELTA, Action, Call, Par, Process, flatten, iter_actions, iter_calls, par_of, seq
from psfcoord.semantics.sos import MEMO_SIZE, root_configuration
from psfcoord.toolbus.constrain import ConstrainedComponent, constrain, tool_stub
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)

TOOLBUS_ROOT = "ToolBus"
CONTROL, SHUTDOWN = TOOLBUS_NODES


@dataclass
class ToolBusApplication:
    """Собранное приложение.

    Attributes:
        components: Ограниченные компоненты в порядке сборки.
        flat: Определения приложения (стороны компонент уже помечены).
        root: Процесс окружения ToolBus.
    """

    components: list[ConstrainedComponent] = field(default_factory=list)
    flat: FlatSpec = field(default_factory=FlatSpec)
    root: str = TOOLBUS_ROOT

    def component(self, name: str) -> ConstrainedComponent:
        for item in self.components:
            if name in (item.name, item.component):
                return item
        raise KeyError(name)

    def system(self) -> Process:
        return par_of([Call(c.name) for c in self.components]) if self.components else DELTA

    def configuration(self, recursion_fuse: int = 10_000, memo_size: int = MEMO_SIZE) -> Configuration:
        return root_configuration(self.flat, self.root, recursion_fuse, TOOLBUS_BLOCKED, memo_size)

    def bus_names(self) -> list[str]:
        return [c.bus.name for c in self.components]

    def tool_names(self) -> list[str]:
        return [c.tool.name for c in self.components]


def reachable(flat: FlatSpec, name: str) -> list[ProcessDef]:
    """Определения, достижимые вызовами из ``name`` (все арности), включая его само."""
    seen: list[tuple[str, int]] = []
    stack = [key for key in flat.defs if key[0] == name]
    while stack:
        key = stack.pop()
        if key in seen:
            continue
        seen.append(key)
        for call in iter_calls(flat.defs[key].body):
            stack.extend(k for k in flat.defs if k[0] == call.name and k not in seen)
    return [flat.defs[key] for key in seen]


def _split(flat: FlatSpec, name: str) -> tuple[ProcessDef, list[ProcessDef]]:
    defs = reachable(flat, name)
    main = next((d for d in defs if d.key == (name, 0)), defs[0])
    return main, [d for d in defs if d is not main]


def _constrained_pairs(flat: FlatSpec) -> list[tuple[str, str | None, str | None]]:
    """Тройки (PT-имя, P-сторона, T-сторона) из экземпляров NewTool или PT-определений."""
    prefix = NAMING.constrained_name("")
    instances = flat.tool_instances()
    if instances:
        names = []
        for instance in instances:
            bound = instance.binding("Tool")
            if bound is None:
                raise MissingBinding(f"Tool of {instance.name_of('TBProcess')}")
            names.append(bound)
    else:
        names = [name for name, _ in flat.defs if name.startswith(prefix)]

    seen: set[str] = set()
    out = []
    for name in names:
        if name in seen:
            raise DuplicateComponent(name)
        seen.add(name)
        definition = flat.definition(name)
        if definition is None:
            raise MissingBinding(name)
        calls = [c.name for c in flatten(definition.body, Par) if isinstance(c, Call)]
        bus = next((c for c in calls if c.startswith(NAMING.bus) and not c.startswith(prefix)), None)
        tool = next((c for c in calls if c.startswith(NAMING.tool)), None)
        out.append((name, bus, tool))
    return out


def _with_environment(app: ToolBusApplication, flat: FlatSpec) -> None:
    """Корень ``ToolBus = система || ToolBusControl || ToolBusShutdown``, если его нет."""
    if flat.level() == "toolbus" and flat.root:
        app.root = flat.root
        return
    for definition in (
        ProcessDef(CONTROL, (), DELTA),
        ProcessDef(SHUTDOWN, (), seq(Action(ActionLabel("tb-rec-shutdown")), Action(ActionLabel(SYSTEM_TERMINATED)))),
        ProcessDef(TOOLBUS_ROOT, (), par_of([app.system(), Call(CONTROL), Call(SHUTDOWN)])),
    ):
        flat.defs.setdefault(definition.key, definition)
    flat.environments[TOOLBUS_ROOT] = "toolbus"
    flat.root = app.root = TOOLBUS_ROOT


def _install(app: ToolBusApplication, flat: FlatSpec, constrained: ConstrainedComponent) -> None:
    if any(c.component == constrained.component for c in app.components):
        raise DuplicateComponent(constrained.component)
    for definition in constrained.definitions():
        flat.defs[definition.key] = definition
    app.components.append(constrained)


def assemble(flat: FlatSpec) -> ToolBusApplication:
    """Собрать приложение из экземпляров ``NewTool`` (или явных ``PT-*`` определений).

    Raises:
        MissingBinding: У экземпляра нет привязки, нет PT-определения или одной из сторон.
        DuplicateComponent: Компонента собрана дважды.
    """
    app_flat = flat.copy()
    app = ToolBusApplication(flat=app_flat)
    for name, bus, tool in _constrained_pairs(flat):
        if bus is None:
            raise MissingBinding(f"{name}: P-side")
        if tool is None:
            raise MissingBinding(f"{name}: T-side")
        if flat.definition(bus) is None:
            raise MissingBinding(bus)
        if flat.definition(tool) is None:
            raise MissingBinding(tool)
        bus_main, bus_helpers = _split(flat, bus)
        tool_main, tool_helpers = _split(flat, tool)
        _install(app, app_flat, constrain(bus_main, tool_main, None, bus_helpers, tool_helpers, name=name))

    _with_environment(app, app_flat)
    shutdown_listeners = [
        d.name for d in app_flat.defs.values() if any(a.name == "tb-rec-shutdown" for a in iter_actions(d.body))
    ]
    if len(shutdown_listeners) != 1:
        logger.warning("Ожидался один слушатель shutdown, найдено: %s", shutdown_listeners)
    logger.info("Собрано приложение %s: компонент %d", app.root, len(app.components))
    return app


def stub_application(refined: FlatSpec) -> ToolBusApplication:
    """Приложение из уточненной системы с разрешающими заглушками инструментов.

    Каждая компонента ``PX`` (определения с общим происхождением) ограничивается
    заглушкой ``TX``, принимающей все двойственные действия.
    """
    app_flat = FlatSpec(
        defs=dict(refined.defs),
        origins=dict(refined.origins),
        atoms=dict(refined.atoms),
        functions=dict(refined.functions),
        sorts=refined.sorts,
    )
    app = ToolBusApplication(flat=app_flat)
    groups: dict[str, list[ProcessDef]] = {}
    for key, definition in refined.defs.items():
        groups.setdefault(refined.origins.get(key, definition.name), []).append(definition)
    for origin, defs in groups.items():
        main = next((d for d in defs if d.name == origin and not d.formals), defs[0])
        helpers = [d for d in defs if d is not main]
        stub = tool_stub([main, *helpers])
        _install(app, app_flat, constrain(main, stub, None, helpers, ()))
    _with_environment(app, app_flat)
    return app


def run_application(app: ToolBusApplication, policy: Policy, max_steps: int = 100) -> Trace:
    """Выполнить приложение выбранной политикой до завершения, тупика или лимита шагов."""
    trace = simulate(app.configuration(), policy, max_steps)
    logger.info("Запуск %s: шагов %d, статус %s", app.root, len(trace.labels), trace.status)
    return trace
