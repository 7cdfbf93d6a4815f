"""Командная строка psfcoord.

Команды::

    psfcoord parse FILE...
    psfcoord check FILE... [--max-states N] [--max-depth N]
    psfcoord simulate FILE... [--seed N] [--steps N] [--policy NAME] [--interactive] [--json]
    psfcoord refine FILE... --map MAPFILE [-o OUT] [--audit OUT]
    psfcoord verify FILE... --map MAPFILE [--depth K]
    psfcoord animate FILE... -o OUT.dot [--level arch|toolbus]
    psfcoord extract-script FILE... [-o OUT]

Коды выхода: 0 - успех, 1 - ошибка спецификации/отображения/файла,
2 - найдены проблемы (тупики, контрпример уточнения), 64 - ошибка использования.
Артефакты пишутся в stdout или файлы, диагностики - в stderr.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from omegaconf import DictConfig

from psfcoord.emit.dot import emit_dot
from psfcoord.emit.graph import architecture_graph, comm_graph, toolbus_graph
from psfcoord.emit.script import extract_script
from psfcoord.errors import PsfCoordError
from psfcoord.explore.interactive import InteractiveStepper
from psfcoord.explore.lts import ExploreBounds, deadlocks, explore
from psfcoord.explore.simulate import Scripted, make_policy, simulate
from psfcoord.explore.trace_io import format_trace, format_trace_jsonl
from psfcoord.lang.parser import read_source
from psfcoord.lang.pretty import render_flat, render_spec
from psfcoord.lang.resolve import FlatSpec, load_spec, resolve
from psfcoord.refine.mapping import MappingTable, load_mapping_file
from psfcoord.refine.refine import NAMING, Instantiation, audit_report, refine_system
from psfcoord.refine.vertical import check_vertical
from psfcoord.semantics.canonical import Configuration
from psfcoord.semantics.sos import MEMO_SIZE, root_configuration
from psfcoord.settings import load_settings
from psfcoord.toolbus.application import assemble, stub_application
from psfcoord.utils.diagnostics import format_error, report, use_color
from psfcoord.utils.log_config import configure_logging, get_logger


logger = get_logger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2, 64


class MissingFile(Exception):
    def __init__(self, path: Path):
        super().__init__(f"{path}: no such file")
        self.path = path


class UsageError(Exception):
    """Недопустимое значение флага или настройки (код выхода 64)."""


class UsageParser(argparse.ArgumentParser):
    """argparse с кодом выхода 64 при ошибке использования."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> UsageParser:
    parser = UsageParser(prog="psfcoord", description="PSF architecture and ToolBus coordination toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE", help="config override"
    )
    parser.add_argument("--color", choices=("auto", "never", "always"), help="colour diagnostics")
    sub = parser.add_subparsers(dest="command", parser_class=UsageParser)

    p = sub.add_parser("parse", help="parse and resolve, print the modules")
    p.add_argument("files", nargs="+", type=Path)

    p = sub.add_parser("check", help="explore the state space and report deadlocks")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--max-states", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("simulate", help="run one trace")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--seed", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--policy", choices=("first-enabled", "seeded-random", "scripted"))
    p.add_argument("--script", type=Path, help="one action per line for --policy scripted")
    p.add_argument("--interactive", action="store_true")
    p.add_argument("--json", action="store_true", help="JSON lines trace")

    p = sub.add_parser("refine", help="refine architecture components into ToolBus processes")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--map", dest="mapping", required=True, type=Path)
    p.add_argument("-o", "--output", type=Path)
    p.add_argument("--audit", type=Path, help="write the instantiation report")

    p = sub.add_parser("verify", help="compare an architecture with its refinement")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--map", dest="mapping", required=True, type=Path)
    p.add_argument("--depth", type=int)

    p = sub.add_parser("animate", help="emit the communication graph as DOT")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("-o", "--output", required=True, type=Path)
    p.add_argument("--level", choices=("arch", "toolbus"))

    p = sub.add_parser("extract-script", help="extract ToolBus scripts from an application")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("-o", "--output", type=Path)
    return parser


# --- общие шаги ------------------------------------------------------------------


def _existing(paths: Sequence[Path]) -> list[Path]:
    for path in paths:
        if not path.is_file():
            raise MissingFile(path)
    return list(paths)


def _load(paths: Sequence[Path]) -> FlatSpec:
    return resolve(load_spec(_existing(paths)))


def _is_application(flat: FlatSpec) -> bool:
    return flat.level() == "toolbus" and bool(flat.tool_instances() or any(n.startswith("PT-") for n in flat.process_names()))


def _semantics_options(cfg: DictConfig) -> tuple[int, int]:
    memo_size = int(cfg.semantics.get("memo_size", MEMO_SIZE))
    if memo_size <= 0:
        raise UsageError(f"invalid semantics.memo_size: {memo_size}")
    return int(cfg.semantics.recursion_fuse), memo_size


def _configuration(flat: FlatSpec, cfg: DictConfig) -> Configuration:
    fuse, memo_size = _semantics_options(cfg)
    if _is_application(flat):
        return assemble(flat).configuration(fuse, memo_size)
    return root_configuration(flat, recursion_fuse=fuse, memo_size=memo_size)


def _write(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text, encoding="utf-8")
    logger.info("Записано: %s", output)


def _bounds(args: argparse.Namespace, cfg: DictConfig) -> ExploreBounds:
    try:
        return ExploreBounds(
            max_states=_pick(args.max_states, cfg.explore.max_states),
            max_depth=_pick(args.max_depth, cfg.explore.max_depth),
            max_transitions=int(cfg.explore.max_transitions),
        )
    except ValueError as exc:
        raise UsageError(f"invalid exploration bound: {exc}") from exc


def _pick(flag: int | None, configured: object) -> int:
    return flag if flag is not None else int(configured)


# --- команды ---------------------------------------------------------------------


def cmd_parse(args: argparse.Namespace, cfg: DictConfig) -> int:
    spec = load_spec(_existing(args.files))
    resolve(spec)
    _write(render_spec(spec), None)
    return EXIT_OK


def cmd_check(args: argparse.Namespace, cfg: DictConfig) -> int:
    flat = _load(args.files)
    bounds = _bounds(args, cfg)
    lts = explore(_configuration(flat, cfg), bounds, workers=args.workers or int(cfg.explore.workers))
    found = deadlocks(lts)
    for state in found:
        sys.stdout.write(f"deadlock {lts.states[state].state_id()}: {lts.states[state].render()}\n")
    summary = f"{len(found)} deadlock states, {len(lts.states)} states explored"
    if not lts.frontier_exhausted:
        summary += " (bound reached, exploration incomplete)"
    sys.stdout.write(summary + "\n")
    return EXIT_FINDINGS if found else EXIT_OK


def cmd_simulate(args: argparse.Namespace, cfg: DictConfig) -> int:
    flat = _load(args.files)
    config = _configuration(flat, cfg)
    if args.interactive:
        InteractiveStepper(config).run()
        return EXIT_OK

    name = args.policy or str(cfg.simulate.policy)
    script: list[str] = []
    if name == Scripted.name:
        if args.script is None:
            raise PsfCoordError("--policy scripted needs --script FILE")
        script = [line.strip() for line in read_source(_existing([args.script])[0]).splitlines()]
        script = [line for line in script if line and not line.startswith("#")]
    seed = args.seed if args.seed is not None else int(cfg.simulate.seed)
    policy = make_policy(name, seed, script)
    trace = simulate(config, policy, args.steps or int(cfg.simulate.steps))
    _write(format_trace_jsonl(trace) if args.json else format_trace(trace), None)
    return EXIT_OK


def _refined(args: argparse.Namespace) -> tuple[FlatSpec, MappingTable, FlatSpec, list[Instantiation]]:
    flat = _load(args.files)
    table = load_mapping_file(_existing([args.mapping])[0])
    audit: list[Instantiation] = []
    refined = refine_system(flat, table, audit)
    return flat, table, refined, audit


def cmd_refine(args: argparse.Namespace, cfg: DictConfig) -> int:
    flat, _, refined, audit = _refined(args)
    _write(render_flat(refined, NAMING.bus_name(flat.root or "System")), args.output)
    if args.audit is not None:
        _write(audit_report(audit), args.audit)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, cfg: DictConfig) -> int:
    flat, table, refined, audit = _refined(args)
    fuse, memo_size = _semantics_options(cfg)
    abstract = root_configuration(flat, recursion_fuse=fuse, memo_size=memo_size)
    concrete = stub_application(refined).configuration(fuse, memo_size)
    verdict = check_vertical(abstract, concrete, table, args.depth or int(cfg.verify.depth), audit)
    sys.stdout.write(verdict.render() + "\n")
    return EXIT_OK if verdict.equal else EXIT_FINDINGS


def cmd_animate(args: argparse.Namespace, cfg: DictConfig) -> int:
    flat = _load(args.files)
    if args.level == "arch":
        graph = architecture_graph(flat)
    elif args.level == "toolbus":
        graph = toolbus_graph(flat)
    else:
        graph = comm_graph(flat)
    _write(emit_dot(graph), args.output)
    return EXIT_OK


def cmd_extract_script(args: argparse.Namespace, cfg: DictConfig) -> int:
    flat = _load(args.files)
    _write(extract_script(assemble(flat)), args.output)
    return EXIT_OK


COMMANDS = {
    "parse": cmd_parse,
    "check": cmd_check,
    "simulate": cmd_simulate,
    "refine": cmd_refine,
    "verify": cmd_verify,
    "animate": cmd_animate,
    "extract-script": cmd_extract_script,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    cfg = load_settings(args.overrides)
    level = "DEBUG" if args.verbose else str(cfg.logging.level)
    log_dir = Path(cfg.logging.log_dir) if cfg.logging.log_dir else None
    configure_logging(level=level, log_dir=log_dir, force=True)
    color = args.color or str(cfg.diagnostics.color)

    try:
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"{parser.prog}: error: {exc}\n")
        return EXIT_USAGE
    except MissingFile as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_ERROR
    except PsfCoordError as exc:
        sys.stderr.write(format_error(exc, use_color(sys.stderr, color)) + "\n")
        return EXIT_ERROR
    except OSError as exc:
        report(sys.stderr, str(exc), mode=color)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
