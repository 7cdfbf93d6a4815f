import io
import logging

from omegaconf import OmegaConf

from psfcoord.errors import SourcePos, UnresolvedImport
from psfcoord.settings import DEFAULTS, load_settings
from psfcoord.utils.diagnostics import format_diagnostic, format_error, report, use_color
from psfcoord.utils.log_config import configure_logging


def test_defaults_from_conf():
    cfg = load_settings()
    assert cfg.explore.max_states == 100_000
    assert cfg.simulate.policy == "seeded-random"
    assert cfg.verify.depth == 8


def test_overrides():
    cfg = load_settings(["explore.max_states=500", "simulate.seed=7"])
    assert cfg.explore.max_states == 500
    assert cfg.simulate.seed == 7


def test_builtin_defaults_without_conf_dir(tmp_path):
    cfg = load_settings(["verify.depth=3"], conf_dir=tmp_path)
    assert cfg.verify.depth == 3
    assert OmegaConf.to_container(cfg.explore) == DEFAULTS["explore"]


def test_color_from_environment(monkeypatch):
    monkeypatch.setenv("PSFCOORD_COLOR", "always")
    assert load_settings().diagnostics.color == "always"
    assert use_color(io.StringIO(), "never")


def test_auto_color_needs_a_terminal(monkeypatch):
    monkeypatch.delenv("PSFCOORD_COLOR", raising=False)
    assert not use_color(io.StringIO(), "auto")
    assert use_color(io.StringIO(), "always")


def test_error_format():
    error = UnresolvedImport("Nowhere", SourcePos("ide.psf", 3, 5))
    assert format_error(error) == "ide.psf:3:5: unresolved import: module 'Nowhere' is not declared"
    assert format_diagnostic("careful", kind="warning") == "warning: careful"
    colored = format_error(error, color=True)
    assert colored.startswith("\033[1mide.psf:3:5:\033[0m \033[31munresolved import")


def test_report(monkeypatch):
    monkeypatch.delenv("PSFCOORD_COLOR", raising=False)
    stream = io.StringIO()
    report(stream, "boom", where="x.map:1:1", mode="never")
    assert stream.getvalue() == "x.map:1:1: boom\n"


def test_reconfiguring_logging_closes_file_handlers(tmp_path):
    root = logging.getLogger()
    configure_logging(level="INFO", log_dir=tmp_path, log_to_stderr=False, force=True)
    (file_handler,) = [h for h in root.handlers if isinstance(h, logging.FileHandler)]
    logging.getLogger("psfcoord.test").info("первая запись")
    try:
        configure_logging(level="WARNING", log_to_stderr=False, force=True)
        assert file_handler not in root.handlers
        assert file_handler.stream is None
    finally:
        configure_logging(force=True)
    assert "первая запись" in (tmp_path / "psfcoord.log").read_text(encoding="utf-8")
