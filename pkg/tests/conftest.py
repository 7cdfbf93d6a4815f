from __future__ import annotations

from pathlib import Path

import pytest

from psfcoord.lang.pretty import render_flat
from psfcoord.lang.resolve import FlatSpec, load_flat
from psfcoord.refine.mapping import load_mapping_file
from psfcoord.refine.refine import NAMING, Instantiation, refine_system


FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

ARCH_SINGLE = FIXTURES / "ide-arch-single.psf"
ARCH_MULTI = FIXTURES / "ide-arch-multi.psf"
ARCH_NOEVENTS = FIXTURES / "ide-arch-multi-noevents.psf"
ARCH = FIXTURES / "ide-arch.psf"
MAP = FIXTURES / "ide.map"
MAP_SINGLE = FIXTURES / "ide-single.map"
TOOLS = FIXTURES / "ide-tools.psf"
APP = FIXTURES / "ide-app.psf"

COMPONENTS = (
    "Function",
    "ModuleManager",
    "EditorManager",
    "Compiler",
    "ErrorViewer",
    "LibraryManager",
    "Simulator",
    "AnimationGenerator",
)


@pytest.fixture(scope="session")
def arch() -> FlatSpec:
    return load_flat([ARCH])


@pytest.fixture(scope="session")
def table():
    return load_mapping_file(MAP)


@pytest.fixture(scope="session")
def refined_with_audit(arch, table) -> tuple[FlatSpec, list[Instantiation]]:
    audit: list[Instantiation] = []
    return refine_system(arch, table, audit), audit


@pytest.fixture(scope="session")
def refined(refined_with_audit) -> FlatSpec:
    return refined_with_audit[0]


@pytest.fixture(scope="session")
def refined_file(tmp_path_factory, arch, refined) -> Path:
    """Уточненная архитектура в виде исходника (модули PIDEData и PIDE)."""
    path = tmp_path_factory.mktemp("refined") / "ide-refined.psf"
    path.write_text(render_flat(refined, NAMING.bus_name(arch.root)), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def app_files(refined_file) -> list[Path]:
    return [refined_file, TOOLS, APP]


@pytest.fixture(scope="session")
def app_flat(app_files) -> FlatSpec:
    return load_flat(app_files)
