"""Настройки пакета: Hydra compose поверх ``conf/psfcoord.yaml``.

CLI читает настройки один раз, затем накладывает свои флаги. Если каталога
``conf`` нет (пакет установлен без исходников), используются те же значения
по умолчанию из :data:`DEFAULTS`.
"""

from __future__ import annotations

import os
from collections.abc import Sequence
from pathlib import Path

from hydra import compose, initialize_config_dir
from hydra.core.global_hydra import GlobalHydra
from omegaconf import DictConfig, OmegaConf

from psfcoord.utils.log_config import get_logger


PROJECT_ROOT = Path(__file__).resolve().parents[1]
CONF_DIR = PROJECT_ROOT / "conf"
CONFIG_NAME = "psfcoord"
COLOR_ENV = "PSFCOORD_COLOR"

logger = get_logger(__name__)

DEFAULTS = {
    "explore": {"max_states": 100_000, "max_depth": 10_000, "max_transitions": 1_000_000, "workers": 1},
    "semantics": {"recursion_fuse": 10_000, "memo_size": 262_144},
    "simulate": {"policy": "seeded-random", "seed": 42, "steps": 100},
    "verify": {"depth": 8},
    "logging": {"level": "WARNING", "log_dir": None},
    "diagnostics": {"color": "auto"},
}


def load_settings(overrides: Sequence[str] = (), conf_dir: Path | None = None) -> DictConfig:
    """Собрать конфиг.

    Args:
        overrides: Переопределения Hydra вида ``explore.max_states=500``.
        conf_dir: Каталог конфигов; по умолчанию ``conf`` в корне проекта.

    Returns:
        DictConfig: Настройки; ``diagnostics.color`` учитывает ``PSFCOORD_COLOR``.
    """
    conf_dir = conf_dir or CONF_DIR
    if (conf_dir / f"{CONFIG_NAME}.yaml").exists():
        if GlobalHydra.instance().is_initialized():
            GlobalHydra.instance().clear()
        with initialize_config_dir(config_dir=str(conf_dir.resolve()), version_base="1.3"):
            cfg = compose(config_name=CONFIG_NAME, overrides=list(overrides))
    else:
        logger.debug("Каталог конфигов %s не найден, беру значения по умолчанию", conf_dir)
        cfg = OmegaConf.merge(OmegaConf.create(DEFAULTS), OmegaConf.from_dotlist(list(overrides)))

    color = os.environ.get(COLOR_ENV)
    if color:
        OmegaConf.update(cfg, "diagnostics.color", color)
    return cfg
