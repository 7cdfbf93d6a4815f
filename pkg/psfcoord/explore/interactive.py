"""Пошаговый режим в терминале: меню разрешенных переходов и выбор по номеру."""

from __future__ import annotations

import sys
from collections.abc import Callable
from typing import TextIO

from psfcoord.errors import InvalidChoice
from psfcoord.semantics.canonical import Configuration, Transition
from psfcoord.semantics.sos import is_final


def step_interactive(config: Configuration) -> tuple[list[Transition], Callable[[str], Configuration]]:
    """Меню переходов и функция применения выбора.

    Функция принимает строку с номером и возвращает следующую конфигурацию;
    неверный номер дает :class:`InvalidChoice`.
    """
    transitions = config.enabled()

    def apply(choice: str) -> Configuration:
        text = choice.strip()
        if not text.isdigit() or int(text) >= len(transitions):
            raise InvalidChoice(text)
        return transitions[int(text)].target

    return transitions, apply


class InteractiveStepper:
    """Сессия пошагового выполнения поверх потоков ввода/вывода."""

    def __init__(self, config: Configuration, stdin: TextIO | None = None, stdout: TextIO | None = None):
        self.config = config
        self.stdin = stdin or sys.stdin
        self.stdout = stdout or sys.stdout
        self.history: list[Transition] = []

    def _print(self, text: str) -> None:
        self.stdout.write(text + "\n")
        self.stdout.flush()

    def run(self) -> Configuration:
        """Цикл: меню, ввод номера; ``q`` или конец ввода завершают сессию."""
        while True:
            transitions, apply = step_interactive(self.config)
            if not transitions:
                self._print("terminated" if is_final(self.config) else "deadlock")
                return self.config
            for i, transition in enumerate(transitions):
                self._print(f"[{i}] {transition.label.render()}")
            self.stdout.write("> ")
            self.stdout.flush()
            line = self.stdin.readline()
            if not line or line.strip() == "q":
                return self.config
            try:
                target = apply(line)
            except InvalidChoice as exc:
                self._print(str(exc))
                continue
            self.history.append(transitions[int(line.strip())])
            self.config = target
