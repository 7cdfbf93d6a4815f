"""Исследование пространства состояний, симуляция и пошаговый режим."""

from psfcoord.explore.interactive import InteractiveStepper, step_interactive
from psfcoord.explore.lts import LTS, ExploreBounds, can_reach, deadlocks, explore
from psfcoord.explore.simulate import FirstEnabled, Scripted, SeededRandom, Trace, replay, simulate
from psfcoord.explore.trace_io import format_trace, format_trace_jsonl
