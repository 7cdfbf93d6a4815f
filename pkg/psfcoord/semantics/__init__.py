"""Операционная семантика термов процессов."""

from psfcoord.semantics.actions import ActionLabel, communicate
from psfcoord.semantics.canonical import Configuration, Transition, canonical
from psfcoord.semantics.sos import Semantics, enabled, is_final, root_configuration
from psfcoord.semantics.star_law import traces, unfold_star_law_check
