"""Finite modular lattices with a Boolean frame, their automorphism groups,
net collections, and checkers for the structural conditions and theorems
about subgroups containing the frame stabilizer."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .lattice import FiniteLattice, build_lattice, is_modular
from .frame import BooleanFrame, build_frame
from .autgroup import AutGroup, generate_group
from .instance import Instance
from .rings import FiniteRing, build_ring
from .modules import gl_action, submodule_lattice
from .models import abstract_instances, gl_instance, load_model
from .nets import NetCollection, enumerate_nets, sigma_of
from .conditions import ConditionReport, check_all, check_condition, replay
from .verify import (bv_classify, enumerate_intermediate, verify_lemma1, verify_lemma2,
                     verify_theorem1, verify_theorem2)
