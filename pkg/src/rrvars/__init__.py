"""Reflective, refractive and redundant variables for a small C-like language.

A ``ref_t`` variable mirrors a sensor (reflective) and/or forwards writes to
an actuator (refractive); a ``redundant`` variable is stored in several
replicas and read by majority vote, with the replication degree adapted to
the disturbance seen by the votes.
"""
from .devices import DeviceConfig, DeviceEvent, DeviceSpec, EventQueue
from .errors import RRError
from .interpreter import RunResult, run
from .lang import parse, pretty_print, tokenize
from .redundancy import FaultScenario, RedundanceState, VoteResult, controller_step, inject_faults, vote
from .registry import CellStore, Registry, VarDescriptor
from .runtime import Runtime, simulate
from .translator import RegistrationPlan, emit_prologue, rewrite_body, strip_attributes, translate
from .values import Kind, TypeCode

__version__ = "0.1.0"
