"""Collectives of stateless automata on lattice environments: simulation,
body kinematics, exact reference-frame algebra and affine isomorphism."""

from .environment import (
    Arc,
    DirectionSet,
    Environment,
    LatticeCoord,
    Torus,
    check_actual_direction_count,
    make_standard_environment,
)
from .engine import interpolate, make_world, neighbourhood, place, run, step
from .bodies import Body, assign_proper_time, detect_period
from .frames import build_basis, frame_map, lambda_from_motion, motion_from_lambda
from .isomorphism import affine_isomorphic, internal_state_key, own_frame_snapshot
from .scenario import load_scenario

__version__ = "0.1.0"
