"""Exact anti-forcing polynomials of catacondensed hexagonal systems."""

from .engine import (
    MemoCache,
    Spectrum,
    af_poly,
    brute_af_poly,
    chain_af_poly,
    family_closed_form,
    family_poly,
    family_R_closed_form,
    family_system,
    spectrum,
)
from .exceptions import (
    AdjacentFusionError,
    AfpolyError,
    DanglingReferenceError,
    HexSyntaxError,
    HexSystemError,
    InvariantError,
    OverlapError,
    SizeGuardError,
)
from .hexmodel import HexSystem, canonical_key, find_tail, generate_all, parse_system, segments, subsystems
from .poly import Polynomial

__version__ = "0.1.0"
