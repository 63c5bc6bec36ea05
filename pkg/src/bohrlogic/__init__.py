"""Exact intuitionistic quantum logic of n-level systems.

Contexts (commutative subalgebras of M_n(C)) are handled through their
atoms; the frame O(Σ) of monotone projection-valued maps over a finite
context poset carries the Heyting operations, the Gelfand transform, the
state-proposition pairing and Kochen-Specker searches.  All arithmetic is
over the Gaussian rationals.
"""

from .contexts import (
    Context,
    ContextError,
    ContextPoset,
    IrrationalSpectrumError,
    bottom_context,
    build_poset,
    context_from_blocks,
    context_from_commuting,
    diagonal_context,
    enumerate_young,
    intersect,
    p_sphere,
    sphere_context,
    young_to_flag,
)
from .frame import (
    CapExceeded,
    FrameError,
    SigmaOpen,
    UpperSet,
    bot,
    chi_up,
    double_neg,
    enumerate_frame,
    heyting_implies,
    heyting_neg,
    join,
    meet,
    s_p,
    top,
)
from .gelfand import RationalOpen, bohrified_transform, finite_spectrum, spectral_projection
from .kernels import BACKEND
from .kochen_specker import (
    FramePoint,
    RaySet,
    Valuation,
    find_points,
    parity_obstruction,
    pt_of_point,
    valuation_search,
)
from .linalg import CMatrix, DimensionError, GaussianRational, NotAProjectionError
from .states import State, StateError, measure_component, pairing

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CMatrix",
    "CapExceeded",
    "Context",
    "ContextError",
    "ContextPoset",
    "DimensionError",
    "FrameError",
    "FramePoint",
    "GaussianRational",
    "IrrationalSpectrumError",
    "NotAProjectionError",
    "RationalOpen",
    "RaySet",
    "SigmaOpen",
    "State",
    "StateError",
    "UpperSet",
    "Valuation",
    "bohrified_transform",
    "bot",
    "bottom_context",
    "build_poset",
    "chi_up",
    "context_from_blocks",
    "context_from_commuting",
    "diagonal_context",
    "double_neg",
    "enumerate_frame",
    "enumerate_young",
    "find_points",
    "finite_spectrum",
    "heyting_implies",
    "heyting_neg",
    "intersect",
    "join",
    "measure_component",
    "meet",
    "p_sphere",
    "pairing",
    "parity_obstruction",
    "pt_of_point",
    "s_p",
    "spectral_projection",
    "sphere_context",
    "top",
    "valuation_search",
    "young_to_flag",
]
