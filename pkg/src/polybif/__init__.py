"""Exact and numerical bifurcation analysis for one-parameter polynomial maps.

The exact layer (``poly``, ``algebraic``, ``period``) works over the rationals
and real algebraic numbers; the numerical layer (``continuation``,
``diagram``) runs in double precision on compiled kernels when available.
"""

from ._version import __version__
from .algebraic import AlgebraicRoot, Interval, RootField, isolate_real_roots
from .continuation import (
    BifurcationEvent,
    OrbitBranch,
    OrbitPoint,
    classify_stability,
    continue_branch,
    newton_orbit,
    seed_points,
)
from .detect import BubbleReport, bubble_closed_form, detect, refine_transition, scan_counts
from .diagram import DiagramDataset, orbit_diagram, render_svg
from .families import MapFamily, builtin, eval_map, verify_conjugacy
from .kernels import BACKEND
from .period import (
    count_period_points,
    dynatomic,
    square_certificate,
    tangent_parameters,
)
from .poly import (
    ParamPoly,
    UniPoly,
    compose,
    descartes_changes,
    gcd,
    poly_divmod,
    resultant,
    resultant_x,
    sturm_chain,
    sturm_count,
)

__all__ = [
    "__version__", "BACKEND",
    "AlgebraicRoot", "Interval", "RootField", "isolate_real_roots",
    "BifurcationEvent", "OrbitBranch", "OrbitPoint", "classify_stability", "continue_branch",
    "newton_orbit", "seed_points",
    "BubbleReport", "bubble_closed_form", "detect", "refine_transition", "scan_counts",
    "DiagramDataset", "orbit_diagram", "render_svg",
    "MapFamily", "builtin", "eval_map", "verify_conjugacy",
    "count_period_points", "dynatomic", "square_certificate", "tangent_parameters",
    "ParamPoly", "UniPoly", "compose", "descartes_changes", "gcd", "poly_divmod", "resultant",
    "resultant_x", "sturm_chain", "sturm_count",
]
