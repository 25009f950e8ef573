"""Construction and verification of DDVV equality submanifolds in codimension two.

A conjugate pair of minimal surfaces, packaged as an isotropic holomorphic
curve G = g + ih, is turned into an n-dimensional submanifold of R^(n+2)
attaining equality in the DDVV inequality.  The modules provide the
expression language for G, second-order jets, the construction itself,
curvature diagnostics, ambient conformal maps and the command line tool.
"""

from .catalog import CATALOG, builtin
from .construction import ChartPoint, GridSpec, phi_jets, sample_grid
from .errors import DdvvError
from .expr import eval_jet, evaluate, parse, unparse
from .geometry import (ShapeData, austere_test, canonical_frame, curvatures,
                       ddvv_residual, fundamental_forms, shape_operator,
                       synthesize, traceless_commutator)
from .jets import Jet
from .surface import HolomorphicCurve, check_isotropy, eval_surface, split
from .transforms import (AmbientMap, apply_map, holo_invert, normal_transport,
                         quadric_classify, quadric_value, shape_law_check,
                         theorem4_compare)

__all__ = [
    "CATALOG", "builtin", "ChartPoint", "GridSpec", "phi_jets", "sample_grid", "DdvvError",
    "eval_jet", "evaluate", "parse", "unparse", "ShapeData", "austere_test", "canonical_frame",
    "curvatures", "ddvv_residual", "fundamental_forms", "shape_operator", "synthesize",
    "traceless_commutator", "Jet", "HolomorphicCurve", "check_isotropy", "eval_surface", "split",
    "AmbientMap", "apply_map", "holo_invert", "normal_transport", "quadric_classify",
    "quadric_value", "shape_law_check", "theorem4_compare",
]
