"""Exact computation in quantum matrices O_q(M(m,n)) and the quantum
grassmannian O_q(G(k,n)), with a harness that checks their structure."""

from .scalar import ONE, Q, ZERO, QScalar
from .qmatrix import (
    AlgebraShape,
    NCPoly,
    Relations,
    generator,
    nc_mul,
    quantum_determinant,
    quantum_minor,
    word_normal_form,
)
from .grassmann import GrassShape, LocalizedElement, loc_eq, straighten
from .dehom import TElement, dehom_backward, dehom_forward
from .autos import AutoSpec, H0Element, H1Element, auto_apply, h0_from_root, realize_in_h0
from .expr import RingContext, parse_expr, render
from .checks import CATALOG, run_all, run_check

__version__ = "0.1.0"
