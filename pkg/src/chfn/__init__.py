"""Invariants, reconstruction and gluing for loxodromic pairs in SU(3,1)."""
from .errors import ChfnError, NumericalError, ValidationError
from .hermitian import (
    DEFAULT_TOL,
    H,
    INFINITY,
    ORIGIN,
    GroupElement,
    bergman_distance,
    certify_group_element,
    classify_vector,
    complete_frame,
    herm_form,
    indefinite_gram_schmidt,
    standard_lift,
)
from .kernels import BACKEND

__version__ = "0.1.0"
