"""
eluder
======

Subpackage for weighted uncertainty widths and the generalized Eluder
dimension.

Modules
-------
gram_inverse
    Gram matrix with a Sherman-Morrison inverse.
uncertainty
    Online D^2 queries over a weighted history.
eluder_dim
    Generalized Eluder dimension of a realized sequence.
"""

from .eluder_dim import eluder_terms, gen_eluder_dim, linear_eluder_bound
from .gram_inverse import GramInverse
from .uncertainty import UncertaintyContext

__all__ = [
    "eluder_terms",
    "gen_eluder_dim",
    "linear_eluder_bound",
    "GramInverse",
    "UncertaintyContext",
]
