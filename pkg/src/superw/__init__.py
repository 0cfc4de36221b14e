"""Classical SUSY W-algebra generators for gl, sl and osp.

The generators are D-coefficients of row determinants of operator matrices;
``verify`` checks membership, conformal weights and free generation.
"""

from .liesuper import AlgebraSpec, Family, LieBasis
from .superpoly import DiffPoly, Symbol
from .chibra import AffinePVA
from .dops import DOp, FloorExhausted, compose, adjoint_star
from .wgen import GeneratorSet, Report, generators, identities, verify

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "Family",
    "LieBasis",
    "DiffPoly",
    "Symbol",
    "AffinePVA",
    "DOp",
    "FloorExhausted",
    "compose",
    "adjoint_star",
    "GeneratorSet",
    "Report",
    "generators",
    "identities",
    "verify",
]
