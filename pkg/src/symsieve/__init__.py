"""Exact character sums and bilinear-form norms for the Eisenstein family."""
from ._accel import USE_NUMBA
from .arith import DomainError, NotInvertibleError, factorize
from .characters import DirichletCharacter, enumerate_characters
from .fhat import fhat, fhat_closed, fhat_direct

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "DomainError", "NotInvertibleError", "factorize",
    "DirichletCharacter", "enumerate_characters", "fhat", "fhat_closed", "fhat_direct",
    "__version__",
]
