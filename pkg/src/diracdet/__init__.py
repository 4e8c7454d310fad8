"""Exact symbolic computation of the divergent parts of Dirac-operator determinants."""

from .scalars import GaussianRational, PiCoefficient

__version__ = "0.1.0"

__all__ = ["GaussianRational", "PiCoefficient", "__version__"]
