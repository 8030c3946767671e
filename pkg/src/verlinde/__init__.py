"""Exact K-theoretic Donaldson series of algebraic surfaces.

The package computes instanton and monopole generating functions by
torus localization on Hilbert schemes of points of toric surfaces, in
exact arithmetic over Q(y^(1/2)), extracts the universal power series
governing them for arbitrary surfaces, and verifies the conjectural
closed-form answers built from theta functions and the Dedekind eta
function.
"""

from .rational import YCoeff
from .series import TruncatedSeries

__all__ = ["YCoeff", "TruncatedSeries"]
__version__ = "0.1.0"
