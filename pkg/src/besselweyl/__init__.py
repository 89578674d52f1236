"""Spectral toolkit for the Bessel operator -d^2/dx^2 + (nu^2 - 1/4)/x^2, nu in [0, 1),
on (0, b) and on the half-line."""
from .errors import (BranchError, DivergentIntegralError, DomainError, LimitNonConvergenceError,
                     NumericalError, PoleError)
from .special_fn import CutComplex, Order
from .types import ExtensionParam, IntervalSpec, Method, SpectrumResult
from .triplet import boundary_values, deficiency_element, gamma0, gamma1, green_identity_residual
from .weyl import (spectral_density, nevanlinna_reconstruct, weyl_finite, weyl_halfline,
                   weyl_limits, convergence_table)
from .extensions import classify_extension, count_negative_eigenvalues, eigenvalues, krein_parameter

__version__ = "0.1.0"
