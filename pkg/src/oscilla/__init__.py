"""Numerical toolkit for the special-function series S(b, nu; w; t), its
Bessel/Gegenbauer asymptotics, and dispersive bounds of propagator kernels."""

__version__ = "0.1.0"
