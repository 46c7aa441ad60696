"""Symbolic dynamics and recurrence-set dimension toolkit for the 2-torus."""

from .algebra import (
    NotHyperbolic,
    QuadContext,
    QuadNum,
    Rational,
    Spectrum,
    ToralAutomorphism,
    TorusPoint,
    iterate_point,
    quad_sign,
    spectrum,
    torus_distance,
)

__all__ = [
    "NotHyperbolic",
    "QuadContext",
    "QuadNum",
    "Rational",
    "Spectrum",
    "ToralAutomorphism",
    "TorusPoint",
    "iterate_point",
    "quad_sign",
    "spectrum",
    "torus_distance",
]

__version__ = "0.1.0"
