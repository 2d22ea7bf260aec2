"""Skein-theoretic Yang-Mills measures on closed surfaces."""

from .errors import (AdmissibilityError, DegenerateError, DivergenceError, DomainError, GenusError,
                     InternalError, RegimeError, SkeinError, SpineError)
from .numerics import Param, Regime, ScaledArray, ScaledScalar
from .recoupling import admissible, quantum_factorial, quantum_int, sixj, tet, theta
from .annulus import AnnulusElement, annulus_mul, annulus_pairing, annulus_ym, kirby_partial
from .torus import PairClass, TorusElement, commutator, mu, torus_mul, torus_ym
from .surface import (ColoredSpine, SeriesResult, canonical_spine, divergence_probe, ladder_spine,
                      ym_closed, ym_root, ym_witten)

__all__ = [
    "AdmissibilityError", "DegenerateError", "DivergenceError", "DomainError", "GenusError",
    "InternalError", "RegimeError", "SkeinError", "SpineError",
    "Param", "Regime", "ScaledArray", "ScaledScalar",
    "admissible", "quantum_factorial", "quantum_int", "sixj", "tet", "theta",
    "AnnulusElement", "annulus_mul", "annulus_pairing", "annulus_ym", "kirby_partial",
    "PairClass", "TorusElement", "commutator", "mu", "torus_mul", "torus_ym",
    "ColoredSpine", "SeriesResult", "canonical_spine", "divergence_probe", "ladder_spine",
    "ym_closed", "ym_root", "ym_witten",
]
