"""Skein algebra of the annulus in the basis ``s_i`` (core colored by the
i-th Jones-Wenzl idempotent)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import RegimeError
from .numerics import Param, Regime, ScaledScalar
from .recoupling import quantum_int

# Coefficients whose binary exponent leaves this window are kept scaled.
_SCALED_WINDOW = 500


def _compact(x):
    if isinstance(x, ScaledScalar):
        if x.sig == 0:
            return 0
        if -_SCALED_WINDOW <= x.exp <= _SCALED_WINDOW:
            z = x.to_complex()
            return z.real if z.imag == 0 else z
    return x


def _is_zero(x) -> bool:
    return x.sig == 0 if isinstance(x, ScaledScalar) else x == 0


@dataclass(frozen=True)
class AnnulusElement:
    """Finite combination ``sum coeffs[i] * s_i``; zero entries are never stored."""

    coeffs: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for i, c in self.coeffs.items():
            if i < 0:
                raise ValueError("annulus colors are nonnegative")
            c = _compact(c)
            if not _is_zero(c):
                clean[int(i)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def basis(cls, i: int, coeff=1) -> "AnnulusElement":
        return cls({i: coeff})

    def __add__(self, other: "AnnulusElement") -> "AnnulusElement":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out[i] + c if i in out else c
        return AnnulusElement(out)

    def __sub__(self, other: "AnnulusElement") -> "AnnulusElement":
        return self + other.scale(-1)

    def scale(self, k) -> "AnnulusElement":
        return AnnulusElement({i: c * k for i, c in self.coeffs.items()})

    def coefficient(self, i: int):
        return self.coeffs.get(i, 0)

    def __eq__(self, other):
        if not isinstance(other, AnnulusElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))


def _max_color(p: Param | None) -> int | None:
    if p is not None and p.regime is Regime.ROOT_OF_UNITY:
        return p.r - 2
    return None


def annulus_mul(p: Param | None, x: AnnulusElement, y: AnnulusElement) -> AnnulusElement:
    """``s_i * s_j = sum_{q = |i-j|, step 2}^{i+j} s_q``, extended bilinearly.

    At a root of unity colors above ``r-2`` are dropped after the product.
    """
    top = _max_color(p)
    out: dict[int, object] = {}
    for i, a in x.coeffs.items():
        for j, b in y.coeffs.items():
            ab = a * b
            hi = i + j if top is None else min(i + j, top)
            for q in range(abs(i - j), hi + 1, 2):
                out[q] = out[q] + ab if q in out else ab
    return AnnulusElement(out)


def annulus_ym(x: AnnulusElement):
    return x.coefficient(0)


def annulus_pairing(p: Param | None, x: AnnulusElement, y: AnnulusElement):
    return annulus_ym(annulus_mul(p, x, y))


def kirby_partial(p: Param, n: int) -> AnnulusElement:
    """``sum_{i=0}^{n} (-1)^i [i+1] s_i``, capped at ``r-2`` at roots of unity."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    top = _max_color(p)
    if top is not None:
        n = min(n, top)
    return AnnulusElement({i: quantum_int(p, i + 1) * (-1 if i % 2 else 1) for i in range(n + 1)})


def solve_handleslide_coeffs(p: Param, n: int) -> list[ScaledScalar]:
    """Coefficients ``alpha_0 .. alpha_n`` of the annulus element killing the
    handle-slide differences ``s_1 * s_k + [2] s_k``, normalized to ``alpha_0 = 1``.

    Each pairing condition is linear in the next unknown coefficient, which
    is solved for in turn.
    """
    if p.regime not in (Regime.GENERIC_REAL, Regime.CLASSICAL):
        raise RegimeError("handle-slide recursion is solved for real generic or classical t")
    two = quantum_int(p, 2)
    alpha: list[ScaledScalar] = [ScaledScalar.from_float(1.0)]
    for k in range(n):
        test = annulus_mul(None, AnnulusElement.basis(1), AnnulusElement.basis(k)) + AnnulusElement({k: two})
        # <sum alpha_i s_i, test> = sum_i alpha_i * test_i; s_{k+1} is the only unknown
        known = ScaledScalar.from_float(0.0)
        lead = None
        for i, c in test.coeffs.items():
            if i == k + 1:
                lead = c
            else:
                known = known + alpha[i] * c
        alpha.append(-known / lead)
    return alpha
