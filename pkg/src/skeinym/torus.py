"""Skein algebra of the torus in the ``s_(p,q)`` basis.

``s_(p,q)`` for non-coprime ``(p,q)`` is the Chebyshev-type element built
from ``d = gcd(p,q)`` copies of the primitive curve, and ``s_(0,0)`` is
twice the empty skein.  The empty skein is stored separately as
``empty``; ``coeffs`` only holds nonzero classes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .numerics import Param


class PairClass(NamedTuple):
    p: int
    q: int

    @classmethod
    def of(cls, p: int, q: int) -> "PairClass":
        """Canonical representative of ``{(p,q), (-p,-q)}``."""
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        return cls(int(p), int(q))

    @property
    def homology(self) -> tuple[int, int]:
        return (self.p % 2, self.q % 2)


def _t(t) -> complex:
    return t.value if isinstance(t, Param) else complex(t)


@dataclass(frozen=True)
class TorusElement:
    empty: complex = 0j
    coeffs: Mapping[PairClass, complex] = field(default_factory=dict)

    def __post_init__(self):
        empty = complex(self.empty)
        clean: dict[PairClass, complex] = {}
        for key, c in self.coeffs.items():
            k = PairClass.of(*key)
            if k == (0, 0):
                empty += 2 * c
                continue
            clean[k] = clean.get(k, 0j) + complex(c)
        clean = {k: v for k, v in sorted(clean.items()) if v != 0}
        object.__setattr__(self, "empty", empty)
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def unit(cls) -> "TorusElement":
        return cls(1.0)

    @classmethod
    def basis(cls, p: int, q: int, coeff: complex = 1.0) -> "TorusElement":
        return cls(0j, {(p, q): coeff})

    def __add__(self, other: "TorusElement") -> "TorusElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0j) + c
        return TorusElement(self.empty + other.empty, out)

    def scale(self, k: complex) -> "TorusElement":
        return TorusElement(self.empty * k, {key: c * k for key, c in self.coeffs.items()})

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + other.scale(-1)

    def terms(self) -> Iterable[tuple[PairClass, complex]]:
        return self.coeffs.items()


def torus_basis_mul(t, x: PairClass, y: PairClass) -> TorusElement:
    """``s_(p,q) * s_(u,v) = t^D s_(p+u,q+v) + t^-D s_(p-u,q-v)``, ``D = pv - qu``."""
    tv = _t(t)
    (p, q), (u, v) = x, y
    if (p, q) == (0, 0) or (u, v) == (0, 0):
        # s_(0,0) = 2 * empty, which is central
        other = y if (p, q) == (0, 0) else x
        if other == (0, 0):
            return TorusElement(4.0)
        return TorusElement.basis(*other, 2.0)
    det = p * v - q * u
    return TorusElement(0j, {}) + _pair(p + u, q + v, tv ** det) + _pair(p - u, q - v, tv ** -det)


def _pair(p: int, q: int, c: complex) -> TorusElement:
    if (p, q) == (0, 0):
        return TorusElement(2 * c)
    return TorusElement.basis(p, q, c)


def torus_mul(t, x: TorusElement, y: TorusElement) -> TorusElement:
    tv = _t(t)
    empty = x.empty * y.empty
    out: dict[PairClass, complex] = {}
    for k, c in y.coeffs.items():
        out[k] = out.get(k, 0j) + x.empty * c
    for k, c in x.coeffs.items():
        out[k] = out.get(k, 0j) + c * y.empty
    for k1, c1 in x.coeffs.items():
        for k2, c2 in y.coeffs.items():
            prod = torus_basis_mul(tv, k1, k2)
            empty += c1 * c2 * prod.empty
            for k, c in prod.coeffs.items():
                out[k] = out.get(k, 0j) + c1 * c2 * c
    return TorusElement(empty, out)


def commutator(t, x: TorusElement, y: TorusElement) -> TorusElement:
    return torus_mul(t, x, y) - torus_mul(t, y, x)


@dataclass(frozen=True)
class MuImage:
    empty: complex
    homology: dict[tuple[int, int], complex]


HOMOLOGY_CLASSES = ((0, 0), (0, 1), (1, 0), (1, 1))


def mu(x: TorusElement) -> MuImage:
    """Project onto ``C[empty] + C[H_1(T^2; Z/2)]``; kills every commutator."""
    hom = {h: 0j for h in HOMOLOGY_CLASSES}
    for k, c in x.coeffs.items():
        hom[k.homology] += c
    return MuImage(x.empty, hom)


def torus_ym(x: TorusElement) -> complex:
    """Yang-Mills trace on the closed torus: the empty-skein coefficient."""
    return x.empty


def invariant_trace(x: TorusElement, w_empty: complex, w_zero: complex, w_odd: complex) -> complex:
    """Member of the three-parameter family of mapping-class invariant traces:
    weights on the empty skein, on the zero Z/2-class, and on the three
    (mutually equivalent) nonzero classes."""
    m = mu(x)
    odd = sum(v for h, v in m.homology.items() if h != (0, 0))
    return w_empty * m.empty + w_zero * m.homology[(0, 0)] + w_odd * odd


def act_sl2(x: TorusElement, a: int, b: int, c: int, d: int) -> TorusElement:
    """Image under the mapping class ``[[a, b], [c, d]]`` in SL(2, Z)."""
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    return TorusElement(x.empty, {(a * p + b * q, c * p + d * q): v for (p, q), v in x.coeffs.items()})


def chebyshev_power(t, p: int, q: int, d: int) -> TorusElement:
    """``T_d`` of the primitive curve via ``s_d = s_1 * s_(d-1) - s_(d-2)``, ``s_0 = 2``."""
    base = TorusElement.basis(p, q)
    prev, cur = TorusElement(2.0), base
    if d == 0:
        return prev
    for _ in range(d - 1):
        prev, cur = cur, torus_mul(t, base, cur) - prev
    return cur


def load_expression(obj) -> TorusElement:
    """Parse ``[{p, q, re, im}, ...]`` or ``{"terms": [...], "empty": ...}``."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    empty = 0j
    if isinstance(obj, dict):
        e = obj.get("empty", 0)
        empty = complex(e.get("re", 0.0), e.get("im", 0.0)) if isinstance(e, dict) else complex(e)
        terms = obj.get("terms", [])
    else:
        terms = obj
    coeffs: dict[tuple[int, int], complex] = {}
    for term in terms:
        key = (int(term["p"]), int(term["q"]))
        coeffs[key] = coeffs.get(key, 0j) + complex(term.get("re", 0.0), term.get("im", 0.0))
    return TorusElement(empty, coeffs)


def dump_expression(x: TorusElement) -> dict:
    return {
        "empty": {"re": x.empty.real, "im": x.empty.imag},
        "terms": [{"p": k.p, "q": k.q, "re": c.real, "im": c.imag} for k, c in x.coeffs.items()],
    }
