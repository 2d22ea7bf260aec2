"""Quantum integers, theta and tetrahedral evaluations, 6j symbols.

All evaluations go through per-parameter tables of ``[n]`` and ``[n]!`` held
as :class:`ScaledArray`.  The ``*_many`` functions take integer numpy arrays
of labels and assume admissibility has already been checked; the scalar
functions validate and raise.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, DegenerateError, DomainError, InternalError, RegimeError
from .numerics import Param, Regime, ScaledArray, ScaledScalar

_CHUNK = 256


def _cexpm1(z: complex) -> complex:
    """exp(z) - 1 without cancellation for small |z|."""
    x, y = z.real, z.imag
    if y == 0:
        return complex(math.expm1(x))
    s = math.sin(0.5 * y)
    return complex(math.expm1(x) * math.cos(y) - 2.0 * s * s, math.exp(x) * math.sin(y))


def _cexpm1_many(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    s = np.sin(0.5 * y)
    return (np.expm1(x) * np.cos(y) - 2.0 * s * s) + 1j * (np.exp(x) * np.sin(y))


def _qint_values(p: Param, n: np.ndarray) -> ScaledArray:
    reg = p.regime
    nf = n.astype(np.float64)
    if reg is Regime.CLASSICAL:
        return ScaledArray.from_values(nf)
    if reg is Regime.ROOT_OF_UNITY:
        r = p.r
        m = n % (2 * r)
        vals = np.sin(np.pi * m / r) / math.sin(math.pi / r)
        vals = np.where(n % r == 0, 0.0, vals)
        return ScaledArray.from_values(vals)
    u = p.value * p.value
    if reg is Regime.UNIT_CIRCLE:
        phi = cmath.phase(u)
        return ScaledArray.from_values(np.sin(nf * phi) / math.sin(phi))
    # log(u) taken from t directly so tiny or huge |t| does not under/overflow u
    L = 2 * cmath.log(p.value)
    if L.real > 0:
        L = -L
    # [n] = u**-(n-1) * expm1(2nL) / expm1(2L)
    denom = _cexpm1(2 * L)
    ratio = _cexpm1_many(2 * nf * L.real, 2 * nf * L.imag) / denom
    log2mag = -(nf - 1) * (L.real / math.log(2))
    phase = -(nf - 1) * L.imag
    e = np.floor(log2mag)
    sig = ratio * np.exp2(log2mag - e) * np.exp(1j * phase)
    if u.imag == 0 and u.real > 0:
        sig = sig.real + 0j
    return ScaledArray(sig, e.astype(np.int64))


class _Tables:
    """Growing tables of ``[n]`` and ``[n]!`` for one parameter."""

    def __init__(self, p: Param):
        self.p = p
        self.lock = threading.Lock()
        self.qint = ScaledArray(np.zeros(1, np.complex128), np.zeros(1, np.int64), normalized=True)
        self.fact = ScaledArray.ones(1)
        self.cap = None
        if p.regime is Regime.ROOT_OF_UNITY:
            self.cap = p.r - 1  # [r] = 0, so [n]! vanishes for n >= r

    def ensure(self, n: int) -> None:
        if n < len(self.fact):
            return
        with self.lock:
            size = len(self.fact)
            if n < size:
                return
            target = max(n + 1, 2 * size, 64)
            new_n = np.arange(size, target, dtype=np.int64)
            q = _qint_values(self.p, new_n)
            sig_parts, exp_parts = [], []
            prev_sig = complex(self.fact.sig[-1])
            prev_exp = int(self.fact.exp[-1])
            for start in range(0, len(new_n), _CHUNK):
                qs = q.sig[start:start + _CHUNK]
                qe = q.exp[start:start + _CHUNK]
                cs = prev_sig * np.cumprod(qs)
                ce = prev_exp + np.cumsum(qe)
                chunk = ScaledArray(cs, ce)
                sig_parts.append(chunk.sig)
                exp_parts.append(chunk.exp)
                prev_sig, prev_exp = complex(chunk.sig[-1]), int(chunk.exp[-1])
            fact = ScaledArray(np.concatenate([self.fact.sig] + sig_parts),
                               np.concatenate([self.fact.exp] + exp_parts), normalized=True)
            qint = ScaledArray(np.concatenate([self.qint.sig, q.sig]),
                               np.concatenate([self.qint.exp, q.exp]), normalized=True)
            # publish factorials last so readers that pass the length check see both
            self.qint = qint
            self.fact = fact


_TABLES: dict[Param, _Tables] = {}
_TABLES_LOCK = threading.Lock()


def _tables(p: Param) -> _Tables:
    tab = _TABLES.get(p)
    if tab is None:
        with _TABLES_LOCK:
            tab = _TABLES.setdefault(p, _Tables(p))
    return tab


def qint_many(p: Param, n) -> ScaledArray:
    n = np.asarray(n, dtype=np.int64)
    tab = _tables(p)
    tab.ensure(int(n.max()) if n.size else 0)
    q = tab.qint
    return ScaledArray(q.sig[n], q.exp[n], normalized=True)


def qfact_many(p: Param, n) -> ScaledArray:
    n = np.asarray(n, dtype=np.int64)
    tab = _tables(p)
    top = int(n.max()) if n.size else 0
    if tab.cap is not None and top > tab.cap:
        raise DomainError(f"[{top}]! vanishes at r = {p.r}")
    tab.ensure(top)
    f = tab.fact
    return ScaledArray(f.sig[n], f.exp[n], normalized=True)


def quantum_int(p: Param, n: int) -> ScaledScalar:
    """``[n] = (t^2n - t^-2n) / (t^2 - t^-2)``; ``n`` itself at ``t = +-1``."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return qint_many(p, [n]).item(0)


def quantum_factorial(p: Param, n: int) -> ScaledScalar:
    if n < 0:
        raise DomainError("n must be nonnegative")
    if p.regime is Regime.ROOT_OF_UNITY and n >= p.r:
        raise DomainError(f"[{n}]! contains [r] = 0 at r = {p.r}")
    return qfact_many(p, [n]).item(0)


def admissible(p: Param | None, a: int, b: int, c: int) -> bool:
    """Even sum and triangle inequalities; at ``exp(i pi/2r)`` also every
    color <= r-2 and ``a+b+c <= 2r-4``."""
    if min(a, b, c) < 0 or (a + b + c) % 2:
        return False
    if a > b + c or b > a + c or c > a + b:
        return False
    if p is not None and p.regime is Regime.ROOT_OF_UNITY:
        r = p.r
        return max(a, b, c) <= r - 2 and a + b + c <= 2 * r - 4
    return True


def admissible_many(p: Param | None, a, b, c) -> np.ndarray:
    a, b, c = (np.asarray(x, dtype=np.int64) for x in (a, b, c))
    ok = (np.minimum(np.minimum(a, b), c) >= 0) & ((a + b + c) % 2 == 0)
    ok &= (a <= b + c) & (b <= a + c) & (c <= a + b)
    if p is not None and p.regime is Regime.ROOT_OF_UNITY:
        r = p.r
        ok &= (np.maximum(np.maximum(a, b), c) <= r - 2) & (a + b + c <= 2 * r - 4)
    return ok


def _signs(k: np.ndarray) -> np.ndarray:
    return np.where(k % 2 == 0, 1.0, -1.0)


def theta_many(p: Param, a, b, c) -> ScaledArray:
    a, b, c = (np.asarray(x, dtype=np.int64) for x in (a, b, c))
    s = (a + b + c) // 2
    F = lambda n: qfact_many(p, n)
    num = F(s + 1) * F(s - c) * F(s - a) * F(s - b)
    den = F(a) * F(b) * F(c)
    return (num / den).scale(_signs(s))


def tet_many(p: Param, a, b, e, c, d, f) -> ScaledArray:
    """Tetrahedral evaluation with vertex triples (a,d,e), (b,c,e), (a,b,f),
    (c,d,f); opposite edge pairs are (a,c), (b,d), (e,f)."""
    a, b, e, c, d, f = (np.asarray(x, dtype=np.int64) for x in (a, b, e, c, d, f))
    tri = [(a + d + e) // 2, (b + c + e) // 2, (a + b + f) // 2, (c + d + f) // 2]
    sq = [(a + b + c + d) // 2, (a + c + e + f) // 2, (b + d + e + f) // 2]
    F = lambda n: qfact_many(p, n)

    num = None
    for bj in sq:
        for ai in tri:
            x = F(bj - ai)
            num = x if num is None else num * x
    pre = num / (F(a) * F(b) * F(c) * F(d) * F(e) * F(f))

    lo = np.maximum.reduce(tri)
    hi = np.minimum.reduce(sq)
    if np.any(lo > hi):
        raise InternalError("empty Kauffman-Lins sum range for admissible labels")
    if p.regime is Regime.ROOT_OF_UNITY:
        # terms whose [s+1]! contains [r] = 0 vanish
        hi = np.minimum(hi, p.r - 2)
    span = int((hi - lo).max()) + 1 if lo.size else 0
    parts = []
    for off in range(span):
        s = lo + off
        live = s <= hi
        sc = np.where(live, s, lo)
        den = F(sc - tri[0]) * F(sc - tri[1]) * F(sc - tri[2]) * F(sc - tri[3])
        den = den * F(sq[0] - sc) * F(sq[1] - sc) * F(sq[2] - sc)
        term = (F(sc + 1) / den).scale(np.where(live, _signs(sc), 0.0))
        parts.append(term)
    if not parts:
        return ScaledArray(np.zeros(0), np.zeros(0, np.int64), normalized=True)
    return pre * ScaledArray.aligned_sum(parts)


def sqrt_abs_many(x: ScaledArray) -> ScaledArray:
    mag = np.abs(x.sig)
    odd = x.exp % 2 != 0
    mag = np.where(odd, 2 * mag, mag)
    e = np.where(odd, x.exp - 1, x.exp) // 2
    return ScaledArray(np.sqrt(mag) + 0j, e)


def _check(p: Param, *triples) -> None:
    for t in triples:
        if not admissible(p, *t):
            raise AdmissibilityError(f"triple {t} is not admissible for {p.tag()}")


def theta(p: Param, a: int, b: int, c: int) -> ScaledScalar:
    _check(p, (a, b, c))
    return theta_many(p, [a], [b], [c]).item(0)


def tet(p: Param, a: int, b: int, e: int, c: int, d: int, f: int) -> ScaledScalar:
    _check(p, (a, d, e), (b, c, e), (a, b, f), (c, d, f))
    return tet_many(p, [a], [b], [e], [c], [d], [f]).item(0)


def sixj_many(p: Param, a, b, e, c, d, f) -> ScaledArray:
    a, b, e, c, d, f = (np.asarray(x, dtype=np.int64) for x in (a, b, e, c, d, f))
    den = theta_many(p, a, d, e) * theta_many(p, c, b, e)
    if np.any(den.sig == 0):
        raise DegenerateError("vanishing theta in a 6j denominator")
    num = tet_many(p, a, b, e, c, d, f) * qint_many(p, e + 1).scale(_signs(e))
    return num / den


def sixj(p: Param, a: int, b: int, e: int, c: int, d: int, f: int) -> ScaledScalar:
    """``Tet * (-1)^e [e+1] / (theta(a,d,e) theta(c,b,e))``."""
    _check(p, (a, d, e), (c, b, e), (a, b, f), (c, d, f))
    return sixj_many(p, [a], [b], [e], [c], [d], [f]).item(0)


@dataclass(frozen=True)
class Est1Check:
    lhs: ScaledScalar
    rhs: ScaledScalar
    holds: bool


_EST1_SLACK = math.log2(1 + 1e-9)


def est1_many(p: Param, a, b, e, c, d, f) -> tuple[ScaledArray, ScaledArray, np.ndarray]:
    """Both sides of the tetrahedral bound ``|Tet| <= sqrt(|theta^4 / ([e+1][f+1])|)``."""
    a, b, e, c, d, f = (np.asarray(x, dtype=np.int64) for x in (a, b, e, c, d, f))
    lhs = sqrt_abs_many(tet_many(p, a, b, e, c, d, f) ** 2)
    thetas = (theta_many(p, b, c, e) * theta_many(p, a, d, e)
              * theta_many(p, a, b, f) * theta_many(p, c, d, f))
    ratio = thetas / (qint_many(p, e + 1) * qint_many(p, f + 1))
    rhs = sqrt_abs_many(ratio)
    holds = lhs.abs_log2() <= rhs.abs_log2() + _EST1_SLACK
    return lhs, rhs, holds


def check_est1(p: Param, a: int, b: int, e: int, c: int, d: int, f: int) -> Est1Check:
    _check(p, (a, d, e), (b, c, e), (a, b, f), (c, d, f))
    lhs, rhs, holds = est1_many(p, [a], [b], [e], [c], [d], [f])
    return Est1Check(lhs.item(0), rhs.item(0), bool(holds[0]))


def vertex_constant(p: Param, k1: int, k2: int, k3: int, slot: int | None = None) -> float:
    """``sqrt(|theta(k1,k2,k3)| / |[k+1]|)`` with ``k`` the color in ``slot``
    (default: the largest color, which gives the smallest constant)."""
    ks = (k1, k2, k3)
    k = max(ks) if slot is None else ks[slot]
    ratio = theta(p, k1, k2, k3) / quantum_int(p, k + 1)
    return math.sqrt(abs(ratio.to_complex()))


def est2_quantity(p: Param, i: int, k1: int, k2: int, k3: int) -> ScaledScalar:
    """``|Tet(i i i; k1 k2 k3)| / sqrt(|theta(i,i,k1) theta(i,i,k2) theta(i,i,k3)|)``."""
    tv = tet(p, i, i, i, k1, k2, k3)
    th = theta(p, i, i, k1) * theta(p, i, i, k2) * theta(p, i, i, k3)
    return abs(tv) / sqrt_abs_many(ScaledArray([th.sig], [th.exp])).item(0)


def est2_bound(p: Param, i: int, k1: int, k2: int, k3: int) -> ScaledScalar:
    """``t**i * sqrt(|theta(k1,k2,k3)| / [k3+1])`` for real ``0 < t < 1``."""
    t = p.value
    if p.regime is not Regime.GENERIC_REAL or not 0 < t.real < 1:
        raise RegimeError("est2_bound needs a real parameter 0 < t < 1")
    _check(p, (k1, k2, k3), (i, i, k1), (i, i, k2), (i, i, k3))
    c = vertex_constant(p, k1, k2, k3, slot=2)
    return ScaledScalar.from_log2(i * math.log2(t.real)) * c
