"""Yang-Mills measure on closed surfaces of genus >= 2.

A skein is given by an admissibly colored trivalent spine of the surface
with one boundary circle.  Pairing it with the annulus element
``sum (-1)^i [i+1] s_i`` gives the series

    sum_i (-1)^i [i+1] * prod_edges 1/theta(i,i,k) * prod_vertices Tet(i i i; k1 k2 k3)

whose terms are evaluated in batches by :func:`ym_summands`.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import AdmissibilityError, DomainError, GenusError, RegimeError, SpineError
from .numerics import Param, Regime, ScaledArray, ScaledScalar
from .recoupling import (admissible, admissible_many, qint_many, quantum_int, tet, tet_many,
                         theta, theta_many, vertex_constant)

BLOCK = 1 << 17


@dataclass(frozen=True)
class ColoredSpine:
    genus: int
    edge_colors: tuple[int, ...]
    vertices: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        g = self.genus
        object.__setattr__(self, "edge_colors", tuple(int(k) for k in self.edge_colors))
        object.__setattr__(self, "vertices", tuple(tuple(int(e) for e in v) for v in self.vertices))
        if not isinstance(g, int) or g < 1:
            raise SpineError(f"genus must be a positive integer, got {g!r}")
        if len(self.edge_colors) != 6 * g - 3:
            raise SpineError(f"genus {g} spine needs {6 * g - 3} edges, got {len(self.edge_colors)}")
        if len(self.vertices) != 4 * g - 2:
            raise SpineError(f"genus {g} spine needs {4 * g - 2} vertices, got {len(self.vertices)}")
        if any(len(v) != 3 for v in self.vertices):
            raise SpineError("every vertex must list exactly three edge slots")
        slots = Counter(e for v in self.vertices for e in v)
        for e in range(len(self.edge_colors)):
            if slots.get(e, 0) != 2:
                raise SpineError(f"edge {e} appears in {slots.get(e, 0)} vertex slots, expected 2")
        if set(slots) - set(range(len(self.edge_colors))):
            raise SpineError("vertex references an unknown edge")
        if any(k < 0 for k in self.edge_colors):
            raise SpineError("edge colors must be nonnegative")
        for v in self.vertices:
            ks = self.vertex_colors(v)
            if not admissible(None, *ks):
                raise AdmissibilityError(f"vertex {v} carries inadmissible colors {ks}")

    def vertex_colors(self, v) -> tuple[int, int, int]:
        return tuple(self.edge_colors[e] for e in v)

    def recolor(self, colors: Sequence[int]) -> "ColoredSpine":
        return ColoredSpine(self.genus, tuple(colors), self.vertices)

    def to_json(self) -> dict:
        return {"genus": self.genus, "edges": list(self.edge_colors),
                "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, obj) -> "ColoredSpine":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        try:
            return cls(int(obj["genus"]), tuple(obj["edges"]), tuple(tuple(v) for v in obj["vertices"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (SpineError, AdmissibilityError)):
                raise
            raise SpineError(f"malformed spine description: {exc}") from exc


def _spine_from_edges(g: int, edges: list[tuple[int, int]], colors) -> ColoredSpine:
    incident: dict[int, list[int]] = {}
    for idx, (u, v) in enumerate(edges):
        incident.setdefault(u, []).append(idx)
        incident.setdefault(v, []).append(idx)
    vertices = tuple(tuple(incident[w]) for w in sorted(incident))
    if colors is None:
        colors = (0,) * len(edges)
    return ColoredSpine(g, tuple(colors), vertices)


def canonical_spine(g: int, colors: Sequence[int] | None = None) -> ColoredSpine:
    """Chain of ``g`` theta graphs; consecutive thetas are joined by a bridge
    whose ends subdivide one edge of each."""
    if g < 1:
        raise SpineError("genus must be >= 1")
    edges: list[tuple[int, int]] = []
    theta_edges = []
    for j in range(g):
        a, b = 2 * j, 2 * j + 1
        theta_edges.append([len(edges), len(edges) + 1, len(edges) + 2])
        edges += [(a, b), (a, b), (a, b)]
    nxt = 2 * g
    for j in range(g - 1):
        w1, w2 = nxt, nxt + 1
        nxt += 2
        for idx, w in ((theta_edges[j][2], w1), (theta_edges[j + 1][0], w2)):
            u, v = edges[idx]
            edges[idx] = (u, w)
            edges.append((w, v))
        edges.append((w1, w2))
    return _spine_from_edges(g, edges, colors)


def ladder_spine(g: int, colors: Sequence[int] | None = None) -> ColoredSpine:
    """Circular ladder with ``2g-1`` rungs, a second spine shape for ``g >= 2``."""
    if g < 2:
        raise SpineError("ladder spine needs genus >= 2")
    n = 2 * g - 1
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    return _spine_from_edges(g, edges, colors)


@dataclass(frozen=True)
class SeriesResult:
    value: complex | float
    terms_used: int
    tail_bound: float
    converged: bool
    regime: str


def _signs(i: np.ndarray) -> np.ndarray:
    return np.where(i % 2 == 0, 1.0, -1.0)


def _term_factors(spine: ColoredSpine):
    edges = Counter(spine.edge_colors)
    verts = Counter(tuple(sorted(spine.vertex_colors(v))) for v in spine.vertices)
    return edges, verts


def ym_terms_many(p: Param, spine: ColoredSpine, i) -> ScaledArray:
    """``prod 1/theta(i,i,k_j) * prod Tet(i i i; k_v)`` for each ``i``; zero
    where some ``(i, i, k_j)`` is inadmissible."""
    i = np.asarray(i, dtype=np.int64)
    edges, verts = _term_factors(spine)
    ok = np.ones(i.shape, dtype=bool)
    for k in edges:
        ok &= admissible_many(p, i, i, np.full_like(i, k))
    sig = np.zeros(i.shape, dtype=np.complex128)
    exp = np.zeros(i.shape, dtype=np.int64)
    live = i[ok]
    if live.size:
        acc = ScaledArray.ones(live.size)
        for k, m in edges.items():
            acc = acc / theta_many(p, live, live, np.full_like(live, k)) ** m
        for (k1, k2, k3), m in verts.items():
            kk = [np.full_like(live, x) for x in (k1, k2, k3)]
            acc = acc * tet_many(p, live, live, live, *kk) ** m
        sig[ok] = acc.sig
        exp[ok] = acc.exp
    return ScaledArray(sig, exp, normalized=True)


def ym_summands(p: Param, spine: ColoredSpine, i) -> ScaledArray:
    """``(-1)^i [i+1]`` times :func:`ym_terms_many`."""
    i = np.asarray(i, dtype=np.int64)
    return (ym_terms_many(p, spine, i) * qint_many(p, i + 1)).scale(_signs(i))


def ym_term(p: Param, spine: ColoredSpine, i: int) -> ScaledScalar:
    if i < 0:
        raise DomainError("i must be nonnegative")
    return ym_terms_many(p, spine, [i]).item(0)


def spine_constant(p: Param, spine: ColoredSpine) -> float:
    """Product over vertices of ``sqrt(|theta(k_v)| / |[k_max + 1]|)``; bounds
    ``|summand_i| <= C * |[i+1]|^(2-2g)`` for real ``t``."""
    c = 1.0
    for v in spine.vertices:
        c *= vertex_constant(p, *spine.vertex_colors(v))
    return c


def _positive_u(p: Param) -> bool:
    u = p.value * p.value
    return u.imag == 0 and u.real > 0


def _closed_tail(p: Param, spine: ColoredSpine) -> Callable[[int], float]:
    """Upper bound on ``sum_{i > n} |summand_i|``."""
    g = spine.genus
    C = spine_constant(p, spine)
    power = 2 * g - 2
    pseries = None
    if _positive_u(p):
        # [i+1] >= i+1 for positive real t^2
        pseries = lambda n: C * (n + 1.0) ** (3 - 2 * g) / (2 * g - 3)
    if p.regime is Regime.CLASSICAL:
        return pseries
    rho = min(abs(p.value), 1 / abs(p.value))
    x = rho ** (4 * g - 4)
    lam = 1.0 if _positive_u(p) else (1 - rho ** 4) / (1 + rho ** 4)
    Cg = C * lam ** (-power)

    def geometric(n: int) -> float:
        # sum_{i>n} (i+1) x^i = x^(n+1) ((n+2) - (n+1) x) / (1-x)^2
        return Cg * x ** (n + 1) * ((n + 2) - (n + 1) * x) / (1 - x) ** 2

    if pseries is None:
        return geometric
    return lambda n: min(geometric(n), pseries(n))


def _terms_needed(tail: Callable[[int], float], tol: float, max_terms: int) -> tuple[int, bool]:
    """Smallest count ``N`` with ``tail(N-1) <= tol`` (capped at ``max_terms``)."""
    if tail(max_terms - 1) > tol:
        return max_terms, False
    lo, hi = 0, max_terms - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if tail(mid) <= tol:
            hi = mid
        else:
            lo = mid + 1
    return lo + 1, True


BlockHook = Callable[[np.ndarray, np.ndarray, np.ndarray], None]


def _sum_series(summand: Callable[[np.ndarray], np.ndarray], n_terms: int,
                on_block: BlockHook | None = None) -> complex:
    total = 0j
    for start in range(0, n_terms, BLOCK):
        idx = np.arange(start, min(start + BLOCK, n_terms), dtype=np.int64)
        vals = summand(idx)
        running = total + np.cumsum(vals)
        if on_block is not None:
            on_block(idx, vals, running)
        total = complex(running[-1])
    return total


def _finish(value: complex, p: Param) -> complex | float:
    return value.real if p.is_real and value.imag == 0 else value


def ym_closed(p: Param, spine: ColoredSpine, tol: float = 1e-10, max_terms: int = 10 ** 7,
              on_block: BlockHook | None = None) -> SeriesResult:
    """Sum the closed-surface series until the analytic tail bound is below ``tol``."""
    if spine.genus < 2:
        raise GenusError("genus 1 has no convergent series here; use torus.torus_ym")
    p.require_convergent()
    if p.regime is Regime.ROOT_OF_UNITY:
        raise RegimeError("at a root of unity the sum is finite; use ym_root")
    if tol <= 0:
        raise DomainError("tol must be positive")
    tail = _closed_tail(p, spine)
    n_terms, ok = _terms_needed(tail, tol, max_terms)
    value = _sum_series(lambda i: ym_summands(p, spine, i).to_complex(), n_terms, on_block)
    return SeriesResult(_finish(value, p), n_terms, tail(n_terms - 1), ok, p.tag())


def ym_root(p: Param, spine: ColoredSpine) -> complex | float:
    """Finite sum over ``i = 0 .. r-2`` at ``t = exp(i pi / 2r)``."""
    if p.regime is not Regime.ROOT_OF_UNITY:
        raise RegimeError("ym_root needs a root-of-unity parameter")
    r = p.r
    for v in spine.vertices:
        ks = spine.vertex_colors(v)
        if not admissible(p, *ks):
            raise AdmissibilityError(f"vertex colors {ks} are not admissible at r = {r}")
    i = np.arange(0, r - 1, dtype=np.int64)
    vals = ym_summands(p, spine, i).to_complex()
    total = 0j
    for v in vals:
        total += v
    return _finish(complex(total), p)


def casimir(i):
    """Quadratic Casimir of the (i+1)-dimensional irreducible SU(2) module, ``j(j+1)`` with ``j = i/2``."""
    return np.asarray(i, dtype=np.float64) * (np.asarray(i, dtype=np.float64) + 2) / 4


def _witten_tail(spine: ColoredSpine, rho: float) -> Callable[[int], float]:
    g = spine.genus
    C = spine_constant(Param.classical(-1), spine)

    def tail(n: int) -> float:
        # c2(n+1+m) - c2(n+1) >= m (n+2) / 2
        damp = math.exp(-rho * float(casimir(n + 1))) / -math.expm1(-rho * (n + 2) / 2)
        bound = C * (n + 2.0) ** (2 - 2 * g) * damp
        if g >= 2:
            bound = min(bound, C * (n + 1.0) ** (3 - 2 * g) / (2 * g - 3))
        return bound

    return tail


def ym_witten(spine: ColoredSpine, rho: float, tol: float = 1e-10, max_terms: int = 10 ** 7,
              on_block: BlockHook | None = None) -> SeriesResult:
    """Area-damped series ``sum (-1)^i (i+1) exp(-rho c2(i)) * term_i`` at ``t = -1``."""
    if not rho > 0:
        raise DomainError("rho must be positive")
    if tol <= 0:
        raise DomainError("tol must be positive")
    p = Param.classical(-1)
    tail = _witten_tail(spine, rho)
    n_terms, ok = _terms_needed(tail, tol, max_terms)

    def summand(i):
        return ym_summands(p, spine, i).to_complex() * np.exp(-rho * casimir(i))

    value = _sum_series(summand, n_terms, on_block)
    return SeriesResult(value.real, n_terms, tail(n_terms - 1), ok, "witten")


@dataclass(frozen=True)
class HandleslideResidual:
    residual: ScaledScalar
    bound: ScaledScalar
    holds: bool


def _newpart(p: Param, n: int, u: int, v: int, k: int) -> ScaledScalar:
    triples = [(u, k - 1, v), (u, 1, v), (u, u, k), (1, k - 1, k), (u, k, u)]
    if not all(admissible(p, *t) for t in triples):
        return ScaledScalar.from_float(0.0)
    sign = -1.0 if n % 2 else 1.0
    val = quantum_int(p, n + 1) * sign / (theta(p, u, k, u) * theta(p, u, k - 1, v))
    return val * tet(p, u, u, v, 1, k - 1, k) * tet(p, u, v, u, 1, k, k - 1)


def handleslide_newpart(p: Param, spine: ColoredSpine, edge: int, n: int, u: int, v: int) -> ScaledScalar:
    """Local factor created by sliding one strand of ``edge`` over the capping disk."""
    return _newpart(p, n, u, v, spine.edge_colors[edge])


def handleslide_residual(p: Param, spine: ColoredSpine, edge: int, n: int) -> HandleslideResidual:
    """Difference of the two boundary terms left after pairing a handle-slide
    with the n-th Kirby partial sum, with the bound ``[n+2] C t^(n(4g-2))``."""
    if spine.genus < 2:
        raise GenusError("handle-slide residual needs genus >= 2")
    if p.regime is not Regime.GENERIC_REAL:
        raise RegimeError("handle-slide residual is evaluated for real generic t")
    if not 0 <= edge < len(spine.edge_colors):
        raise SpineError(f"edge index {edge} out of range")
    k = spine.edge_colors[edge]
    if k < 1:
        raise DomainError("the chosen edge must carry a color k >= 1")
    if n < 0:
        raise DomainError("n must be nonnegative")
    g = spine.genus
    first = _newpart(p, n, n, n + 1, k) * ym_term(p, spine, n)
    second = _newpart(p, n, n + 1, n, k) * ym_term(p, spine, n + 1)
    residual = first - second
    t = p.value.real
    rho = min(t, 1 / t)
    bound = (quantum_int(p, n + 2) * spine_constant(p, spine)
             * ScaledScalar.from_log2(n * (4 * g - 2) * math.log2(rho)))
    holds = residual.is_zero() or residual.abs_log2() <= bound.abs_log2()
    return HandleslideResidual(residual, bound, holds)


def classical_limit_values(spine: ColoredSpine, t_sequence: Sequence[complex], tol: float,
                           max_terms: int = 10 ** 7) -> tuple[complex | float, list[complex | float]]:
    """Values at each ``t_n`` and at the classical limit point, each summed to ``tol / 4``."""
    last = complex(t_sequence[-1])
    sign = -1 if last.real < 0 else 1
    ref = ym_closed(Param.classical(sign), spine, tol / 4, max_terms).value
    vals = []
    for t in t_sequence:
        p = Param.from_value(t)
        if p.regime is Regime.CLASSICAL:
            vals.append(ref)
        else:
            vals.append(ym_closed(p, spine, tol / 4, max_terms).value)
    return ref, vals


def ym_classical_limit_check(spine: ColoredSpine, t_sequence: Sequence[complex], tol: float,
                             max_terms: int = 10 ** 7) -> bool:
    """True when the tail of the sequence stays within ``tol`` of the ``t = +-1`` value."""
    ref, vals = classical_limit_values(spine, t_sequence, tol, max_terms)
    errs = [abs(v - ref) for v in vals]
    return errs[-1] < tol


@dataclass(frozen=True)
class DivergenceReport:
    t: complex
    genus: int
    n_max: int
    indices: list[int]
    magnitudes: list[float]


def divergence_probe(p: Param, g: int, N: int) -> DivergenceReport:
    """Indices ``i <= N`` where ``1 / |[i+1]|^(2g-2)`` lies in ``(0.5, 2)``:
    terms of the empty-skein series that refuse to decay."""
    if p.regime is not Regime.UNIT_CIRCLE:
        raise RegimeError("divergence probe needs |t| = 1 away from roots of unity")
    turns = np.angle(p.value) / (2 * np.pi) * np.arange(1, 4001)
    if np.any(np.abs(turns - np.round(turns)) < 1e-9):
        raise RegimeError(f"t = {p.value} is (numerically) a root of unity of order <= 4000")
    i = np.arange(0, N + 1, dtype=np.int64)
    q = np.abs(qint_many(p, i + 1).to_complex())
    mags = q ** (2.0 - 2 * g)
    keep = (mags > 0.5) & (mags < 2)
    return DivergenceReport(p.value, g, N, i[keep].tolist(), mags[keep].tolist())
