"""Invariant sweeps behind ``skeinym verify``.

Each function returns a :class:`Report`; ``passed`` is the conjunction of
every individual check it ran.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .annulus import AnnulusElement, annulus_mul, kirby_partial
from .numerics import Param
from .recoupling import admissible, est1_many, est2_bound, est2_quantity, quantum_int, sixj_many
from .surface import canonical_spine, handleslide_residual, ladder_spine, ym_closed
from .torus import TorusElement, chebyshev_power


@dataclass
class Report:
    name: str
    passed: bool
    checked: int
    worst: float
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"check": self.name, "passed": self.passed, "checked": self.checked,
                "worst": self.worst, **self.details}


def orthogonality_rows(p: Param, max_color: int):
    """Label arrays for every term of every orthogonality sum with colors <= max_color."""
    rows = []
    for a, b, c, d in itertools.product(range(max_color + 1), repeat=4):
        fs = [f for f in range(min(a + b, c + d) + 1) if admissible(p, a, b, f) and admissible(p, c, d, f)]
        es = [e for e in range(min(a + d, b + c) + 1) if admissible(p, a, d, e) and admissible(p, b, c, e)]
        for f, g, e in itertools.product(fs, fs, es):
            rows.append((a, b, c, d, f, g, e))
    return np.array(rows, dtype=np.int64).reshape(-1, 7)


def orthogonality_sums(p: Param, max_color: int):
    """``(frames, sums)`` where ``frames[j] = (a,b,c,d,f,g)`` and ``sums[j]`` is
    ``sum_e {a b e; c d f}{d a g; b c e}``."""
    R = orthogonality_rows(p, max_color)
    a, b, c, d, f, g, e = R.T
    x = sixj_many(p, a, b, e, c, d, f).to_complex() * sixj_many(p, d, a, g, b, c, e).to_complex()
    frames, inv = np.unique(R[:, :6], axis=0, return_inverse=True)
    sums = np.zeros(len(frames), dtype=np.complex128)
    np.add.at(sums, inv.ravel(), x)
    return frames, sums


def verify_orthogonality(p: Param, max_color: int = 6, rtol: float = 1e-8) -> Report:
    frames, sums = orthogonality_sums(p, max_color)
    delta = (frames[:, 4] == frames[:, 5]).astype(float)
    err = np.abs(sums - delta)
    worst = float(err.max()) if err.size else 0.0
    return Report("ort", bool(np.all(err <= rtol)), len(frames), worst, {"t": str(p.value)})


def random_tet_labels(rng: random.Random, max_color: int, n: int):
    """``n`` uniformly drawn admissible labels ``(a, b, e, c, d, f)``."""
    out = []
    while len(out) < n:
        a, b, c, d = (rng.randint(0, max_color) for _ in range(4))
        es = [e for e in range(max_color + 1) if admissible(None, a, d, e) and admissible(None, b, c, e)]
        fs = [f for f in range(max_color + 1) if admissible(None, a, b, f) and admissible(None, c, d, f)]
        if es and fs:
            out.append((a, b, rng.choice(es), c, d, rng.choice(fs)))
    return np.array(out, dtype=np.int64)


def verify_est1(ts=(0.3, 0.5, 0.9, 1.5), n: int = 1000, max_color: int = 20, seed: int = 0) -> Report:
    rng = random.Random(seed)
    labels = random_tet_labels(rng, max_color, n)
    violations, worst = 0, -math.inf
    for t in ts:
        lhs, rhs, holds = est1_many(Param.generic(t), *labels.T)
        violations += int((~holds).sum())
        worst = max(worst, float(np.max(lhs.abs_log2() - rhs.abs_log2())))
    return Report("est1", violations == 0, n * len(ts), worst,
                  {"violations": violations, "worst_is": "max log2(lhs/rhs)"})


def verify_est2(t: float = 0.5, k=(2, 2, 2), i_max: int = 100) -> Report:
    p = Param.generic(t)
    worst, ok, count = -math.inf, True, 0
    for i in range(max(k) // 2 + (max(k) % 2), i_max + 1):
        q = est2_quantity(p, i, *k)
        b = est2_bound(p, i, *k)
        gap = q.abs_log2() - b.abs_log2()
        worst = max(worst, gap)
        ok &= gap <= 0
        count += 1
    return Report("est2", bool(ok), count, worst, {"worst_is": "max log2(quantity/bound)"})


def verify_kirby(ts=(0.5, -1.0), n: int = 200, rtol: float = 1e-12) -> Report:
    worst, count = 0.0, 0
    for t in ts:
        p = Param.from_value(t)
        omega = kirby_partial(p, n)
        lhs = annulus_mul(p, AnnulusElement.basis(1), omega)
        two = quantum_int(p, 2)
        for j in range(n):
            want = complex(two * omega.coefficient(j) * -1)
            got = complex(lhs.coefficient(j))
            worst = max(worst, abs(got - want) / abs(want))
            count += 1
    return Report("kirby", worst <= rtol, count, worst)


def verify_handleslide(t: float = 0.5, k: int = 2, n_max: int = 60, floor: float = 1e-12) -> Report:
    spine = canonical_spine(2, [k] * 9) if k % 2 == 0 else canonical_spine(2, [k, k, 0, 0, 0, 0, 0, 0, 0])
    p = Param.generic(t)
    res = [handleslide_residual(p, spine, 0, n) for n in range(n_max + 1)]
    bounded = all(r.holds for r in res)
    final = abs(res[-1].residual.to_complex())
    return Report("handleslide", bounded and final < floor, len(res), final, {"k": k, "t": t})


def verify_spine_independence(g: int = 2, t: float = 0.5, rtol: float = 1e-12) -> Report:
    p = Param.generic(t)
    a = ym_closed(p, canonical_spine(g), 1e-14).value
    b = ym_closed(p, ladder_spine(g), 1e-14).value
    diff = abs(a - b) / abs(a)
    return Report("spine-independence", diff <= rtol, 2, diff)


def verify_chebyshev(t: complex = 0.5, d_max: int = 6, span: int = 3) -> Report:
    count, ok = 0, True
    for p_, q_ in itertools.product(range(0, span + 1), range(-span, span + 1)):
        if math.gcd(p_, q_) != 1 or (p_ == 0 and q_ < 0):
            continue
        for d in range(1, d_max + 1):
            ok &= chebyshev_power(t, p_, q_, d) == TorusElement.basis(d * p_, d * q_)
            count += 1
    return Report("chebyshev", bool(ok), count, 0.0)


CHECKS = {
    "ort": lambda: verify_orthogonality(Param.generic(0.7)),
    "est1": verify_est1,
    "est2": verify_est2,
    "kirby": verify_kirby,
    "handleslide": verify_handleslide,
    "spine-independence": verify_spine_independence,
    "chebyshev": verify_chebyshev,
}
