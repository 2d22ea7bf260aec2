"""Extended-range scalars and the deformation parameter.

Quantum factorials grow like ``|t|**(-n*(n+1))``, far outside double range
for the colors used here, so every recoupling quantity is carried as a
complex significand with ``1/2 <= |sig| < 1`` and a separate integer power
of two.  :class:`ScaledScalar` is the scalar form, :class:`ScaledArray` the
numpy-backed batch form used by the series drivers.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, DomainError, RegimeError

# Exponent gap beyond which the smaller addend cannot affect the sum.
_ALIGN_LIMIT = 1074

NEG_INF = float("-inf")


class Regime(enum.Enum):
    GENERIC_REAL = "generic_real"
    GENERIC_COMPLEX = "generic_complex"
    CLASSICAL = "classical"
    ROOT_OF_UNITY = "root_of_unity"
    # |t| = 1 but not a root of unity; only the divergence probe accepts it.
    UNIT_CIRCLE = "unit_circle"


def root_value(r: int) -> complex:
    return cmath.exp(1j * math.pi / (2 * r))


@dataclass(frozen=True)
class Param:
    """The parameter ``t`` together with the regime it is evaluated in."""

    value: complex
    regime: Regime
    r: int | None = field(default=None)

    def __post_init__(self):
        v = complex(self.value)
        object.__setattr__(self, "value", v)
        if v == 0:
            raise DomainError("t must be nonzero")
        reg = self.regime
        if reg is Regime.CLASSICAL:
            if v not in (1, -1):
                raise RegimeError(f"classical regime needs t = +-1, got {v}")
        elif reg is Regime.ROOT_OF_UNITY:
            if self.r is None or self.r < 3:
                raise RegimeError("root of unity regime needs integer r >= 3")
            if abs(v - root_value(self.r)) > 1e-12:
                raise RegimeError(f"t = {v} is not exp(i pi / {2 * self.r})")
        elif reg is Regime.GENERIC_REAL:
            if v.imag != 0 or v.real <= 0 or abs(v.real - 1) <= 1e-9:
                raise RegimeError(f"generic real regime needs real t > 0, t != 1; got {v}")
        elif reg is Regime.GENERIC_COMPLEX:
            if abs(abs(v) - 1) <= 1e-9:
                raise RegimeError(f"|t| = {abs(v)} is too close to 1 for the generic regime")
        elif reg is Regime.UNIT_CIRCLE:
            if abs(abs(v) - 1) > 1e-9:
                raise RegimeError(f"|t| = {abs(v)} is not on the unit circle")

    @classmethod
    def generic(cls, t) -> "Param":
        t = complex(t)
        if t.imag == 0 and t.real > 0:
            return cls(t, Regime.GENERIC_REAL)
        return cls(t, Regime.GENERIC_COMPLEX)

    @classmethod
    def classical(cls, sign: int = -1) -> "Param":
        if sign not in (1, -1):
            raise RegimeError("classical sign must be +1 or -1")
        return cls(complex(sign), Regime.CLASSICAL)

    @classmethod
    def root_of_unity(cls, r: int) -> "Param":
        return cls(root_value(r), Regime.ROOT_OF_UNITY, int(r))

    @classmethod
    def from_value(cls, t) -> "Param":
        """Classify a raw value.  Points within 1e-9 of the unit circle that
        are neither +-1 nor ``exp(i pi/2r)`` land in UNIT_CIRCLE."""
        t = complex(t)
        if t in (1, -1):
            return cls.classical(int(t.real))
        if abs(abs(t) - 1) <= 1e-9:
            for r in range(3, 1001):
                if abs(t - root_value(r)) <= 1e-12:
                    return cls.root_of_unity(r)
            return cls(t, Regime.UNIT_CIRCLE)
        return cls.generic(t)

    @property
    def is_real(self) -> bool:
        """True when every quantum integer is real (t**2 real)."""
        u = self.value * self.value
        return self.regime in (Regime.CLASSICAL, Regime.ROOT_OF_UNITY, Regime.UNIT_CIRCLE) or u.imag == 0

    def require_convergent(self) -> None:
        if self.regime is Regime.UNIT_CIRCLE:
            raise DivergenceError(
                f"t = {self.value} lies on the unit circle and is not a recognized root of unity; "
                "the closed-surface series does not converge there")

    def tag(self) -> str:
        if self.regime is Regime.ROOT_OF_UNITY:
            return f"root_of_unity(r={self.r})"
        return self.regime.value


def _normalize(sig: complex, exp: int) -> tuple[complex, int]:
    if sig == 0:
        return 0j, 0
    m, e = math.frexp(abs(sig))
    if m == 1.0:  # abs rounded up across a binade
        e += 1
    return complex(math.ldexp(sig.real, -e), math.ldexp(sig.imag, -e)), exp + e


class ScaledScalar:
    """Immutable ``sig * 2**exp`` with a complex significand."""

    __slots__ = ("sig", "exp")

    def __init__(self, sig: complex = 0j, exp: int = 0):
        s, e = _normalize(complex(sig), int(exp))
        object.__setattr__(self, "sig", s)
        object.__setattr__(self, "exp", e)

    def __setattr__(self, name, value):
        raise AttributeError("ScaledScalar is immutable")

    @classmethod
    def _raw(cls, sig: complex, exp: int) -> "ScaledScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "sig", sig)
        object.__setattr__(obj, "exp", exp)
        return obj

    @classmethod
    def from_float(cls, x) -> "ScaledScalar":
        x = complex(x)
        if not (math.isfinite(x.real) and math.isfinite(x.imag)):
            raise DomainError(f"cannot scale non-finite value {x}")
        return cls(x, 0)

    @classmethod
    def from_log2(cls, log2_mag: float, phase: float = 0.0) -> "ScaledScalar":
        e = math.floor(log2_mag)
        return cls(cmath.rect(2.0 ** (log2_mag - e), phase), e)

    @classmethod
    def coerce(cls, x) -> "ScaledScalar":
        return x if isinstance(x, ScaledScalar) else cls.from_float(x)

    def is_zero(self) -> bool:
        return self.sig == 0

    def to_complex(self) -> complex:
        """Nearest complex double; overflows to inf, underflows to 0."""
        e = self.exp
        if e > 1100:
            return complex(math.copysign(math.inf, self.sig.real) if self.sig.real else 0.0,
                           math.copysign(math.inf, self.sig.imag) if self.sig.imag else 0.0)
        return complex(math.ldexp(self.sig.real, e), math.ldexp(self.sig.imag, e))

    def to_float(self) -> float:
        if self.sig.imag != 0:
            raise DomainError("value has a nonzero imaginary part")
        return self.to_complex().real

    __complex__ = to_complex

    def __float__(self):
        return self.to_float()

    def fits_double(self, margin: int = 0) -> bool:
        return self.sig == 0 or -1021 + margin <= self.exp <= 1024 - margin

    def abs_log2(self) -> float:
        if self.sig == 0:
            return NEG_INF
        return math.log2(abs(self.sig)) + self.exp

    def __abs__(self) -> "ScaledScalar":
        return ScaledScalar._raw(complex(abs(self.sig)), self.exp)

    def conjugate(self) -> "ScaledScalar":
        return ScaledScalar._raw(self.sig.conjugate(), self.exp)

    def __mul__(self, other):
        if not isinstance(other, ScaledScalar):
            other = ScaledScalar.from_float(other)
        s = self.sig * other.sig
        if s == 0:
            return ZERO
        return ScaledScalar(s, self.exp + other.exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ScaledScalar):
            other = ScaledScalar.from_float(other)
        if other.sig == 0:
            raise DomainError("division by zero")
        if self.sig == 0:
            return ZERO
        return ScaledScalar(self.sig / other.sig, self.exp - other.exp)

    def __rtruediv__(self, other):
        return ScaledScalar.from_float(other) / self

    def __neg__(self):
        return ScaledScalar._raw(-self.sig, self.exp)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, ScaledScalar):
            other = ScaledScalar.from_float(other)
        if other.sig == 0:
            return self
        if self.sig == 0:
            return other
        big, small = (self, other) if self.exp >= other.exp else (other, self)
        gap = big.exp - small.exp
        if gap > _ALIGN_LIMIT:
            return big
        s = big.sig + complex(math.ldexp(small.sig.real, -gap), math.ldexp(small.sig.imag, -gap))
        if s == 0:
            return ZERO
        return ScaledScalar(s, big.exp)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-ScaledScalar.coerce(other))

    def __rsub__(self, other):
        return ScaledScalar.coerce(other) + (-self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise DomainError("ScaledScalar only supports integer powers")
        if k < 0:
            return ONE / (self ** (-k))
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, ScaledScalar):
            return self.sig == other.sig and self.exp == other.exp
        if isinstance(other, (int, float, complex)):
            return self == ScaledScalar.from_float(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.sig, self.exp))

    def __repr__(self):
        return f"ScaledScalar({self.sig!r}, {self.exp})"


ZERO = ScaledScalar._raw(0j, 0)
ONE = ScaledScalar(1.0, 0)


def from_float(x) -> ScaledScalar:
    return ScaledScalar.from_float(x)


def to_float(a: ScaledScalar) -> float:
    return a.to_float()


def ss_mul(a: ScaledScalar, b: ScaledScalar) -> ScaledScalar:
    return a * b


def ss_add(a: ScaledScalar, b: ScaledScalar) -> ScaledScalar:
    return a + b


def ss_div(a: ScaledScalar, b: ScaledScalar) -> ScaledScalar:
    return a / b


def ss_neg(a: ScaledScalar) -> ScaledScalar:
    return -a


def ss_abs_log2(a: ScaledScalar) -> float:
    return a.abs_log2()


def ss_cmp_abs(a: ScaledScalar, b: ScaledScalar) -> int:
    """-1, 0 or 1 as ``|a|`` is less than, equal to or greater than ``|b|``."""
    if a.sig == 0 or b.sig == 0:
        return (a.sig != 0) - (b.sig != 0)
    if a.exp != b.exp:
        return 1 if a.exp > b.exp else -1
    x, y = abs(a.sig), abs(b.sig)
    return (x > y) - (x < y)


class ScaledArray:
    """Elementwise batch of scaled scalars: ``sig * 2**exp`` with numpy arrays."""

    __slots__ = ("sig", "exp")

    def __init__(self, sig, exp, normalized: bool = False):
        sig = np.asarray(sig, dtype=np.complex128)
        exp = np.asarray(exp, dtype=np.int64)
        if not normalized:
            sig, exp = self._normalize(sig, exp)
        self.sig = sig
        self.exp = exp

    @staticmethod
    def _normalize(sig, exp):
        mag = np.abs(sig)
        m, e = np.frexp(mag)
        e = e.astype(np.int64) + (m == 1.0)
        sig = np.ldexp(sig.real, -e) + 1j * np.ldexp(sig.imag, -e)
        zero = mag == 0
        exp = np.where(zero, 0, exp + e)
        return sig, exp

    @classmethod
    def ones(cls, n: int) -> "ScaledArray":
        return cls(np.full(n, 0.5 + 0j), np.ones(n, dtype=np.int64), normalized=True)

    @classmethod
    def from_values(cls, x) -> "ScaledArray":
        x = np.asarray(x, dtype=np.complex128)
        return cls(x, np.zeros(x.shape, dtype=np.int64))

    def __len__(self):
        return len(self.sig)

    def __getitem__(self, idx):
        return ScaledArray(self.sig[idx], self.exp[idx], normalized=True)

    def item(self, k: int) -> ScaledScalar:
        return ScaledScalar._raw(complex(self.sig[k]), int(self.exp[k]))

    def __mul__(self, other: "ScaledArray") -> "ScaledArray":
        return ScaledArray(self.sig * other.sig, self.exp + other.exp)

    def __truediv__(self, other: "ScaledArray") -> "ScaledArray":
        if np.any(other.sig == 0):
            raise DomainError("division by zero")
        return ScaledArray(self.sig / other.sig, self.exp - other.exp)

    def __neg__(self):
        return ScaledArray(-self.sig, self.exp, normalized=True)

    def scale(self, factor) -> "ScaledArray":
        return ScaledArray(self.sig * np.asarray(factor), self.exp)

    def __pow__(self, k: int) -> "ScaledArray":
        if k < 0:
            return ScaledArray.ones(len(self)) / (self ** (-k))
        result = ScaledArray.ones(len(self))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    @staticmethod
    def aligned_sum(parts: list["ScaledArray"]) -> "ScaledArray":
        """Elementwise sum, each addend shifted to the largest exponent present."""
        if len(parts) == 1:
            return parts[0]
        exps = np.stack([np.where(p.sig == 0, np.iinfo(np.int64).min, p.exp) for p in parts])
        emax = exps.max(axis=0)
        emax = np.where(emax == np.iinfo(np.int64).min, 0, emax)
        total = np.zeros(emax.shape, dtype=np.complex128)
        for p in parts:
            shift = np.clip(p.exp - emax, -_ALIGN_LIMIT - 2, 0)
            total = total + (np.ldexp(p.sig.real, shift) + 1j * np.ldexp(p.sig.imag, shift))
        return ScaledArray(total, emax)

    def to_complex(self) -> np.ndarray:
        e = np.clip(self.exp, -1200, 1100)
        return np.ldexp(self.sig.real, e) + 1j * np.ldexp(self.sig.imag, e)

    def abs_log2(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log2(np.abs(self.sig)) + self.exp
