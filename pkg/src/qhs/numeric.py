"""Scalars, parameters, q-integers, dual numbers and the shared tolerance policy.

Every other module compares numbers through the policy defined here; nothing
else in the package defines its own epsilon.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

import mpmath

Scalar = complex  # working scalar type at default (binary64) precision


class NonGenericParameterError(ValueError):
    """Deformation parameter too close to a root of unity for the requested size."""


# ---------------------------------------------------------------------------
# tolerance policy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TolerancePolicy:
    """Central comparison policy: |a-b| <= atol + rtol*max(|a|,|b|)."""

    rtol: float = 1e-9
    atol: float = 1e-12
    prune: float = 1e-14  # absolute threshold below which poly coefficients are dropped

    def isclose(self, a: complex, b: complex) -> bool:
        return abs(a - b) <= self.atol + self.rtol * max(abs(a), abs(b))

    def iszero(self, a: complex) -> bool:
        return abs(a) <= self.atol


DEFAULT_TOL = TolerancePolicy()


def mag(c) -> float:
    """Magnitude used for pruning/comparisons; understands DualScalar and mpmath."""
    if isinstance(c, DualScalar):
        return max(mag(c.val), mag(c.der))
    return float(abs(c))


# ---------------------------------------------------------------------------
# dual numbers (first order, complex coefficients)
# ---------------------------------------------------------------------------

class DualScalar:
    """val + der*eps with eps^2 = 0; implements d/dp at a point in one pass.

    Coefficients may be complex or mpmath.mpc; the ring operations satisfy
    der(a*b) = a.der*b.val + a.val*b.der exactly.
    """

    __slots__ = ("val", "der")

    def __init__(self, val, der=0.0):
        self.val = val
        self.der = der

    def __repr__(self):
        return f"DualScalar({self.val!r}, {self.der!r})"

    @staticmethod
    def _coerce(x) -> "DualScalar":
        if isinstance(x, DualScalar):
            return x
        return DualScalar(x, 0.0)

    def __add__(self, other):
        o = self._coerce(other)
        return DualScalar(self.val + o.val, self.der + o.der)

    __radd__ = __add__

    def __neg__(self):
        return DualScalar(-self.val, -self.der)

    def __sub__(self, other):
        o = self._coerce(other)
        return DualScalar(self.val - o.val, self.der - o.der)

    def __rsub__(self, other):
        o = self._coerce(other)
        return DualScalar(o.val - self.val, o.der - self.der)

    def __mul__(self, other):
        o = self._coerce(other)
        return DualScalar(self.val * o.val, self.val * o.der + self.der * o.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.val == 0:
            raise ZeroDivisionError("dual division by zero value part")
        v = self.val / o.val
        return DualScalar(v, (self.der - v * o.der) / o.val)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("DualScalar supports integer powers only")
        if n < 0:
            return 1.0 / (self ** (-n))
        out = DualScalar(1.0, 0.0)
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        return self.val == o.val and self.der == o.der

    def __hash__(self):
        return hash((self.val, self.der))


DualLike = Union[complex, DualScalar]


# ---------------------------------------------------------------------------
# q-integers and roots of unity
# ---------------------------------------------------------------------------

def q_int(n: int, t_half: DualLike) -> DualLike:
    """Symmetric q-integer [n] = (x^n - x^-n)/(x - x^-1) at x = t_half.

    Evaluated as the Laurent sum x^(n-1) + x^(n-3) + ... + x^(1-n), which is
    cancellation-free and agrees with the limit (+-1)^(n-1)*n at x = +-1.
    """
    if mag(t_half) == 0.0:
        raise ValueError("q_int undefined at t_half = 0")
    if n == 0:
        return 0.0 * t_half  # keep the scalar type (dual/mpmath aware)
    if n < 0:
        return -q_int(-n, t_half)
    inv = 1.0 / t_half
    term = t_half ** (n - 1)
    total = term
    ratio = inv * inv
    for _ in range(n - 1):
        term = term * ratio
        total = total + term
    return total


def q_factorial(n: int, t_half: DualLike) -> DualLike:
    out = 1.0 + 0.0 * t_half
    for k in range(2, n + 1):
        out = out * q_int(k, t_half)
    return out


def q_binom(n: int, k: int, t_half: DualLike) -> DualLike:
    """Gaussian binomial [n]!/([k]![n-k]!) as a product of ratios [n-k+s]/[s]."""
    if not 0 <= k <= n:
        raise ValueError(f"q_binom requires 0 <= k <= n, got ({n},{k})")
    out = 1.0 + 0.0 * t_half
    for s in range(1, k + 1):
        out = out * q_int(n - k + s, t_half) / q_int(s, t_half)
    return out


def omega_power(N: int, j: int) -> complex:
    """exp(2*pi*i*j/N), with j reduced mod N first so shifts by N are bit-identical."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return cmath.exp(2j * math.pi * (j % N) / N)


# ---------------------------------------------------------------------------
# parameter containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainParams:
    """Chain size and deformation data; the deformation is stored as t^(1/4).

    Quarter powers are the natural unit: the stochastic gauge and the
    two-site (anti)symmetric pair vectors involve t^(1/4) explicitly, and
    storing the root avoids branch cuts.  t_half is the parameter usually
    written as a fraktur q.
    """

    N: int
    t_quarter: complex
    epsilon: int = 0
    tol: TolerancePolicy = field(default=DEFAULT_TOL)
    precision: str = "double"  # "double" | "extended"
    validate: bool = True

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.epsilon not in (0, 1):
            raise ValueError("gauge epsilon must be 0 or 1")
        tq = complex(self.t_quarter)
        if tq in (0, 1, -1) or self.tol.iszero(tq) :
            raise NonGenericParameterError("t^(1/4) must avoid {-1, 0, 1}")
        if self.validate:
            report = check_generic(self)
            if not report.ok:
                raise NonGenericParameterError(
                    f"non-generic parameter: t^{report.k} is a root of unity "
                    f"(|t^{report.k} - 1| = {report.distance:.2e})"
                )

    @property
    def t_half(self) -> complex:
        return complex(self.t_quarter) ** 2

    @property
    def t(self) -> complex:
        return complex(self.t_quarter) ** 4

    def flip_sign(self) -> "ChainParams":
        """Parameters with t_half -> -t_half (t is unchanged)."""
        return ChainParams(self.N, complex(self.t_quarter) * 1j, self.epsilon,
                           self.tol, self.precision, self.validate)

    def zonal_mac(self) -> "MacParams":
        """Macdonald parameters of the quantum spherical zonal point (t, t^2)."""
        return MacParams(self.t, self.t ** 2)


@dataclass(frozen=True)
class GenericityReport:
    ok: bool
    k: int = 0
    distance: float = 0.0


def check_generic(params: ChainParams, threshold: float = 1e-9) -> GenericityReport:
    """Scan t^k for 1 <= k <= 2N and report the first near-root-of-unity hit.

    The paper never quantifies how generic "generic" must be; 2N powers and a
    1e-9 window is this artifact's guard, tightened per run via `threshold`.
    """
    t = complex(params.t_quarter) ** 4
    power = 1.0 + 0j
    for k in range(1, 2 * params.N + 1):
        power *= t
        d = abs(power - 1.0)
        if d < threshold:
            return GenericityReport(False, k, d)
    return GenericityReport(True)


@dataclass(frozen=True)
class MacParams:
    """Macdonald parameters (q, t); q plays the role of the shift parameter."""

    q: complex
    t: complex

    def check_generic_box(self, jmax: int, kmax: int, tol: float = 1e-9) -> None:
        """Reject q^j * t^k = 1 inside the exponent box used by triangular solves."""
        for j in range(jmax + 1):
            for k in range(kmax + 1):
                if j == k == 0:
                    continue
                if abs(self.q ** j * self.t ** k - 1.0) < tol:
                    raise NonGenericParameterError(
                        f"Macdonald parameters hit q^{j} t^{k} = 1")

    def invert(self) -> "MacParams":
        return MacParams(1.0 / self.q, 1.0 / self.t)


# ---------------------------------------------------------------------------
# optional extended precision
# ---------------------------------------------------------------------------

def extended_scalar(x: complex, dps: int = 30):
    """Lift a binary64 complex into an mpmath scalar with `dps` digits.

    The polynomial pipeline (poly/hecke/macdonald) is coefficient-agnostic, so
    feeding mpmath scalars through it yields extended-precision results for
    near-degenerate parameters.  The dense spin layer stays binary64.
    """
    mpmath.mp.dps = max(mpmath.mp.dps, dps)
    return mpmath.mpc(x.real, x.imag)
