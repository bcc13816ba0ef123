"""Sparse multivariate polynomials and the exact combinatorial operators on them.

Coefficients are duck-typed: complex, DualScalar and mpmath.mpc all work.  All
Hecke/Macdonald computations in this package reduce to the operators defined
here; the divided difference uses a closed monomial formula, so no division is
ever performed.
"""

from __future__ import annotations

import json
from typing import Callable, Iterable, Mapping, Sequence

from .numeric import DEFAULT_TOL, TolerancePolicy, mag, omega_power

Monomial = tuple  # tuple of nonnegative integer exponents, length = nvars


class MultiPoly:
    """Immutable sparse polynomial: map from exponent tuples to coefficients.

    Coefficients with magnitude <= tol.prune are dropped on construction, so
    the representation is canonical (one entry per exponent vector, no stored
    near-zeros).
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None,
                 tol: TolerancePolicy = DEFAULT_TOL, _skip_prune: bool = False):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _skip_prune:
            self.terms = dict(terms)
        else:
            self.terms = {e: c for e, c in terms.items() if mag(c) > tol.prune}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MultiPoly":
        return MultiPoly(nvars, {})

    @staticmethod
    def constant(nvars: int, c) -> "MultiPoly":
        return MultiPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def one(nvars: int) -> "MultiPoly":
        return MultiPoly.constant(nvars, 1.0 + 0j)

    @staticmethod
    def variable(nvars: int, i: int, power: int = 1) -> "MultiPoly":
        """z_i^power with 1-based variable index i."""
        e = [0] * nvars
        e[i - 1] = power
        return MultiPoly(nvars, {tuple(e): 1.0 + 0j})

    @staticmethod
    def monomial(nvars: int, exps: Sequence[int], c=1.0 + 0j) -> "MultiPoly":
        return MultiPoly(nvars, {tuple(exps): c})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                out[e] = out[e] + c
            else:
                out[e] = c
        return MultiPoly(self.nvars, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + other.scale(-1.0)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in out:
                    out[e] = out[e] + c
                else:
                    out[e] = c
        return MultiPoly(self.nvars, out)

    def scale(self, c) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: v * c for e, v in self.terms.items()})

    def is_zero(self, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        return all(mag(c) <= tol.atol for c in self.terms.values())

    def max_coeff(self) -> float:
        return max((mag(c) for c in self.terms.values()), default=0.0)

    def coeff(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), 0.0 + 0j)

    # -- degree data --------------------------------------------------------

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_var_degree(self) -> int:
        return max((max(e) for e in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        return max((e[i - 1] for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def embed(self, nvars: int) -> "MultiPoly":
        """Reinterpret in a larger ambient variable count (no-op on terms)."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink the ambient variable count")
        if nvars == self.nvars:
            return self
        pad = (0,) * (nvars - self.nvars)
        return MultiPoly(nvars, {e + pad: c for e, c in self.terms.items()},
                         _skip_prune=True)

    # -- combinatorial operators --------------------------------------------

    def swap(self, i: int, j: int) -> "MultiPoly":
        """Exchange variables z_i and z_j (1-based indices)."""
        self._check_index(i)
        self._check_index(j)
        if i == j:
            return self
        a, b = i - 1, j - 1
        out: dict = {}
        for e, c in self.terms.items():
            f = list(e)
            f[a], f[b] = f[b], f[a]
            f = tuple(f)
            if f in out:
                out[f] = out[f] + c
            else:
                out[f] = c
        return MultiPoly(self.nvars, out, _skip_prune=True)

    def substitute_var(self, i: int, j: int) -> "MultiPoly":
        """Replacement map z_i -> z_j (collapses, unlike swap)."""
        self._check_index(i)
        self._check_index(j)
        if i == j:
            return self
        a, b = i - 1, j - 1
        out: dict = {}
        for e, c in self.terms.items():
            f = list(e)
            f[b] += f[a]
            f[a] = 0
            f = tuple(f)
            if f in out:
                out[f] = out[f] + c
            else:
                out[f] = c
        return MultiPoly(self.nvars, out)

    def set_var_zero(self, i: int) -> "MultiPoly":
        """Substitute z_i = 0."""
        self._check_index(i)
        a = i - 1
        return MultiPoly(self.nvars,
                         {e: c for e, c in self.terms.items() if e[a] == 0},
                         _skip_prune=True)

    def divided_difference(self, i: int) -> "MultiPoly":
        """Newton divided difference (z_i - z_{i+1})^(-1) (1 - s_i), exactly.

        Uses the monomial identity
            d_i(z_i^a z_{i+1}^b) = sign(a-b) * sum_k z_i^k z_{i+1}^(a+b-1-k)
        with k from min(a,b) to max(a,b)-1 (zero when a = b), so there is no
        cancellation from an actual division.
        """
        if not 1 <= i <= self.nvars - 1:
            raise IndexError(f"divided_difference index {i} out of range")
        a_ix, b_ix = i - 1, i
        out: dict = {}
        for e, c in self.terms.items():
            a, b = e[a_ix], e[b_ix]
            if a == b:
                continue
            sign = 1.0 if a > b else -1.0
            lo, hi = (b, a) if a > b else (a, b)
            s = a + b - 1
            f = list(e)
            for k in range(lo, hi):
                f[a_ix] = k
                f[b_ix] = s - k
                key = tuple(f)
                cc = c * sign
                if key in out:
                    out[key] = out[key] + cc
                else:
                    out[key] = cc
        return MultiPoly(self.nvars, out)

    def q_shift(self, i: int, q) -> "MultiPoly":
        """Multiplicative difference operator: z_i -> q z_i."""
        self._check_index(i)
        a = i - 1
        powers = _power_table(q, self.degree_in(i))
        return MultiPoly(self.nvars,
                         {e: c * powers[e[a]] for e, c in self.terms.items()})

    def pi_shift(self, q) -> "MultiPoly":
        """Twisted cyclic shift: (pi F)(z) = F(q z_N, z_1, ..., z_{N-1}).

        On monomials: (e_1,...,e_N) -> (e_2,...,e_N,e_1) with coefficient q^e_1.
        """
        powers = _power_table(q, self.degree_in(1))
        out: dict = {}
        for e, c in self.terms.items():
            f = e[1:] + (e[0],)
            cc = c * powers[e[0]]
            if f in out:
                out[f] = out[f] + cc
            else:
                out[f] = cc
        return MultiPoly(self.nvars, out)

    def mul_linear(self, i: int, j: int, ci, cj) -> "MultiPoly":
        """Multiply by the binomial ci*z_i + cj*z_j."""
        self._check_index(i)
        self._check_index(j)
        out: dict = {}
        for e, c in self.terms.items():
            for ix, cc in ((i - 1, c * ci), (j - 1, c * cj)):
                f = list(e)
                f[ix] += 1
                f = tuple(f)
                if f in out:
                    out[f] = out[f] + cc
                else:
                    out[f] = cc
        return MultiPoly(self.nvars, out)

    def div_linear(self, i: int, j: int, ci, cj,
                   tol: TolerancePolicy = DEFAULT_TOL) -> "MultiPoly":
        """Exact division by ci*z_i + cj*z_j via synthetic (Horner) division.

        Raises ValueError when the remainder F(z_i -> -(cj/ci) z_j) is not
        negligible relative to the input.
        """
        self._check_index(i)
        self._check_index(j)
        if mag(ci) == 0.0:
            raise ValueError("leading divisor coefficient must be nonzero")
        w = -(cj / ci)  # divisor = ci * (z_i - w z_j)
        # Group terms by exponent in z_i; synthetic division top-down.
        a_ix, b_ix = i - 1, j - 1
        by_deg: dict = {}
        for e, c in self.terms.items():
            by_deg.setdefault(e[a_ix], {})[e] = c
        if not by_deg:
            return MultiPoly.zero(self.nvars)
        out: dict = {}
        carry: dict = {}  # polynomial in the remaining variables, z_i-degree k
        for k in range(max(by_deg), 0, -1):
            level = dict(carry)
            for e, c in by_deg.get(k, {}).items():
                if e in level:
                    level[e] = level[e] + c
                else:
                    level[e] = c
            carry = {}
            for e, c in level.items():
                q = list(e)
                q[a_ix] = k - 1
                key = tuple(q)
                cc = c / ci
                if key in out:
                    out[key] = out[key] + cc
                else:
                    out[key] = cc
                if mag(w) > 0.0:
                    r = list(e)
                    r[a_ix] = k - 1
                    r[b_ix] += 1
                    rkey = tuple(r)
                    rc = c * w
                    if rkey in carry:
                        carry[rkey] = carry[rkey] + rc
                    else:
                        carry[rkey] = rc
        # remainder = constant-in-z_i part plus final carry
        rem: dict = dict(by_deg.get(0, {}))
        for e, c in carry.items():
            if e in rem:
                rem[e] = rem[e] + c
            else:
                rem[e] = c
        rem_mag = max((mag(c) for c in rem.values()), default=0.0)
        scale = max(self.max_coeff(), 1.0)
        if rem_mag > tol.atol + tol.rtol * scale * 10.0:
            raise ValueError(f"non-exact division: remainder magnitude {rem_mag:.2e}")
        return MultiPoly(self.nvars, out)

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, point: Sequence[complex]):
        """Evaluate at a point, accumulating per-variable power tables."""
        if len(point) < self.nvars:
            raise ValueError("point has fewer entries than variables")
        tables = [_power_table(point[k], self.degree_in(k + 1))
                  for k in range(self.nvars)]
        total = None
        for e in sorted(self.terms):  # fixed order => deterministic rounding
            c = self.terms[e]
            v = c
            for k, ek in enumerate(e):
                if ek:
                    v = v * tables[k][ek]
            total = v if total is None else total + v
        return 0.0 + 0j if total is None else total

    def evaluate_at_roots(self, N: int):
        """Evaluate at z_j = omega^j, the bit-stable root-of-unity points."""
        return self.evaluate([omega_power(N, j + 1) for j in range(max(self.nvars, N))])

    def evaluate_at_inverse_roots(self, N: int):
        return self.evaluate([omega_power(N, -(j + 1)) for j in range(max(self.nvars, N))])

    # -- predicates -----------------------------------------------------------

    def is_symmetric(self, *blocks: Iterable[int], tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        """True iff invariant under adjacent swaps inside each index block."""
        scale = max(self.max_coeff(), 1.0)
        for block in blocks:
            idx = sorted(block)
            for a, b in zip(idx, idx[1:]):
                diff = self - self.swap(a, b)
                if any(mag(c) > tol.atol + tol.rtol * scale for c in diff.terms.values()):
                    return False
        return True

    def map_coeffs(self, fn: Callable) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    # -- serialization ----------------------------------------------------------

    def to_text(self) -> str:
        """Human-readable "coeff * z1^a z2^b" form."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            factors = " ".join(f"z{k + 1}^{ek}" for k, ek in enumerate(e) if ek)
            parts.append(f"({c:.12g})" + (f" * {factors}" if factors else ""))
        return " + ".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"exps": list(e), "re": complex(c).real, "im": complex(c).imag}
                for e, c in sorted(self.terms.items())
            ],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "MultiPoly":
        terms = {tuple(t["exps"]): complex(t["re"], t["im"]) for t in data["terms"]}
        return MultiPoly(int(data["nvars"]), terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    # -- misc ----------------------------------------------------------------

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.nvars:
            raise IndexError(f"variable index {i} out of range 1..{self.nvars}")

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.to_text()})"

    def residual_vs(self, other: "MultiPoly") -> float:
        """Max coefficient deviation scaled by the joint coefficient size."""
        diff = self - other
        scale = max(self.max_coeff(), other.max_coeff(), 1.0)
        return max((mag(c) for c in diff.terms.values()), default=0.0) / scale


def _power_table(x, n: int) -> list:
    """[x^0, x^1, ..., x^n] by repeated multiplication; x may be dual/mpmath."""
    out = [1.0]
    acc = 1.0
    for _ in range(n):
        acc = acc * x
        out.append(acc)
    return out


def random_poly(nvars: int, max_deg: int, rng, density: float = 0.5,
                n_terms: int | None = None) -> MultiPoly:
    """Random complex polynomial for relation tests (deterministic under rng)."""
    terms: dict = {}
    if n_terms is None:
        n_terms = max(3, int(density * (max_deg + 1) ** nvars))
    for _ in range(n_terms):
        e = tuple(int(rng.integers(0, max_deg + 1)) for _ in range(nvars))
        c = complex(rng.normal(), rng.normal())
        terms[e] = terms.get(e, 0.0) + c
    return MultiPoly(nvars, terms)
