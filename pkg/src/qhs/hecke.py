"""Polynomial representation of the (affine) Hecke algebra.

Demazure-Lusztig operators T_i, reduced-word products, exchange operators
x_ij, the commuting q-Dunkl operators Y_i, and the total q-(anti)symmetrisers.
Everything is division-free: T_i is built on the exact divided difference, and
distant x_ij are conjugates of the adjacent one by variable swaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .numeric import DEFAULT_TOL, MacParams, TolerancePolicy, q_factorial
from .poly import MultiPoly


@dataclass(frozen=True)
class HeckeContext:
    """Variable count, shift parameter q, and an explicit square root of t.

    The square root is part of the data (not recomputed as a principal
    branch): chain-side callers pass t_half = t_quarter^2, which may differ
    from the principal branch of sqrt(t).
    """

    N: int
    q: complex
    t_half: complex

    @property
    def t(self):
        return self.t_half * self.t_half

    @property
    def mac(self) -> MacParams:
        return MacParams(self.q, self.t)

    @staticmethod
    def from_mac(N: int, mac: MacParams) -> "HeckeContext":
        return HeckeContext(N, mac.q, mac.t ** 0.5)

    def with_q(self, q) -> "HeckeContext":
        return HeckeContext(self.N, q, self.t_half)


@dataclass(frozen=True)
class PermWord:
    """A word in adjacent transpositions, stored as 1-based letter indices.

    Letters apply left to right: word (a, b, c) means "apply T_a, then T_b,
    then T_c".
    """

    letters: tuple

    @staticmethod
    def cycle(j: int, i: int) -> "PermWord":
        """Word for T_(j,j-1,...,i) = T_{j-1} ... T_i, where T_i applies first."""
        if j < i:
            raise ValueError("cycle requires j >= i")
        return PermWord(tuple(range(i, j)))

    @staticmethod
    def grassmannian(sites: Sequence[int]) -> "PermWord":
        """Shortest permutation sending m -> i_m: the product of the cycle
        blocks for i_1,...,i_M where the i_M block applies first."""
        sites = tuple(sites)
        if any(a >= b for a, b in zip(sites, sites[1:])):
            raise ValueError("sites must be strictly increasing")
        letters: list = []
        for m in range(len(sites), 0, -1):
            letters.extend(PermWord.cycle(sites[m - 1], m).letters)
        return PermWord(tuple(letters))

    def __len__(self):
        return len(self.letters)


# ---------------------------------------------------------------------------
# Hecke generators
# ---------------------------------------------------------------------------

def t_pol(F: MultiPoly, i: int, ctx: HeckeContext) -> MultiPoly:
    """Demazure-Lusztig operator T_i = -t^(-1/2) (t z_i - z_{i+1}) d_i + t^(1/2)."""
    th = ctx.t_half
    d = F.divided_difference(i)
    out = d.mul_linear(i, i + 1, ctx.t, -1.0).scale(-1.0 / th)
    return out + F.scale(th)


def t_pol_inv(F: MultiPoly, i: int, ctx: HeckeContext) -> MultiPoly:
    """T_i^{-1} = T_i - (t^(1/2) - t^(-1/2))."""
    th = ctx.t_half
    return t_pol(F, i, ctx) - F.scale(th - 1.0 / th)


def t_word(F: MultiPoly, word: PermWord | Sequence[int], ctx: HeckeContext,
           inverse: bool = False) -> MultiPoly:
    """Apply the letters of a reduced word left to right (T or T^{-1})."""
    letters = word.letters if isinstance(word, PermWord) else tuple(word)
    op = t_pol_inv if inverse else t_pol
    for i in letters:
        F = op(F, i, ctx)
    return F


# ---------------------------------------------------------------------------
# exchange operators x_ij
# ---------------------------------------------------------------------------

def x_apply(F: MultiPoly, i: int, j: int, ctx: HeckeContext) -> MultiPoly:
    """Exchange operator x_ij; x_{i,i+1} = T_i s_i and x_ji = x_ij^{-1}.

    Distant pairs are conjugates of the adjacent operator by the swap moving
    j next to i, keeping every step polynomial (no division anywhere): for
    i < j, x_ij = swap_{i+1,j} (T_i s_i) swap_{i+1,j}.
    """
    if i == j:
        raise ValueError("x_ij needs i != j")
    if i < j:
        if j == i + 1:
            return t_pol(F.swap(i, i + 1), i, ctx)
        G = F.swap(i + 1, j)
        G = t_pol(G.swap(i, i + 1), i, ctx)
        return G.swap(i + 1, j)
    j0, i0 = j, i  # i > j: x_ij = x_{j0 i0}^{-1}, adjacent form s_j T_j^{-1}
    if i0 == j0 + 1:
        return t_pol_inv(F, j0, ctx).swap(j0, j0 + 1)
    G = F.swap(j0 + 1, i0)
    G = t_pol_inv(G, j0, ctx).swap(j0, j0 + 1)
    return G.swap(j0 + 1, i0)


# ---------------------------------------------------------------------------
# q-Dunkl operators
# ---------------------------------------------------------------------------

def y_apply(F: MultiPoly, i: int, ctx: HeckeContext, q=None) -> MultiPoly:
    """Y_i = T_i ... T_{N-1} pi T_1^{-1} ... T_{i-1}^{-1}.

    The inverse block applies first.  q may be a DualScalar, in which case a
    q-derivative rides along through pi (the only q-dependent site).
    """
    if not 1 <= i <= ctx.N:
        raise IndexError(f"Y index {i} out of range")
    if q is None:
        q = ctx.q
    for k in range(i - 1, 0, -1):  # rightmost factor T_{i-1}^{-1} acts first
        F = t_pol_inv(F, k, ctx)
    F = F.pi_shift(q)
    for k in range(ctx.N - 1, i - 1, -1):
        F = t_pol(F, k, ctx)
    return F


def e_r_y_apply(F: MultiPoly, r: int, ctx: HeckeContext, q=None,
                indices: Sequence[int] | None = None) -> MultiPoly:
    """Elementary symmetric combination e_r(Y) (over `indices`, default all)."""
    idx = tuple(indices) if indices is not None else tuple(range(1, ctx.N + 1))
    if not 0 <= r <= len(idx):
        raise ValueError("order r out of range")
    total = MultiPoly.zero(F.nvars)
    for subset in _combinations(idx, r):
        G = F
        for i in reversed(subset):  # the Y's commute; fixed order anyway
            G = y_apply(G, i, ctx, q=q)
        total = total + G
    return total


def _combinations(pool, r):
    pool = tuple(pool)
    n = len(pool)
    if r == 0:
        yield ()
        return
    if r > n:
        return
    idx = list(range(r))
    while True:
        yield tuple(pool[k] for k in idx)
        for k in reversed(range(r)):
            if idx[k] != k + n - r:
                break
        else:
            return
        idx[k] += 1
        for m in range(k + 1, r):
            idx[m] = idx[m - 1] + 1


# ---------------------------------------------------------------------------
# q-Vandermonde factors and total (anti)symmetrisers
# ---------------------------------------------------------------------------

def q_vandermonde(nvars: int, t, M: int | None = None, t_half=None) -> MultiPoly:
    """prod_{m<n<=M} (t z_m - z_n), embedded in nvars variables.

    When t_half is supplied the result carries the normalisation
    t^(-M(M-1)/4) = t_half^(-M(M-1)/2); otherwise the bare product is
    returned (the places that pair Delta_t with Delta_{1/t} need no
    prefactor, as the two cancel).
    """
    M = nvars if M is None else M
    out = MultiPoly.one(nvars)
    for m in range(1, M + 1):
        for n in range(m + 1, M + 1):
            out = out.mul_linear(m, n, t, -1.0)
    if t_half is not None:
        out = out.scale(t_half ** (-(M * (M - 1)) // 2))  # M(M-1) is even
    return out


def longest_word(N: int) -> PermWord:
    """Reduced word of w_0 matching d_{w_0} = (d_1...d_{N-1}) ... (d_1 d_2) d_1."""
    letters: list = []
    for k in range(1, N):
        letters.extend(range(1, k + 1))
    return PermWord(tuple(letters))


def nabla_w0(F: MultiPoly, N: int) -> MultiPoly:
    """Divided difference of the longest element, d_{w_0}."""
    for i in longest_word(N).letters:
        F = F.divided_difference(i)
    return F


def symmetrize(F: MultiPoly, sign: int, ctx: HeckeContext) -> MultiPoly:
    """Total q-(anti)symmetriser: Pi_+ = d_{w_0}(Delta_{1/t} . )/[N]! and
    Pi_- = Delta_t d_{w_0}( . )/[N]!; both are idempotent projectors, with
    image the symmetric polynomials resp. Delta_t times them."""
    N = ctx.N
    th = ctx.t_half
    norm = q_factorial(N, th)
    if sign > 0:
        G = q_vandermonde(F.nvars, 1.0 / ctx.t, M=N, t_half=1.0 / th) * F
        return nabla_w0(G, N).scale(1.0 / norm)
    G = nabla_w0(F, N)
    return (q_vandermonde(F.nvars, ctx.t, M=N, t_half=th) * G).scale(1.0 / norm)


# ---------------------------------------------------------------------------
# relation residuals (shared by unit tests and the `verify algebra` suite)
# ---------------------------------------------------------------------------

def hecke_residuals(F: MultiPoly, ctx: HeckeContext) -> dict:
    """Worst-case residuals of the defining relations on a single input."""
    th = ctx.t_half
    scale = max(F.max_coeff(), 1.0)
    out = {}

    worst = 0.0
    for i in range(1, ctx.N):
        G = t_pol(F, i, ctx) - F.scale(th)
        G = t_pol(G, i, ctx) + G.scale(1.0 / th)
        worst = max(worst, G.max_coeff() / scale)
    out["hecke_condition"] = worst

    worst = 0.0
    for i in range(1, ctx.N - 1):
        lhs = t_pol(t_pol(t_pol(F, i, ctx), i + 1, ctx), i, ctx)
        rhs = t_pol(t_pol(t_pol(F, i + 1, ctx), i, ctx), i + 1, ctx)
        worst = max(worst, lhs.residual_vs(rhs))
    for i in range(1, ctx.N):
        for j in range(i + 2, ctx.N):
            lhs = t_pol(t_pol(F, i, ctx), j, ctx)
            rhs = t_pol(t_pol(F, j, ctx), i, ctx)
            worst = max(worst, lhs.residual_vs(rhs))
    out["braid"] = worst

    worst = 0.0
    for i in range(1, ctx.N):
        lhs = t_pol_inv(y_apply(t_pol_inv(F, i, ctx), i, ctx), i, ctx)
        rhs = y_apply(F, i + 1, ctx)
        worst = max(worst, lhs.residual_vs(rhs))
        for j in range(1, ctx.N + 1):
            if j in (i, i + 1):
                continue
            lhs = t_pol(y_apply(F, j, ctx), i, ctx)
            rhs = y_apply(t_pol(F, i, ctx), j, ctx)
            worst = max(worst, lhs.residual_vs(rhs))
    out["aha_cross"] = worst

    worst = 0.0
    for i in range(1, ctx.N + 1):
        for j in range(i + 1, ctx.N + 1):
            lhs = y_apply(y_apply(F, i, ctx), j, ctx)
            rhs = y_apply(y_apply(F, j, ctx), i, ctx)
            worst = max(worst, lhs.residual_vs(rhs))
    out["y_commute"] = worst

    worst = 0.0
    for i in range(1, ctx.N + 1):
        for j in range(1, ctx.N + 1):
            if i == j:
                continue
            G = x_apply(x_apply(F, j, i, ctx), i, j, ctx)
            worst = max(worst, G.residual_vs(F))
    if ctx.N >= 3:
        i, j, k = 1, 2, 3
        lhs = x_apply(x_apply(x_apply(F, j, k, ctx), i, k, ctx), i, j, ctx)
        rhs = x_apply(x_apply(x_apply(F, i, j, ctx), i, k, ctx), j, k, ctx)
        worst = max(worst, lhs.residual_vs(rhs))
    out["x_relations"] = worst
    return out
