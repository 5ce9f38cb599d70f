"""C-matrices, G-matrices and F-polynomials, and the separation formulas.

Each invariant is available two ways: by its recursion along a mutation
word, and read off from principal-coefficient X- and Y-functions.  The two
routes are independent and are compared in the test suite.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import NegativeCoefficient, NonMonomialTropicalImage, NonZeroZExponent
from .poly import (
    ONE,
    Frac,
    LaurentPoly,
    lp_exact_div,
    lp_multidegree,
    lp_substitute,
    principal_grading,
    xvar,
    yvar,
)
from .semifield import TROPICAL, UNIVERSAL, TropElement, coerce, sf_specialize
from .seed import (
    ClusterPattern,
    ExchangePoly,
    GenSeed,
    as_matrix,
    hat_y,
    matrix_mutate,
    mutate_coefficients,
    pos,
    validate_seed,
)


def identity(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def det(M: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free elimination."""
    A = [list(r) for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class PatternState:
    """Invariants at the end of ``word``; ``B`` and ``Z`` are the current matrix and exchange polynomials."""

    word: tuple
    C: tuple
    G: tuple
    F: tuple
    B: tuple
    Z: tuple


@dataclass(frozen=True, eq=False)
class XYState:
    word: tuple
    X: tuple
    Y: tuple


# -- recursions -----------------------------------------------------------------


def _matrices(B, D, word):
    """``(B^t, C^t)`` at every prefix of ``word``."""
    B = as_matrix(B)
    n = len(B)
    C = identity(n)
    out = [(B, C)]
    for k in word:
        k0 = k - 1
        dk = D[k0]
        rows = []
        for i in range(n):
            cik = C[i][k0]
            row = []
            for j in range(n):
                if j == k0:
                    row.append(-cik)
                else:
                    bkj = B[k0][j]
                    row.append(C[i][j] + cik * pos(dk * bkj) + pos(-cik) * dk * bkj)
            rows.append(tuple(row))
        C = tuple(rows)
        B = matrix_mutate(B, D, k)
        out.append((B, C))
    return out


def c_matrix_rec(B, D: Sequence[int], word: Sequence[int]) -> list:
    """C-matrices at every prefix of ``word`` (the empty prefix first)."""
    return [C for _, C in _matrices(B, D, word)]


def g_matrix_rec(B, D: Sequence[int], word: Sequence[int]) -> list:
    """G-matrices at every prefix of ``word``.

    The correction term pairs the current c-vector with the initial matrix;
    see the decisions log for why this is the reading that agrees with the
    grading route.
    """
    B0 = as_matrix(B)
    n = len(B0)
    mats = _matrices(B0, D, word)
    G = identity(n)
    out = [G]
    for m, k in enumerate(word):
        Bt, Ct = mats[m]
        k0 = k - 1
        dk = D[k0]
        col = []
        for i in range(n):
            v = -G[i][k0]
            v += sum(G[i][l] * pos(-Bt[l][k0] * dk) for l in range(n))
            v -= sum(B0[i][l] * pos(-Ct[l][k0] * dk) for l in range(n))
            col.append(v)
        G = tuple(tuple(col[i] if j == k0 else G[i][j] for j in range(n)) for i in range(n))
        out.append(G)
    return out


def formal_exchange_polys(D: Sequence[int]) -> tuple:
    return tuple(ExchangePoly.formal(i, d) for i, d in enumerate(D, start=1))


def _poly_coeffs(Z: ExchangePoly) -> list:
    out = []
    for c in Z.coeffs:
        if c.den != 1:
            raise ValueError(f"F-polynomials need polynomial exchange coefficients, got {c}")
        out.append(c.num)
    return out


def f_polys_rec(B, D: Sequence[int], Z: Optional[Sequence[ExchangePoly]], word: Sequence[int]) -> list:
    """F-polynomials at every prefix of ``word``; ``Z=None`` means formal coefficients."""
    B0 = as_matrix(B)
    n = len(B0)
    Zt = tuple(Z) if Z is not None else formal_exchange_polys(D)
    mats = _matrices(B0, D, word)
    F = (ONE,) * n
    out = [F]
    for m, k in enumerate(word):
        Bt, Ct = mats[m]
        k0 = k - 1
        dk = D[k0]
        # A * u with u = y^{c_k} prod F^{b_k}, both sides polynomial
        A = LaurentPoly.monomial([(yvar(i + 1), pos(-Ct[i][k0])) for i in range(n)])
        P = LaurentPoly.monomial([(yvar(i + 1), pos(Ct[i][k0])) for i in range(n)])
        for i in range(n):
            b = Bt[i][k0]
            if b < 0:
                A = A * F[i] ** (-b)
            elif b > 0:
                P = P * F[i] ** b
        total = LaurentPoly()
        Ppow, Apow = [ONE], [ONE]
        for _ in range(dk):
            Ppow.append(Ppow[-1] * P)
            Apow.append(Apow[-1] * A)
        for s, z in enumerate(_poly_coeffs(Zt[k0])):
            if z:
                total = total + z * Ppow[s] * Apow[dk - s]
        Fk = lp_exact_div(total, F[k0])
        if Fk.constant_term() != 1:
            warnings.warn(f"F_{k} after {tuple(word[: m + 1])} has constant term {Fk.constant_term()}", RuntimeWarning)
        F = F[:k0] + (Fk,) + F[k0 + 1:]
        Zt = Zt[:k0] + (Zt[k0].reversed(),) + Zt[k0 + 1:]
        out.append(F)
    return out


def pattern_states(B, D: Sequence[int], word: Sequence[int], Z: Optional[Sequence[ExchangePoly]] = None) -> list:
    """:class:`PatternState` at every prefix of ``word``."""
    word = tuple(word)
    mats = _matrices(B, D, word)
    Gs = g_matrix_rec(B, D, word)
    Fs = f_polys_rec(B, D, Z, word)
    Z0 = tuple(Z) if Z is not None else formal_exchange_polys(D)
    out = []
    Zt = Z0
    for m in range(len(word) + 1):
        if m:
            k0 = word[m - 1] - 1
            Zt = Zt[:k0] + (Zt[k0].reversed(),) + Zt[k0 + 1:]
        Bt, Ct = mats[m]
        out.append(PatternState(word=word[:m], C=Ct, G=Gs[m], F=Fs[m], B=Bt, Z=Zt))
    return out


def states_for(seed: GenSeed, word: Sequence[int]) -> list:
    """Pattern states for the degrees and exchange matrix of ``seed`` (formal z)."""
    return pattern_states(seed.B, seed.d, word)


# -- X- and Y-functions ----------------------------------------------------------


def xy_functions(B, Z, word: Sequence[int], y_semifield=UNIVERSAL) -> list:
    """Principal-coefficient X- and Y-functions at every prefix of ``word``.

    X comes from mutation over Trop(y, z) with formal x, y, z; Y from the
    coefficient rule in ``y_semifield``.  Passing ``TROPICAL`` yields the
    tropical images of the Y-functions directly, which is all the c-vectors
    need and avoids the growth of unreduced universal fractions.  ``Z`` is a
    list of exchange polynomials or degrees.
    """
    word = tuple(word)
    seed = validate_seed(B, Z, "tropical")
    ys = tuple(y_semifield.generator(yvar(j)) for j in range(1, seed.n + 1))
    pattern = ClusterPattern(seed)
    out = [XYState(word=(), X=seed.x, Y=ys)]
    Bt, Zt = seed.B, seed.Z
    for m, k in enumerate(word):
        ys = mutate_coefficients(ys, Bt, Zt, k, y_semifield)
        k0 = k - 1
        Bt = matrix_mutate(Bt, [z.degree for z in Zt], k)
        Zt = Zt[:k0] + (Zt[k0].reversed(),) + Zt[k0 + 1:]
        out.append(XYState(word=word[: m + 1], X=pattern.seed_at(word[: m + 1]).x, Y=ys))
    return out


def f_from_x(X: Frac, n: int) -> LaurentPoly:
    """``F = X(1, y, z)``."""
    ones = {xvar(i): 1 for i in range(1, n + 1)}
    val = Frac(lp_substitute(X.num, ones, partial=True).num) / Frac(lp_substitute(X.den, ones, partial=True).num)
    return lp_exact_div(val.num, val.den)


def c_from_tropical(Y: Sequence) -> tuple:
    """Exponent matrix of the tropical images of ``Y`` (column ``j`` from ``Y_j``)."""
    n = len(Y)
    cols = []
    for j, yj in enumerate(Y, start=1):
        try:
            t = yj if isinstance(yj, TropElement) else sf_specialize(yj, TROPICAL)
        except NegativeCoefficient as exc:
            raise NonMonomialTropicalImage(f"Y_{j} has no tropical image: {exc}") from None
        col = [0] * n
        for v, e in t.exps:
            if v.rank != 1:
                raise NonZeroZExponent(f"tropical image of Y_{j} has {v}^{e}")
            col[v.i - 1] = e
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def g_from_grading(X: Sequence[Frac], B_initial) -> tuple:
    """Multidegrees of ``X`` under the principal grading (column ``j`` from ``X_j``)."""
    n = len(X)
    deg = principal_grading(B_initial)
    cols = []
    for Xj in X:
        top = lp_multidegree(Xj.num, deg, n)
        bot = lp_multidegree(Xj.den, deg, n)
        cols.append([a - b for a, b in zip(top, bot)])
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


# -- separation of additions ---------------------------------------------------------


def drop_zero_z(F: LaurentPoly, z_values: Mapping) -> LaurentPoly:
    """Remove terms involving a z-variable whose value is zero."""
    zero = {v for v, c in z_values.items() if not c}
    if not zero:
        return F
    return LaurentPoly({m: c for m, c in F.items() if not any(v in zero for v, _ in m)})


def f_in_semifield(F: LaurentPoly, seed0: GenSeed, semifield=None):
    """``F|_P(y, z)`` at the coefficients of ``seed0``."""
    sf = semifield or seed0.semifield
    zvals = seed0.z_assignment()
    assignment = {yvar(i): coerce(sf, v) for i, v in enumerate(seed0.y, start=1)}
    assignment.update({v: coerce(sf, c) for v, c in zvals.items() if c})
    return sf_specialize(drop_zero_z(F, zvals), sf, assignment)


def f_at_yhat(F: LaurentPoly, seed0: GenSeed) -> Frac:
    """``F(yhat, z)`` in the ambient field, at the initial cluster and coefficients."""
    assignment = {yvar(i): v for i, v in enumerate(hat_y(seed0), start=1)}
    assignment.update(seed0.z_assignment())
    return lp_substitute(F, assignment, partial=True)


def y_from_state(seed0: GenSeed, state: PatternState, semifield=None) -> tuple:
    sf = semifield or seed0.semifield
    n = seed0.n
    ys = [coerce(sf, v) for v in seed0.y]
    Fp = [f_in_semifield(f, seed0, sf) for f in state.F]
    out = []
    for j in range(n):
        v = sf.one()
        for i in range(n):
            if state.C[i][j]:
                v = v * ys[i] ** state.C[i][j]
            if state.B[i][j]:
                v = v * Fp[i] ** state.B[i][j]
        out.append(v)
    return tuple(out)


def x_from_state(seed0: GenSeed, state: PatternState, semifield=None) -> tuple:
    sf = semifield or seed0.semifield
    n = seed0.n
    out = []
    for j in range(n):
        v = f_at_yhat(state.F[j], seed0) / f_in_semifield(state.F[j], seed0, sf).to_frac()
        for i in range(n):
            g = state.G[i][j]
            if g:
                v = v * seed0.x[i] ** g
        out.append(v)
    return tuple(out)


def y_via_separation(seed0: GenSeed, word: Sequence[int], semifield=None) -> tuple:
    """Coefficients at the end of ``word`` from c-vectors, B^t and F|_P."""
    return y_from_state(seed0, states_for(seed0, word)[-1], semifield)


def x_via_separation(seed0: GenSeed, word: Sequence[int], semifield=None) -> tuple:
    """Cluster at the end of ``word`` from g-vectors and F-polynomials."""
    return x_from_state(seed0, states_for(seed0, word)[-1], semifield)


__all__ = [
    "PatternState",
    "XYState",
    "c_from_tropical",
    "c_matrix_rec",
    "det",
    "drop_zero_z",
    "f_at_yhat",
    "f_from_x",
    "f_in_semifield",
    "f_polys_rec",
    "formal_exchange_polys",
    "g_from_grading",
    "g_matrix_rec",
    "identity",
    "pattern_states",
    "states_for",
    "x_from_state",
    "x_via_separation",
    "xy_functions",
    "y_from_state",
    "y_via_separation",
]
