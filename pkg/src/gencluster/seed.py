"""Generalized seeds and their mutations.

A generalized seed is ``(x, y, B, Z)``: a cluster of ambient-field elements,
coefficients in a semifield, a skew-symmetrizable integer matrix, and one
exchange polynomial ``Z_i(u) = sum_s z_{i,s} u^s`` per direction with
``z_{i,0} = z_{i,d_i} = 1``.  Directions are 1-indexed throughout, matching
the mutation labels ``mu_1, ..., mu_n``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from .errors import (
    BadExchangePoly,
    DimensionMismatch,
    NoIntegralRoot,
    NormalizationViolated,
    NotSkewSymmetrizable,
    RootUnavailable,
)
from .poly import Frac, LaurentPoly, frac_product, parse_poly, xvar, yvar, zvar
from .semifield import (
    TROPICAL,
    Semifield,
    TropElement,
    UsfElement,
    coerce,
    get_semifield,
)

Matrix = tuple  # tuple[tuple[int, ...], ...]


def pos(b: int) -> int:
    return b if b > 0 else 0


# -- exchange polynomials -----------------------------------------------------


@dataclass(frozen=True)
class ExchangePoly:
    """Coefficients ``z_0, ..., z_d`` of an exchange polynomial, as ambient-field values."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def formal(cls, i: int, d: int) -> "ExchangePoly":
        """``1 + z_{i,1} u + ... + z_{i,d-1} u^{d-1} + u^d`` with formal interior coefficients."""
        if d < 1:
            raise BadExchangePoly(f"exchange polynomial {i} must have positive degree, got {d}")
        inner = tuple(Frac.var(zvar(i, s)) for s in range(1, d))
        return cls((Frac(1),) + inner + (Frac(1),))

    @classmethod
    def ordinary(cls) -> "ExchangePoly":
        return cls((Frac(1), Frac(1)))

    @classmethod
    def from_values(cls, values: Sequence) -> "ExchangePoly":
        return cls(tuple(_coefficient(v) for v in values))

    def reversed(self) -> "ExchangePoly":
        return ExchangePoly(self.coeffs[::-1])

    def is_formal(self, i: int) -> bool:
        return self == ExchangePoly.formal(i, self.degree)

    def __str__(self) -> str:
        parts = []
        for s, c in enumerate(self.coeffs):
            if not c:
                continue
            u = "" if s == 0 else ("u" if s == 1 else f"u^{s}")
            cs = str(c)
            if not u:
                parts.append(cs)
            elif cs == "1":
                parts.append(u)
            elif c.den == 1 and len(c.num) == 1:
                parts.append(f"{cs}*{u}")
            else:
                parts.append(f"({cs})*{u}")
        return " + ".join(parts)


def _coefficient(v) -> Frac:
    if isinstance(v, bool):
        raise BadExchangePoly(f"invalid coefficient {v!r}")
    if isinstance(v, int):
        if v < 0:
            raise BadExchangePoly(f"coefficient {v} is negative")
        return Frac(v)
    if isinstance(v, str):
        v = parse_poly(v)
    if isinstance(v, (TropElement, UsfElement)):
        v = v.to_frac()
    if isinstance(v, LaurentPoly):
        v = Frac(v)
    if not isinstance(v, Frac):
        raise BadExchangePoly(f"cannot use {v!r} as an exchange coefficient")
    if v and not (v.num.is_positive() and v.den.is_positive()):
        raise BadExchangePoly(f"coefficient {v} is not subtraction-free")
    return v


def reverse_poly(Z: ExchangePoly) -> ExchangePoly:
    """The reversed exchange polynomial ``u^d Z(1/u)``."""
    return Z.reversed()


# -- exchange matrices --------------------------------------------------------


def skew_symmetrizer(B: Sequence[Sequence[int]]) -> tuple:
    """Least positive integers ``s`` with ``s_i b_ij = -s_j b_ji`` for all ``i, j``.

    Multipliers are propagated along the nonzero pattern of ``B``; each
    connected component is scaled independently.
    """
    n = len(B)
    for i in range(n):
        if B[i][i] != 0:
            raise NotSkewSymmetrizable(f"diagonal entry b_{i + 1}{i + 1} = {B[i][i]} is nonzero")
        for j in range(n):
            if (B[i][j] == 0) != (B[j][i] == 0) or B[i][j] * B[j][i] > 0:
                raise NotSkewSymmetrizable(
                    f"entries b_{i + 1}{j + 1} = {B[i][j]} and b_{j + 1}{i + 1} = {B[j][i]} "
                    "are not of opposite sign"
                )
    mult: list = [None] * n
    for root in range(n):
        if mult[root] is not None:
            continue
        mult[root] = Fraction(1)
        component = [root]
        queue = [root]
        while queue:
            i = queue.pop()
            for j in range(n):
                if B[i][j] == 0:
                    continue
                want = mult[i] * B[i][j] / -B[j][i]
                if mult[j] is None:
                    mult[j] = want
                    component.append(j)
                    queue.append(j)
                elif mult[j] != want:
                    raise NotSkewSymmetrizable(
                        f"no consistent symmetrizer around b_{i + 1}{j + 1}; "
                        f"s_{j + 1} would need to be both {mult[j]} and {want}"
                    )
        scale = lcm(*(mult[j].denominator for j in component))
        ints = [int(mult[j] * scale) for j in component]
        g = 0
        for v in ints:
            g = gcd(g, v)
        for j, v in zip(component, ints):
            mult[j] = Fraction(v // g)
    return tuple(int(m) for m in mult)


def matrix_mutate(B: Sequence[Sequence[int]], d: Sequence[int], k: int) -> Matrix:
    """Generalized matrix mutation in direction ``k`` (1-indexed) with degrees ``d``."""
    n = len(B)
    if not 1 <= k <= n:
        raise IndexError(f"direction {k} out of range 1..{n}")
    k0 = k - 1
    dk = d[k0]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            b = B[i][j]
            if i == k0 or j == k0:
                row.append(-b)
            else:
                bik, bkj = B[i][k0], B[k0][j]
                row.append(b + pos(bik) * dk * bkj + bik * dk * pos(-bkj))
        rows.append(tuple(row))
    return tuple(rows)


def as_matrix(B) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in B)


def diag_left(d: Sequence[int], B: Sequence[Sequence[int]]) -> Matrix:
    """``D B``."""
    return tuple(tuple(d[i] * v for v in row) for i, row in enumerate(B))


def diag_right(B: Sequence[Sequence[int]], d: Sequence[int]) -> Matrix:
    """``B D``."""
    return tuple(tuple(v * d[j] for j, v in enumerate(row)) for row in B)


# -- seeds ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GenSeed:
    x: tuple
    y: tuple
    B: Matrix
    Z: tuple
    semifield: Semifield
    symmetrizer: tuple = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.B)

    @property
    def d(self) -> tuple:
        return tuple(z.degree for z in self.Z)

    def z_assignment(self) -> dict:
        """Values of the formal interior coefficients ``z_{i,s}`` in this seed."""
        out = {}
        for i, Zi in enumerate(self.Z, start=1):
            for s in range(1, Zi.degree):
                out[zvar(i, s)] = Zi.coeffs[s]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenSeed):
            return NotImplemented
        return (
            self.B == other.B
            and self.semifield is other.semifield
            and self.Z == other.Z
            and all(a == b for a, b in zip(self.x, other.x))
            and all(a == b for a, b in zip(self.y, other.y))
        )

    __hash__ = None

    def __str__(self) -> str:
        lines = [f"semifield: {self.semifield.name}", f"B: {[list(r) for r in self.B]}"]
        for i, xi in enumerate(self.x, 1):
            lines.append(f"x{i} = {xi}")
        for j, yj in enumerate(self.y, 1):
            lines.append(f"y{j} = {yj}")
        for i, Zi in enumerate(self.Z, 1):
            lines.append(f"Z{i}(u) = {Zi}")
        return "\n".join(lines)


def validate_seed(
    B,
    Z,
    semifield="universal",
    y: Optional[Sequence] = None,
    x: Optional[Sequence] = None,
) -> GenSeed:
    """Build and validate a generalized seed.

    Each entry of ``Z`` is an :class:`ExchangePoly`, a degree ``d`` (formal
    interior coefficients), or a list of ``d + 1`` coefficient values.
    ``y`` defaults to the generators ``y_1..y_n`` of the semifield and ``x``
    to the initial cluster ``x_1..x_n``.
    """
    try:
        B = as_matrix(B)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatch(f"B is not an integer matrix: {exc}") from None
    n = len(B)
    if n == 0 or any(len(row) != n for row in B):
        raise DimensionMismatch(f"B must be square, got row lengths {[len(r) for r in B]}")
    if len(Z) != n:
        raise DimensionMismatch(f"expected {n} exchange polynomials, got {len(Z)}")
    sym = skew_symmetrizer(B)

    polys = []
    for i, entry in enumerate(Z, start=1):
        if isinstance(entry, ExchangePoly):
            Zi = entry
        elif isinstance(entry, int) and not isinstance(entry, bool):
            Zi = ExchangePoly.formal(i, entry)
        else:
            Zi = ExchangePoly.from_values(entry)
        if Zi.degree < 1:
            raise BadExchangePoly(f"Z_{i} must have positive degree")
        for s in (0, Zi.degree):
            if Zi.coeffs[s] != 1:
                raise BadExchangePoly(f"z_{i},{s} must be 1, got {Zi.coeffs[s]}")
        for s, c in enumerate(Zi.coeffs):
            _coefficient(c)
        polys.append(Zi)

    sf = get_semifield(semifield) if isinstance(semifield, str) else semifield
    if y is None:
        y = tuple(sf.generator(yvar(j)) for j in range(1, n + 1))
    else:
        y = tuple(coerce(sf, v) for v in y)
        if len(y) != n:
            raise DimensionMismatch(f"expected {n} coefficients, got {len(y)}")
    if x is None:
        x = tuple(Frac.var(xvar(i)) for i in range(1, n + 1))
    else:
        x = tuple(v if isinstance(v, Frac) else Frac(v) for v in x)
        if len(x) != n:
            raise DimensionMismatch(f"expected {n} cluster variables, got {len(x)}")
        gens = []
        for v in x:
            if v.den != 1 or len(v.num) != 1:
                raise DimensionMismatch(f"initial cluster variable {v} is not a generator")
            ((m, c),) = v.num.items()
            if c != 1 or len(m) != 1 or m[0][1] != 1:
                raise DimensionMismatch(f"initial cluster variable {v} is not a generator")
            gens.append(m[0][0])
        if len(set(gens)) != n:
            raise DimensionMismatch("initial cluster variables must be distinct generators")
    return GenSeed(x=x, y=y, B=B, Z=tuple(polys), semifield=sf, symmetrizer=sym)


def hat_y(seed: GenSeed) -> tuple:
    """``yhat_k = y_k * prod_i x_i ** b_ik`` in the ambient field."""
    out = []
    for k in range(seed.n):
        v = seed.y[k].to_frac()
        for i in range(seed.n):
            b = seed.B[i][k]
            if b:
                v = v * seed.x[i] ** b
        out.append(v)
    return tuple(out)


def exchange(x: Sequence[Frac], col: Sequence[int], k0: int, coeffs: Sequence[Frac], yk: Frac, zp: Frac) -> Frac:
    """New cluster variable ``x'_k`` from the exchange relation.

    Computes ``x_k^{-1} (prod x_i^{[-b_ik]+})^d sum_s c_s (yk prod x_i^{b_ik})^s / zp``
    with every exponent of the current cluster nonnegative, then cancels the
    old variable by exact division.
    """
    d = len(coeffs) - 1
    n = len(x)
    exps = [[(col[i] * s if col[i] > 0 else -col[i] * (d - s)) for i in range(n)] for s in range(d + 1)]
    top = [max(exps[s][i] for s in range(d + 1)) for i in range(n)]
    cache: dict = {}

    def pw(i, part, e):
        key = (i, part, e)
        if key not in cache:
            f = x[i]
            cache[key] = (f.num if part else f.den) ** e
        return cache[key]

    live = [s for s in range(d + 1) if coeffs[s]]
    cdens = [coeffs[s].den for s in live]
    total = LaurentPoly()
    for idx, s in enumerate(live):
        t = coeffs[s].num * yk.num**s * yk.den ** (d - s)
        for jdx, cd in enumerate(cdens):
            if jdx != idx and cd != 1:
                t = t * cd
        for i in range(n):
            e = exps[s][i]
            if e:
                t = t * pw(i, True, e)
            if top[i] - e:
                t = t * pw(i, False, top[i] - e)
        total = total + t
    dens = [x[i].den for i in range(n) for _ in range(top[i])]
    dens += [yk.den] * d + [cd for cd in cdens if cd != 1]
    return frac_product([total, x[k0].den, zp.den], dens + [x[k0].num, zp.num])


def _check_direction(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise IndexError(f"direction {k} out of range 1..{n}")


def mutate_coefficients(y: Sequence, B: Sequence[Sequence[int]], Z: Sequence[ExchangePoly], k: int, sf: Semifield) -> tuple:
    """Coefficient part of generalized mutation, in the semifield ``sf``."""
    k0 = k - 1
    Zk = Z[k0]
    zp = sf.exchange_value([coerce(sf, c) if c else None for c in Zk.coeffs], y[k0])
    yk_d = y[k0] ** Zk.degree
    out = []
    for j, yj in enumerate(y):
        if j == k0:
            out.append(yj.inverse())
            continue
        b = B[k0][j]
        v = yj
        if b > 0:
            v = v * yk_d**b
        if b:
            v = v * zp ** (-b)
        out.append(v)
    return tuple(out)


def mutate(seed: GenSeed, k: int) -> GenSeed:
    """Generalized seed mutation in direction ``k`` (1-indexed)."""
    n = seed.n
    _check_direction(n, k)
    k0 = k - 1
    sf = seed.semifield
    Zk = seed.Z[k0]
    yk = seed.y[k0]
    zp = sf.exchange_value([coerce(sf, c) if c else None for c in Zk.coeffs], yk)
    col = [seed.B[i][k0] for i in range(n)]
    xk = exchange(seed.x, col, k0, Zk.coeffs, yk.to_frac(), zp.to_frac())
    x = seed.x[:k0] + (xk,) + seed.x[k0 + 1:]
    y = mutate_coefficients(seed.y, seed.B, seed.Z, k, sf)
    B = matrix_mutate(seed.B, seed.d, k)
    Z = seed.Z[:k0] + (Zk.reversed(),) + seed.Z[k0 + 1:]
    return GenSeed(x=x, y=y, B=B, Z=Z, semifield=sf, symmetrizer=seed.symmetrizer)


# -- mutation words -------------------------------------------------------------


def reduce_word(word: Sequence[int]) -> tuple:
    """Cancel adjacent repeated directions (mutations are involutions)."""
    out: list = []
    for k in word:
        if out and out[-1] == k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


def parse_word(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(t) for t in text.split(","))


class ClusterPattern:
    """Seeds along paths from one initial seed, memoized by reduced word."""

    def __init__(self, seed: GenSeed, step=mutate):
        self.initial = seed
        self._step = step
        self._cache = {(): seed}
        self._lock = threading.Lock()

    def seed_at(self, word: Sequence[int]) -> GenSeed:
        w = reduce_word(word)
        for k in w:
            _check_direction(self.initial.n, k)
        cut = len(w)
        while w[:cut] not in self._cache:
            cut -= 1
        seed = self._cache[w[:cut]]
        for m in range(cut, len(w)):
            seed = self._step(seed, w[m])
            with self._lock:
                seed = self._cache.setdefault(w[: m + 1], seed)
        return seed

    def seeds_along(self, word: Sequence[int]) -> list:
        """Seeds at every prefix of ``word`` (the unreduced path), starting with the initial seed."""
        return [self.seed_at(word[:m]) for m in range(len(word) + 1)]


def apply_word(seed: GenSeed, word: Sequence[int], pattern: Optional[ClusterPattern] = None) -> GenSeed:
    """Apply ``mu_{w_1}`` first, then ``mu_{w_2}``, and so on."""
    if pattern is None:
        pattern = ClusterPattern(seed)
    return pattern.seed_at(word)


# -- p-seed form -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PSeed:
    """Seed with coefficient rows ``p[i] = (p_{i,0}, ..., p_{i,d_i})``."""

    x: tuple
    p: tuple
    B: Matrix
    semifield: Semifield

    @property
    def n(self) -> int:
        return len(self.B)

    @property
    def d(self) -> tuple:
        return tuple(len(row) - 1 for row in self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PSeed):
            return NotImplemented
        return (
            self.B == other.B
            and self.semifield is other.semifield
            and all(a == b for a, b in zip(self.x, other.x))
            and all(len(r) == len(q) and all(a == b for a, b in zip(r, q)) for r, q in zip(self.p, other.p))
        )

    __hash__ = None


def check_p_seed(pseed: PSeed) -> None:
    """Raise :class:`NormalizationViolated` unless each row ⊕-sums to 1."""
    one = pseed.semifield.one()
    for i, row in enumerate(pseed.p, start=1):
        total = _osum(row)
        if not total == one:
            raise NormalizationViolated(f"row {i} sums to {total}, not 1")


def to_p_seed(seed: GenSeed) -> PSeed:
    """``p_{i,s} = z_{i,s} y_i^s / Z_i|_P(y_i)``."""
    sf = seed.semifield
    rows = []
    for Zi, yi in zip(seed.Z, seed.y):
        zs = [coerce(sf, c) if c else None for c in Zi.coeffs]
        zp = sf.exchange_value(zs, yi)
        rows.append(tuple((zs[s] * yi**s) / zp if zs[s] is not None else None for s in range(len(zs))))
    return PSeed(x=seed.x, p=tuple(rows), B=seed.B, semifield=sf)


def _osum(values):
    total = None
    for v in values:
        if v is None:
            continue
        total = v if total is None else total + v
    return total


def p_mutate(pseed: PSeed, k: int) -> PSeed:
    """Mutation of the p-seed form (coefficients determined up to the normalization condition)."""
    n = pseed.n
    _check_direction(n, k)
    k0 = k - 1
    sf = pseed.semifield
    pk = pseed.p[k0]
    dk = len(pk) - 1
    col = [pseed.B[i][k0] for i in range(n)]
    coeffs = [v.to_frac() if v is not None else Frac(0) for v in pk]
    xk = exchange(pseed.x, col, k0, coeffs, Frac(1), Frac(1))
    ratio_k = pk[dk] / pk[0]
    rows = []
    for j, pj in enumerate(pseed.p):
        if j == k0:
            rows.append(pj[::-1])
            continue
        b = pseed.B[k0][j]
        r = []
        for s, v in enumerate(pj):
            if v is None:
                r.append(None)
                continue
            t = v / pj[0]
            if s and b > 0:
                t = t * ratio_k ** (s * b)
            if s and b:
                t = t * pk[0] ** (s * b)
            r.append(t)
        norm = _osum(r)
        rows.append(tuple(t / norm if t is not None else None for t in r))
    return PSeed(
        x=pseed.x[:k0] + (xk,) + pseed.x[k0 + 1:],
        p=tuple(rows),
        B=matrix_mutate(pseed.B, pseed.d, k),
        semifield=sf,
    )


def from_p_seed(pseed: PSeed, y: Optional[Sequence] = None) -> GenSeed:
    """Recover ``(x, y, B, Z)`` from a normalized p-seed satisfying the power condition.

    Over the tropical semifield ``y_i`` is the unique ``d_i``-th root of
    ``p_{i,d_i} / p_{i,0}``; over the universal semifield ``y`` must be given.
    """
    check_p_seed(pseed)
    sf = pseed.semifield
    ys = []
    for i, row in enumerate(pseed.p, start=1):
        d = len(row) - 1
        ratio = row[d] / row[0]
        if y is not None:
            yi = coerce(sf, y[i - 1])
            if not yi**d == ratio:
                raise NoIntegralRoot(f"y_{i}^{d} does not equal p_{i},{d}/p_{i},0 = {ratio}")
        elif sf is TROPICAL:
            bad = [(v, e) for v, e in ratio.exps if e % d]
            if bad:
                raise NoIntegralRoot(f"p_{i},{d}/p_{i},0 = {ratio} is not a {d}-th power")
            yi = TropElement({v: e // d for v, e in ratio.exps})
        else:
            raise RootUnavailable("root extraction needs the tropical semifield or explicit y")
        ys.append(yi)
    polys = []
    for row, yi in zip(pseed.p, ys):
        coeffs = []
        for s, v in enumerate(row):
            coeffs.append(Frac(0) if v is None else ((v / row[0]) / yi**s).to_frac())
        polys.append(ExchangePoly(tuple(coeffs)))
    return GenSeed(x=pseed.x, y=tuple(ys), B=pseed.B, Z=tuple(polys), semifield=sf, symmetrizer=skew_symmetrizer(pseed.B))


__all__ = [
    "ClusterPattern",
    "ExchangePoly",
    "GenSeed",
    "PSeed",
    "apply_word",
    "as_matrix",
    "check_p_seed",
    "diag_left",
    "diag_right",
    "exchange",
    "from_p_seed",
    "hat_y",
    "matrix_mutate",
    "mutate",
    "mutate_coefficients",
    "p_mutate",
    "parse_word",
    "reduce_word",
    "reverse_poly",
    "skew_symmetrizer",
    "to_p_seed",
    "validate_seed",
]

