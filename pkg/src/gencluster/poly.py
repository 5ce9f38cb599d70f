"""Sparse multivariate Laurent polynomials over the integers.

Monomials are tuples of ``(Var, exponent)`` pairs sorted by variable, with
zero exponents dropped.  A :class:`LaurentPoly` maps monomials to nonzero
Python integers, so arithmetic is exact at any size.  :class:`Frac` is a
pair of Laurent polynomials standing for an element of the ambient rational
function field; it is normalized by integer content and by monomial shifts
only, and compared by cross-multiplication.
"""

from __future__ import annotations

import heapq
import math
import os
import re
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import (
    Inhomogeneous,
    InexactDivision,
    MissingAssignment,
    ParseError,
    TermLimitExceeded,
)

_KINDS = "XYZU"


class Var(NamedTuple):
    """A polynomial variable; ``rank`` orders kinds as X < Y < Z < U."""

    rank: int
    i: int
    s: int = 0

    @property
    def kind(self) -> str:
        return _KINDS[self.rank]

    def __str__(self) -> str:
        if self.rank == 2:
            return f"z{self.i}_{self.s}"
        return f"{'xyzu'[self.rank]}{self.i}"


def xvar(i: int) -> Var:
    return Var(0, i)


def yvar(i: int) -> Var:
    return Var(1, i)


def zvar(i: int, s: int) -> Var:
    if s <= 0:
        raise ValueError("z-variables exist only for interior slots s >= 1")
    return Var(2, i, s)


def uvar(i: int) -> Var:
    return Var(3, i)


Monomial = tuple  # tuple[tuple[Var, int], ...]
ONE_MONO: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        e2 = d.get(v, 0) + e
        if e2:
            d[v] = e2
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_pow(a: Monomial, k: int) -> Monomial:
    if k == 0:
        return ONE_MONO
    return tuple((v, e * k) for v, e in a)


def mono_inv(a: Monomial) -> Monomial:
    return tuple((v, -e) for v, e in a)


def mono_str(m: Monomial) -> str:
    parts = []
    for v, e in m:
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def _max_terms() -> int:
    return int(os.environ.get("GCA_MAX_TERMS", 10**6))


class LaurentPoly:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping, Iterable, int, None] = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, int):
            terms = {ONE_MONO: terms} if terms else {}
        elif isinstance(terms, Mapping):
            terms = {_canon(m): int(c) for m, c in terms.items()}
        else:
            acc: dict = {}
            for m, c in terms:
                m = _canon(m)
                acc[m] = acc.get(m, 0) + int(c)
            terms = acc
        self._terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def var(cls, v: Var, e: int = 1) -> "LaurentPoly":
        return cls._raw({((v, e),) if e else ONE_MONO: 1})

    @classmethod
    def monomial(cls, m, c: int = 1) -> "LaurentPoly":
        return cls._raw({_canon(m): c} if c else {})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONO in self._terms)

    def constant_term(self) -> int:
        return self._terms.get(ONE_MONO, 0)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def min_exponents(self) -> dict:
        """Componentwise minimum exponent over all terms (absent counts as 0)."""
        vs = self.variables()
        lo: dict = {}
        for m in self._terms:
            md = dict(m)
            for v in vs:
                e = md.get(v, 0)
                if v not in lo or e < lo[v]:
                    lo[v] = e
        return lo

    def max_exponents(self) -> dict:
        """Componentwise maximum exponent over all terms (absent counts as 0)."""
        vs = self.variables()
        hi: dict = {}
        for m in self._terms:
            md = dict(m)
            for v in vs:
                e = md.get(v, 0)
                if v not in hi or e > hi[v]:
                    hi[v] = e
        return hi

    def content(self) -> int:
        g = 0
        for c in self._terms.values():
            g = math.gcd(g, c)
        return g

    def is_positive(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def is_polynomial(self, kinds: str = _KINDS) -> bool:
        """True when no variable of the given kinds has a negative exponent."""
        return all(e >= 0 for m in self._terms for v, e in m if v.kind in kinds)

    def sorted_terms(self) -> list:
        """Terms in ascending lexicographic order of dense exponent vectors (X < Y < Z < U)."""
        vs = sorted(self.variables())
        pos = {v: k for k, v in enumerate(vs)}

        def key(item):
            vec = [0] * len(vs)
            for v, e in item[0]:
                vec[pos[v]] = e
            return vec

        return sorted(self._terms.items(), key=key)

    def leading_coefficient(self) -> int:
        return self.sorted_terms()[-1][1]

    # -- arithmetic -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly(other)
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()})

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            c2 = out.get(m, 0) + c
            if c2:
                out[m] = c2
            else:
                out.pop(m, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return lp_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_monomial():
                raise InexactDivision("negative power of a non-monomial Laurent polynomial")
            ((m, c),) = self._terms.items()
            if c not in (1, -1):
                raise InexactDivision(f"coefficient {c} is not a unit")
            return LaurentPoly._raw({mono_pow(m, k): c ** (-k)})
        if self.is_monomial():
            ((m, c),) = self._terms.items()
            return LaurentPoly._raw({mono_pow(m, k): c**k})
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, m: Monomial) -> "LaurentPoly":
        """Multiply by the monomial ``m``."""
        if not m:
            return self
        return LaurentPoly._raw({mono_mul(t, m): c for t, c in self._terms.items()})

    def map_coefficients(self, fn: Callable[[int], int]) -> "LaurentPoly":
        return LaurentPoly({m: fn(c) for m, c in self._terms.items()})

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"


def _canon(m) -> Monomial:
    if isinstance(m, Mapping):
        items = m.items()
    else:
        items = m
    return tuple(sorted((v, e) for v, e in items if e))


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({ONE_MONO: 1})


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact product of two Laurent polynomials."""
    ta, tb = a._terms, b._terms
    if not ta or not tb:
        return ZERO
    if len(ta) > len(tb):
        ta, tb = tb, ta
    if len(ta) * len(tb) < 64:
        out: dict = {}
        get = out.get
        for ma, ca in ta.items():
            for mb, cb in tb.items():
                m = mono_mul(ma, mb)
                out[m] = get(m, 0) + ca * cb
        out = {m: c for m, c in out.items() if c}
    else:
        out = _packed_mul(ta, tb)
    if len(out) > 1000 and len(out) > _max_terms():
        raise TermLimitExceeded(f"product has {len(out)} terms (GCA_MAX_TERMS={_max_terms()})")
    return LaurentPoly._raw(out)


def _ranges(terms: dict) -> dict:
    """Per-variable (min, max) exponents, absent counted as 0."""
    rng: dict = {}
    for m in terms:
        for v, e in m:
            r = rng.get(v)
            if r is None:
                rng[v] = [min(e, 0), max(e, 0)]
            elif e < r[0]:
                r[0] = e
            elif e > r[1]:
                r[1] = e
    return rng


def _packed_mul(ta: dict, tb: dict) -> dict:
    # exponent vectors become integers with one bit field per variable, so
    # multiplying monomials is integer addition
    ra, rb = _ranges(ta), _ranges(tb)
    vs = sorted(ra.keys() | rb.keys())
    zero = (0, 0)
    shifts, masks, offsets = [], [], []
    shift = 0
    for v in vs:
        la, ha = ra.get(v, zero)
        lb, hb = rb.get(v, zero)
        width = max((ha - la + hb - lb).bit_length(), 1)
        shifts.append(shift)
        masks.append((1 << width) - 1)
        offsets.append(la + lb)
        shift += width
    pos = {v: k for k, v in enumerate(vs)}

    def pack(terms: dict, ranges: dict) -> list:
        out = []
        for m, c in terms.items():
            key = 0
            for v, e in m:
                k = pos[v]
                key += (e - ranges[v][0]) << shifts[k]
            for v, r in ranges.items():
                if r[0] and not any(w == v for w, _ in m):
                    key += (-r[0]) << shifts[pos[v]]
            out.append((key, c))
        return out

    pa, pb = pack(ta, ra), pack(tb, rb)
    if len(pa) * len(pb) >= _NUMPY_MIN and shift < 63:
        acc = _numpy_mul(pa, pb)
    else:
        acc = {}
        get = acc.get
        for ka, ca in pa:
            for kb, cb in pb:
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
    layout = list(zip(vs, shifts, masks, offsets))
    out = {}
    for key, c in acc.items():
        if not c:
            continue
        mono = []
        for v, sh, mask, off in layout:
            e = ((key >> sh) & mask) + off
            if e:
                mono.append((v, e))
        out[tuple(mono)] = c
    return out

_NUMPY_MIN = 20000
_CHUNK = 1 << 22


def _reduce(keys, vals):
    """Sum the columns of ``vals`` (one row per limb pair) over equal keys."""
    order = np.argsort(keys, kind="stable")
    keys, vals = keys[order], vals[:, order]
    starts = np.flatnonzero(np.concatenate(([True], keys[1:] != keys[:-1])))
    return keys[starts], np.add.reduceat(vals, starts, axis=1)


def _limbs(coeffs: list, width: int, count: int):
    """Signed base-2**width digits of ``coeffs``, one row per digit."""
    mask = (1 << width) - 1
    rows = np.zeros((count, len(coeffs)), dtype=np.int64)
    for j, c in enumerate(coeffs):
        sign, c = (-1, -c) if c < 0 else (1, c)
        i = 0
        while c:
            rows[i, j] = sign * (c & mask)
            c >>= width
            i += 1
    return rows


def _numpy_mul(pa: list, pb: list) -> dict:
    """Sparse product over packed keys; the caller guarantees keys fit in int64.

    Coefficients that could overflow are split into limbs small enough that
    every partial sum stays inside int64, then recombined exactly.
    """
    ka = np.fromiter((k for k, _ in pa), dtype=np.int64, count=len(pa))
    kb = np.fromiter((k for k, _ in pb), dtype=np.int64, count=len(pb))
    cas, cbs = [c for _, c in pa], [c for _, c in pb]
    bits_a = max(abs(c) for c in cas).bit_length()
    bits_b = max(abs(c) for c in cbs).bit_length()
    n_bits = min(len(pa), len(pb)).bit_length()
    if bits_a + bits_b + n_bits < 62:
        width, la, lb = 62, 1, 1
    else:
        width = max((62 - n_bits) // 2, 1)
        la, lb = -(-bits_a // width), -(-bits_b // width)
    ca, cb = _limbs(cas, width, la), _limbs(cbs, width, lb)
    pairs = [(i, j) for i in range(la) for j in range(lb)]
    rows = max(1, _CHUNK // len(kb))
    parts_k, parts_v = [], []
    for r in range(0, len(ka), rows):
        keys = (ka[r : r + rows, None] + kb[None, :]).ravel()
        vals = np.stack([(ca[i, r : r + rows, None] * cb[j, None, :]).ravel() for i, j in pairs])
        k, v = _reduce(keys, vals)
        parts_k.append(k)
        parts_v.append(v)
    keys, vals = _reduce(np.concatenate(parts_k), np.concatenate(parts_v, axis=1))
    if len(pairs) == 1:
        return dict(zip(keys.tolist(), vals[0].tolist()))
    total = [0] * len(keys)
    for (i, j), row in zip(pairs, vals.tolist()):
        sh = width * (i + j)
        total = [t + (v << sh) for t, v in zip(total, row)]
    return dict(zip(keys.tolist(), total))


# -- exact division -----------------------------------------------------------


def split_monomial(p: LaurentPoly) -> tuple:
    """Write ``p = m * p0`` with ``m`` a monomial and ``p0`` a polynomial free of monomial factors."""
    lo = p.min_exponents()
    m = tuple(sorted((v, e) for v, e in lo.items() if e))
    if not m:
        return ONE_MONO, p
    return m, p.shift(mono_inv(m))


def lp_exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Return ``q`` with ``a == q * b``; raise :class:`InexactDivision` otherwise.

    Monomials are units of the Laurent ring, so both operands are first
    stripped of their monomial factors and the division runs in the
    polynomial ring under graded lexicographic order.
    """
    q = _exact_div(a, b, quick=False)
    if q is None:
        raise InexactDivision(f"{format_poly(b)} does not divide {format_poly(a)}")
    return q


def try_exact_div(a: LaurentPoly, b: LaurentPoly):
    """Like :func:`lp_exact_div` but returns ``None`` when ``b`` does not divide ``a``."""
    return _exact_div(a, b, quick=True)


def _exact_div(a: LaurentPoly, b: LaurentPoly, quick: bool):
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return ZERO
    if b.is_monomial():
        ((mb, cb),) = b._terms.items()
        if any(c % cb for c in a._terms.values()):
            return None
        inv = mono_inv(mb)
        return LaurentPoly._raw({mono_mul(m, inv): c // cb for m, c in a._terms.items()})
    ma, a0 = split_monomial(a)
    mb, b0 = split_monomial(b)
    if quick:
        hi_a = a0.max_exponents()
        for v, e in b0.max_exponents().items():
            if hi_a.get(v, 0) < e:
                return None
        if _total_degrees(b0)[1] > _total_degrees(a0)[1]:
            return None
    q0 = _poly_divide(a0, b0)
    if q0 is None:
        return None
    return q0.shift(mono_mul(ma, mono_inv(mb)))


def _total_degrees(p: LaurentPoly) -> tuple:
    degs = [sum(e for _, e in m) for m in p._terms]
    return min(degs), max(degs)


def _poly_divide(a: LaurentPoly, b: LaurentPoly):
    """Heap-based exact division of polynomials (nonnegative exponents) in grlex order."""
    vs = sorted(a.variables() | b.variables())
    top = _total_degrees(a)[1]
    width = top.bit_length() + 1
    # one field per variable plus a total-degree field on top, each with a
    # guard bit so that a negative field shows up as a cleared guard
    shifts = {v: width * (len(vs) - 1 - k) for k, v in enumerate(vs)}
    deg_shift = width * len(vs)
    guard = sum(1 << (width * k + width - 1) for k in range(len(vs) + 1))

    def pack(m):
        key = sum(e for _, e in m) << deg_shift
        for v, e in m:
            key += e << shifts[v]
        return key

    if _total_degrees(b)[1] > top:
        return None
    bterms = sorted(((pack(m), c) for m, c in b._terms.items()), reverse=True)
    lead, lead_c = bterms[0]
    rest = bterms[1:]
    rem = {pack(m): c for m, c in a._terms.items()}
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot: dict = {}
    limit = _max_terms()
    while rem:
        while True:
            key = -heapq.heappop(heap)
            if key in rem:
                break
        c = rem.pop(key)
        if c % lead_c:
            return None
        qkey = key + guard - lead
        if qkey & guard != guard:
            return None
        qkey -= guard
        qc = c // lead_c
        quot[qkey] = qc
        if len(quot) > limit:
            raise TermLimitExceeded("quotient exceeds GCA_MAX_TERMS")
        for bkey, bc in rest:
            t = qkey + bkey
            c2 = rem.get(t)
            if c2 is None:
                rem[t] = -qc * bc
                heapq.heappush(heap, -t)
            else:
                c2 -= qc * bc
                if c2:
                    rem[t] = c2
                else:
                    del rem[t]
    mask = (1 << width) - 1
    layout = [(v, shifts[v]) for v in vs]
    out = {}
    for qkey, c in quot.items():
        out[tuple((v, e) for v, sh in layout if (e := (qkey >> sh) & mask))] = c
    return LaurentPoly._raw(out)


# -- rational pairs -----------------------------------------------------------


class Frac:
    """An element ``num/den`` of the ambient rational function field.

    Normalized by integer content, by the sign of the denominator's leading
    coefficient, and by cancelling the componentwise-minimum monomial of all
    terms.  No polynomial GCD is taken; equality cross-multiplies.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, normalize: bool = True):
        if isinstance(num, int):
            num = LaurentPoly(num)
        if isinstance(den, int):
            den = LaurentPoly(den)
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @classmethod
    def var(cls, v: Var) -> "Frac":
        return cls(LaurentPoly.var(v))

    def is_laurent(self) -> bool:
        """True when the denominator is a monomial (so the value is a Laurent polynomial)."""
        return self.den.is_monomial()

    def to_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise InexactDivision(f"{self} is not a Laurent polynomial")
        return lp_exact_div(self.num, self.den)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den, normalize=False)

    def __add__(self, other) -> "Frac":
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return Frac(a + c, b)
        if b.is_monomial() and d.is_monomial():
            return Frac(a * d + c * b, b * d)
        q = try_exact_div(b, d)
        if q is not None:
            return Frac(a + c * q, b)
        q = try_exact_div(d, b)
        if q is not None:
            return Frac(a * q + c, d)
        return Frac(a * d + c * b, b * d)

    __radd__ = __add__

    def __sub__(self, other) -> "Frac":
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Frac":
        return (-self) + other

    def __mul__(self, other) -> "Frac":
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return Frac(*_cancel([self.num, other.num], [self.den, other.den]))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Frac":
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero in the ambient field")
        return Frac(*_cancel([self.num, other.den], [self.den, other.num]))

    def __rtruediv__(self, other) -> "Frac":
        return _as_frac(other) / self

    def inverse(self) -> "Frac":
        if not self.num:
            raise ZeroDivisionError("zero has no inverse")
        return Frac(self.den, self.num)

    def __pow__(self, k: int) -> "Frac":
        if k < 0:
            return self.inverse() ** (-k)
        return Frac(self.num**k, self.den**k, normalize=False)

    def __str__(self) -> str:
        if self.den == ONE:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def __repr__(self) -> str:
        return f"Frac({self})"


def _as_frac(x):
    if isinstance(x, Frac):
        return x
    if isinstance(x, (LaurentPoly, int)):
        return Frac(x)
    return None


def _normalize(num: LaurentPoly, den: LaurentPoly):
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return ZERO, ONE
    g = math.gcd(num.content(), den.content())
    if den.leading_coefficient() < 0:
        g = -g
    if g != 1:
        num = LaurentPoly._raw({m: c // g for m, c in num._terms.items()})
        den = LaurentPoly._raw({m: c // g for m, c in den._terms.items()})
    lo_num, lo_den = num.min_exponents(), den.min_exponents()
    lo = {v: min(lo_num.get(v, 0), lo_den.get(v, 0)) for v in set(lo_num) | set(lo_den)}
    m = tuple(sorted((v, -e) for v, e in lo.items() if e))
    if m:
        num, den = num.shift(m), den.shift(m)
    return num, den


def _cancel(nums: list, dens: list):
    """Multiply out ``prod(nums)/prod(dens)`` after cancelling whole factors.

    A denominator factor is dropped when it divides one numerator factor
    exactly (and vice versa).  This is trial division only, not a GCD.
    """
    nums = [p for p in nums]
    dens = [p for p in dens]
    for j, dp in enumerate(dens):
        if dp.is_monomial():
            continue
        for i, np_ in enumerate(nums):
            if np_.is_monomial() or len(np_) < len(dp):
                continue
            q = try_exact_div(np_, dp)
            if q is not None:
                nums[i] = q
                dens[j] = ONE
                break
    for i, np_ in enumerate(nums):
        if np_.is_monomial():
            continue
        for j, dp in enumerate(dens):
            if dp.is_monomial() or len(dp) < len(np_):
                continue
            q = try_exact_div(dp, np_)
            if q is not None:
                dens[j] = q
                nums[i] = ONE
                break
    num = ONE
    for p in nums:
        num = num * p
    den = ONE
    for p in dens:
        den = den * p
    return num, den


def frac_product(nums: Sequence[LaurentPoly], dens: Sequence[LaurentPoly]) -> Frac:
    """``prod(nums)/prod(dens)`` with whole-factor cancellation."""
    return Frac(*_cancel(list(nums), list(dens)))


# -- substitution -------------------------------------------------------------

Image = Union[LaurentPoly, Frac, int]


def lp_substitute(p: LaurentPoly, assignment: Mapping, *, partial: bool = False) -> Frac:
    """Substitute ``assignment[v]`` for each variable ``v`` of ``p``.

    Images may be integers, Laurent polynomials, or :class:`Frac` values.  The
    result is the exact composed value as a normalized rational pair.  With
    ``partial=True`` unassigned variables are kept as themselves.
    """
    pure: dict = {}
    general: dict = {}
    for v in p.variables():
        if v in assignment:
            img = _as_frac(assignment[v])
            if img is None:
                raise TypeError(f"cannot substitute {type(assignment[v]).__name__} for {v}")
        elif partial:
            img = Frac.var(v)
        else:
            raise MissingAssignment(f"no value assigned to {v}")
        n, d = img.num, img.den
        if n.is_monomial() and d.is_monomial():
            ((mn, cn),) = n.items()
            ((md, cd),) = d.items()
            if cn == 1 and cd == 1:
                pure[v] = mono_mul(mn, mono_inv(md))
                continue
        general[v] = img

    hi = dict.fromkeys(general, 0)
    lo = dict.fromkeys(general, 0)
    for m in p._terms:
        for v, e in m:
            if v in general:
                if e > hi[v]:
                    hi[v] = e
                elif e < lo[v]:
                    lo[v] = e

    cache: dict = {}

    def power(v, which, k):
        key = (v, which, k)
        if key not in cache:
            f = general[v]
            cache[key] = (f.num if which else f.den) ** k
        return cache[key]

    # A general image n/d appears with exponents in [lo, hi]; over the common
    # denominator d**hi * n**(-lo) the term v**e contributes n**(e-lo) * d**(hi-e).
    simple: dict = {}
    result = ZERO
    for m, c in p._terms.items():
        mono = ONE_MONO
        present = {}
        for v, e in m:
            if v in pure:
                mono = mono_mul(mono, mono_pow(pure[v], e))
            else:
                present[v] = e
        if not general:
            simple[mono] = simple.get(mono, 0) + c
            continue
        t = LaurentPoly._raw({mono: c})
        for v in general:
            e = present.get(v, 0)
            if e - lo[v]:
                t = t * power(v, True, e - lo[v])
            if hi[v] - e:
                t = t * power(v, False, hi[v] - e)
        result = result + t
    if not general:
        return Frac(LaurentPoly({m: c for m, c in simple.items() if c}))
    den = ONE
    for v in general:
        if hi[v]:
            den = den * power(v, False, hi[v])
        if lo[v]:
            den = den * power(v, True, -lo[v])
    return Frac(result, den)


def identity_assignment(p: LaurentPoly) -> dict:
    return {v: LaurentPoly.var(v) for v in p.variables()}


# -- gradings -----------------------------------------------------------------

Grading = Union[Mapping, Callable[[Var], Sequence[int]]]


def lp_multidegree(p: LaurentPoly, grading: Grading, dim: Optional[int] = None) -> tuple:
    """Common degree vector of all terms of ``p`` under ``grading``.

    ``dim`` is only needed when ``p`` is a constant.  Raises
    :class:`Inhomogeneous` naming two terms of different degree.
    """
    if not p:
        raise ValueError("the zero polynomial has no degree")
    deg = grading if callable(grading) else _lookup(grading)
    seen: dict = {}
    for m in p._terms:
        vec: dict = {}
        for v, e in m:
            for k, x in enumerate(deg(v)):
                vec[k] = vec.get(k, 0) + e * x
            dim = len(deg(v)) if dim is None else dim
        key = tuple(sorted((k, x) for k, x in vec.items() if x))
        seen.setdefault(key, m)
        if len(seen) > 1:
            (k1, m1), (k2, m2) = list(seen.items())[:2]
            raise Inhomogeneous(
                f"terms {mono_str(m1) or '1'} and {mono_str(m2) or '1'} "
                f"have degrees {_dense(k1, dim)} and {_dense(k2, dim)}"
            )
    if dim is None:
        raise Inhomogeneous("cannot infer the grading dimension from a constant")
    (key,) = seen
    return _dense(key, dim)


def _dense(key, dim: int) -> tuple:
    out = [0] * dim
    for k, x in key:
        out[k] = x
    return tuple(out)


def _lookup(mapping: Mapping):
    def deg(v):
        try:
            return mapping[v]
        except KeyError:
            raise MissingAssignment(f"grading does not assign a degree to {v}") from None

    return deg


def principal_grading(B: Sequence[Sequence[int]]) -> Callable[[Var], tuple]:
    """deg(x_i) = e_i, deg(y_j) = -(column j of B), deg(z) = 0."""
    n = len(B)

    def deg(v: Var) -> tuple:
        if v.rank == 0:
            return tuple(1 if r == v.i - 1 else 0 for r in range(n))
        if v.rank == 1:
            return tuple(-B[r][v.i - 1] for r in range(n))
        if v.rank == 2:
            return (0,) * n
        raise MissingAssignment(f"principal grading has no degree for {v}")

    return deg


# -- text form ----------------------------------------------------------------

_TOKEN = re.compile(r"([xyzu])(\d+)(?:_(\d+))?(?:\^\(?(-?\d+)\)?)?")
_NAMES = {"x": 0, "y": 1, "z": 2, "u": 3}


def format_poly(p: LaurentPoly, sep: str = " + ", names: Callable[[Var], str] = str) -> str:
    if not p:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        body = "*".join(names(v) if e == 1 else f"{names(v)}^{e}" for v, e in m)
        if not body:
            term = str(abs(c))
        elif abs(c) == 1:
            term = body
        else:
            term = f"{abs(c)}*{body}"
        if not out:
            out.append(term if c > 0 else f"-{term}")
        else:
            out.append((sep if c > 0 else sep.replace("+", "-")) + term)
    return "".join(out)


def parse_poly(text: str) -> LaurentPoly:
    """Parse the text form written by :func:`format_poly`.

    Products may be written with ``*`` or by juxtaposition; ``z1_2`` is the
    interior coefficient ``z_{1,2}``.
    """
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    terms = re.split(r"(?<=[^\^*(])(?=[+-])", s)
    acc: dict = {}
    for raw in terms:
        if not raw:
            continue
        sign = 1
        t = raw
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        mcoef = re.match(r"\d+", t)
        coef = 1
        if mcoef:
            coef = int(mcoef.group())
            t = t[mcoef.end():]
            if t.startswith("*"):
                t = t[1:]
                if not t:
                    raise ParseError(f"dangling '*' in {raw!r}", where=text)
        elif not t:
            raise ParseError(f"missing term in {raw!r}", where=text)
        if t.startswith("*") or t.endswith("*") or "**" in t:
            raise ParseError(f"misplaced '*' in {raw!r}", where=text)
        mono: dict = {}
        pos = 0
        while pos < len(t):
            if t[pos] == "*":
                pos += 1
                continue
            m = _TOKEN.match(t, pos)
            if not m:
                raise ParseError(f"cannot parse {raw!r}", where=text)
            kind, i, s_, e = m.groups()
            rank = _NAMES[kind]
            if rank == 2:
                if s_ is None:
                    raise ParseError(f"z-variable needs an interior index: {m.group()!r}", where=text)
                v = Var(2, int(i), int(s_))
            else:
                if s_ is not None:
                    raise ParseError(f"unexpected index on {m.group()!r}", where=text)
                v = Var(rank, int(i))
            mono[v] = mono.get(v, 0) + (int(e) if e is not None else 1)
            pos = m.end()
        key = _canon(mono)
        acc[key] = acc.get(key, 0) + sign * coef
    return LaurentPoly(acc)
