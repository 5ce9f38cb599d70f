"""Tropical and universal semifields and the specialization homomorphism.

Elements overload ``*``, ``/`` and ``**`` for the multiplicative group and
``+`` for the auxiliary addition (written ⊕ in printed output).  Neither
element type supports subtraction.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence, Union

from .errors import MissingAssignment, NegativeCoefficient, NonPositiveInput
from .poly import (
    ONE_MONO,
    Frac,
    LaurentPoly,
    Var,
    _canon,
    format_poly,
    lp_substitute,
    mono_inv,
    mono_mul,
    mono_pow,
)


class TropElement:
    """A Laurent monomial in the generators; ⊕ takes componentwise minima."""

    __slots__ = ("exps",)

    def __init__(self, exps=()):
        self.exps = _canon(exps)

    @classmethod
    def generator(cls, v: Var) -> "TropElement":
        return cls(((v, 1),))

    def exponent(self, v: Var) -> int:
        return dict(self.exps).get(v, 0)

    def as_dict(self) -> dict:
        return dict(self.exps)

    def __mul__(self, other: "TropElement") -> "TropElement":
        if not isinstance(other, TropElement):
            return NotImplemented
        return _trop(mono_mul(self.exps, other.exps))

    def __truediv__(self, other: "TropElement") -> "TropElement":
        if not isinstance(other, TropElement):
            return NotImplemented
        return _trop(mono_mul(self.exps, mono_inv(other.exps)))

    def __pow__(self, k: int) -> "TropElement":
        return _trop(mono_pow(self.exps, k))

    def inverse(self) -> "TropElement":
        return _trop(mono_inv(self.exps))

    def __add__(self, other: "TropElement") -> "TropElement":
        if not isinstance(other, TropElement):
            return NotImplemented
        a, b = dict(self.exps), dict(other.exps)
        return TropElement({v: min(a.get(v, 0), b.get(v, 0)) for v in a.keys() | b.keys()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropElement):
            return NotImplemented
        return self.exps == other.exps

    def __hash__(self) -> int:
        return hash(self.exps)

    def is_one(self) -> bool:
        return not self.exps

    def to_frac(self) -> Frac:
        return Frac(LaurentPoly._raw({self.exps: 1}))

    def __str__(self) -> str:
        return format_poly(LaurentPoly._raw({self.exps: 1}))

    def __repr__(self) -> str:
        return f"TropElement({self})"


def _trop(m) -> TropElement:
    t = TropElement.__new__(TropElement)
    t.exps = m
    return t


class UsfElement:
    """A subtraction-free rational function ``num/den``.

    Both parts have positive coefficients and nonnegative exponents; the pair
    is content-reduced and monomial-cancelled but not reduced to lowest
    terms, so equality cross-multiplies.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        f = num if isinstance(num, Frac) and den == 1 else Frac(num, den)
        if not f.num:
            raise NonPositiveInput("zero is not an element of a semifield")
        if not (f.num.is_positive() and f.den.is_positive()):
            raise NonPositiveInput(f"{f} is not written with positive coefficients")
        self.num, self.den = f.num, f.den

    @classmethod
    def generator(cls, v: Var) -> "UsfElement":
        return _usf(Frac.var(v))

    @property
    def frac(self) -> Frac:
        return Frac(self.num, self.den, normalize=False)

    def to_frac(self) -> Frac:
        return self.frac

    def __mul__(self, other: "UsfElement") -> "UsfElement":
        if not isinstance(other, UsfElement):
            return NotImplemented
        return _usf(self.frac * other.frac)

    def __truediv__(self, other: "UsfElement") -> "UsfElement":
        if not isinstance(other, UsfElement):
            return NotImplemented
        return _usf(self.frac / other.frac)

    def __pow__(self, k: int) -> "UsfElement":
        return _usf(self.frac**k)

    def inverse(self) -> "UsfElement":
        return _usf(self.frac.inverse())

    def __add__(self, other: "UsfElement") -> "UsfElement":
        if not isinstance(other, UsfElement):
            return NotImplemented
        return _usf(self.frac + other.frac)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UsfElement):
            return NotImplemented
        return usf_equal(self, other)

    __hash__ = None

    def is_one(self) -> bool:
        return self.num == self.den

    def __str__(self) -> str:
        num = format_poly(self.num, sep=" ⊕ ")
        if self.den == 1:
            return num
        return f"({num})/({format_poly(self.den, sep=' ⊕ ')})"

    def __repr__(self) -> str:
        return f"UsfElement({self})"


def _usf(f: Frac) -> UsfElement:
    u = UsfElement.__new__(UsfElement)
    u.num, u.den = f.num, f.den
    return u


Element = Union[TropElement, UsfElement]


class Tropical:
    """Trop(y, z): the free abelian group on all generators, ⊕ = min."""

    name = "tropical"
    element_type = TropElement

    def one(self) -> TropElement:
        return _trop(ONE_MONO)

    def generator(self, v: Var) -> TropElement:
        return TropElement.generator(v)

    def scalar(self, c: int) -> TropElement:
        if c <= 0:
            raise NegativeCoefficient(f"{c} is not a positive integer")
        return self.one()

    def specialize_poly(self, p: LaurentPoly, assignment: Optional[Mapping] = None) -> TropElement:
        if not p:
            raise NonPositiveInput("zero is not an element of a semifield")
        lo: Optional[dict] = None
        for m, c in p.items():
            if c <= 0:
                raise NegativeCoefficient(f"coefficient {c} in {format_poly(p)}")
            vec: dict = {}
            for v, e in m:
                img = _image(self, v, assignment)
                for w, f in img.exps:
                    vec[w] = vec.get(w, 0) + e * f
            if lo is None:
                lo = vec
            else:
                for w in lo.keys() | vec.keys():
                    lo[w] = min(lo.get(w, 0), vec.get(w, 0))
        return TropElement(lo)

    def exchange_value(self, coeffs: Sequence[TropElement], y: TropElement) -> TropElement:
        """⊕_s coeffs[s] * y**s."""
        acc = None
        for s, c in enumerate(coeffs):
            if c is None:
                continue
            t = c * y**s
            acc = t if acc is None else acc + t
        return acc

    def __repr__(self) -> str:
        return "Tropical()"


class Universal:
    """Q_sf(y, z): subtraction-free rational functions."""

    name = "universal"
    element_type = UsfElement

    def one(self) -> UsfElement:
        return _usf(Frac(1))

    def generator(self, v: Var) -> UsfElement:
        return UsfElement.generator(v)

    def scalar(self, c: int) -> UsfElement:
        if c <= 0:
            raise NegativeCoefficient(f"{c} is not a positive integer")
        return _usf(Frac(c))

    def specialize_poly(self, p: LaurentPoly, assignment: Optional[Mapping] = None) -> UsfElement:
        if not p:
            raise NonPositiveInput("zero is not an element of a semifield")
        if not p.is_positive():
            raise NegativeCoefficient(f"{format_poly(p)} has a nonpositive coefficient")
        images = {v: _image(self, v, assignment).frac for v in p.variables()}
        return _usf(lp_substitute(p, images))

    def exchange_value(self, coeffs: Sequence[UsfElement], y: UsfElement) -> UsfElement:
        """⊕_s coeffs[s] * y**s over the common denominator ``y.den ** d``."""
        d = len(coeffs) - 1
        terms = []
        for s, c in enumerate(coeffs):
            if c is None:
                continue
            terms.append(c.frac * Frac(y.num**s * y.den ** (d - s)))
        total = terms[0]
        for t in terms[1:]:
            total = total + t
        return _usf(total / Frac(y.den**d))

    def __repr__(self) -> str:
        return "Universal()"


TROPICAL = Tropical()
UNIVERSAL = Universal()
Semifield = Union[Tropical, Universal]


def get_semifield(name: str) -> Semifield:
    try:
        return {"tropical": TROPICAL, "universal": UNIVERSAL}[name]
    except KeyError:
        raise ValueError(f"unknown semifield {name!r}; expected 'tropical' or 'universal'") from None


def _image(sf, v: Var, assignment):
    if assignment is None:
        return sf.generator(v)
    try:
        img = assignment[v]
    except KeyError:
        raise MissingAssignment(f"no semifield value assigned to {v}") from None
    if isinstance(img, int):
        return sf.scalar(img)
    if not isinstance(img, sf.element_type):
        raise TypeError(f"{img!r} is not an element of {sf!r}")
    return img


# -- operations -------------------------------------------------------------


def trop_eval(expr: LaurentPoly, assignment: Optional[Mapping] = None) -> TropElement:
    """Evaluate a positive polynomial in the tropical semifield.

    Integer coefficients map to 1 and sums map to componentwise minima.
    Without an assignment each variable is its own generator.
    """
    return TROPICAL.specialize_poly(expr, assignment)


def usf_normalize(num: LaurentPoly, den: LaurentPoly) -> UsfElement:
    if not num or not den:
        raise NonPositiveInput("numerator and denominator must be nonzero")
    for part in (num, den):
        if not part.is_positive():
            raise NonPositiveInput(f"{format_poly(part)} has a nonpositive coefficient")
        if not part.is_polynomial():
            raise NonPositiveInput(f"{format_poly(part)} has a negative exponent")
    return UsfElement(num, den)


def usf_equal(a: UsfElement, b: UsfElement) -> bool:
    if a.den == b.den:
        return a.num == b.num
    return a.num * b.den == b.num * a.den


def sf_specialize(expr, target: Semifield, assignment: Optional[Mapping] = None) -> Element:
    """Image of a subtraction-free expression under the semifield homomorphism.

    ``expr`` may be a :class:`LaurentPoly`, a :class:`Frac` with positive
    parts, or a semifield element.  Generators are sent per ``assignment``
    (identity when omitted) and positive integers ``c`` to ``1 ⊕ ... ⊕ 1``.
    """
    if isinstance(expr, LaurentPoly):
        return target.specialize_poly(expr, assignment)
    if isinstance(expr, (UsfElement, TropElement)):
        expr = expr.to_frac()
    if not isinstance(expr, Frac):
        raise TypeError(f"cannot specialize {type(expr).__name__}")
    num = target.specialize_poly(expr.num, assignment)
    if expr.den == 1:
        return num
    return num / target.specialize_poly(expr.den, assignment)


def coerce(sf: Semifield, expr) -> Element:
    """View a positive expression (coefficient, integer, element) inside ``sf``."""
    if isinstance(expr, sf.element_type):
        return expr
    if isinstance(expr, int):
        return sf.scalar(expr)
    return sf_specialize(expr, sf)
