"""Left and right companion cluster algebras and checks of the comparison theorems.

The left companion of a generalized seed ``(x, y, B, Z)`` is the ordinary
seed ``(x^{1/d}, y, DB)``, the right companion is ``(x, y^d, BD)``.  Roots
``x_i^{1/d_i}`` with ``d_i > 1`` are fresh variables ``u_i``; where
``d_i = 1`` the root is ``x_i`` itself, so a seed with all ``d_i = 1`` is its
own left companion.  The relation ``u_i^{d_i} = x_i`` is only used when
comparing, by sending ``x_i`` to ``u_i^{d_i}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Mapping, Optional, Sequence

from .invariants import PatternState, f_at_yhat, pattern_states, states_for, x_from_state, y_from_state
from .poly import Frac, LaurentPoly, lp_substitute, uvar, xvar, yvar, zvar
from .seed import ClusterPattern, ExchangePoly, GenSeed, diag_left, diag_right, hat_y, validate_seed


@dataclass(frozen=True, eq=False)
class CompanionPair:
    side: str
    seed: GenSeed
    base: GenSeed

    @property
    def d(self) -> tuple:
        return self.base.d


@dataclass(frozen=True)
class ZSpecialization:
    """``binomial``: z_{i,s} -> C(d_i, s); ``zero``: z_{i,s} -> 0; ``custom``: explicit values."""

    mode: str
    degrees: tuple = ()
    values: Optional[Mapping] = None

    @classmethod
    def binomial(cls, degrees: Sequence[int]) -> "ZSpecialization":
        return cls("binomial", tuple(degrees))

    @classmethod
    def zero(cls, degrees: Sequence[int] = ()) -> "ZSpecialization":
        return cls("zero", tuple(degrees))

    @classmethod
    def custom(cls, values: Mapping) -> "ZSpecialization":
        return cls("custom", (), dict(values))

    def value(self, i: int, s: int):
        if self.mode == "binomial":
            return comb(self.degrees[i - 1], s)
        if self.mode == "zero":
            return 0
        return self.values[zvar(i, s)]

    def exchange_polys(self, degrees: Sequence[int]) -> list:
        return [[1] + [self.value(i, s) for s in range(1, d)] + [1] for i, d in enumerate(degrees, start=1)]


def specialize_z(F: LaurentPoly, spec: ZSpecialization) -> LaurentPoly:
    """Substitute the z-variables of ``F`` per ``spec``."""
    if spec.mode == "zero":
        return LaurentPoly({m: c for m, c in F.items() if not any(v.rank == 2 for v, _ in m)})
    zs = {v: spec.value(v.i, v.s) for v in F.variables() if v.rank == 2}
    if not zs:
        return F
    out = lp_substitute(F, zs, partial=True)
    return out.to_laurent()


def root_var(i: int, d: int) -> Frac:
    return Frac.var(uvar(i) if d > 1 else xvar(i))


def left_companion(seed: GenSeed) -> CompanionPair:
    """Ordinary seed ``(x^{1/d}, y, DB)``."""
    d = seed.d
    n = seed.n
    comp = validate_seed(
        diag_left(d, seed.B),
        [1] * n,
        seed.semifield,
        y=seed.y,
        x=[root_var(i, d[i - 1]) for i in range(1, n + 1)],
    )
    return CompanionPair("left", comp, seed)


def right_companion(seed: GenSeed) -> CompanionPair:
    """Ordinary seed ``(x, y^d, BD)``."""
    d = seed.d
    comp = validate_seed(
        diag_right(seed.B, d),
        [1] * seed.n,
        seed.semifield,
        y=[yj**dj for yj, dj in zip(seed.y, d)],
        x=seed.x,
    )
    return CompanionPair("right", comp, seed)


def specialize_seed(seed: GenSeed, spec: ZSpecialization) -> GenSeed:
    """``seed`` with its exchange coefficients replaced by the values of ``spec``."""
    return GenSeed(
        x=seed.x,
        y=seed.y,
        B=seed.B,
        Z=tuple(ExchangePoly.from_values(z) for z in spec.exchange_polys(seed.d)),
        semifield=seed.semifield,
        symmetrizer=seed.symmetrizer,
    )


def x_to_roots(f: Frac, d: Sequence[int]) -> Frac:
    """Apply ``x_i = u_i^{d_i}`` (only for ``d_i > 1``)."""
    images = {xvar(i): LaurentPoly.var(uvar(i), di) for i, di in enumerate(d, start=1) if di > 1}
    if not images:
        return f
    return lp_substitute(f.num, images, partial=True) / lp_substitute(f.den, images, partial=True)


# -- reports ------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckRecord:
    word: tuple
    check: str
    passed: bool
    detail: str = ""
    error: str = ""


@dataclass
class CompanionReport:
    side: str
    word: tuple
    records: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def counterexamples(self) -> list:
        return [r for r in self.records if not r.passed]

    @property
    def exhausted(self) -> bool:
        """True when some check stopped at the polynomial size cap rather than failing."""
        return any(r.error == "TermLimitExceeded" for r in self.records)

    def summary(self) -> str:
        bad = len(self.counterexamples)
        status = "pass" if not bad else f"FAIL ({bad} counterexamples)"
        return f"{self.side} companion, word {list(self.word)}: {len(self.records)} checks, {status}"


def _record(report: CompanionReport, word: tuple, name: str, fn: Callable[[], tuple]) -> None:
    error = ""
    try:
        ok, detail = fn()
    except Exception as exc:  # a failing check is reported, never raised
        ok, detail, error = False, f"{type(exc).__name__}: {exc}", type(exc).__name__
    report.records.append(CheckRecord(word, name, bool(ok), "" if ok else detail, error))


def _scaled(M, d, side: str):
    """Entrywise ``d_i m_ij / d_j`` (left) or ``m_ij d_j / d_i`` (right); None if not integral."""
    n = len(M)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            num, den = (d[i] * M[i][j], d[j]) if side == "left" else (M[i][j] * d[j], d[i])
            if num % den:
                return None
            row.append(num // den)
        out.append(tuple(row))
    return tuple(out)


def _mat(M) -> str:
    return str([list(r) for r in M])


def _companion_states(pair: CompanionPair, word: tuple) -> list:
    return pattern_states(pair.seed.B, pair.seed.d, word)


def verify_left(seed: GenSeed, word: Sequence[int], states: Optional[list] = None) -> CompanionReport:
    """Compare the seed's pattern with its left companion at every prefix of ``word``."""
    word = tuple(word)
    report = CompanionReport("left", word)
    try:
        d = seed.d
        n = seed.n
        pair = left_companion(seed)
        states = states or states_for(seed, word)
        lstates = _companion_states(pair, word)
        spec = ZSpecialization.binomial(d)
        sbin = specialize_seed(seed, spec)
        lpattern = ClusterPattern(pair.seed)
    except Exception as exc:
        report.records.append(CheckRecord(word, "setup", False, f"{type(exc).__name__}: {exc}", type(exc).__name__))
        return report
    lhat = None
    for m in range(len(word) + 1):
        st: PatternState = states[m]
        ls: PatternState = lstates[m]
        w = word[:m]

        def c_check():
            return ls.C == st.C, f"LC={_mat(ls.C)} C={_mat(st.C)}"

        def g_check():
            want = _scaled(st.G, d, "left")
            if want is None:
                return False, f"d_i g_ij / d_j is not integral for G={_mat(st.G)}"
            return ls.G == want, f"LG={_mat(ls.G)} expected {_mat(want)}"

        def f_check():
            for j in range(n):
                lhs = specialize_z(st.F[j], spec)
                rhs = ls.F[j] ** d[j]
                if lhs != rhs:
                    return False, f"F_{j + 1}(y, zbin) = {lhs} but (LF_{j + 1})^{d[j]} = {rhs}"
            return True, ""

        def f_hat_check():
            nonlocal lhat
            if lhat is None:
                lhat = {yvar(i): v for i, v in enumerate(hat_y(pair.seed), start=1)}
            for j in range(n):
                lhs = x_to_roots(f_at_yhat(specialize_z(st.F[j], spec), seed), d)
                rhs = lp_substitute(ls.F[j], lhat, partial=True) ** d[j]
                if lhs != rhs:
                    return False, f"F_{j + 1}(yhat, zbin) = {lhs} but (LF_{j + 1}(Lyhat))^{d[j]} = {rhs}"
            return True, ""

        def x_check():
            xs = x_from_state(sbin, st)
            lx = lpattern.seed_at(w).x
            for i in range(n):
                lhs = x_to_roots(xs[i], d)
                rhs = lx[i] ** d[i]
                if lhs != rhs:
                    return False, f"x_{i + 1}|zbin = {xs[i]} but (Lx_{i + 1})^{d[i]} = {rhs}"
            return True, ""

        def y_check():
            ys = y_from_state(sbin, st)
            ly = lpattern.seed_at(w).y
            for j in range(n):
                if not ys[j] == ly[j]:
                    return False, f"y_{j + 1}|zbin = {ys[j]} but Ly_{j + 1} = {ly[j]}"
            return True, ""

        _record(report, w, "c-vectors", c_check)
        _record(report, w, "g-vectors", g_check)
        _record(report, w, "F-polynomials", f_check)
        _record(report, w, "F-polynomials at yhat", f_hat_check)
        _record(report, w, "cluster variables", x_check)
        _record(report, w, "coefficients", y_check)
    return report


def verify_right(seed: GenSeed, word: Sequence[int], states: Optional[list] = None) -> CompanionReport:
    """Compare the seed's pattern with its right companion at every prefix of ``word``."""
    word = tuple(word)
    report = CompanionReport("right", word)
    try:
        d = seed.d
        n = seed.n
        pair = right_companion(seed)
        states = states or states_for(seed, word)
        rstates = _companion_states(pair, word)
        spec = ZSpecialization.zero(d)
        szero = specialize_seed(seed, spec)
        rpattern = ClusterPattern(pair.seed)
        ry = {yvar(i): LaurentPoly.var(yvar(i), di) for i, di in enumerate(d, start=1)}
    except Exception as exc:
        report.records.append(CheckRecord(word, "setup", False, f"{type(exc).__name__}: {exc}", type(exc).__name__))
        return report
    for m in range(len(word) + 1):
        st: PatternState = states[m]
        rs: PatternState = rstates[m]
        w = word[:m]

        def g_check():
            return rs.G == st.G, f"RG={_mat(rs.G)} G={_mat(st.G)}"

        def c_check():
            want = _scaled(st.C, d, "right")
            if want is None:
                return False, f"c_ij d_j / d_i is not integral for C={_mat(st.C)}"
            return rs.C == want, f"RC={_mat(rs.C)} expected {_mat(want)}"

        def f_check():
            for j in range(n):
                lhs = specialize_z(st.F[j], spec)
                rhs = lp_substitute(rs.F[j], ry, partial=True)
                if lhs != rhs:
                    return False, f"F_{j + 1}(y, 0) = {lhs} but RF_{j + 1}(y^d) = {rhs}"
            return True, ""

        def x_check():
            xs = x_from_state(szero, st)
            rx = rpattern.seed_at(w).x
            for i in range(n):
                if xs[i] != rx[i]:
                    return False, f"x_{i + 1}|z=0 = {xs[i]} but Rx_{i + 1} = {rx[i]}"
            return True, ""

        def y_check():
            ys = y_from_state(szero, st)
            ry_t = rpattern.seed_at(w).y
            for j in range(n):
                lhs = ys[j] ** d[j]
                if not lhs == ry_t[j]:
                    return False, f"(y_{j + 1}|z=0)^{d[j]} = {lhs} but Ry_{j + 1} = {ry_t[j]}"
            return True, ""

        _record(report, w, "g-vectors", g_check)
        _record(report, w, "c-vectors", c_check)
        _record(report, w, "F-polynomials", f_check)
        _record(report, w, "cluster variables", x_check)
        _record(report, w, "coefficients", y_check)
    return report


def companion_states(pair: CompanionPair, word: Sequence[int]) -> list:
    """C, G and F of the companion pattern at every prefix of ``word``."""
    return _companion_states(pair, tuple(word))


__all__ = [
    "CheckRecord",
    "CompanionPair",
    "CompanionReport",
    "ZSpecialization",
    "companion_states",
    "left_companion",
    "right_companion",
    "root_var",
    "specialize_seed",
    "specialize_z",
    "verify_left",
    "verify_right",
    "x_to_roots",
]
