"""Shared fixtures and property checks for the test suite."""

from __future__ import annotations

import functools
import json
import random
from pathlib import Path

from hypothesis import assume

from gencluster.companion import verify_left, verify_right
from gencluster.errors import TermLimitExceeded
from gencluster.invariants import (
    c_from_tropical,
    f_from_x,
    g_from_grading,
    states_for,
    x_from_state,
    xy_functions,
    y_from_state,
)
from gencluster.poly import Frac, parse_poly
from gencluster.semifield import TROPICAL
from gencluster.seed import (
    ClusterPattern,
    diag_left,
    diag_right,
    from_p_seed,
    hat_y,
    matrix_mutate,
    mutate,
    p_mutate,
    pos,
    to_p_seed,
    validate_seed,
)

GOLDEN = Path(__file__).parent / "golden"
G2_B = [[0, -1], [1, 0]]
G2_D = [3, 1]
G2_WORD = (1, 2, 1, 2, 1, 2, 1, 2)


def g2_seed(semifield="universal"):
    return validate_seed(G2_B, G2_D, semifield)


def load_golden(name: str) -> dict:
    return json.loads((GOLDEN / name).read_text())


def P(text: str):
    return parse_poly(text)


# -- random seeds -------------------------------------------------------------


def random_seed(rng: random.Random, semifield=None):
    """Skew-symmetrizable B = A diag(s) with A skew in {-1,0,1}, formal Z of degree 1..3."""
    n = rng.randint(1, 3)
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.choice([-1, 0, 1])
            A[i][j], A[j][i] = v, -v
    s = [rng.choice([1, 2]) for _ in range(n)]
    B = [[A[i][j] * s[j] for j in range(n)] for i in range(n)]
    d = [rng.randint(1, 3) for _ in range(n)]
    return validate_seed(B, d, semifield or rng.choice(["universal", "tropical"]))


def random_case(rng: random.Random, max_len: int = 6):
    seed = random_seed(rng)
    word = tuple(rng.randint(1, seed.n) for _ in range(rng.randint(1, max_len)))
    return seed, word


# -- hypothesis helpers ------------------------------------------------------


def within_cap(test):
    """Discard draws whose polynomials outgrow GCA_MAX_TERMS."""

    @functools.wraps(test)
    def run(*args, **kwargs):
        try:
            test(*args, **kwargs)
        except TermLimitExceeded:
            assume(False)

    return run


# -- individual properties ----------------------------------------------------


def field_z(Zk, u: Frac) -> Frac:
    total = Frac(0)
    for s, c in enumerate(Zk.coeffs):
        if c:
            total = total + c * u**s
    return total


def involutive(seed, k: int, after=None) -> bool:
    after = mutate(seed, k) if after is None else after
    return mutate(after, k) == seed


def yhat_law(seed, k: int, after=None) -> bool:
    """yhat of the mutated seed follows the coefficient rule with Z_k evaluated in the field."""
    k0 = k - 1
    after = mutate(seed, k) if after is None else after
    old, new = hat_y(seed), hat_y(after)
    zk = field_z(seed.Z[k0], old[k0])
    dk = seed.d[k0]
    for j in range(seed.n):
        if j == k0:
            want = old[k0].inverse()
        else:
            b = seed.B[k0][j]
            want = old[j] * old[k0] ** (dk * pos(b)) * zk ** (-b)
        if not new[j] == want:
            return False
    return True


def companion_matrices_commute(B, d, k: int) -> bool:
    Bp = matrix_mutate(B, d, k)
    ones = [1] * len(d)
    left = matrix_mutate(diag_left(d, B), ones, k) == diag_left(d, Bp)
    right = matrix_mutate(diag_right(B, d), ones, k) == diag_right(Bp, d)
    return left and right


def laurent_in_x(value: Frac, tropical: bool) -> bool:
    """Denominator is an x-monomial times a factor free of x (a monomial outright when tropical)."""
    if tropical:
        return value.is_laurent()
    xparts = {tuple((v, e) for v, e in m if v.rank == 0) for m, _ in value.den.items()}
    return len(xparts) == 1


def p_seed_commutes(seed, k: int, after=None) -> bool:
    target = mutate(seed, k) if after is None else after
    image = p_mutate(to_p_seed(seed), k)
    if not to_p_seed(target) == image:
        return False
    y = None if seed.semifield.name == "tropical" else target.y
    return from_p_seed(image, y) == target


# -- full case ----------------------------------------------------------------

LABELS = {
    "a": "mutation involutivity",
    "b": "yhat mutation law",
    "c": "DB' = (DB)' and B'D = (BD)'",
    "d": "Laurent phenomenon",
    "e": "recursions agree with oracles",
    "f": "separation equals direct mutation",
    "g": "p-seed bijection commutes with mutation",
    "h": "left and right companion checks",
}


class Exhausted(Exception):
    """The case ran into the polynomial size cap and must be redrawn."""


def check_case(seed, word) -> dict:
    """Evaluate properties (a)-(h) along ``word``; keys map to failure notes.

    Edge properties (a), (b), (g) are checked on each step the word takes.
    """
    failures = {key: [] for key in LABELS}
    try:
        seeds = ClusterPattern(seed).seeds_along(word)
        states = states_for(seed, word)
        xy = xy_functions(seed.B, seed.d, word, TROPICAL)
        tropical = seed.semifield.name == "tropical"
        for m, (sd, st, ora) in enumerate(zip(seeds, states, xy)):
            where = f"prefix {word[:m]}"
            if m < len(word):
                k, nxt = word[m], seeds[m + 1]
                if not involutive(sd, k, nxt):
                    failures["a"].append(f"{where} k={k}")
                if not yhat_law(sd, k, nxt):
                    failures["b"].append(f"{where} k={k}")
                if not p_seed_commutes(sd, k, nxt):
                    failures["g"].append(f"{where} k={k}")
            for k in range(1, sd.n + 1):
                if not companion_matrices_commute(sd.B, sd.d, k):
                    failures["c"].append(f"{where} k={k}")
            if not all(laurent_in_x(v, tropical) for v in sd.x):
                failures["d"].append(where)
            if c_from_tropical(ora.Y) != st.C:
                failures["e"].append(f"{where} C")
            if g_from_grading(ora.X, seed.B) != st.G:
                failures["e"].append(f"{where} G")
            if tuple(f_from_x(X, seed.n) for X in ora.X) != st.F:
                failures["e"].append(f"{where} F")
            if not x_from_state(seed, st) == sd.x:
                failures["f"].append(f"{where} x")
            if not all(a == b for a, b in zip(y_from_state(seed, st), sd.y)):
                failures["f"].append(f"{where} y")
        left, right = verify_left(seed, word, states), verify_right(seed, word, states)
    except TermLimitExceeded as exc:
        raise Exhausted(str(exc)) from None
    if left.exhausted or right.exhausted:
        raise Exhausted("companion check hit the size cap")
    for rec in left.counterexamples + right.counterexamples:
        failures["h"].append(f"{rec.word} {rec.check}: {rec.detail}")
    return failures


def run_property_suite(count: int, rng_seed: int):
    """Draw cases until ``count`` complete; returns (per-property failures, redraws)."""
    rng = random.Random(rng_seed)
    totals = {key: [] for key in LABELS}
    done = redraws = 0
    while done < count:
        seed, word = random_case(rng)
        try:
            result = check_case(seed, word)
        except Exhausted:
            redraws += 1
            continue
        done += 1
        for key, notes in result.items():
            totals[key].extend(f"B={seed.B} d={seed.d} w={word}: {n}" for n in notes)
    return totals, redraws


# -- golden tables --------------------------------------------------------------


def _frac(text: str) -> Frac:
    return Frac(parse_poly(text))


def table1_mismatches() -> list:
    """Rows of the x/y golden table that differ from the separation formulas."""
    from gencluster.poly import lp_substitute, yvar
    from gencluster.semifield import UsfElement

    doc = load_golden("g2_table1.json")
    seed = g2_seed(doc["semifield"])
    yhat = {yvar(i): v for i, v in enumerate(hat_y(seed), start=1)}
    states = states_for(seed, doc["word"])
    bad = []
    for row in doc["rows"]:
        st = states[row["t"] - 1]
        xs, ys = x_from_state(seed, st), y_from_state(seed, st)
        for j, e in enumerate(row["x"]):
            num = lp_substitute(parse_poly(e["num_in_yhat"]), yhat, partial=True)
            want = _frac(e["monomial"]) * num / _frac(e["den"])
            if not xs[j] == want:
                bad.append(f"t={row['t']} x{j + 1}: got {xs[j]}")
        for j, e in enumerate(row["y"]):
            want = UsfElement(_frac(e["monomial"]) * _frac(e["factor"]) ** e["power"])
            if not ys[j] == want:
                bad.append(f"t={row['t']} y{j + 1}: got {ys[j]}")
    return bad


def cgf_mismatches(name: str) -> list:
    """Rows of a C/G/F golden table that differ from the computed pattern."""
    from gencluster.companion import companion_states, left_companion, right_companion

    doc = load_golden(name)
    seed = g2_seed()
    side = doc.get("companion")
    if side is None:
        states = states_for(seed, doc["word"])
    else:
        pair = left_companion(seed) if side == "left" else right_companion(seed)
        states = companion_states(pair, doc["word"])
    bad = []
    if len(states) != len(doc["rows"]):
        bad.append(f"{len(states)} states for {len(doc['rows'])} rows")
    for row, st in zip(doc["rows"], states):
        if [list(r) for r in st.C] != row["C"]:
            bad.append(f"t={row['t']} C: got {st.C}")
        if [list(r) for r in st.G] != row["G"]:
            bad.append(f"t={row['t']} G: got {st.G}")
        for j, text in enumerate(row["F"]):
            if st.F[j].sorted_terms() != parse_poly(text).sorted_terms():
                bad.append(f"t={row['t']} F{j + 1}: got {st.F[j]}")
    return bad
