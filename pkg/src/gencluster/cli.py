"""Command line front end and the seed-file format.

Seed files are JSON documents::

    {"n": 2,
     "B": [[0, -1], [1, 0]],
     "Z": [{"d": 3, "coeffs": "formal"}, {"d": 1}],
     "semifield": "universal"}

``coeffs`` is ``"formal"`` (the default), or the full list of ``d + 1``
coefficients ``z_0..z_d`` as nonnegative integers or monomial strings.
Optional keys: ``y`` (coefficient values as strings, ``"(p)/(q)"`` for a
quotient) and ``x`` (names of the initial cluster variables).
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .companion import CompanionReport, companion_states, left_companion, right_companion, verify_left, verify_right
from .errors import GCAError, ParseError, TermLimitExceeded
from .invariants import (
    PatternState,
    c_from_tropical,
    drop_zero_z,
    f_from_x,
    f_in_semifield,
    g_from_grading,
    states_for,
    x_from_state,
    xy_functions,
    y_from_state,
)
from .poly import Frac, LaurentPoly, Var, format_poly, lp_substitute, parse_poly
from .semifield import TropElement, UsfElement
from .seed import ClusterPattern, GenSeed, parse_word, validate_seed

BUNDLED = {"g2": "g2.json"}


# -- seed files -----------------------------------------------------------------------


def parse_value(text: str) -> Frac:
    """``"p"`` or ``"(p)/(q)"`` with ``p``, ``q`` in the polynomial text form."""
    m = re.fullmatch(r"\s*\((.*)\)\s*/\s*\((.*)\)\s*", text)
    if m:
        return Frac(parse_poly(m.group(1)), parse_poly(m.group(2)))
    return Frac(parse_poly(text))


def value_text(v) -> str:
    if isinstance(v, (TropElement, UsfElement)):
        v = v.to_frac()
    if isinstance(v, LaurentPoly):
        return format_poly(v)
    if v.den == 1:
        return format_poly(v.num)
    if v.den.is_monomial() and v.num.is_monomial():
        return format_poly(v.to_laurent())
    return f"({format_poly(v.num)})/({format_poly(v.den)})"


def _field(doc: dict, key: str, where: str):
    if key not in doc:
        raise ParseError(f"missing field {key!r}", where)
    return doc[key]


def load_seed_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("seed file must hold a JSON object", "document")
    return doc


def parse_seed_file(text: str) -> GenSeed:
    """Parse and validate a seed document; validation errors propagate unchanged."""
    doc = load_seed_document(text)
    n = _field(doc, "n", "document")
    B = _field(doc, "B", "document")
    zs = _field(doc, "Z", "document")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"expected a positive integer, got {n!r}", "n")
    if not isinstance(B, list) or not all(isinstance(r, list) for r in B):
        raise ParseError("expected a list of rows", "B")
    for i, row in enumerate(B):
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool):
                raise ParseError(f"expected an integer, got {v!r}", f"B[{i}][{j}]")
    if not isinstance(zs, list):
        raise ParseError("expected a list of exchange polynomials", "Z")
    if len(zs) != n:
        raise ParseError(f"expected {n} entries, got {len(zs)}", "Z")
    Z = []
    for i, entry in enumerate(zs):
        where = f"Z[{i}]"
        if not isinstance(entry, dict):
            raise ParseError("expected an object with 'd' and 'coeffs'", where)
        d = _field(entry, "d", where)
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise ParseError(f"expected a positive integer, got {d!r}", f"{where}.d")
        coeffs = entry.get("coeffs", "formal")
        if coeffs == "formal":
            Z.append(d)
            continue
        if not isinstance(coeffs, list):
            raise ParseError("expected \"formal\" or a list", f"{where}.coeffs")
        if len(coeffs) != d + 1:
            raise ParseError(f"expected {d + 1} coefficients, got {len(coeffs)}", f"{where}.coeffs")
        vals = []
        for s, c in enumerate(coeffs):
            if isinstance(c, str):
                try:
                    vals.append(parse_value(c))
                except ParseError as exc:
                    raise ParseError(str(exc), f"{where}.coeffs[{s}]") from None
            elif isinstance(c, int) and not isinstance(c, bool):
                vals.append(c)
            else:
                raise ParseError(f"expected an integer or string, got {c!r}", f"{where}.coeffs[{s}]")
        Z.append(vals)
    semifield = doc.get("semifield", "universal")
    if semifield not in ("universal", "tropical"):
        raise ParseError(f"expected 'universal' or 'tropical', got {semifield!r}", "semifield")
    y = _value_list(doc, "y", n)
    x = _value_list(doc, "x", n)
    return validate_seed(B, Z, semifield, y=y, x=x)


def _value_list(doc: dict, key: str, n: int):
    vals = doc.get(key)
    if vals is None:
        return None
    if not isinstance(vals, list) or len(vals) != n:
        raise ParseError(f"expected a list of {n} strings", key)
    out = []
    for i, v in enumerate(vals):
        if not isinstance(v, str):
            raise ParseError(f"expected a string, got {v!r}", f"{key}[{i}]")
        try:
            out.append(parse_value(v))
        except ParseError as exc:
            raise ParseError(str(exc), f"{key}[{i}]") from None
    return out


def seed_to_dict(seed: GenSeed) -> dict:
    doc: dict = {"n": seed.n, "B": [list(r) for r in seed.B], "Z": []}
    for i, Zi in enumerate(seed.Z, start=1):
        if Zi.is_formal(i):
            doc["Z"].append({"d": Zi.degree, "coeffs": "formal"})
        else:
            coeffs = [int(c.num.constant_term()) if c.num.is_constant() and c.den == 1 else value_text(c) for c in Zi.coeffs]
            doc["Z"].append({"d": Zi.degree, "coeffs": coeffs})
    doc["semifield"] = seed.semifield.name
    gens = tuple(seed.semifield.generator(Var(1, j)) for j in range(1, seed.n + 1))
    if not all(a == b for a, b in zip(seed.y, gens)):
        doc["y"] = [value_text(v) for v in seed.y]
    if any(v != Frac.var(Var(0, i)) for i, v in enumerate(seed.x, start=1)):
        doc["x"] = [value_text(v) for v in seed.x]
    return doc


def dump_seed(seed: GenSeed) -> str:
    """Seed-file text for ``seed``; :func:`parse_seed_file` reads it back to an equal seed."""
    return json.dumps(seed_to_dict(seed), indent=2) + "\n"


def read_seed(name: str) -> GenSeed:
    """Load a seed from a path, or a bundled example by name (``g2``)."""
    if name in BUNDLED and not Path(name).exists():
        text = resources.files("gencluster").joinpath("data", BUNDLED[name]).read_text()
    else:
        text = Path(name).read_text()
    return parse_seed_file(text)


# -- reports -----------------------------------------------------------------------------


@dataclass
class RunReport:
    seed: GenSeed
    word: tuple
    table: str = "cgf"
    companion: Optional[str] = None
    states: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    xy: list = field(default_factory=list)


def build_report(seed: GenSeed, word: Sequence[int], table: str = "cgf", companion: Optional[str] = None) -> RunReport:
    word = tuple(word)
    report = RunReport(seed, word, table, companion)
    if companion:
        pair = left_companion(seed) if companion == "left" else right_companion(seed)
        target = pair.seed
        report.states = companion_states(pair, word)
    else:
        target = seed
        report.states = states_for(seed, word)
    if table == "seeds":
        pattern = ClusterPattern(target)
        report.seeds = [pattern.seed_at(word[:m]) for m in range(len(word) + 1)]
    elif table == "xy":
        report.xy = [(x_from_state(target, st), y_from_state(target, st)) for st in report.states]
    return report


def _mat_text(M) -> str:
    return "[" + ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in M) + "]"


def poly_json(p: LaurentPoly) -> list:
    return [{"exponents": {str(v): e for v, e in m}, "coefficient": c} for m, c in p.sorted_terms()]


def frac_json(f) -> dict:
    if isinstance(f, (TropElement, UsfElement)):
        f = f.to_frac()
    return {"num": poly_json(f.num), "den": poly_json(f.den)}


def _hat(v: Var) -> str:
    return f"yhat{v.i}" if v.rank == 1 else str(v)


def _monomial(pairs) -> str:
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in pairs if e)


def _specialized_f(seed: GenSeed, F: LaurentPoly) -> LaurentPoly:
    zvals = seed.z_assignment()
    numeric = {v: c for v, c in zvals.items() if c and c != Frac.var(v)}
    F = drop_zero_z(F, zvals)
    if numeric:
        F = lp_substitute(F, numeric, partial=True).to_laurent()
    return F


def xy_lines(seed: GenSeed, st: PatternState) -> list:
    """x and y of one state in separated form: monomial times F(yhat) over F|_P."""
    n = seed.n
    lines = []
    for j in range(n):
        mono = _monomial((value_text(seed.x[i]), st.G[i][j]) for i in range(n))
        F = _specialized_f(seed, st.F[j])
        if F == 1:
            lines.append(f"x{j + 1} = {mono or '1'}")
            continue
        num = format_poly(F, names=_hat)
        den = str(f_in_semifield(st.F[j], seed))
        head = f"{mono} * " if mono else ""
        lines.append(f"x{j + 1} = {head}({num})/({den})")
    for j in range(n):
        parts = []
        mono = _monomial((f"y{i + 1}", st.C[i][j]) for i in range(n))
        if mono:
            parts.append(mono)
        for i in range(n):
            b = st.B[i][j]
            if b and st.F[i] != 1:
                val = str(f_in_semifield(st.F[i], seed))
                parts.append(f"({val})" if b == 1 else f"({val})^{b}")
        lines.append(f"y{j + 1} = {' * '.join(parts) or '1'}")
    return lines


def render_tables(report: RunReport, fmt: str = "text") -> str:
    """Render a run as aligned text blocks or as a JSON document."""
    if fmt == "json":
        return json.dumps(_report_json(report), indent=2) + "\n"
    prefix = {"left": "L", "right": "R"}.get(report.companion, "")
    out = []
    for t, st in enumerate(report.states, start=1):
        out.append(f"t={t} word={list(st.word)}")
        if report.table == "cgf":
            out.append(f"  {prefix}C = {_mat_text(st.C)}")
            out.append(f"  {prefix}G = {_mat_text(st.G)}")
            for i, F in enumerate(st.F, start=1):
                out.append(f"  {prefix}F{i} = {format_poly(F)}")
        elif report.table == "xy":
            target = report.seed if not report.companion else _companion_seed(report)
            for line in xy_lines(target, st):
                out.append(f"  {prefix}{line}")
        else:
            s = report.seeds[t - 1]
            out.append(f"  B = {_mat_text(s.B)}")
            for i, v in enumerate(s.x, start=1):
                out.append(f"  x{i} = {value_text(v)}")
            for j, v in enumerate(s.y, start=1):
                out.append(f"  y{j} = {v}")
            for i, Zi in enumerate(s.Z, start=1):
                out.append(f"  Z{i}(u) = {Zi}")
    return "\n".join(out) + "\n"


def _companion_seed(report: RunReport) -> GenSeed:
    pair = left_companion(report.seed) if report.companion == "left" else right_companion(report.seed)
    return pair.seed


def _report_json(report: RunReport) -> dict:
    doc: dict = {
        "seed": seed_to_dict(report.seed),
        "word": list(report.word),
        "table": report.table,
        "companion": report.companion,
        "states": [],
    }
    for t, st in enumerate(report.states, start=1):
        entry: dict = {"t": t, "word": list(st.word), "C": [list(r) for r in st.C], "G": [list(r) for r in st.G]}
        entry["F"] = [poly_json(F) for F in st.F]
        if report.table == "xy":
            xs, ys = report.xy[t - 1]
            entry["x"] = [frac_json(v) for v in xs]
            entry["y"] = [frac_json(v) for v in ys]
        elif report.table == "seeds":
            s = report.seeds[t - 1]
            entry["B"] = [list(r) for r in s.B]
            entry["x"] = [frac_json(v) for v in s.x]
            entry["y"] = [frac_json(v) for v in s.y]
            entry["Z"] = [[frac_json(c) for c in Zi.coeffs] for Zi in s.Z]
        doc["states"].append(entry)
    return doc


def report_json(report: CompanionReport) -> dict:
    return {
        "side": report.side,
        "word": list(report.word),
        "passed": report.passed,
        "checks": len(report.records),
        "counterexamples": [
            {"word": list(r.word), "check": r.check, "detail": r.detail} for r in report.counterexamples
        ],
    }


# -- verification and oracle runs ---------------------------------------------------------


def reduced_words(n: int, length: int):
    """All words of the given length with no letter repeated back to back."""
    for first in range(1, n + 1):
        if length == 0:
            yield ()
            return
        for rest in itertools.product(range(1, n), repeat=length - 1):
            word = [first]
            for r in rest:
                word.append(r if r < word[-1] else r + 1)
            yield tuple(word)


def random_word(rng: random.Random, n: int, length: int) -> tuple:
    word: list = []
    for _ in range(length):
        choices = [k for k in range(1, n + 1) if not word or k != word[-1]] or [1]
        word.append(rng.choice(choices))
    return tuple(word)


def verify_words(seed: GenSeed, words, side: str = "both") -> list:
    reports = []
    for w in words:
        states = states_for(seed, w)
        if side in ("left", "both"):
            reports.append(verify_left(seed, w, states))
        if side in ("right", "both"):
            reports.append(verify_right(seed, w, states))
    return reports


def oracle_diff(seed: GenSeed, word: Sequence[int]) -> list:
    """Per prefix: do recursions and the X/Y-function route agree on C, G, F?"""
    states = states_for(seed, word)
    xy = xy_functions(seed.B, seed.d, word)
    rows = []
    for st, fx in zip(states, xy):
        rows.append(
            {
                "word": list(st.word),
                "C": c_from_tropical(fx.Y) == st.C,
                "G": g_from_grading(fx.X, seed.B) == st.G,
                "F": tuple(f_from_x(X, seed.n) for X in fx.X) == st.F,
            }
        )
    return rows


# -- entry point -------------------------------------------------------------------------


def _word_arg(text: str) -> tuple:
    try:
        return parse_word(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mutation word {text!r}; expected e.g. 1,2,1") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gencluster", description="Generalized cluster algebra computations.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="mutate along a word and print tables")
    run.add_argument("seed", help="seed file, or a bundled example name (g2)")
    run.add_argument("--word", type=_word_arg, default=(), help="comma-separated directions, e.g. 1,2,1")
    run.add_argument("--table", choices=["cgf", "xy", "seeds"], default="cgf")
    run.add_argument("--companion", choices=["left", "right"], help="tabulate a companion pattern instead")
    run.add_argument("--format", choices=["text", "json"], default="text")

    ver = sub.add_parser("verify", help="check the companion comparison theorems")
    ver.add_argument("seed")
    ver.add_argument("--side", choices=["left", "right", "both"], default="both")
    group = ver.add_mutually_exclusive_group(required=True)
    group.add_argument("--word", type=_word_arg)
    group.add_argument("--depth", type=int, help="all reduced words of this length (prefixes included)")
    ver.add_argument("--samples", type=int, help="with --depth: check this many random words instead")
    ver.add_argument("--rng-seed", type=int, default=0)
    ver.add_argument("--format", choices=["text", "json"], default="text")

    orc = sub.add_parser("oracle", help="compare recursions with the X/Y-function route")
    orc.add_argument("seed")
    orc.add_argument("--word", type=_word_arg, default=())
    orc.add_argument("--format", choices=["text", "json"], default="text")

    dump = sub.add_parser("dump", help="print a seed file in canonical form")
    dump.add_argument("seed")
    return p


def _check_word(seed: GenSeed, word: tuple) -> None:
    for k in word:
        if not 1 <= k <= seed.n:
            raise ParseError(f"direction {k} out of range 1..{seed.n}", "--word")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        seed = read_seed(args.seed)
        if args.command == "dump":
            sys.stdout.write(dump_seed(seed))
            return 0
        if args.command == "run":
            _check_word(seed, args.word)
            report = build_report(seed, args.word, args.table, args.companion)
            sys.stdout.write(render_tables(report, args.format))
            return 0
        if args.command == "oracle":
            _check_word(seed, args.word)
            rows = oracle_diff(seed, args.word)
            ok = all(r["C"] and r["G"] and r["F"] for r in rows)
            if args.format == "json":
                sys.stdout.write(json.dumps({"passed": ok, "states": rows}, indent=2) + "\n")
            else:
                for t, r in enumerate(rows, start=1):
                    marks = " ".join(f"{k}={'ok' if r[k] else 'MISMATCH'}" for k in ("C", "G", "F"))
                    sys.stdout.write(f"t={t} word={r['word']} {marks}\n")
            return 0 if ok else 1
        if args.word is not None:
            _check_word(seed, args.word)
            words = [args.word]
        elif args.samples:
            rng = random.Random(args.rng_seed)
            words = [random_word(rng, seed.n, args.depth) for _ in range(args.samples)]
        else:
            words = list(reduced_words(seed.n, args.depth))
        reports = verify_words(seed, words, args.side)
        ok = all(r.passed for r in reports)
        if args.format == "json":
            sys.stdout.write(json.dumps({"passed": ok, "reports": [report_json(r) for r in reports]}, indent=2) + "\n")
        else:
            for r in reports:
                sys.stdout.write(r.summary() + "\n")
                for c in r.counterexamples:
                    sys.stdout.write(f"  {c.check} at {list(c.word)}: {c.detail}\n")
        return 0 if ok else 1
    except TermLimitExceeded as exc:
        sys.stderr.write(f"gencluster: size limit reached: {exc}\n")
        return 3
    except (GCAError, OSError) as exc:
        sys.stderr.write(f"gencluster: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
