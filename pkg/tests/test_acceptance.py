"""Acceptance criteria 1-7, one PASS/FAIL line each.

Run with pytest (the lines are repeated in the terminal summary) or directly:
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _support import (  # noqa: E402
    G2_WORD,
    LABELS,
    cgf_mismatches,
    g2_seed,
    run_property_suite,
    table1_mismatches,
)
from gencluster.companion import verify_left, verify_right  # noqa: E402
from gencluster.seed import ClusterPattern  # noqa: E402

RESULTS: list = []

LEFT_CHECKS = {"c-vectors", "g-vectors", "F-polynomials", "F-polynomials at yhat", "cluster variables", "coefficients"}
RIGHT_CHECKS = {"c-vectors", "g-vectors", "F-polynomials", "cluster variables", "coefficients"}


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    RESULTS.append(line)
    print(line)


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def _companion_ok(rep, names: set) -> tuple:
    prefixes = {r.word for r in rep.records}
    complete = all({r.check for r in rep.records if r.word == w} == names for w in prefixes)
    ok = rep.passed and not rep.counterexamples and len(prefixes) == 9 and complete
    return ok, f"{len(rep.records)} checks over {len(prefixes)} prefixes, {len(rep.counterexamples)} counterexamples"


def test_criterion_1_table2():
    bad, secs = timed(lambda: cgf_mismatches("g2_table2.json"))
    ok = not bad and secs < 1
    report(1, "C, G, F along 1,2,1,2,1,2,1,2 equal the golden C/G/F table", ok, f"{len(bad)} mismatches, {secs:.2f} s")
    assert not bad, bad
    assert secs < 1


def test_criterion_2_table1():
    bad, secs = timed(table1_mismatches)
    ok = not bad and secs < 5
    report(2, "separated x(t), y(t) equal the golden x/y table", ok, f"{len(bad)} mismatches, {secs:.2f} s")
    assert not bad, bad
    assert secs < 5


def test_criterion_3_companion_tables():
    (left, right), secs = timed(lambda: (cgf_mismatches("g2_table3.json"), cgf_mismatches("g2_table4.json")))
    ok = not left and not right
    report(3, "left and right companion C, G, F equal their golden tables", ok, f"{len(left)} + {len(right)} mismatches")
    assert not left, left
    assert not right, right


def test_criterion_4_left_companion():
    rep, secs = timed(lambda: verify_left(g2_seed(), G2_WORD))
    ok, detail = _companion_ok(rep, LEFT_CHECKS)
    ok = ok and secs < 5
    report(4, "x, y at z = binomial match the left companion", ok, f"{detail}, {secs:.2f} s")
    assert ok, rep.counterexamples


def test_criterion_5_right_companion():
    rep, secs = timed(lambda: verify_right(g2_seed(), G2_WORD))
    ok, detail = _companion_ok(rep, RIGHT_CHECKS)
    ok = ok and secs < 5
    report(5, "x, y at z = 0 match the right companion", ok, f"{detail}, {secs:.2f} s")
    assert ok, rep.counterexamples


def test_criterion_6_periodicity():
    s1 = g2_seed()
    s9 = ClusterPattern(s1).seed_at(G2_WORD)
    parts = {
        "x": s9.x == s1.x,
        "y": all(a == b for a, b in zip(s9.y, s1.y)),
        "B": s9.B == s1.B,
        "Z": s9.Z == s1.Z,
    }
    ok = all(parts.values())
    report(6, "seed 9 equals seed 1", ok, ", ".join(f"{k} {'equal' if v else 'differs'}" for k, v in parts.items()))
    assert ok, parts


@pytest.mark.slow
def test_criterion_7_property_suite():
    os.environ.setdefault("GCA_MAX_TERMS", "20000")
    (totals, redraws), secs = timed(lambda: run_property_suite(100, 1))
    ok = all(not v for v in totals.values()) and secs < 600
    lines = [f"  ({k}) {LABELS[k]}: {'pass' if not totals[k] else f'{len(totals[k])} failures'}" for k in LABELS]
    report(7, "properties (a)-(h) on 100 random seeds", ok, f"{redraws} redraws over the size cap, {secs:.0f} s")
    RESULTS.extend(lines)
    print("\n".join(lines))
    for key, notes in totals.items():
        assert not notes, f"({key}) {LABELS[key]}: {notes[:3]}"
    assert secs < 600


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for test in tests:
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
