"""The G2 pattern along 1,2,1,2,1,2,1,2 against the transcribed golden tables."""

import pytest

from _support import G2_WORD, cgf_mismatches, g2_seed, load_golden, table1_mismatches
from gencluster.seed import ClusterPattern


def test_cluster_variables_and_coefficients():
    assert table1_mismatches() == []


@pytest.mark.parametrize("name", ["g2_table2.json", "g2_table3.json", "g2_table4.json"])
def test_cgf_tables(name):
    assert cgf_mismatches(name) == []


def test_golden_files_cover_nine_steps():
    for k in range(1, 5):
        doc = load_golden(f"g2_table{k}.json")
        assert tuple(doc["word"]) == G2_WORD
        assert [r["t"] for r in doc["rows"]] == list(range(1, 10))


def test_comparison_notices_a_changed_entry(monkeypatch):
    import _support

    doc = load_golden("g2_table2.json")
    doc["rows"][4]["F"][1] = doc["rows"][4]["F"][1].replace("2*y2", "3*y2", 1)
    doc["rows"][2]["C"][0][0] += 1
    monkeypatch.setattr(_support, "load_golden", lambda name: doc)
    bad = _support.cgf_mismatches("g2_table2.json")
    assert any(b.startswith("t=5 F2") for b in bad)
    assert any(b.startswith("t=3 C") for b in bad)


def test_periodicity():
    for sf in ("universal", "tropical"):
        s0 = g2_seed(sf)
        s9 = ClusterPattern(s0).seed_at(G2_WORD)
        assert s9.x == s0.x and s9.B == s0.B and s9.Z == s0.Z
        assert all(a == b for a, b in zip(s9.y, s0.y))
