from __future__ import annotations

import json
from collections import Counter

import pytest

from brute import brute_force_filter
from hhverify.cremona import cremona_reduce
from hhverify.linsys import LinearSystem, expected_dimension
from hhverify.oracle import dimension
from hhverify.pipeline import (
    CLASSES,
    EMPTY,
    METHODS,
    NONSPECIAL,
    SPECIAL,
    UNKNOWN,
    CensusFilter,
    CheckpointCorrupt,
    Classifier,
    Toolbox,
    Verdict,
    census,
    classify,
    contradicts,
    count_filter_dp,
    dominates,
    enumerate_systems,
    filter_count_report,
    oracle_spot_check,
    read_verdicts,
)
from hhverify.table2 import TABLE2

L = LinearSystem.of


# ------------------------------------------------------------ enumeration


@pytest.mark.parametrize("candidate", [True, False])
def test_enumeration_matches_brute_force(candidate):
    filt = CensusFilter(2, 8, candidate)
    got = list(enumerate_systems(filt))
    want = brute_force_filter(2, 8, candidate)
    assert sorted(got) == sorted(want)
    assert len(set(got)) == len(got)
    assert got == sorted(got, key=lambda s: (s.d, s.mults))
    assert count_filter_dp(2, 8, candidate=candidate) == len(want)


def test_small_filter_contents():
    systems = set(enumerate_systems(CensusFilter(2, 2, requireCandidate=False)))
    assert L(2, 2, 2) in systems and L(2, 2, 1) in systems
    assert all(max(s.mults) <= min(2, s.d) for s in systems)
    assert list(enumerate_systems(CensusFilter(0))) == []


def test_default_degree_range():
    assert CensusFilter(7).dMax == 28
    assert CensusFilter(3).dMax == 12


def test_shards_partition_the_stream():
    filt = CensusFilter(3, 9)
    whole = list(enumerate_systems(filt))
    parts = [list(enumerate_systems(filt, i, 3)) for i in range(3)]
    assert sorted(sum(parts, [])) == sorted(whole)
    assert sum(len(p) for p in parts) == len(whole)
    for p in parts:  # each shard keeps whole (d, m1) prefixes
        keys = {(s.d, s.mults[0]) for s in p}
        assert all((s.d, s.mults[0]) not in keys for q in parts if q is not p for s in q)
    with pytest.raises(ValueError):
        list(enumerate_systems(filt, 3, 3))


def test_generating_function_counts():
    for M, dMax in ((3, 12), (4, 10)):
        for cand in (True, False):
            n = sum(1 for _ in enumerate_systems(CensusFilter(M, dMax, cand)))
            assert count_filter_dp(M, dMax, candidate=cand) == n
    with_mult_two = [s for s in enumerate_systems(CensusFilter(3, 10)) if min(s.mults) >= 2]
    # min_mult=2 counts systems built from double points and up
    assert count_filter_dp(3, 10, min_mult=2) == len(with_mult_two)


def test_filter_count_report_shape():
    rows = filter_count_report(3, (11, 12))
    assert len(rows) == 8
    assert {r["dMax"] for r in rows} == {11, 12}
    assert all(r["count"] > 0 for r in rows)


# ------------------------------------------------------------ verdicts


def test_verdict_json_shape():
    v = classify(L(5, 3, 2, 2, 2, 2, 2))
    rec = json.loads(v.dumps())
    assert set(rec) == {"sys", "class", "method", "cert"}
    assert rec["sys"] == {"d": 5, "m": [3, 2, 2, 2, 2, 2]}
    assert rec["cert"]["dim"] == -1
    with pytest.raises(ValueError):
        Verdict(L(2, 2), "Maybe", None)
    with pytest.raises(ValueError):
        Verdict(L(2, 2), EMPTY, "Luck")
    with pytest.raises(ValueError):
        Verdict(L(1), EMPTY, "Game", {}, 1)
    assert len(METHODS) == 9 and len(CLASSES) == 4


def test_classify_examples():
    tb = Toolbox(use_degeneration=False)
    v = Classifier(tb)(L(5, 3, 2, 2, 2, 2, 2))
    assert v.cls == EMPTY and v.method in ("Game", "Cremona")
    assert Classifier(Toolbox(use_degeneration=False))(LinearSystem.from_groups(6, [(2, 6)])).method == "Game"
    v = classify(L(2, 2, 2))
    assert v.cls == SPECIAL and v.method == "MultipleNegCurve"
    v = classify(LinearSystem.from_groups(19, [(6, 10)]))
    assert v.cls == EMPTY and v.method == "Manual" and "reference" in v.cert
    assert dimension(v.system).dim == -1


def test_classify_heavy_and_trivial_systems():
    assert classify(L(3, 4, 1)).method == "BaseOverload"
    v = classify(LinearSystem(4, ()))
    assert v.cls == NONSPECIAL and v.dim == 14
    v = classify(L(10, 3, 3, 1, 1, 1))
    assert v.cls == NONSPECIAL and v.dim == expected_dimension(v.system)


def test_simple_points_ride_on_the_core():
    v = classify(L(9, 3, 3, 3, 3, 3, 3, 1, 1))
    assert v.cls == NONSPECIAL and "core" in v.cert and v.cert["simplePoints"] == 2


def test_degree_bound_is_opt_in():
    sys = LinearSystem.from_groups(9, [(3, 8)])
    assert classify(sys).method != "DegreeBound"
    v = classify(sys, Toolbox(use_degree_bound=True))
    assert v.method == "DegreeBound" and v.cert["conditional"]


def test_oracle_fallback_is_labelled():
    tb = Toolbox(game_nodes=1, use_degeneration=False, use_manual=False, oracle=None)
    sys = LinearSystem.from_groups(19, [(6, 10)])
    assert Classifier(tb)(sys).cls == UNKNOWN
    from hhverify.oracle import OracleConfig

    v = Classifier(Toolbox(game_nodes=1, use_degeneration=False, use_manual=False, oracle=OracleConfig()))(sys)
    assert v.cls == EMPTY and v.method == "Oracle" and v.cert["seedsAgreed"]


def test_speciality_certificates_hold_against_the_oracle():
    specials = [s for s in enumerate_systems(CensusFilter(3, 12, False)) if classify(s).cls == SPECIAL]
    assert L(2, 2, 2) in specials and L(4, 2, 2, 2, 2, 2) in specials
    for s in specials:
        v = dimension(s)
        assert v.specialityGap >= 1
        assert v.dim >= classify(s).cert.get("dimLowerBound", -1)


def test_empty_verdicts_are_closed_under_cremona():
    systems = list(enumerate_systems(CensusFilter(3, 12)))[::7]
    checked = 0
    for s in systems:
        if classify(s).cls != EMPTY:
            continue
        final, _ = cremona_reduce(s)
        if final is not None:
            assert classify(final).cls == EMPTY, (s, final)
        checked += 1
    assert checked > 100


def test_domination_pairs():
    big = LinearSystem.from_groups(22, [(1, 1), (2, 1), (6, 1), (7, 9)])
    small = LinearSystem.from_groups(22, [(2, 1), (6, 1), (7, 9)])
    assert dominates(big, small) and not dominates(small, big)
    triple = LinearSystem.from_groups(22, [(1, 3), (6, 1), (7, 9)])
    assert dominates(triple, small)
    assert not dominates(LinearSystem.from_groups(22, [(1, 2), (6, 1), (7, 9)]), small)
    assert not dominates(L(5, 3, 3), L(6, 3))
    for row in TABLE2:
        if row.implied_by is not None:
            assert dominates(row.sys, row.implied_by)


def test_domination_direction_against_the_oracle():
    # raising a multiplicity shrinks the system, never the other way round
    small, big = L(6, 3, 3, 2, 2), L(6, 3, 3, 3, 2)
    assert dominates(big, small)
    assert dimension(big).dim <= dimension(small).dim


def test_contradiction_checks():
    tb = Toolbox()
    assert not contradicts(classify(L(5, 3, 2, 2, 2, 2, 2)), tb)
    assert not contradicts(classify(L(2, 2, 2)), tb)
    assert contradicts(Verdict(L(2, 2, 2), EMPTY, "Game", {}, -1), tb)
    fake = Verdict(L(5, 3, 2, 2, 2, 2, 2), SPECIAL, "MultipleNegCurve", {})
    assert contradicts(fake, tb)


# ------------------------------------------------------------ census


def test_census_is_independent_of_worker_count(tmp_path):
    filt = CensusFilter(2, 8)
    a = census(filt, jobs=1, out_dir=tmp_path / "a")
    b = census(filt, jobs=2, out_dir=tmp_path / "b", batch_size=7)
    assert (tmp_path / "a" / "verdicts.jsonl").read_bytes() == (tmp_path / "b" / "verdicts.jsonl").read_bytes()
    assert a.counts == b.counts and a.total == b.total == sum(1 for _ in enumerate_systems(filt))
    assert not a.unknown and not a.contradictions
    assert (tmp_path / "a" / "breakdown.csv").read_text() == a.breakdown_csv()
    assert a.breakdown_csv().splitlines()[0] == "class,method,count"


def test_census_resume_reproduces_the_run(tmp_path):
    filt = CensusFilter(3, 10)
    full = census(filt, out_dir=tmp_path / "full", batch_size=16)
    ck = tmp_path / "part" / "ck.json"
    (tmp_path / "part").mkdir()
    first = census(filt, checkpoint=ck, out_dir=tmp_path / "part", batch_size=16, stop_after=40)
    assert first.total < full.total
    # simulate a crash that wrote half a line after the last checkpoint
    with open(tmp_path / "part" / "verdicts.jsonl", "ab") as fh:
        fh.write(b'{"sys": {"d"')
    resumed = census(filt, checkpoint=ck, out_dir=tmp_path / "part", batch_size=16)
    assert resumed.total == full.total and resumed.counts == full.counts
    assert resumed.unknown == full.unknown and resumed.contradictions == full.contradictions
    assert (tmp_path / "part" / "verdicts.jsonl").read_bytes() == (tmp_path / "full" / "verdicts.jsonl").read_bytes()
    saved = json.loads(ck.read_text())
    assert saved["cursor"] == full.total
    assert sum(saved["counters"].values()) == full.total


def test_checkpoint_for_another_filter_is_refused(tmp_path):
    ck = tmp_path / "ck.json"
    census(CensusFilter(2, 5), checkpoint=ck, out_dir=tmp_path, stop_after=1, batch_size=2)
    with pytest.raises(CheckpointCorrupt):
        census(CensusFilter(2, 6), checkpoint=ck, out_dir=tmp_path)
    ck.write_text("{not json")
    with pytest.raises(CheckpointCorrupt):
        census(CensusFilter(2, 5), checkpoint=ck, out_dir=tmp_path)


def test_logged_verdicts_roundtrip_and_agree_with_the_oracle(tmp_path):
    census(CensusFilter(3, 9), out_dir=tmp_path)
    verdicts = read_verdicts(tmp_path / "verdicts.jsonl")
    assert all(v.resolved for v in verdicts)
    counts = Counter(v.cls for v in verdicts)
    # candidates have no free conditions left, so nothing is non-special
    assert counts[SPECIAL] >= 1 and counts[EMPTY] > 0 and counts[NONSPECIAL] == 0
    assert oracle_spot_check(verdicts, n=len(verdicts)) == []
