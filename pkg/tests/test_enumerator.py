import itertools
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fanoloc import fanodb
from fanoloc.enumerator import (
    CASES,
    Bounds,
    ExclusionRule,
    IdentityFailure,
    admissible_classes,
    apply_exclusions,
    balanced_split,
    case_specs,
    classify_case,
    classify_no_interior_points,
    enumerate_case,
    load_rules,
    reassert,
    solve_cells,
    split_count,
)
from fanoloc.geometry import P2, InteriorCurve, adjunction_genus
from oracles import brute_orbits, canonical_key

SMALL = Bounds(a_max=2, class_bound=2, alpha_bound=3, euler_bound=3)
MEDIUM = Bounds(a_max=3, class_bound=3, alpha_bound=4, euler_bound=4)


@pytest.fixture(scope="module")
def db():
    return fanodb.default_database()


@pytest.fixture(scope="module")
def rules():
    return load_rules()


def engine_orbits(spec):
    out = {}
    for c in enumerate_case(spec):
        key = canonical_key(
            spec.reduced_space,
            spec.symmetric,
            tuple(x.coords for x in c.curve_classes),
            c.e_min.coords,
            c.e_max.coords,
            sum(ap for ap, _ in c.alphas),
        )
        out[key] = out.get(key, 0) + c.alpha_splits
    return out


@pytest.mark.parametrize("spec", CASES, ids=lambda s: s.id)
def test_matches_exhaustive_search(spec):
    bounds = SMALL if spec.case in (7, 8) else MEDIUM
    spec = spec.with_bounds(bounds)
    assert engine_orbits(spec) == brute_orbits(spec, adjunction_genus)


# alpha families

@given(st.lists(st.integers(-6, 9), min_size=1, max_size=4), st.integers(-30, 30), st.integers(1, 6))
def test_split_count_and_balanced_split(qs, total, B):
    ranges = [range(max(-B, q - B), min(B, q + B) + 1) for q in qs]
    vectors = [v for v in itertools.product(*ranges) if sum(v) == total]
    assert split_count(qs, total, B) == len(vectors)
    split = balanced_split(qs, total, B)
    if not vectors:
        assert split is None
    else:
        assert split in vectors
        # no other vector is closer to the midpoints
        dev = lambda v: max(abs(2 * x - q) for x, q in zip(v, qs))
        assert dev(split) <= min(dev(v) for v in vectors) + 1


# case data

def test_admissible_classes_follow_adjunction():
    for c in admissible_classes(P2, Bounds(class_bound=5)):
        assert c.genus == adjunction_genus(P2, c.coords)
        assert c.q == c.coords[0] ** 2
    degrees = [c.coords[0] for c in admissible_classes(P2, Bounds(class_bound=5))]
    assert degrees == [1, 2, 3, 4, 5]


def test_case_one_arithmetic():
    cands = enumerate_case(case_specs(1)[0])
    assert sorted({c.a for c in cands}) == [1, 2]
    shapes = {tuple(x.coords for x in c.curve_classes) for c in cands}
    assert shapes == {((2,),), ((1,), (1,))}
    for c in cands:
        assert sum(ap + ic.chi for (ap, _), ic in zip(c.alphas, c.configuration.interior_curves)) == 3
    assert {(c.a, c.k3) for c in cands if c.a == 1} == {(1, 54)}


def test_case_three_relation():
    for c in enumerate_case(case_specs(3)[0]):
        assert c.e_max.coords[0] + sum(x.coords[0] for x in c.curve_classes) == 1


def test_case_two_subcases():
    two_i, two_ii = case_specs(2)
    assert {(c.a, c.k3, c.h11) for c in enumerate_case(two_i)} == {(1, 48, 2), (2, 48, 3)}
    assert {(c.a, c.k3, c.h11) for c in enumerate_case(two_ii)} == {(2, 48, 3), (3, 48, 4)}


def test_unknown_case():
    with pytest.raises(ValueError):
        case_specs(9)


def test_bounds_parse():
    b = Bounds.parse("class_bound=20, alpha_bound=100")
    assert (b.class_bound, b.alpha_bound, b.a_max) == (20, 100, 4)
    assert Bounds().doubled() == Bounds(4, 20, 100, 20)
    for bad in ("nope=1", "class_bound", "class_bound=x", "a_max=0"):
        with pytest.raises(ValueError):
            Bounds.parse(bad)


# exclusions

def test_empty_rule_list_is_identity():
    cands = enumerate_case(case_specs(1)[0])
    assert apply_exclusions(cands, []) == cands
    assert all(c.excluded_by is None for c in cands)


def test_rule_needs_citation():
    with pytest.raises(ValueError):
        ExclusionRule.from_dict({"id": "x", "where": {"case": 1}, "citation": " "})
    with pytest.raises(ValueError):
        ExclusionRule.from_dict({"id": "x", "where": {"a": {"approx": 1}}, "citation": "c"})


def test_rule_semantics():
    rule = ExclusionRule.from_dict({"id": "r", "where": {"case": 7, "k3": {"ge": 30, "le": 34}}, "citation": "c"})
    assert rule.matches({"case": 7, "k3": 32})
    assert not rule.matches({"case": 7, "k3": 36})
    assert not rule.matches({"k3": 32})
    member = ExclusionRule.from_dict({"id": "m", "where": {"k3": {"in": [28, 36]}}, "citation": "c"})
    assert member.matches({"k3": 36}) and not member.matches({"k3": 30})


def test_bundled_rules_are_cited(rules):
    assert len({r.id for r in rules}) == len(rules)
    assert all(r.citation for r in rules)


def test_case_one_excluded_by_rules(db, rules):
    res = classify_case(case_specs(1)[0], db, rules)
    assert res.survivors == []
    by_a = {c.a: c.excluded_by for c in res.excluded}
    assert by_a[1] == "quadric-tangent-degree"
    assert by_a[2] is not None


def test_case_six_degree_46_survives(db, rules):
    res = classify_case(case_specs(6)[0], db, rules)
    hits = [c for c in res.survivors if c.a == 1 and c.curve_classes[0].coords == (1,)]
    assert hits and all(c.k3 == 46 for c in hits)


def test_case_five_branch_note(db, rules):
    res = classify_case(case_specs(5)[0], db, rules)
    assert res.survivors == []
    assert any("e_min = (1,1)" in n and "killed at stage 'identities'" in n for n in res.notes)
    assert any("e_min = (-1,-1)" in n and "alive" in n for n in res.notes)


def test_unmatched_groups_carry_reasons(db, rules):
    res = classify_case(case_specs(7)[0], db, rules)
    assert res.unmatched
    assert {u.reason for u in res.unmatched} <= {"fanodb:range", "fanodb:no-match"}
    assert all(u.multisets >= u.cells >= 1 for u in res.unmatched)


# determinism and re-checks

def test_deterministic(db, rules):
    spec = case_specs(7)[0]
    one = [c.sort_key for c in classify_case(spec, db, rules).candidates]
    two = [c.sort_key for c in classify_case(spec, db, rules).candidates]
    assert one == two
    assert [c.sort_key for c in solve_cells(spec)] == [c.sort_key for c in solve_cells(spec)]


def test_reassert_rejects_tampering():
    cand = enumerate_case(case_specs(6)[0])[0]
    reassert(cand)
    cfg = cand.configuration
    c0 = cfg.interior_curves[0]
    bad = replace(cfg, interior_curves=(InteriorCurve(c0.genus, c0.alpha_plus + 1, c0.alpha_minus - 1, c0.divisor_class),) + cfg.interior_curves[1:])
    with pytest.raises(IdentityFailure):
        reassert(replace(cand, configuration=bad))
    with pytest.raises(IdentityFailure):
        reassert(replace(cand, invariants=(cand.h11, cand.h12, cand.k3 + 2)))


def test_smallest_bounds_smoke():
    report = classify_no_interior_points(Bounds(1, 1, 1, 1))
    assert len(report.results) == len(CASES)
    for r in report.results:
        for c in r.candidates:
            reassert(c)
