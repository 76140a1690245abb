import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanoloc.geometry import (
    F1,
    P2,
    REDUCED_SPACES,
    ConfigError,
    Configuration,
    Curve,
    DivisorClass,
    InteriorCurve,
    NoIrreducibleCurve,
    NonRepresentableClass,
    P1xP1,
    Point,
    Surface,
    WeightType,
    adjunction_genus,
    config_from_dict,
    config_to_dict,
    euler_flow,
    euler_jump_check,
    extremum_euler_square,
    intersect,
    load_config,
    normal_degree,
)


def test_weight_type_sums_to_three():
    with pytest.raises(ValueError):
        WeightType(1, 1, 2)
    assert WeightType(1, 0, 2).weights() == (-1, 1, 1)


def test_lattices_are_unimodular_and_symmetric():
    for space in REDUCED_SPACES.values():
        g = space.pairing
        assert all(g[i][j] == g[j][i] for i in range(space.rank) for j in range(space.rank))
        det = g[0][0] if space.rank == 1 else g[0][0] * g[1][1] - g[0][1] * g[1][0]
        assert abs(det) == 1
    assert (P2.degree, P1xP1.degree, F1.degree) == (9, 8, 8)


def test_intersect_examples():
    assert intersect(P2, (2,), (2,)) == 4
    assert intersect(P1xP1, (1, 0), (0, 1)) == 1
    assert intersect(F1, (0, 1), (0, 1)) == -1
    with pytest.raises(ValueError):
        intersect(P2, (1,), (1, 0))


@pytest.mark.parametrize("space", [P2, P1xP1, F1], ids=lambda s: s.name)
def test_intersect_symmetric(space):
    vecs = list(itertools.product(range(-2, 3), repeat=space.rank))
    for a in vecs:
        for b in vecs:
            assert intersect(space, a, b) == intersect(space, b, a)


def test_adjunction_examples():
    assert adjunction_genus(P2, (2,)) == 0
    assert adjunction_genus(P1xP1, (2, 2)) == 1
    assert adjunction_genus(F1, (3, 2)) == 1
    with pytest.raises(NoIrreducibleCurve):
        adjunction_genus(P1xP1, (0, 2))
    with pytest.raises(ValueError):
        adjunction_genus(P2, (0,))


def test_parity_failure_is_non_representable():
    # no class in these lattices fails parity since c1 is characteristic; a
    # lattice with a non-characteristic c1 shows the error path
    from fanoloc.geometry import ReducedSpace

    odd = ReducedSpace("odd", "test lattice", ((1,),), (2,))
    with pytest.raises(NonRepresentableClass):
        adjunction_genus(odd, (1,))


def _specialised(space, c):
    # the per-lattice genus equations, solved for g
    if space is P2:
        x = c[0]
        return (x * x - 3 * x + 2) / 2
    if space is P1xP1:
        x, y = c
        return (x - 1) * (y - 1)
    x, y = c
    return ((2 * x - 1) * (y - 1) + 1 - y * y) / 2


@pytest.mark.parametrize("space", [P2, P1xP1, F1], ids=lambda s: s.name)
def test_adjunction_matches_specialised_equations(space):
    for c in itertools.product(range(11), repeat=space.rank):
        if not any(c):
            continue
        g = _specialised(space, c)
        if g < 0 or g != int(g):
            with pytest.raises(ValueError):
                adjunction_genus(space, c)
        else:
            assert adjunction_genus(space, c) == g


def test_normal_degree_examples():
    assert normal_degree(P2, (1,)) == 1
    assert normal_degree(P1xP1, (1, 1)) == 2
    assert normal_degree(F1, (1, 0)) == 0


def test_euler_flow_examples():
    assert euler_flow(DivisorClass((-1,)), [DivisorClass((2,))]) == DivisorClass((1,))
    assert euler_flow((-1, 0), [(1, 1)]) == DivisorClass((0, 1))
    assert euler_flow((0, -1), []) == DivisorClass((0, -1))
    with pytest.raises(ValueError):
        euler_flow((0, 1), [(1,)])


@settings(max_examples=100, deadline=None)
@given(
    st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=4),
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=4),
)
def test_euler_flow_associative(e, first, second):
    assert euler_flow(euler_flow(e, first), second) == euler_flow(e, first + second)


def test_extremum_euler_square():
    assert extremum_euler_square(Point()) == 1
    assert extremum_euler_square(Curve(0)) == 0
    assert extremum_euler_square(Curve(-1)) == 1
    assert extremum_euler_square(Surface(9, 3, 1, 1)) is None


def test_euler_jump_check_examples():
    curve = InteriorCurve(0, 2, 2)
    assert euler_jump_check(0, 0, [curve], (-1,), (1,), P2)
    assert euler_jump_check(0, 0, [], (0, 1), (0, 1), P1xP1)
    assert euler_jump_check(1, 0, [], (0, 0), (1, 1), F1)
    assert not euler_jump_check(0, 1, [], (0, 0), (1, 1), F1)


def test_surface_rank_validation():
    with pytest.raises(ValueError):
        Surface(8, 0, 0, 1)
    with pytest.raises(ValueError):
        Surface(10, 0, 0, 0)


def test_structural_issues_flags_alpha_mismatch():
    config = Configuration(
        Point(), Point(), (InteriorCurve(0, 2, 1, DivisorClass((2,))),), reduced_space=P2, euler_min=DivisorClass((-1,))
    )
    issues = config.structural_issues()
    assert any("alpha_plus + alpha_minus" in i for i in issues)
    good = Configuration(
        Point(), Point(), (InteriorCurve(0, 2, 2, DivisorClass((2,))),), reduced_space=P2, euler_min=DivisorClass((-1,))
    )
    assert good.structural_issues() == []


def test_config_round_trip(tmp_path):
    data = {
        "min": {"kind": "surface", "degree": 8, "c1F_dot_c1N": -4, "c1N_sq": 2, "picard_rank": 2},
        "max": {"kind": "curve", "c1N": 0},
        "interior_curves": [{"genus": 0, "alpha_plus": 0, "alpha_minus": 2, "class": [1, 1]}],
        "b": 0,
        "c": 0,
        "reduced_space": "P1xP1",
        "euler_min": [-1, -1],
    }
    config = config_from_dict(data)
    assert config_to_dict(config) == data
    path = tmp_path / "c.json"
    path.write_text(json.dumps(data))
    assert load_config(path) == config


@pytest.mark.parametrize(
    "bad",
    [
        {"min": {"kind": "point"}},
        {"min": {"kind": "blob"}, "max": {"kind": "point"}},
        {"min": {"kind": "curve"}, "max": {"kind": "point"}},
        {"min": {"kind": "point"}, "max": {"kind": "point"}, "b": -1},
        {"min": {"kind": "point"}, "max": {"kind": "point"}, "reduced_space": "P3"},
        {"min": {"kind": "surface", "degree": 8, "c1F_dot_c1N": 0, "c1N_sq": 0, "picard_rank": 1}, "max": {"kind": "point"}},
    ],
)
def test_config_schema_errors(bad):
    with pytest.raises(ConfigError):
        config_from_dict(bad)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(broken)
