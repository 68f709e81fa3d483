import dataclasses
import json
from collections import Counter
from importlib import resources

import pytest

from belitskii.analysis import orbit_dimension
from belitskii.catalog import (
    PARAMETER_SETS,
    get_template,
    instantiate,
    match_all,
    match_template,
    templates,
    verify_catalog,
)
from belitskii.errors import NotIndecomposable, ParamsNotDistinct, UnboundParam, Unsupported
from belitskii.linalg import as_scalar
from belitskii.reduction import SystemTriple, apply_group, canonicalize
from belitskii.sampling import random_group_element

from conftest import mat


def test_counts_by_total_dimension():
    assert len(templates(2)) == 2
    assert len(templates(3)) == 9
    assert len(templates(4)) == 31
    per_d = Counter(t.d for t in templates() if t.total_dim == 4)
    assert per_d == {(1, 2, 1): 8, (1, 3, 0): 6, (0, 3, 1): 6, (0, 2, 2): 1, (2, 2, 0): 1}


def test_size_two_entries():
    t1, t2 = templates(2)
    assert (t1.d, t1.describe()) == ((1, 1, 0), "A=[λ], B=[1]")
    assert (t2.d, t2.describe()) == ((0, 1, 1), "A=[λ], C=[1]")


def test_unsupported_dimension():
    with pytest.raises(Unsupported):
        templates(5)


def test_ids_are_unique_and_stable():
    ids = [t.id for t in templates()]
    assert len(set(ids)) == 31
    assert ids[:3] == ["d110-01", "d011-01", "d111-01"]


def test_data_file_uses_placeholders():
    raw = json.loads(resources.files("belitskii").joinpath("data/templates.json").read_text(encoding="utf-8"))
    cells = {x for e in raw["templates"] for k in "ABC" for r in e[k] for x in r}
    assert cells <= {"0", "1", "λ", "μ", "ν", "∅"}


def test_instantiate_examples():
    assert instantiate(get_template("d111-01"), {"λ": 0}) == SystemTriple.build([[0]], [[1]], [[1]])
    s = instantiate(get_template("d121-01"), {"λ": 0, "μ": 1})
    assert s.A == mat([[0, 1], [0, 0]])
    assert s.B == mat([[0], [1]])
    assert s.C == mat([[1, 1]])


def test_instantiate_guards():
    with pytest.raises(ParamsNotDistinct):
        instantiate(get_template("d120-03"), {"λ": 2, "μ": 2})
    with pytest.raises(UnboundParam):
        instantiate(get_template("d130-06"), {"λ": 0, "μ": 1})
    # ascii aliases
    assert instantiate(get_template("d120-03"), {"lambda": 0, "mu": 1}).A == mat([[0, 0], [0, 1]])


@pytest.mark.parametrize("t", templates(), ids=lambda t: t.id)
def test_templates_are_fixed_points(t):
    for params in PARAMETER_SETS:
        s = instantiate(t, params)
        assert canonicalize(s).canonical == s


def test_match_example():
    tid, params = match_template(canonicalize(SystemTriple.build([[3]], [[1]], [[1]])))
    assert tid == "d111-01"
    assert params == {"λ": as_scalar(3)}


def test_match_rejects_direct_sum():
    s = SystemTriple.build([[3]], [[1]], [[1]]).direct_sum(SystemTriple.build([[2]], [[1]], [], l=0))
    with pytest.raises(NotIndecomposable):
        match_template(canonicalize(s))


def test_match_returns_none_above_table():
    s = SystemTriple.build([[0, 1], [0, 0]], [[0], [1]], [[1, 0], [0, 1]])
    assert match_template(canonicalize(s)) is None


@pytest.mark.parametrize("t", templates(), ids=lambda t: t.id)
def test_match_inverts_instantiate(t):
    for params in PARAMETER_SETS:
        s = instantiate(t, params)
        assert match_template(s) == (t.id, {p: as_scalar(params[p]) for p in t.params})
        # no other template reproduces the same system with ordered eigenvalues
        assert [tid for tid, _ in match_all(canonicalize(s))] == [t.id]


@pytest.mark.parametrize("t", templates(), ids=lambda t: t.id)
def test_conjugated_templates_are_recognized(t, rng):
    values = {"λ": "-1+i", "μ": "1/2", "ν": "3"}
    s = instantiate(t, values)
    g = random_group_element(rng, *s.d)
    tid, _ = match_template(apply_group(g, s))
    assert tid == t.id


def test_reversed_eigenvalues_match_same_template():
    s = instantiate(get_template("d130-04"), {"λ": 5, "μ": -1})
    c = canonicalize(s)
    assert c.canonical != s
    assert match_all(c) == []
    tid, params = match_template(c)
    assert tid == "d130-04"
    assert params == {"λ": as_scalar(5), "μ": as_scalar(-1)}


def test_entries_differing_by_eigenvalue_order():
    # d121-08 with λ > μ is d121-07 read with the eigenvalues in ascending order
    s = instantiate(get_template("d121-08"), {"λ": 1, "μ": 0})
    assert match_template(s) == ("d121-07", {"λ": as_scalar(0), "μ": as_scalar(1)})
    # d121-06 with λ > μ is d121-05 at ν = 0
    s = instantiate(get_template("d121-06"), {"λ": 1, "μ": 0})
    assert match_template(s) == ("d121-05", {"λ": as_scalar(0), "μ": as_scalar(1), "ν": as_scalar(0)})


def test_size_three_orbit_dimensions():
    dims = [orbit_dimension(canonicalize(instantiate(t, PARAMETER_SETS[0]))).dim_orbit
            for t in templates(3) if t.total_dim == 3]
    # B = (1, 0) and C = (0, 1) against J2 are not generic: stabilizer {Y = [[a, b], [0, a]], x = a}
    assert dims == [2, 4, 3, 4, 4, 3, 4]


def test_verify_catalog_fixed_points_only():
    report = verify_catalog(0, 0)
    assert report.ok
    assert report.checked_instantiations == 62


def test_verify_catalog_sampling():
    report = verify_catalog(150, 3)
    assert report.ok
    assert report.trials == 150
    assert sum(report.matches.values()) > 0


def test_verify_catalog_detects_corruption():
    bad = dataclasses.replace(get_template("d120-02"), B=(("1",), ("1",)))
    report = verify_catalog(0, 0, table=[bad])
    assert not report.ok
    assert [tid for tid, _ in report.fixed_point_failures] == ["d120-02", "d120-02"]
