import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mosrs.space import Kind, ParamSpec, SearchSpace, builtin_space, denormalize, normalize, unit_space

# name, kind, lower, upper, default -- copied from the AutoDock parameter tables
TABLES = {
    "ga": [
        ("seed", "integer", 0, 10000000, None),
        ("ga_pop_size", "integer", 50, 500, 150),
        ("ga_elitism", "binary", 0, 1, 1),
        ("ga_mutation_rate", "continuous", 0.2, 0.99, 0.02),
        ("ga_crossover_rate", "continuous", 0.2, 0.99, 0.80),
    ],
    "sa": [
        ("seed", "integer", 0, 10000000, None),
        ("tstep", "continuous", -2.0, 2.0, 2.0),
        ("qstep", "continuous", -5.0, 5.0, 2.0),
        ("dstep", "continuous", -5.0, 5.0, 2.0),
        ("rtrf", "continuous", 0.0001, 0.99, 0.80),
        ("trnrf", "continuous", 0.0001, 0.99, 1.0),
        ("quarf", "continuous", 0.0001, 0.99, 1.0),
        ("dihrf", "continuous", 0.0001, 0.99, 1.0),
        ("accs", "integer", 100, 30000, 30000),
        ("rejs", "integer", 100, 30000, 30000),
        ("linear_schedule", "binary", 0, 1, 1),
    ],
    "ls": [
        ("seed", "integer", 0, 10000000, None),
        ("sw_max_its", "integer", 100, 1000, 300),
        ("sw_max_succ", "integer", 2, 10, 4),
        ("sw_max_fail", "integer", 2, 10, 4),
    ],
}


@pytest.mark.parametrize("name", ["ga", "sa", "ls"])
def test_builtin_matches_table(name):
    space = builtin_space(name)
    got = [(p.name, p.kind.value, p.lower, p.upper, p.default) for p in space.params]
    assert got == TABLES[name]


def test_builtin_examples():
    ga = builtin_space("ga")
    assert ga.dim == 5
    pop = ga.params[ga.names.index("ga_pop_size")]
    assert (pop.kind, pop.lower, pop.upper, pop.default) == (Kind.INTEGER, 50, 500, 150)
    ls = builtin_space("ls")
    assert ls.dim == 4
    its = ls.params[ls.names.index("sw_max_its")]
    assert (its.kind, its.lower, its.upper, its.default) == (Kind.INTEGER, 100, 1000, 300)


def test_hb_is_union_with_single_seed():
    hb = builtin_space("hb")
    expected = [r[0] for r in TABLES["ga"]] + [r[0] for r in TABLES["ls"] if r[0] != "seed"]
    assert hb.names == expected
    assert hb.dim == 8


def test_unknown_builtin():
    with pytest.raises(ValueError):
        builtin_space("pso")


def test_out_of_range_defaults_stored_verbatim():
    ga = builtin_space("ga")
    mut = ga.params[3]
    assert mut.default == 0.02 and not mut.lower <= mut.default <= mut.upper


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(name="a", kind="continuous", lower=1.0, upper=1.0),
        dict(name="a", kind="integer", lower=0.5, upper=3),
        dict(name="a", kind="binary", lower=0, upper=2),
        dict(name="not valid", kind="continuous", lower=0, upper=1),
    ],
)
def test_paramspec_invariants(kwargs):
    with pytest.raises(ValueError):
        ParamSpec(**kwargs)


def test_space_invariants():
    with pytest.raises(ValueError):
        SearchSpace([])
    p = ParamSpec("a", "continuous", 0, 1)
    with pytest.raises(ValueError):
        SearchSpace([p, p])


def test_normalize_examples():
    ga = builtin_space("ga")
    lo = [0, 50, 0, 0.2, 0.2]
    assert normalize(lo, ga)[1] == 0.0
    assert normalize([0, 500, 0, 0.2, 0.2], ga)[1] == 1.0
    sa = builtin_space("sa")
    x = [p.lower for p in sa.params]
    x[1] = 0.0
    assert normalize(x, sa)[1] == 0.5


def test_normalize_errors():
    ga = builtin_space("ga")
    with pytest.raises(ValueError):
        normalize([0, 501, 0, 0.2, 0.2], ga)
    with pytest.raises(ValueError):
        normalize([0, 50, 0, 0.2], ga)


def test_denormalize_examples():
    ga = builtin_space("ga")
    out = denormalize([0.0, 0.5, 0.7, 0.0, 0.0], ga)
    assert out[1] == 275 and isinstance(out[1], int)
    assert out[2] == 1
    assert out[3] == 0.2
    assert denormalize([0.0, 0.5, 0.3, 0.0, 0.0], ga)[2] == 0


def test_denormalize_rounds_half_up():
    s = SearchSpace([ParamSpec("k", "integer", 0, 3)])
    assert denormalize([0.5], s) == [2]  # 1.5 -> 2
    assert denormalize([1 / 6], s) == [1]  # 0.5 -> 1


def test_denormalize_errors():
    with pytest.raises(ValueError):
        denormalize([1.2], unit_space(1))
    with pytest.raises(ValueError):
        denormalize([0.5, 0.5], unit_space(1))


@st.composite
def space_and_point(draw):
    params, x = [], []
    for i in range(draw(st.integers(1, 6))):
        kind = draw(st.sampled_from(["continuous", "integer", "binary"]))
        if kind == "binary":
            params.append(ParamSpec(f"p{i}", kind, 0, 1))
            x.append(draw(st.integers(0, 1)))
        elif kind == "integer":
            lo = draw(st.integers(-1000, 1000))
            hi = lo + draw(st.integers(1, 10**6))
            params.append(ParamSpec(f"p{i}", kind, lo, hi))
            x.append(draw(st.integers(lo, hi)))
        else:
            lo = draw(st.floats(-1e3, 1e3))
            hi = lo + draw(st.floats(1e-3, 1e3))
            params.append(ParamSpec(f"p{i}", kind, lo, hi))
            x.append(draw(st.sampled_from([lo, hi, (lo + hi) / 2])))
    return SearchSpace(params), x


@given(space_and_point())
def test_roundtrip_on_feasible_lattice(sp):
    space, x = sp
    back = denormalize(normalize(x, space), space)
    for p, a, b in zip(space.params, x, back):
        if p.kind is Kind.CONTINUOUS:
            assert b == pytest.approx(a, rel=1e-12, abs=1e-12 * p.width)
        else:
            assert b == a


@given(st.floats(0, 1), st.floats(0, 1))
def test_normalize_monotone(a, b):
    s = SearchSpace([ParamSpec("t", "continuous", -2.0, 2.0)])
    xa, xb = -2 + 4 * a, -2 + 4 * b
    if xa < xb:
        assert normalize([xa], s)[0] <= normalize([xb], s)[0]
