import pytest
from hypothesis import given, strategies as st

from k3tower.errors import InvalidEll, LevelMismatch, NotAUnit, TooLarge
from k3tower.fricke import default_generators
from k3tower.zmod import (
    Level, ResidueMatrix, apply, invert, matrix, residue, valuation, vector,
)

L9 = Level(3, 2)


@pytest.mark.parametrize("value, ell, n, expected", [(10, 3, 2, 1), (-1, 5, 1, 4), (9, 3, 2, 0)])
def test_residue(value, ell, n, expected):
    assert residue(value, Level(ell, n)).value == expected


@pytest.mark.parametrize("value, expected", [(3, 1), (0, 2), (2, 0)])
def test_valuation(value, expected):
    assert valuation(residue(value, L9)) == expected


def test_invert():
    assert invert(residue(2, L9)).value == 5
    assert invert(residue(4, Level(5, 1))).value == 4
    with pytest.raises(NotAUnit):
        invert(residue(3, L9))


def test_apply_examples():
    v = vector((1, 2, 3), L9)
    assert apply(ResidueMatrix.identity(L9), v).coords == (1, 2, 3)
    w = matrix(default_generators().w.rows, L9)
    assert apply(w, v).coords == (3, 7, 1)
    assert apply(w, vector((0, 0, 0), L9)).is_zero()


def test_apply_level_mismatch():
    with pytest.raises(LevelMismatch):
        apply(ResidueMatrix.identity(Level(3, 1)), vector((1, 2, 3), L9))


def test_level_validation():
    with pytest.raises(InvalidEll):
        Level(2, 1)
    with pytest.raises(InvalidEll):
        Level(9, 1)
    with pytest.raises(TooLarge):
        Level(3, 20)
    assert Level(3, 2).modulus == 9


levels = st.sampled_from([Level(3, 1), Level(3, 3), Level(5, 2), Level(7, 2), Level(11, 1)])


@given(levels, st.integers())
def test_double_inverse(level, x):
    u = residue(x, level)
    if u.is_unit():
        assert invert(invert(u)) == u
        assert (u * invert(u)).value == 1


@given(levels, st.integers(0, 5), st.integers(0, 5), st.integers(), st.integers())
def test_valuation_of_product(level, i, j, a, b):
    ell = level.ell
    a = a % ell or 1
    b = b % ell or 1
    if i >= level.n or j >= level.n:
        return
    x = residue(a * ell**i, level)
    y = residue(b * ell**j, level)
    assert valuation(x * y) == min(level.n, i + j)


@given(
    levels,
    st.lists(st.integers(-50, 50), min_size=9, max_size=9),
    st.tuples(*[st.integers(-99, 99)] * 3),
    st.tuples(*[st.integers(-99, 99)] * 3),
    st.integers(),
    st.integers(),
)
def test_apply_is_linear(level, entries, u, v, a, b):
    M = matrix([entries[0:3], entries[3:6], entries[6:9]], level)
    u, v = vector(u, level), vector(v, level)
    lhs = apply(M, u.scale(a) + v.scale(b))
    rhs = apply(M, u).scale(a) + apply(M, v).scale(b)
    assert lhs == rhs
