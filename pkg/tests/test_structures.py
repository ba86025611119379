import itertools

import pytest
from hypothesis import given, settings, strategies as st

from relguess.structures import (Cone, GDegreeMap, Lattice, format_cone, format_gdeg,
                                 format_lattice, orthant, parse_cone, parse_gdeg, parse_lattice)

C3 = Cone([(1, 1), (1, 2), (2, 1)])


def cone_oracle(gens, i, bound=12):
    """Exhaustive search over coefficient vectors with entries <= bound."""
    for coefs in itertools.product(range(bound + 1), repeat=len(gens)):
        v = tuple(sum(c * g[p] for c, g in zip(coefs, gens)) for p in range(len(i)))
        if v == tuple(i):
            return True
    return False


def test_cone_examples():
    assert C3.contains((3, 3))
    assert C3.contains((0, 0))
    assert not C3.contains((1, 0))
    assert orthant(3).contains((4, 0, 2))


@settings(max_examples=200)
@given(st.tuples(st.integers(0, 8), st.integers(0, 8)))
def test_cone_matches_search(i):
    assert C3.contains(i) == cone_oracle(C3.generators, i, bound=8)


def test_cone_divisors():
    king = Cone([(1, 1), (2, 0)])
    assert sorted(king.divisors((3, 1))) == [(1, 1), (2, 0)]
    assert king.divides((1, 1), (3, 1))
    assert not king.divides((1, 1), (2, 0))


def test_lattice_example_cosets():
    L = Lattice([(0, 3), (1, 0)])
    assert L.index == 3
    assert L.domain == ((0, 0), (0, 1), (0, 2))
    assert L.coset((0, 5)) == (0, 2)
    assert L.coset((7, 4)) == (0, 1)
    assert Lattice.full(2).coset((5, 9)) == (0, 0)


def det(rows):
    if len(rows) == 1:
        return rows[0][0]
    return sum((-1) ** c * rows[0][c] * det([r[:c] + r[c + 1:] for r in rows[1:]])
               for c in range(len(rows)))


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=2, max_size=2),
       st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_lattice_coset_solves_integrally(basis, i):
    D = det([list(b) for b in basis])
    if D == 0:
        return
    L = Lattice(basis)
    assert L.index == abs(D)
    a = L.coset(i)
    assert a in L.domain
    # i - a = c * basis with c integral: Cramer's rule
    diff = [x - y for x, y in zip(i, a)]
    (p, q), (r, s) = basis
    c1 = diff[0] * s - diff[1] * r
    c2 = p * diff[1] - q * diff[0]
    assert c1 % D == 0 and c2 % D == 0


def test_lattice_rejects_bad_domain():
    with pytest.raises(ValueError):
        Lattice([(0, 3), (1, 0)], [(0, 0), (0, 3), (0, 1)])
    with pytest.raises(ValueError):
        Lattice([(1, 1), (2, 2)])


def test_gdegree():
    g = GDegreeMap([3], [[1], [1]])
    assert g.gdegree((0, 0)) == (0,)
    assert g.gdegree((1, 2)) == (0,)
    assert g.zero_lattice().contains((1, 2))


@given(st.tuples(st.integers(0, 9), st.integers(0, 9)), st.tuples(st.integers(0, 9), st.integers(0, 9)))
def test_gdegree_additive(a, b):
    g = GDegreeMap([6], [[2], [1]])
    ab = tuple(x + y for x, y in zip(a, b))
    assert g.gdegree(ab) == g.add(g.gdegree(a), g.gdegree(b))


def test_zero_lattices():
    assert GDegreeMap([3], [[0], [0]]).zero_lattice().index == 1
    L = GDegreeMap([3], [[1]]).zero_lattice()
    assert L.index == 3 and sorted(L.domain) == [(0,), (1,), (2,)]
    g = GDegreeMap([3], [[1], [1]])
    L = g.zero_lattice()
    assert L.index == 3
    for v in [(3, 0), (2, 1), (-1, 1)]:
        assert L.contains(v)
    for i in itertools.product(range(6), repeat=2):
        assert L.contains(i) == (g.gdegree(i) == (0,))


def test_text_round_trips():
    assert parse_cone(format_cone(C3)).generators == C3.generators
    assert parse_cone("1,1; 2 0").generators == ((1, 1), (2, 0))
    L = Lattice([(0, 3), (1, 0)], [(0, 0), (0, 1), (0, 5)])
    L2 = parse_lattice(format_lattice(L, with_domain=True))
    assert L2.domain == L.domain and L2.basis == L.basis
    g = GDegreeMap([2, 6], [[1, 3], [0, 1]])
    g2 = parse_gdeg(format_gdeg(g))
    assert (g2.q, g2.degrees) == (g.q, g.degrees)
    assert parse_gdeg("group 3; 2; 1").degrees == ((2,), (1,))
