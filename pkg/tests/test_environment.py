from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from collective.environment import (
    DirectionSet,
    Environment,
    InvalidEnvironment,
    LatticeCoord,
    Torus,
    canonical,
    check_actual_direction_count,
    make_standard_environment,
    standard_direction_set,
)


def test_standard_1d_directions():
    env = make_standard_environment(1)
    assert env.dirset.names == ("R", "L")
    assert env.dirset.vectors == ((1,), (-1,))
    assert sum(v[0] for v in env.dirset.vectors) == 0


def test_standard_2d_directions_sum_and_independence():
    env = make_standard_environment(2)
    vecs = env.dirset.vectors
    assert vecs == ((1, 0), (0, 1), (-1, -1))
    assert tuple(map(sum, zip(*vecs))) == (0, 0)
    # every pair independent: 2x2 determinants by hand
    for a, b in [(0, 1), (0, 2), (1, 2)]:
        (p, q), (r, s) = vecs[a], vecs[b]
        assert p * s - q * r != 0


def test_ring6_enumeration():
    env = make_standard_environment(1, 6)
    vs = env.vertices()
    assert len(vs) == 6
    assert len(env.arcs()) == 12
    assert {v.counts for v in vs} == {(k, 0) for k in range(6)}


@pytest.mark.parametrize("basis", [((1,),), ((0,),)])
def test_ring_too_small(basis):
    with pytest.raises(InvalidEnvironment):
        make_standard_environment(1, Torus(basis))


def test_dependent_torus_basis():
    with pytest.raises(InvalidEnvironment):
        make_standard_environment(2, Torus(((2, 2), (1, 1))))


def test_skew_torus_size():
    env = make_standard_environment(2, Torus(((2, 1), (0, 3))))
    assert len(env.vertices()) == 6  # |det|


class TestDirectionCount:
    def test_ok_1d(self):
        assert check_actual_direction_count(standard_direction_set(1)).ok

    def test_four_in_plane(self):
        ds = DirectionSet.from_vectors([(1, 0), (0, 1), (-1, 0), (0, -1)])
        rep = check_actual_direction_count(ds)
        assert not rep.ok
        assert any("m != n+1" in p for p in rep.problems)

    def test_degenerate(self):
        ds = DirectionSet.from_vectors([(1, 0), (-1, 0), (0, 0)])
        rep = check_actual_direction_count(ds)
        assert any("zero/dependent" in p for p in rep.problems)

    def test_not_summing_to_zero(self):
        ds = DirectionSet.from_vectors([(1, 0), (0, 1), (-1, 0)])
        assert any("sum to zero" in p for p in check_actual_direction_count(ds).problems)

    def test_environment_rejects_bad_set(self):
        ds = DirectionSet.from_vectors([(1, 0), (0, 1), (-1, 0), (0, -1)])
        with pytest.raises(InvalidEnvironment):
            Environment(ds)


def test_step_vertex_examples():
    line = make_standard_environment(1)
    assert line.step_vertex(LatticeCoord((0, 0)), 1).counts == (1, 0)
    ring = make_standard_environment(1, 6)
    assert ring.step_vertex(LatticeCoord((5, 0)), 1).counts == (0, 0)
    plane = make_standard_environment(2)
    v = plane.step_vertex(LatticeCoord((0, 0, 0)), 3)
    # (0,0,1) canonicalises to (-1,-1,0)
    assert v.counts == (-1, -1, 0)
    assert plane.point(v) == (-1, -1)


def test_euclidean_position_examples():
    assert make_standard_environment(1).euclidean_position(LatticeCoord((3, 0))) == (3.0,)
    plane = make_standard_environment(2)
    assert plane.euclidean_position((1, 1, 1)) == pytest.approx((0.0, 0.0), abs=1e-15)
    assert plane.euclidean_position((1, 0, 0)) == (1.0, 0.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_simplex_embedding(n):
    emb = np.array(make_standard_environment(n).embedding)
    assert np.allclose(np.linalg.norm(emb, axis=1), 1.0, atol=1e-12)
    assert np.allclose(emb.sum(axis=0), 0.0, atol=1e-12)
    # regular simplex: all pairwise dot products equal -1/n
    g = emb @ emb.T
    off = g[~np.eye(n + 1, dtype=bool)]
    assert np.allclose(off, -1.0 / n, atol=1e-12)


def test_custom_rational_directions():
    ds = DirectionSet.from_vectors([("1/2", 0), (0, 1), ("-1/2", -1)])
    env = Environment(ds)
    assert env.point((1, 0, 0)) == (Fraction(1, 2), 0)


counts3 = st.tuples(*[st.integers(-50, 50)] * 3)


@given(counts3, st.integers(-20, 20))
def test_canonical_idempotent_and_diagonal_invariant(c, k):
    assert canonical(canonical(c)) == canonical(c)
    assert canonical(tuple(x + k for x in c)) == canonical(c)


@given(counts3, st.integers(1, 3))
def test_step_is_bijection(c, d):
    env = make_standard_environment(2)
    v = LatticeCoord.of(c)
    w = env.step_vertex(v, d)
    back = list(w.counts)
    back[d - 1] -= 1
    assert LatticeCoord.of(tuple(back)) == v


@given(counts3, st.integers(1, 3))
def test_euclidean_step_matches_embedding(c, d):
    env = make_standard_environment(2)
    v = LatticeCoord.of(c)
    diff = np.subtract(env.euclidean_position(env.step_vertex(v, d)), env.euclidean_position(v))
    assert np.allclose(diff, env.embedding[d - 1], atol=1e-12)


@given(st.integers(2, 7), st.integers(2, 7), st.integers(-3, 3), counts3, st.integers(1, 3))
def test_torus_orbit_returns(a, b, skew, c, d):
    env = make_standard_environment(2, Torus(((a, skew), (0, b))))
    start = env.coord(c)
    v = env.step_vertex(start, d)
    steps = 1
    while v != start:
        v = env.step_vertex(v, d)
        steps += 1
        assert steps <= a * b
    assert (a * b) % steps == 0


@given(st.integers(2, 7), st.integers(2, 7), counts3, st.integers(1, 3))
def test_torus_reduction_commutes_with_step(a, b, c, d):
    env = make_standard_environment(2, Torus(((a, 0), (0, b))))
    stepped = list(c)
    stepped[d - 1] += 1
    assert env.step_vertex(env.coord(c), d) == env.coord(stepped)
