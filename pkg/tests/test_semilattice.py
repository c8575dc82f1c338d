import pytest
from hypothesis import given
from hypothesis import strategies as st

from tightgroupoid import semilattice as sl
from tightgroupoid import word_algebra as wa
from tightgroupoid.errors import ParseError
from tightgroupoid.semilattice import INF, Projection, UnitPoint

GRID = 9


@st.composite
def projections(draw, bound=6):
    cls = draw(st.sampled_from([1, 2, 3, 4]))
    a, b = draw(st.integers(0, bound)), draw(st.integers(0, bound))
    if cls == 1:
        return Projection(1, (a, a))
    if cls == 2:
        return Projection(2, (max(a, b), min(a, b)))
    if cls == 3:
        return Projection(3, (min(a, b), max(a, b)))
    return Projection(4, (a, b))


ext = st.one_of(st.integers(0, 6), st.just(INF))
units = st.builds(UnitPoint, ext, ext)
finite_units = st.builds(UnitPoint, st.integers(0, GRID - 1), st.integers(0, GRID - 1))


def support(p: Projection):
    """The diagonal support on a finite grid, straight from the operator description."""
    n1, n2 = p.n
    rule = {1: lambda i, j: i >= n1 and j >= n1, 2: lambda i, j: i >= n1 and j == n2,
            3: lambda i, j: i == n1 and j >= n2, 4: lambda i, j: (i, j) == (n1, n2)}[p.cls]
    return {(i, j) for i in range(GRID) for j in range(GRID) if rule(i, j)}


def test_proj_mul_examples():
    assert sl.proj_mul(Projection(1, (2, 2)), Projection(4, (3, 5))) == Projection(4, (3, 5))
    assert sl.proj_mul(Projection(2, (4, 1)), Projection(2, (6, 1))) == Projection(2, (6, 1))
    assert sl.proj_mul(Projection(2, (4, 1)), Projection(3, (2, 5))) is None


@given(projections(3), projections(3))
def test_proj_mul_is_support_intersection(p, q):
    pq = sl.proj_mul(p, q)
    assert (support(pq) if pq else set()) == support(p) & support(q)


@given(projections(), projections(), projections())
def test_semilattice_laws(p, q, r):
    assert sl.proj_mul(p, p) == p
    assert sl.proj_mul(p, q) == sl.proj_mul(q, p)
    assert sl.proj_mul(sl.proj_mul(p, q), r) == sl.proj_mul(p, sl.proj_mul(q, r))
    pq = sl.proj_mul(p, q)
    assert (pq.word if pq else wa.ZERO) == wa.word_mul(p.word, q.word)


def test_in_filter_examples():
    assert sl.in_filter(Projection(1, (2, 2)), UnitPoint(3, 5))
    assert sl.in_filter(Projection(2, (5, 2)), UnitPoint(INF, 2))
    assert not sl.in_filter(Projection(4, (3, 5)), UnitPoint(3, 4))


@given(projections(), finite_units)
def test_finite_filter_is_support_membership(p, k):
    assert sl.in_filter(p, k) == ((k.k1, k.k2) in support(p))


def test_leq_examples():
    assert sl.leq(Projection(4, (3, 5)), Projection(1, (2, 2)))
    assert not sl.leq(Projection(1, (2, 2)), Projection(4, (3, 5)))
    p = Projection(3, (1, 4))
    assert sl.leq(p, p)


def test_minimum_of_filter():
    assert sl.minimum_of_filter(UnitPoint(3, 5)) == Projection(4, (3, 5))
    assert sl.minimum_of_filter(UnitPoint(3, INF)) is None
    assert sl.minimum_of_filter(UnitPoint(INF, INF)) is None


def test_ultrafilter_witness_example():
    res = sl.ultrafilter_witness(UnitPoint(1, 1), 3)
    assert not res["filter_failures"]
    assert res["excluded"] == len(sl.enumerate_projections(3)) - res["members"]
    for p, q in res["witnesses"].items():
        assert sl.in_filter(q, UnitPoint(1, 1)) and sl.proj_mul(p, q) is None


def test_ultrafilter_witness_needs_room():
    with pytest.raises(ValueError):
        sl.ultrafilter_witness(UnitPoint(5, INF), 3)


@given(units)
def test_filter_matches_its_generators(k):
    defined = sl.filter_from_definition(k, 7)
    for p in sl.enumerate_projections(7):
        assert sl.in_filter(p, k) == (p in defined)


@given(units, projections(4), projections(4))
def test_filter_is_upward_and_multiplicative(k, p, q):
    if sl.in_filter(p, k) and sl.leq(p, q):
        assert sl.in_filter(q, k)
    if sl.in_filter(p, k) and sl.in_filter(q, k):
        pq = sl.proj_mul(p, q)
        assert pq is not None and sl.in_filter(pq, k)


def test_char_converges_examples():
    seq = [UnitPoint(2, a) for a in range(20)]
    assert sl.char_converges(seq, UnitPoint(2, INF), Projection(3, (2, 4)))
    assert sl.char_converges([UnitPoint(1, 3)] * 5, UnitPoint(1, 3), Projection(4, (1, 3)))
    diag = [UnitPoint(a, a) for a in range(20)]
    assert sl.char_converges(diag, UnitPoint(INF, INF), Projection(4, (1, 1)))
    # a sequence that never settles on the limit value does not converge
    assert not sl.char_converges([UnitPoint(a, 0) for a in range(20)], UnitPoint(INF, 0),
                                 Projection(4, (19, 0)))


@given(st.integers(0, 6), st.integers(0, 6))
def test_finite_sequences_converge_to_boundary(a, b):
    # (a, m) -> (a, inf) and (m, b) -> (inf, b) on every probe
    for p in sl.enumerate_projections(5):
        assert sl.char_converges([UnitPoint(a, m) for m in range(30)], UnitPoint(a, INF), p)
        assert sl.char_converges([UnitPoint(m, b) for m in range(30)], UnitPoint(INF, b), p)


@given(units)
def test_unit_text_round_trip(k):
    assert sl.parse_unit(sl.format_unit(k)) == k


def test_parse_projection():
    assert sl.parse_projection("B1(r=0; n=2,2; m=2,2)") == Projection(1, (2, 2))
    with pytest.raises(ParseError):
        sl.parse_projection("B4(r=1; n=2,2; m=2,2)")
    with pytest.raises(ParseError):
        sl.parse_unit("phi(-1,2)")
