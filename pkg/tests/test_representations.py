import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightgroupoid import groupoid as gp
from tightgroupoid import representations as rp
from tightgroupoid.semilattice import INF, UnitPoint

BOUND = 4
turns = st.floats(0, 1, allow_nan=False)


def interior_close(A, B, space, margin=1):
    cols = rp._interior_cols(space, margin)
    return np.abs((A - B)[:, cols]).max(initial=0) <= rp.TOL


def shift_pair(n):
    return rp._shift_pair(n)


def test_weyl_group():
    for a in rp.WEYL:
        assert rp.weyl_mul(a, a) == "1"
        assert rp.weyl_mul("1", a) == a
    assert rp.weyl_mul("w1", "w2") == "w1w2"


def test_torus_point():
    assert abs(rp.TorusPoint.from_turns(0.25).t0 - 1j) < 1e-15
    with pytest.raises(ValueError):
        rp.TorusPoint(2.0).check()


def test_soibelman_examples():
    t0 = rp.TorusPoint.from_turns(0.3).t0
    assert rp.soibelman("1", t0, 5)["g1"][0, 0] == t0
    s, p = shift_pair(5)
    assert np.allclose(rp.soibelman("w1w2", t0, 5)["g4"], t0 * np.kron(p, p))
    for omega in rp.WEYL:
        for M in rp.soibelman(omega, t0, 5).values():
            assert np.allclose(M @ M.conj().T @ M, M)
    with pytest.raises(ValueError):
        rp.soibelman("w3", t0, 3)


def test_star_inner_examples():
    u = rp.CASE_UNITS[1]
    s = {r: gp.germ_from_data(u, u, r) for r in range(-3, 4)}
    assert rp.star_inner({s[1]: 1}, {s[3]: 1}, u, 4) == {2: 1}
    u4 = rp.CASE_UNITS[4]
    a = gp.germ_from_data(UnitPoint(1, 2), u4, 0)
    b = gp.germ_from_data(UnitPoint(0, 2), u4, 0)
    assert rp.star_inner({a: 1}, {b: 1}, u4, 4) == {}
    phi = {a: 2 - 1j, b: 0.5}
    assert rp.star_inner(phi, phi, u4, 4)[0].real >= 0


def test_gram_examples():
    t0 = rp.TorusPoint.from_turns(0.3).t0
    u = rp.CASE_UNITS[1]
    G = rp.gram(1, t0, [gp.germ_from_data(u, u, r) for r in (1, 3)])
    assert np.allclose(G, [[1, t0 ** 2], [t0 ** -2, 1]])
    assert abs(np.linalg.det(G)) <= 1e-12
    u3 = rp.CASE_UNITS[3]
    G3 = rp.gram(3, t0, [gp.germ_from_data(UnitPoint(s, INF), u3, 0) for s in (0, 3)])
    assert np.allclose(G3, np.eye(2))


@settings(max_examples=15)
@given(st.sampled_from([1, 2, 3, 4]), turns)
def test_gram_psd_and_isometric(case, t):
    space = rp.induced_space(case, rp.TorusPoint.from_turns(t).t0, BOUND)
    assert space.min_eigenvalue >= rp.PSD_TOLERANCE
    assert rp.isometry_defect(space) <= 1e-12
    assert space.rank == len(space.ranges)


def test_case1_images():
    t0 = rp.TorusPoint.from_turns(0.3).t0
    imgs = rp.induced_rep(1, t0, BOUND)
    assert np.allclose(imgs["g1"], [[t0]])
    assert all(np.allclose(imgs[g], 0) for g in ("g2", "g3", "g4"))


def test_case3_images():
    t0 = 1j
    space = rp.induced_space(3, t0, BOUND)
    imgs = rp.induced_rep(3, t0, BOUND, space)
    s, p = shift_pair(BOUND + 1)
    assert interior_close(imgs["g1"], t0 * s, space)
    # the vacuum projection lands on the second generator, not the third
    assert interior_close(imgs["g2"], t0 * p, space)
    assert np.allclose(imgs["g3"], 0)
    assert not interior_close(imgs["g3"], t0 * p, space)


def test_case4_images_after_leg_flip():
    t0 = rp.TorusPoint.from_turns(0.3).t0
    space = rp.induced_space(4, t0, BOUND)
    imgs = rp.induced_rep(4, t0, BOUND, space)
    n = BOUND + 1
    s, p = shift_pair(n)
    J = rp._leg_flip(n)
    assert interior_close(J @ imgs["g2"] @ J.T, t0 * np.kron(s, p), space)
    assert not interior_close(imgs["g2"], t0 * np.kron(s, p), space)


def test_check_equivalence():
    res = rp.check_equivalence(4, 1.0, BOUND)
    assert res["matched"] == "w1w2" and res["families"]["w1w2"]["intertwiner"] == "leg flip"
    assert not res["families"]["w1"]["match"]
    assert rp.check_equivalence(1, 1j, BOUND)["matched"] == "1"
    pairing = {c: rp.check_equivalence(c, 1.0, BOUND)["matched"] for c in (2, 3)}
    assert pairing == {2: "w1", 3: "w2"}


@settings(max_examples=10)
@given(st.sampled_from([1, 2, 3, 4]), turns, turns)
def test_equivariance_and_homomorphism(case, a, b):
    ta, tb = rp.TorusPoint.from_turns(a).t0, rp.TorusPoint.from_turns(b).t0
    assert rp.equivariance_defect(case, ta, tb, BOUND) <= 1e-12
    space = rp.induced_space(case, ta, BOUND)
    assert rp.homomorphism_defect(space) <= 1e-12


def test_induced_rep_needs_bound():
    with pytest.raises(ValueError):
        rp.induced_rep(1, 1.0, 3)
