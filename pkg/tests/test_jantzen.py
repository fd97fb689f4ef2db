import pytest

from rcaforms.coxeter import build_coxeter
from rcaforms.forms import beta_gram
from rcaforms.inertia import inertia
from rcaforms.irreps import get_irrep, irreps_of
from rcaforms.jantzen import (DegenerateDirection, jantzen_filtration, jantzen_signatures, jantzen_sweep,
                              submodule_check, wall_crossing_check)


def test_rank1_wall_levels():
    W = build_coxeter("A1")
    triv = get_irrep(W, "triv")
    sw = jantzen_sweep(W, triv, "1/2", "1", 12)
    assert sw.degrees[0].levels[0].level == 0
    for d in range(1, 13):
        jd = sw.degrees[d]
        assert jd.ord_det == 1
        assert [(l.level, l.dim) for l in jd.levels] == [(1, 1)]
        # G(t) = -2t * (positive unit): the level-1 form is negative
        assert (jd.levels[0].p, jd.levels[0].q) == (0, 1)


def test_rank1_submodule_and_wall_crossing():
    W = build_coxeter("A1")
    triv = get_irrep(W, "triv")
    sw = jantzen_sweep(W, triv, "1/2", "1", 12)
    assert submodule_check(W, triv, "1/2", sw.degrees).closed
    for s in ("0.1", "-0.1"):
        assert wall_crossing_check(W, triv, "1/2", "1", s, 12).ok


def test_generic_point_has_no_higher_levels():
    W = build_coxeter("B2")
    for lam in irreps_of(W):
        for d in range(4):
            jd = jantzen_filtration(W, lam, "0.137,0.291", "1,1", d)
            assert jd.ord_det == 0


def test_total_signature_matches_nearby_parameter():
    # sum_k sign beta^(k) is the signature just off the wall on the c1 side
    W = build_coxeter("A2")
    for lam in irreps_of(W):
        sig = jantzen_signatures(W, lam, "1/3", "1", 5)
        near = [inertia(beta_gram(W, lam, "0.3334", d)).signature for d in range(6)]
        assert sig == near


def test_b2_wall_crossing():
    W = build_coxeter("B2")
    lam = get_irrep(W, "triv")
    assert wall_crossing_check(W, lam, "1/4,1/4", "1,1", "0.01", 6).ok


def test_degenerate_direction_is_reported():
    # along c1 = 0 the determinant is constant in t and vanishes at a singular c0
    W = build_coxeter("A1")
    with pytest.raises(DegenerateDirection):
        jantzen_filtration(W, get_irrep(W, "triv"), "1/2", "0", 1)
