"""Cohomological realization with a primitive summand: the bridge from the
correspondence calculus, the small-diagonal correction class with its
closed-form degree table, kernel identities, and Euler consistency."""

import random

import pytest

from cubicmotives.errors import StructureError
from cubicmotives.gradedring import VarietyData
from cubicmotives.linalg import eye, mat_eq, qmat
from cubicmotives.motiveiso import _random_diag_gram
from cubicmotives.rationals import QQ
from cubicmotives.realization import (RealizationConfig, RealizedClass, Space,
                                      action_matrix, compose_realized, degree,
                                      derive_P, diagonal_realized, p_to_text,
                                      realize, verify_kernel_identities)
from cubicmotives.tautcorr import CorrClass, ck_projectors, compose, transpose


CUBIC = VarietyData.cubic_fourfold()

# the correction class, frozen: (1/9)(h1^2 h2^3 h3^3 + h1^3 h2^2 h3^3
#   + h1^3 h2^3 h3^2 - h2^4 h3^4 - h1^4 h3^4 - h1^4 h2^4)
P_TERMS = {
    ("h", (2, 3, 3)): QQ(1, 9),
    ("h", (3, 2, 3)): QQ(1, 9),
    ("h", (3, 3, 2)): QQ(1, 9),
    ("h", (0, 4, 4)): QQ(-1, 9),
    ("h", (4, 0, 4)): QQ(-1, 9),
    ("h", (4, 4, 0)): QQ(-1, 9),
}


def small_cfg(rank=3, seed=5) -> RealizationConfig:
    return RealizationConfig.with_gram(_random_diag_gram(random.Random(seed), rank))


def test_space_shape():
    cfg = small_cfg(rank=2)
    sp = cfg.space
    assert sp.hdim == 5
    assert sp.r == 2
    assert sp.size == 7
    assert sp.e == QQ(3)
    # block pairing: e on the h-antidiagonal, the Gram form on the summand
    assert sp.pairing[0, 4] == QQ(3)
    assert sp.pairing[4, 0] == QQ(3)
    assert sp.pairing[0, 0] == QQ(0)
    assert mat_eq(sp.pairing[5:, 5:], sp.gram)


def test_default_config_rank():
    cfg = RealizationConfig.default()
    assert cfg.space.r == 22
    assert cfg.space.gram[0, 0] != 0


def test_config_json_roundtrip():
    cfg = small_cfg(rank=4)
    cfg2 = RealizationConfig.from_json(cfg.to_json())
    assert mat_eq(cfg2.prim.gram, cfg.prim.gram)


def test_realize_diagonal_and_monomials():
    cfg = small_cfg()
    sp = cfg.space
    d = realize(CorrClass.diagonal(CUBIC), cfg)
    assert d == diagonal_realized(sp)
    m = realize(CorrClass.h_monomial(CUBIC, (4, 4), QQ(1)), cfg)
    assert degree(m) == QQ(9)
    assert degree(realize(CorrClass.h_monomial(CUBIC, (4, 3)), cfg)) == QQ(0)


def _random_taut(rng) -> CorrClass:
    out = CorrClass.zero(CUBIC, 2)
    for _ in range(rng.randint(1, 3)):
        out = out + CorrClass.h_monomial(
            CUBIC, (rng.randint(0, 4), rng.randint(0, 4)),
            QQ(rng.randint(-3, 3), rng.randint(1, 3)))
    if rng.random() < 0.6:
        out = out + CorrClass.diagonal(CUBIC, coeff=QQ(rng.randint(-2, 2)))
    return out


def test_realization_is_functorial():
    cfg = small_cfg()
    rng = random.Random(3)
    for _ in range(15):
        f, g = _random_taut(rng), _random_taut(rng)
        lhs = realize(compose(f, g), cfg)
        rhs = compose_realized(realize(f, cfg), realize(g, cfg))
        assert lhs == rhs
        assert realize(transpose(f), cfg) == realize(f, cfg).transpose()


def test_compose_realized_unital():
    cfg = small_cfg()
    d = diagonal_realized(cfg.space)
    f = realize(_random_taut(random.Random(9)), cfg)
    assert compose_realized(d, f) == f
    assert compose_realized(f, d) == f


def test_action_matrix_shape_and_diagonal():
    cfg = small_cfg(rank=2)
    d = diagonal_realized(cfg.space)
    assert mat_eq(action_matrix(d), eye(cfg.space.size))


def test_matrix_and_dense_roundtrip():
    cfg = small_cfg()
    sp = cfg.space
    f = realize(_random_taut(random.Random(21)), cfg)
    m = f.to_matrix()
    assert RealizedClass.from_matrix((sp, sp), m) == f
    dense = f.to_dense()
    assert RealizedClass.from_dense((sp, sp), dense) == f


def test_transport_by_identity():
    cfg = small_cfg()
    sp = cfg.space
    f = realize(_random_taut(random.Random(2)), cfg)
    assert f.transport([eye(sp.size), eye(sp.size)], [sp, sp]) == f


def test_middle_part_of_diagonal():
    cfg = small_cfg(rank=2)
    mid = diagonal_realized(cfg.space).middle_part()
    keys = set(mid.comps)
    assert keys == {(("h", 2), ("h", 2)), ("V", "V")}


def test_derive_p_frozen_terms():
    p = derive_P(RealizationConfig.default())
    assert p.terms == P_TERMS
    assert "1/9" in p_to_text(p)


def test_derive_p_gram_independent():
    # diagonal and non-diagonal Gram matrices of several ranks all agree
    p0 = derive_P(RealizationConfig.default())
    nondiag = qmat([[QQ(2), QQ(1), QQ(0)],
                    [QQ(1), QQ(2), QQ(0)],
                    [QQ(0), QQ(0), QQ(-1)]])
    for cfg in (small_cfg(rank=1), small_cfg(rank=6, seed=8),
                RealizationConfig.with_gram(nondiag)):
        assert derive_P(cfg) == p0


def test_degree_oracle_for_correction_class():
    cfg = small_cfg(rank=4, seed=13)
    rp = realize(derive_P(cfg), cfg)
    for a in range(5):
        for b in range(5):
            for c in range(5):
                want = QQ(3 * (a + b + c == 4)
                          - 3 * ((a + b == 4 and c == 0)
                                 + (a + c == 4 and b == 0)
                                 + (b + c == 4 and a == 0)))
                m = realize(CorrClass.h_monomial(CUBIC, (a, b, c)), cfg)
                assert degree(rp * m) == want, (a, b, c)


def test_euler_degree_tracks_rank():
    for rank, want in ((21, 26), (22, 27), (23, 28)):
        cfg = small_cfg(rank=rank, seed=rank)
        d = realize(CorrClass.diagonal(CUBIC), cfg)
        assert degree(d * d) == QQ(want)


def test_kernel_identities_two_grams():
    expected = {"pLpL", "pRpR", "pLpR", "pRpL",
                "sandwichL", "sandwichR", "restrictL", "restrictR"}
    for cfg in (RealizationConfig.default(), small_cfg(rank=5, seed=31)):
        results = verify_kernel_identities(cfg)
        assert {r["id"] for r in results} == expected
        assert all(r["passed"] for r in results), [r for r in results if not r["passed"]]


def test_realized_projectors_match_calculus():
    cfg = small_cfg(rank=2)
    pis = ck_projectors(CUBIC)
    rp = {k: realize(v, cfg) for k, v in pis.items()}
    total = rp["pi0"] + rp["pi2"] + rp["pi4"] + rp["pi6"] + rp["pi8"]
    assert total == diagonal_realized(cfg.space)
    for k in pis:
        assert compose_realized(rp[k], rp[k]) == rp[k]
    # the primitive projector realizes to the bare summand block
    prim = rp["pi4_prim"]
    assert set(prim.comps) == {("V", "V")}
    assert mat_eq(prim.comps[("V", "V")], cfg.space.gram_inv)


def test_space_mismatch_rejected():
    cfg1, cfg2 = small_cfg(rank=2), small_cfg(rank=3)
    f = realize(CorrClass.diagonal(CUBIC), cfg1)
    g = realize(CorrClass.diagonal(CUBIC), cfg2)
    with pytest.raises(StructureError):
        compose_realized(f, g)
