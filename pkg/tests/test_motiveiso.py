"""Refined middle projectors, certified isomorphism candidates between two
fourfold realizations, the dual-route small-diagonal verification with its
negative controls, and the fourfold-to-surface bridge."""

import numpy as np
import pytest

from cubicmotives.errors import DomainError, StructureError
from cubicmotives.gradedring import VarietyData
from cubicmotives.linalg import eye, inverse, mat_eq, qmat, qvec, zeros
from cubicmotives.motiveiso import (FourfoldData, GammaCert, SurfaceData, build_gamma,
                                    build_gamma_cubic_k3, build_refined_projectors,
                                    random_cubic_k3_pair, random_fourfold_pair,
                                    surface_ck, verify_frobenius)
from cubicmotives.quadform import GroupAction, Isometry, QuadSpace
from cubicmotives.rationals import QQ
from cubicmotives.realization import (RealizationConfig, RealizedClass,
                                      compose_realized, diagonal_realized, realize)
from cubicmotives.tautcorr import CorrClass, ck_projectors


def diag_cfg(*entries) -> RealizationConfig:
    g = zeros(len(entries), len(entries))
    for i, e in enumerate(entries):
        g[i, i] = QQ(e)
    return RealizationConfig.with_gram(g)


# --------------------------------------------------------------------------
# data containers


def test_fourfold_data_validation():
    cfg = diag_cfg(2, 2, -1)
    FourfoldData(cfg)  # no algebraic part is fine
    alg = (qvec([1, 0, 0]),)
    d = FourfoldData(cfg, alg_basis=alg)
    t_basis, tq = d.transcendental()
    assert len(t_basis) == 2
    assert tq.is_nondegenerate()
    with pytest.raises(StructureError, match="wrong dimension"):
        FourfoldData(cfg, alg_basis=(qvec([1, 0]),))
    with pytest.raises(StructureError, match="anisotropic"):
        FourfoldData(diag_cfg(1, -1), alg_basis=(qvec([1, 1]),))
    with pytest.raises(StructureError, match="orthogonal"):
        FourfoldData(diag_cfg(1, 1), alg_basis=(qvec([1, 0]), qvec([1, 1])))


def test_fourfold_data_group_must_fix_algebraic():
    cfg = diag_cfg(2, 3, -1)
    flip0 = eye(3)
    flip0[0, 0] = QQ(-1)
    grp = GroupAction.build(cfg.space_quad if hasattr(cfg, "space_quad") else cfg.prim,
                            [flip0])
    with pytest.raises(StructureError, match="fix every algebraic"):
        FourfoldData(cfg, alg_basis=(qvec([1, 0, 0]),), group=grp)
    FourfoldData(cfg, alg_basis=(qvec([0, 1, 0]),), group=grp)


def test_fourfold_json_roundtrip():
    cfg = diag_cfg(2, 3, -1)
    flip = eye(3)
    flip[2, 2] = QQ(-1)
    d = FourfoldData(cfg, alg_basis=(qvec([1, 0, 0]),),
                     group=GroupAction.build(cfg.prim, [flip]))
    d2 = FourfoldData.from_json(d.to_json())
    assert mat_eq(d2.cfg.prim.gram, cfg.prim.gram)
    assert len(d2.alg_basis) == 1
    assert d2.group.order == 2


def test_surface_data_validation_and_json():
    g = qmat([[QQ(-2), QQ(1)], [QQ(1), QQ(-2)]])
    ds = SurfaceData(VarietyData.k3(), QuadSpace(g), ())
    assert ds.space.vd.kind == "k3"
    ds2 = SurfaceData.from_json(ds.to_json())
    assert mat_eq(ds2.prim2.gram, g)
    with pytest.raises(StructureError, match="K3"):
        SurfaceData(VarietyData.cubic_fourfold(), QuadSpace(g), ())


# --------------------------------------------------------------------------
# refined projectors


def test_refined_projectors_no_algebraic_part():
    d = FourfoldData(diag_cfg(2, -1, 3))
    pi4_alg, pi4_tr = build_refined_projectors(d)
    # the h^2 line is always algebraic, so with no extra classes the
    # algebraic projector is exactly that line and the transcendental one
    # coincides with the primitive projector
    assert set(pi4_alg.comps) == {(("h", 2), ("h", 2))}
    want_prim = realize(ck_projectors(VarietyData.cubic_fourfold())["pi4_prim"], d.cfg)
    assert pi4_tr == want_prim
    assert pi4_tr == (realize(ck_projectors(VarietyData.cubic_fourfold())["pi4"], d.cfg)
                      - pi4_alg)


def test_refined_projectors_split_the_middle():
    d = FourfoldData(diag_cfg(2, 2, -1, 3), alg_basis=(qvec([1, 0, 0, 0]),
                                                       qvec([0, 1, 0, 0])))
    pi4_alg, pi4_tr = build_refined_projectors(d)
    pi4 = realize(ck_projectors(VarietyData.cubic_fourfold())["pi4"], d.cfg)
    for p in (pi4_alg, pi4_tr):
        assert compose_realized(p, p) == p
        assert compose_realized(pi4, p) == p
        assert compose_realized(p, pi4) == p
    assert compose_realized(pi4_alg, pi4_tr).is_zero()
    assert compose_realized(pi4_tr, pi4_alg).is_zero()
    assert pi4_alg + pi4_tr == pi4


# --------------------------------------------------------------------------
# fourfold pair certificates


def test_self_pair_identity_gamma_is_diagonal():
    d = FourfoldData(diag_cfg(2, -2, 3))
    _, tq = d.transcendental()
    cert = build_gamma(d, d, Isometry.identity(tq))
    assert cert.passed()
    assert cert.gamma == diagonal_realized(d.space)
    fr = verify_frobenius(cert)
    assert all(c["passed"] for c in fr)


def test_random_pairs_pass_and_report_all_identities():
    for seed in (0, 1, 2, 3):
        dx, dy, iso = random_fourfold_pair(seed)
        cert = build_gamma(dx, dy, iso)
        assert cert.kind == "fourfold-pair"
        assert cert.passed(), [c for c in cert.checks if not c["passed"]]
        fr = verify_frobenius(cert)
        ids = {c["id"] for c in fr}
        assert {"diagonal", "small-diagonal", "small-diagonal-route",
                "route-agreement"} <= ids
        assert all(c["passed"] for c in fr), [c for c in fr if not c["passed"]]


def test_rank22_pair_passes():
    dx, dy, iso = random_fourfold_pair(17, rank=22)
    cert = build_gamma(dx, dy, iso)
    assert cert.passed()
    assert all(c["passed"] for c in verify_frobenius(cert))


def test_build_gamma_rejections():
    d1 = FourfoldData(diag_cfg(2, -2, 3), alg_basis=(qvec([1, 0, 0]),))
    d2 = FourfoldData(diag_cfg(2, -2, 3))
    _, t1 = d1.transcendental()
    _, t2 = d2.transcendental()
    with pytest.raises(DomainError, match="algebraic ranks differ"):
        build_gamma(d1, d2, Isometry.identity(t2))
    # algebraic classes of different norms cannot be matched
    d3 = FourfoldData(diag_cfg(3, -2, 3), alg_basis=(qvec([1, 0, 0]),))
    _, t3 = d3.transcendental()
    with pytest.raises(DomainError, match="match up isometrically"):
        build_gamma(d1, d3, Isometry(t1, t3, eye(2)))
    # transcendental shadows of different ranks are not Witt-equivalent here
    d4 = FourfoldData(diag_cfg(2, -2, 3, 5), alg_basis=(qvec([1, 0, 0, 0]),))
    _, t4 = d4.transcendental()
    with pytest.raises(DomainError, match="Witt-equivalent"):
        build_gamma(d1, d4, Isometry(t1, t4, zeros(3, 2)))


def test_build_gamma_equivariance_rejection():
    # a group on both sides, but an isometry that breaks the alignment
    g = diag_cfg(2, -2, -2)
    flip = eye(3)
    flip[1, 1] = QQ(-1)
    grp = GroupAction.build(g.prim, [flip])
    d1 = FourfoldData(g, group=grp)
    _, t1 = d1.transcendental()
    # swap the two (-2)-coordinates: an isometry, but it does not commute
    # with the flip of only the first of them
    m = qmat([[QQ(1), QQ(0), QQ(0)], [QQ(0), QQ(0), QQ(1)], [QQ(0), QQ(1), QQ(0)]])
    with pytest.raises(DomainError, match="not equivariant"):
        build_gamma(d1, d1, Isometry(t1, t1, m))


# --------------------------------------------------------------------------
# negative controls


def test_corrupted_h_summand_fails_transport():
    dx, dy, iso = random_fourfold_pair(5)
    cert = build_gamma(dx, dy, iso)
    comps = dict(cert.gamma.comps)
    comps[(("h", 1), ("h", 3))] = comps[(("h", 1), ("h", 3))] * QQ(-1)
    bad = RealizedClass(cert.gamma.spaces, comps)
    fr = verify_frobenius(GammaCert(bad, dx, dy, []))
    failed = {c["id"] for c in fr if not c["passed"]}
    assert "small-diagonal" in failed


def test_sheared_transcendental_flip_is_caught():
    dx, dy, iso = random_fourfold_pair(5)
    cert = build_gamma(dx, dy, iso)
    prim = dx.cfg.prim
    t_basis, _ = dx.transcendental()
    a_vv = cert.gamma.comps[("V", "V")].T.dot(prim.gram)
    cols = list(dx.alg_basis) + [t_basis[0], t_basis[0] + t_basis[1]] + list(t_basis[2:])
    p = np.stack(cols, axis=1)
    imgs = a_vv.dot(p)
    imgs[:, len(dx.alg_basis) + 1] = -imgs[:, len(dx.alg_basis) + 1]
    vv_bad = inverse(prim.gram).dot(imgs.dot(inverse(p)).T)
    comps = dict(cert.gamma.comps)
    comps[("V", "V")] = vv_bad
    bad = RealizedClass(cert.gamma.spaces, comps)
    # no longer an isometry on the summand, so inversion fails...
    assert compose_realized(bad, bad.transpose()) != diagonal_realized(dx.space)
    # ...and the small-diagonal transport catches it too
    fr = verify_frobenius(GammaCert(bad, dx, dy, []))
    failed = {c["id"] for c in fr if not c["passed"]}
    assert "small-diagonal" in failed


def test_whole_summand_sign_flip_is_a_legitimate_alternative():
    # negating an entire orthogonal-coordinate row composes the candidate with
    # a reflection, which is again an isometry: every identity must still hold
    dx, dy, iso = random_fourfold_pair(5)
    cert = build_gamma(dx, dy, iso)
    vv = cert.gamma.comps[("V", "V")].copy()
    vv[0, :] = -vv[0, :]
    comps = dict(cert.gamma.comps)
    comps[("V", "V")] = vv
    alt = RealizedClass(cert.gamma.spaces, comps)
    fr = verify_frobenius(GammaCert(alt, dx, dy, []))
    assert all(c["passed"] for c in fr)


# --------------------------------------------------------------------------
# fourfold-to-surface bridge


def test_cubic_k3_toy_pair():
    g = qmat([[QQ(-2), QQ(1)], [QQ(1), QQ(-2)]])
    dx = FourfoldData(RealizationConfig.with_gram(g))
    ds = SurfaceData(VarietyData.k3(), QuadSpace(g.copy()), ())
    t1, t1q = dx.transcendental()
    t2, t2q = ds.transcendental()
    cert = build_gamma_cubic_k3(dx, ds, Isometry(t1q, t2q, eye(2)))
    assert cert.kind == "cubic-k3"
    assert cert.passed(), [c for c in cert.checks if not c["passed"]]
    assert {c["id"] for c in cert.checks} == {"tr-leftinv", "tr-rightinv"}


def test_cubic_k3_random_and_rank22():
    for seed in (0, 1, 7):
        dx, ds, iso = random_cubic_k3_pair(seed)
        assert build_gamma_cubic_k3(dx, ds, iso).passed()
    dx, ds, iso = random_cubic_k3_pair(42, rank=22)
    assert build_gamma_cubic_k3(dx, ds, iso).passed()


def test_cubic_k3_rank_mismatch_rejected():
    dx, _, _ = random_cubic_k3_pair(0, rank=6)
    _, ds, iso = random_cubic_k3_pair(1, rank=8)
    with pytest.raises(DomainError, match="Witt-equivalent"):
        build_gamma_cubic_k3(dx, ds, iso)


# --------------------------------------------------------------------------
# surface projectors


def test_surface_ck_decomposition():
    _, ds, _ = random_cubic_k3_pair(3)
    pis = surface_ck(ds)
    assert len(pis) == 4
    total = None
    for p in pis:
        assert compose_realized(p, p) == p
        total = p if total is None else total + p
    assert total == diagonal_realized(ds.space)
    for i, p in enumerate(pis):
        for j, q in enumerate(pis):
            if i != j:
                assert compose_realized(p, q).is_zero()


def test_surface_ck_with_picard_classes():
    # a surface with an extra algebraic curve class inside the summand
    g = zeros(3, 3)
    g[0, 0], g[1, 1], g[2, 2] = QQ(-2), QQ(-2), QQ(4)
    ds = SurfaceData(VarietyData.k3(), QuadSpace(g), (qvec([0, 0, 1]),))
    pi0, pi2_alg, pi2_tr, pi4 = surface_ck(ds)
    assert compose_realized(pi2_alg, pi2_alg) == pi2_alg
    assert compose_realized(pi2_tr, pi2_tr) == pi2_tr
    assert compose_realized(pi2_alg, pi2_tr).is_zero()
    # the transcendental projector has no content on the algebraic line
    vv = pi2_tr.comps[("V", "V")]
    assert all(vv[2, j] == 0 for j in range(3))
    assert all(vv[i, 2] == 0 for i in range(3))
