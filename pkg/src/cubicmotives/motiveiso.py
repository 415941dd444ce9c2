"""Certified correspondences between realizations of two fourfolds (or a
fourfold and a K3 surface).

The central construction is Gamma: a two-slot realized class

    Gamma = (1/3) sum_i h^{4-i} (x) h'^i  +  sum_i a_i (x) a'_i / q(a_i)
            + Gamma_tr,

whose action carries h^i to h'^i, each algebraic class a_i to its partner,
and the transcendental complement through an equivariant isometry obtained
from the constructive Witt extension.  A certificate records the exact
identities: Gamma composed with its transpose is the diagonal on either
side, the pairing is preserved, and (when group data is present) the map
commutes with the group.  The Frobenius-level verification transports the
diagonal and the small diagonal and checks both against the target — the
small diagonal twice, once directly and once through the multiplicative
decomposition by the defect polynomial P.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StructureError
from .gradedring import VarietyData
from .linalg import (
    eye,
    inverse,
    mat_eq,
    mat_from_json,
    mat_to_json,
    solve,
    vec_from_json,
    vec_to_json,
    zeros,
)
from .quadform import GroupAction, Isometry, QuadSpace, aligned_elements, equivariant_witt
from .rationals import QQ
from .realization import (
    RealizationConfig,
    RealizedClass,
    Space,
    action_matrix,
    compose_realized,
    derive_P,
    diagonal_realized,
    realize,
)
from .tautcorr import CorrClass, ck_projectors


def _as_vectors(prim: QuadSpace, vecs, what: str):
    out = []
    for v in vecs:
        a = np.asarray([QQ(x) for x in v], dtype=object)
        if a.shape != (prim.dim,):
            raise StructureError(f"{what} vector of the wrong dimension")
        out.append(a)
    for i, a in enumerate(out):
        if prim.q(a) == 0:
            raise StructureError(f"{what} must consist of anisotropic vectors")
        for b in out[:i]:
            if prim.bilinear(a, b) != 0:
                raise StructureError(f"{what} must be orthogonal")
    return tuple(out)


@dataclass(frozen=True, eq=False)
class FourfoldData:
    """A fourfold realization plus its designated algebraic classes.

    ``alg_basis`` is an orthogonal family of anisotropic vectors in the
    primitive space; the optional ``group`` (an exact finite matrix group of
    isometries) must fix every algebraic class — the arithmetic shadow of
    Galois acting trivially on algebraic cycles.
    """

    cfg: RealizationConfig
    alg_basis: tuple = ()
    group: GroupAction | None = None

    def __post_init__(self):
        prim = self.cfg.prim
        object.__setattr__(
            self, "alg_basis", _as_vectors(prim, self.alg_basis, "algebraic basis")
        )
        if self.group is not None:
            if self.group.space.dim != prim.dim or not mat_eq(self.group.space.gram, prim.gram):
                raise StructureError("group acts on a different space")
            for a in self.alg_basis:
                if not self.group.fixes(a):
                    raise StructureError("group must fix every algebraic class")

    @property
    def space(self) -> Space:
        return self.cfg.space

    def group_or_trivial(self) -> GroupAction:
        return self.group if self.group is not None else GroupAction.trivial(self.cfg.prim)

    def transcendental(self):
        """Canonical basis of the complement of the algebraic span, and the
        restricted quadratic space in those coordinates."""
        basis = self.cfg.prim.orthogonal_complement(list(self.alg_basis))
        return basis, self.cfg.prim.restrict(basis)

    def to_json(self):
        data = {
            "prim_gram": mat_to_json(self.cfg.prim.gram),
            "alg_basis": [vec_to_json(a) for a in self.alg_basis],
        }
        if self.group is not None:
            data["generators"] = [mat_to_json(g) for g in self.group.generators]
        return data

    @classmethod
    def from_json(cls, data) -> "FourfoldData":
        cfg = RealizationConfig.with_gram(mat_from_json(data["prim_gram"]))
        alg = tuple(vec_from_json(v) for v in data.get("alg_basis", []))
        group = None
        if data.get("generators"):
            group = GroupAction.build(cfg.prim, [mat_from_json(m) for m in data["generators"]])
        return cls(cfg, alg, group)


@dataclass(frozen=True, eq=False)
class SurfaceData:
    """A polarized K3 realization: h-powers plus a degree-2 quadratic space
    containing the named algebraic (Neron-Severi) classes."""

    vd: VarietyData
    prim2: QuadSpace
    ns_basis: tuple = ()

    def __post_init__(self):
        if self.vd.kind != "k3":
            raise StructureError("surface data needs K3 variety data")
        object.__setattr__(
            self, "ns_basis", _as_vectors(self.prim2, self.ns_basis, "Neron-Severi basis")
        )

    @property
    def space(self) -> Space:
        return Space(self.vd, self.prim2)

    def transcendental(self):
        basis = self.prim2.orthogonal_complement(list(self.ns_basis))
        return basis, self.prim2.restrict(basis)

    def to_json(self):
        return {
            "degree": self.vd.degree,
            "prim_gram": mat_to_json(self.prim2.gram),
            "ns_basis": [vec_to_json(a) for a in self.ns_basis],
        }

    @classmethod
    def from_json(cls, data) -> "SurfaceData":
        vd = VarietyData.k3(int(data.get("degree", 2)))
        return cls(
            vd,
            QuadSpace(mat_from_json(data["prim_gram"])),
            tuple(vec_from_json(v) for v in data.get("ns_basis", [])),
        )


# --- refined projectors -------------------------------------------------------


def _alg_tensor(prim: QuadSpace, basis) -> np.ndarray:
    out = zeros(prim.dim, prim.dim)
    for a in basis:
        out = out + np.multiply.outer(a, a) * (QQ(1) / prim.q(a))
    return out


def build_refined_projectors(d: FourfoldData):
    """(pi4_alg, pi4_tr): the middle projector split along the algebraic span.

    pi4_alg = (1/3) h^2 x h^2 + sum_i a_i x a_i / q(a_i); pi4_tr is the rest
    of the realized middle projector, i.e. kappa minus the algebraic tensor.
    """
    sp = d.space
    comps = {(("h", 2), ("h", 2)): QQ(1) / sp.e}
    if d.alg_basis:
        comps[("V", "V")] = _alg_tensor(d.cfg.prim, d.alg_basis)
    pi4_alg = RealizedClass((sp, sp), comps)
    pi4 = realize(ck_projectors(d.cfg.vd)["pi4"], d.cfg)
    return pi4_alg, pi4 - pi4_alg


def surface_ck(ds: SurfaceData):
    """(pi0, pi2_alg, pi2_tr, pi4) for a polarized K3 realization.

    pi0 = o x S and pi4 = S x o for a degree-1 point class o = h^2/deg; the
    algebraic middle projector runs over an orthogonal basis of the whole
    algebraic degree-2 part — the polarization h together with ns_basis —
    so the transcendental remainder contains no h x h term.
    """
    sp = ds.space
    inv_e = QQ(1) / sp.e
    pi0 = RealizedClass((sp, sp), {(("h", 2), ("h", 0)): inv_e})
    pi4 = RealizedClass((sp, sp), {(("h", 0), ("h", 2)): inv_e})
    comps = {(("h", 1), ("h", 1)): inv_e}
    if ds.ns_basis:
        comps[("V", "V")] = _alg_tensor(ds.prim2, ds.ns_basis)
    pi2_alg = RealizedClass((sp, sp), comps)
    pi2_tr = diagonal_realized(sp) - pi0 - pi4 - pi2_alg
    return pi0, pi2_alg, pi2_tr, pi4


# --- Gamma between two fourfolds ----------------------------------------------


@dataclass(frozen=True, eq=False)
class GammaCert:
    """A correspondence plus the exact identities verified for it."""

    gamma: RealizedClass
    source: object
    target: object
    checks: list
    kind: str = "fourfold-pair"

    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)


def _chk(checks, cid, claim, passed, witness=None):
    checks.append({"id": cid, "claim": claim, "passed": bool(passed),
                   "witness": None if passed else witness})


def _embed(space: Space, m: np.ndarray) -> np.ndarray:
    """Extend a V-isometry to the full realization basis (identity on h)."""
    out = eye(space.size)
    out[space.hdim:, space.hdim:] = m
    return out


def _transport_tensor(u1_basis, u2_basis, restriction: Isometry) -> np.ndarray:
    """Ambient V x V' tensor acting as the given isometry on span(u1)."""
    b1 = np.stack(u1_basis, axis=1)
    b2 = np.stack(u2_basis, axis=1)
    k = inverse(restriction.source.gram).dot(restriction.matrix.T)
    return b1.dot(k).dot(b2.T)


def build_gamma(dx: FourfoldData, dy: FourfoldData, iso_tr: Isometry) -> GammaCert:
    """Assemble and certify Gamma for two fourfold data sets.

    ``iso_tr`` is an isometry between the canonical transcendental
    coordinates of the two sides (see :meth:`FourfoldData.transcendental`);
    with group data present it must intertwine the aligned group elements.
    The algebraic classes are matched up index by index (their q-values must
    agree), and the transcendental complement is carried by the equivariant
    Witt extension applied to the assembled global isometry.
    """
    spx, spy = dx.space, dy.space
    primx, primy = dx.cfg.prim, dy.cfg.prim
    if len(dx.alg_basis) != len(dy.alg_basis):
        raise DomainError("algebraic ranks differ")
    for a, b in zip(dx.alg_basis, dy.alg_basis):
        if primx.q(a) != primy.q(b):
            raise DomainError("algebraic classes do not match up isometrically")
    t1_basis, t1 = dx.transcendental()
    t2_basis, t2 = dy.transcendental()
    if len(t1_basis) != len(t2_basis):
        raise DomainError("not Witt-equivalent transcendental shadows")
    if iso_tr.matrix.shape != (t2.dim, t1.dim) or not mat_eq(iso_tr.source.gram, t1.gram) \
            or not mat_eq(iso_tr.target.gram, t2.gram):
        raise StructureError("iso_tr must map the canonical transcendental coordinates")
    iso_tr.require_valid("iso_tr")

    # global isometry phi_V = (algebraic index map) + (iso_tr on complements)
    dom = list(dx.alg_basis) + list(t1_basis)
    img = list(dy.alg_basis) + [
        sum((iso_tr.matrix[l, k] * t2_basis[l] for l in range(len(t2_basis))),
            zeros(primy.dim))
        for k in range(len(t1_basis))
    ]
    m_phi = np.stack(img, axis=1).dot(inverse(np.stack(dom, axis=1)))
    phi_v = Isometry(primx, primy, m_phi)
    phi_v.require_valid("assembled global map")

    g1, g2 = dx.group_or_trivial(), dy.group_or_trivial()
    pairs = aligned_elements(g1, g2)
    for m1, m2 in pairs:
        if not mat_eq(m_phi.dot(m1), m2.dot(m_phi)):
            raise DomainError("iso_tr is not equivariant")

    # equivariant Witt extension: carry the complement of the algebraic span
    w_iso = Isometry(
        primx.restrict(list(dx.alg_basis)),
        primy.restrict(list(dy.alg_basis)),
        eye(len(dx.alg_basis)),
    )
    wr = equivariant_witt(g1, list(dx.alg_basis), g2, list(dy.alg_basis), phi_v, w_iso)

    vv = zeros(spx.r, spy.r)
    if len(wr.u1_basis):
        vv = vv + _transport_tensor(wr.u1_basis, wr.u2_basis, wr.restriction)
    if dx.alg_basis:
        vv = vv + _alg_tensor_pair(primx, dx.alg_basis, dy.alg_basis)
    comps = {(("h", 4 - i), ("h", i)): QQ(1, 3) for i in range(5)}
    comps[("V", "V")] = vv
    gamma = RealizedClass((spx, spy), comps)

    checks = []
    tg = gamma.transpose()
    left = compose_realized(gamma, tg)
    _chk(checks, "leftinv", "transpose composed after the map is the source diagonal",
         left == diagonal_realized(spx), _diff(left, diagonal_realized(spx)))
    right = compose_realized(tg, gamma)
    _chk(checks, "rightinv", "the map composed after its transpose is the target diagonal",
         right == diagonal_realized(spy), _diff(right, diagonal_realized(spy)))
    a = action_matrix(gamma)
    ok = all(
        mat_eq(a[:, i:i + 1], eye(spy.size)[:, i:i + 1]) for i in range(spx.hdim)
    )
    _chk(checks, "hlines", "h-powers map to the matching h-powers", ok,
         "some h-power moves off the line")
    ok = mat_eq(a.T.dot(spy.pairing).dot(a), spx.pairing)
    _chk(checks, "quadratic", "the pairing is preserved on the full basis", ok,
         "pairing matrices differ")
    ok = all(
        mat_eq(a.dot(_embed(spx, m1)), _embed(spy, m2).dot(a)) for m1, m2 in pairs
    )
    _chk(checks, "equivariant", "the map commutes with every aligned group element",
         ok, "group element does not intertwine")
    return GammaCert(gamma, dx, dy, checks)


def _alg_tensor_pair(primx: QuadSpace, basis_x, basis_y) -> np.ndarray:
    out = zeros(len(basis_x[0]), len(basis_y[0]))
    for a, b in zip(basis_x, basis_y):
        out = out + np.multiply.outer(a, b) * (QQ(1) / primx.q(a))
    return out


def _diff(got: RealizedClass, want: RealizedClass):
    d = got - want
    if d.is_zero():
        return None
    sig = sorted(d.comps, key=str)[0]
    return "first differing component: " + "x".join(
        "h^%d" % k[1] if k != "V" else "V" for k in sig
    )


def verify_frobenius(cert: GammaCert):
    """Exact Frobenius-level checks for a fourfold-pair certificate.

    Transports the diagonal and the small diagonal through the map and
    compares against the target classes; the small diagonal is checked twice,
    once directly and once through the multiplicative decomposition with the
    defect polynomial, and the two routes must agree.
    """
    if cert.kind != "fourfold-pair":
        raise StructureError("Frobenius verification applies to fourfold pairs")
    dx, dy = cert.source, cert.target
    spx, spy = dx.space, dy.space
    vd = dx.cfg.vd
    a = action_matrix(cert.gamma)
    checks = [dict(c) for c in cert.checks if c["id"] in ("leftinv", "rightinv", "hlines")]

    got2 = diagonal_realized(spx).transport((a, a), (spy, spy))
    want2 = diagonal_realized(spy)
    _chk(checks, "diagonal", "the transported diagonal equals the target diagonal",
         got2 == want2, _diff(got2, want2))

    delta_x = realize(CorrClass.small_diagonal(vd), dx.cfg)
    delta_y = realize(CorrClass.small_diagonal(dy.cfg.vd), dy.cfg)
    got3 = delta_x.transport((a, a, a), (spy, spy, spy))
    _chk(checks, "small-diagonal",
         "the transported small diagonal equals the target small diagonal",
         got3 == delta_y, _diff(got3, delta_y))

    # decomposition route: diagonals decorated with h^4 plus the defect P,
    # all realized on the target side
    decomp = CorrClass.zero(vd, 3)
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        decomp = decomp + CorrClass(vd, 3, {("D", i, j, vd.dim): QQ(1, vd.degree)})
    recon = realize(decomp, dy.cfg) + realize(derive_P(dx.cfg), dy.cfg)
    _chk(checks, "small-diagonal-route",
         "the transported small diagonal equals the decomposition rebuilt on the target",
         got3 == recon, _diff(got3, recon))
    _chk(checks, "route-agreement",
         "decomposition route and direct target realization agree",
         recon == delta_y, _diff(recon, delta_y))
    return checks


# --- Gamma between a cubic and a K3 -------------------------------------------


def build_gamma_cubic_k3(dx: FourfoldData, ds: SurfaceData, iso: Isometry) -> GammaCert:
    """Certify an isometry between the transcendental shadows of a fourfold
    and a K3 surface: the correspondence built from ``iso`` must compose with
    its transpose to the two transcendental projectors."""
    t1_basis, t1 = dx.transcendental()
    t2_basis, t2 = ds.transcendental()
    if len(t1_basis) != len(t2_basis):
        raise DomainError("not Witt-equivalent transcendental shadows")
    if iso.matrix.shape != (t2.dim, t1.dim) or not mat_eq(iso.source.gram, t1.gram) \
            or not mat_eq(iso.target.gram, t2.gram):
        raise StructureError("iso must map the canonical transcendental coordinates")
    iso.require_valid("transcendental isometry")

    spx, sps = dx.space, ds.space
    comps = {}
    if t1_basis:
        comps[("V", "V")] = _transport_tensor(t1_basis, t2_basis, iso)
    gamma = RealizedClass((spx, sps), comps)
    _, pi4_tr = build_refined_projectors(dx)
    pi2_tr = surface_ck(ds)[2]

    checks = []
    tg = gamma.transpose()
    left = compose_realized(gamma, tg)
    _chk(checks, "tr-leftinv",
         "transpose after the map is the fourfold transcendental projector",
         left == pi4_tr, _diff(left, pi4_tr))
    right = compose_realized(tg, gamma)
    _chk(checks, "tr-rightinv",
         "the map after its transpose is the surface transcendental projector",
         right == pi2_tr, _diff(right, pi2_tr))
    return GammaCert(gamma, dx, ds, checks, kind="cubic-k3")


# --- randomized instances ------------------------------------------------------


def _random_unimodular(rng: random.Random, n: int) -> np.ndarray:
    m = eye(n)
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        m[i] = m[i] + m[j] * QQ(rng.choice((-1, 1)))
    return m


def _random_diag_gram(rng: random.Random, n: int) -> np.ndarray:
    g = eye(n)
    for i in range(n):
        g[i, i] = QQ(rng.choice((1, 1, 2, 3, -1, -2)))
    return g


def random_fourfold_pair(seed: int, rank: int = 6, alg_rank: int | None = None,
                         with_group: bool = True):
    """A deterministic random pair of fourfold data sets with matching
    algebraic classes, plus a compatible transcendental isometry.

    The target is the source conjugated by a known unimodular change of
    basis, so every certificate identity is constructively satisfiable; the
    group (when present) is a sign-flip group on transcendental coordinates,
    conjugated along.
    """
    rng = random.Random(seed)
    if alg_rank is None:
        alg_rank = rng.randrange(0, 4)
    if alg_rank > rank - 2:
        raise StructureError("algebraic rank too large for the chosen rank")
    g1 = _random_diag_gram(rng, rank)
    prim1 = QuadSpace(g1)
    alg1 = [eye(rank)[i].copy() for i in range(alg_rank)]

    group1 = None
    fixed_t = list(range(alg_rank, rank))
    if with_group:
        flips = eye(rank)
        for i in range(alg_rank, rank):
            if rng.random() < 0.5:
                flips[i, i] = QQ(-1)
                fixed_t.remove(i)
        group1 = GroupAction.build(prim1, [flips])

    s = _random_unimodular(rng, rank)
    s_inv = inverse(s)
    g2 = s.T.dot(g1).dot(s)
    prim2 = QuadSpace(g2)
    alg2 = [s_inv.dot(a) for a in alg1]
    group2 = None
    if group1 is not None:
        group2 = GroupAction.build(prim2, [s_inv.dot(m).dot(s) for m in group1.generators])

    dx = FourfoldData(RealizationConfig(prim=prim1), tuple(alg1), group1)
    dy = FourfoldData(RealizationConfig(prim=prim2), tuple(alg2), group2)

    t1_basis, t1 = dx.transcendental()
    t2_basis, t2 = dy.transcendental()
    b2 = np.stack(t2_basis, axis=1)
    cols = [solve(b2, s_inv.dot(u)) for u in t1_basis]
    m_tr = np.stack(cols, axis=1)
    # optionally precompose with a reflection in a group-fixed transcendental
    # direction, so the certified map is not bare conjugation
    if fixed_t and rng.random() < 0.7:
        w = zeros(len(t1_basis))
        w[rng.choice(fixed_t) - alg_rank] = QQ(1)
        m_tr = m_tr.dot(Isometry.reflection(t1, w).matrix)
    iso_tr = Isometry(t1, t2, m_tr)
    return dx, dy, iso_tr


def random_cubic_k3_pair(seed: int, rank: int = 6):
    """A fourfold datum and a K3 datum with matched transcendental shadows,
    related by a known unimodular conjugation."""
    rng = random.Random(seed)
    g1 = _random_diag_gram(rng, rank)
    dx = FourfoldData(RealizationConfig(prim=QuadSpace(g1)))
    s = _random_unimodular(rng, rank)
    s_inv = inverse(s)
    ds = SurfaceData(VarietyData.k3(), QuadSpace(s.T.dot(g1).dot(s)))
    t1_basis, t1 = dx.transcendental()
    t2_basis, t2 = ds.transcendental()
    b2 = np.stack(t2_basis, axis=1)
    cols = [solve(b2, s_inv.dot(u)) for u in t1_basis]
    iso = Isometry(t1, t2, np.stack(cols, axis=1))
    return dx, ds, iso
