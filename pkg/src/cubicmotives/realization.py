"""Graded tensor realization of tautological correspondences.

A correspondence class on X^n is realized as a sparse graded tensor over

    H(X) = Q[h]/(h^{d+1})  (+)  V,

where V is an abstract middle-degree quadratic space (primitive cohomology).
The ring structure on H is forced by primitivity and the degree pairing:
h^k . v = 0 for k >= 1 and v in V, and u . w = (<u, w>/e) h^d, with
e = integral of h^d over X.

The diagonal realizes as (1/e) sum_i h^i (x) h^{d-i}  +  kappa, where kappa is
the inverse Gram tensor of V — the Kuenneth component of the middle degree.
Everything downstream (the multiplicativity defect P of the small diagonal,
the kernel-projector identities, transported diagonals between two varieties)
is exact tensor algebra over this model.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import ShadowViolation, StructureError
from .gradedring import VarietyData, tangent_chern, integrate, TruncPoly
from .linalg import eye, inverse, is_zero, mat_eq, mat_from_json, mat_to_json, zeros
from .quadform import QuadSpace
from .rationals import QQ, rational_str
from .tautcorr import CorrClass, ck_projectors
from . import mukai as _mukai

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class Space:
    """Realization space of one variety slot: h-powers plus a V-block."""

    def __init__(self, vd: VarietyData, prim: QuadSpace | None = None):
        self.vd = vd
        self.prim = prim
        self.hdim = vd.dim + 1
        self.r = prim.dim if prim is not None else 0
        self.size = self.hdim + self.r
        self.e = QQ(vd.degree)
        if prim is not None:
            self.gram = prim.gram
            self.gram_inv = inverse(prim.gram)
        else:
            self.gram = None
            self.gram_inv = None
        pairing = zeros(self.size, self.size)
        for i in range(self.hdim):
            pairing[i, vd.dim - i] = self.e
        if prim is not None:
            pairing[self.hdim:, self.hdim:] = prim.gram
        self.pairing = pairing

    def __eq__(self, other):
        if not isinstance(other, Space):
            return NotImplemented
        if self.vd != other.vd or self.r != other.r:
            return False
        return self.r == 0 or mat_eq(self.gram, other.gram)

    def __ne__(self, other):
        return not self.__eq__(other)

    def kinds(self):
        ks = [("h", k) for k in range(self.hdim)]
        if self.r:
            ks.append("V")
        return ks


def _default_gram(rank: int = 22, minus: int = 2) -> np.ndarray:
    g = eye(rank)
    for i in range(rank - minus, rank):
        g[i, i] = QQ(-1)
    return g


class RealizationConfig:
    """Variety data plus the abstract primitive quadratic space.

    The default primitive rank is 22: the total realization then has
    dimension 5 + 22 = 27 = deg c_4(T_X), which is exactly the Euler
    consistency check degree(real(D)^2) = 27.
    """

    def __init__(self, vd: VarietyData | None = None, prim: QuadSpace | None = None):
        self.vd = vd if vd is not None else VarietyData.cubic_fourfold()
        self.prim = prim if prim is not None else QuadSpace(_default_gram())
        self.space = Space(self.vd, self.prim)

    @classmethod
    def default(cls) -> "RealizationConfig":
        return cls()

    @classmethod
    def with_gram(cls, gram) -> "RealizationConfig":
        return cls(prim=QuadSpace(np.asarray(gram, dtype=object)))

    @classmethod
    def from_json(cls, data) -> "RealizationConfig":
        return cls.with_gram(mat_from_json(data["prim_gram"]))

    def to_json(self):
        return {"prim_gram": mat_to_json(self.prim.gram)}


def _val_is_zero(val) -> bool:
    if isinstance(val, np.ndarray):
        return is_zero(val)
    return val == 0


class RealizedClass:
    """Sparse graded tensor on a product of realization spaces.

    Components are keyed by a per-slot signature: ('h', k) for the line
    spanned by h^k, or 'V' for the primitive block.  The value is a rational
    scalar when the signature has no V-slots, else an object ndarray with one
    axis (of size r) per V-slot, in slot order.
    """

    def __init__(self, spaces, comps=None):
        self.spaces = tuple(spaces)
        self.n = len(self.spaces)
        clean = {}
        if comps:
            for sig, val in comps.items():
                if not _val_is_zero(val):
                    clean[sig] = val
        self.comps = clean

    # --- basic algebra -------------------------------------------------

    def _check(self, other: "RealizedClass"):
        if self.n != other.n or any(a != b for a, b in zip(self.spaces, other.spaces)):
            raise StructureError("realized classes live on different products")

    def __add__(self, other):
        self._check(other)
        out = dict(self.comps)
        for sig, val in other.comps.items():
            out[sig] = out[sig] + val if sig in out else val
        return RealizedClass(self.spaces, out)

    def __sub__(self, other):
        return self + other.scale(QQ(-1))

    def __neg__(self):
        return self.scale(QQ(-1))

    def scale(self, t):
        t = QQ(t)
        return RealizedClass(self.spaces, {s: v * t for s, v in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, RealizedClass):
            return NotImplemented
        self._check(other)
        return (self - other).is_zero()

    def __ne__(self, other):
        return not self.__eq__(other)

    # --- intersection product -------------------------------------------

    def __mul__(self, other):
        self._check(other)
        acc = {}
        for sa, va in self.comps.items():
            for sb, vb in other.comps.items():
                got = _component_product(self.spaces, sa, va, sb, vb)
                if got is None:
                    continue
                sig, val = got
                acc[sig] = acc[sig] + val if sig in acc else val
        return RealizedClass(self.spaces, acc)

    # --- integration ----------------------------------------------------

    def degree(self):
        """Pair the top component against the fundamental class of X^n."""
        total = QQ(0)
        for sig, val in self.comps.items():
            if all(k == ("h", sp.vd.dim) for k, sp in zip(sig, self.spaces)):
                f = QQ(1)
                for sp in self.spaces:
                    f = f * sp.e
                total = total + val * f
        return total

    # --- projections ------------------------------------------------------

    def pull(self, slots, targets) -> "RealizedClass":
        """Pull back along the projection forgetting the non-listed slots of
        the target product ``targets``; new slots carry h^0."""
        slots = tuple(slots)
        n_to = len(targets)
        if len(slots) != self.n or sorted(set(slots)) != list(slots):
            raise StructureError("bad slot specification for pull")
        out = {}
        for sig, val in self.comps.items():
            new = [("h", 0)] * n_to
            for s, k in zip(slots, sig):
                new[s] = k
            out[tuple(new)] = out.get(tuple(new), QQ(0)) + val
        return RealizedClass(targets, out)

    def push(self, keep) -> "RealizedClass":
        """Integrate out the non-kept slots (only h^d survives, with factor e)."""
        keep = tuple(keep)
        drop = [s for s in range(self.n) if s not in keep]
        out = {}
        for sig, val in self.comps.items():
            if any(sig[s] != ("h", self.spaces[s].vd.dim) for s in drop):
                continue
            f = QQ(1)
            for s in drop:
                f = f * self.spaces[s].e
            new = tuple(sig[s] for s in keep)
            add = val * f
            out[new] = out[new] + add if new in out else add
        return RealizedClass(tuple(self.spaces[s] for s in keep), out)

    # --- two-slot matrix form --------------------------------------------

    def transpose(self) -> "RealizedClass":
        if self.n != 2:
            raise StructureError("transpose needs two slots")
        out = {}
        for (k0, k1), val in self.comps.items():
            out[(k1, k0)] = val.T if isinstance(val, np.ndarray) and val.ndim == 2 else val
        return RealizedClass((self.spaces[1], self.spaces[0]), out)

    def to_matrix(self) -> np.ndarray:
        if self.n != 2:
            raise StructureError("matrix form needs two slots")
        sa, sb = self.spaces
        m = zeros(sa.size, sb.size)
        for (k0, k1), val in self.comps.items():
            r0 = k0[1] if k0 != "V" else slice(sa.hdim, sa.size)
            r1 = k1[1] if k1 != "V" else slice(sb.hdim, sb.size)
            m[r0, r1] = m[r0, r1] + val
        return m

    @classmethod
    def from_matrix(cls, spaces, m) -> "RealizedClass":
        sa, sb = spaces
        comps = {}
        for i in range(sa.hdim):
            for j in range(sb.hdim):
                comps[(("h", i), ("h", j))] = m[i, j]
        if sa.r:
            for j in range(sb.hdim):
                comps[("V", ("h", j))] = m[sa.hdim:, j].copy()
        if sb.r:
            for i in range(sa.hdim):
                comps[(("h", i), "V")] = m[i, sb.hdim:].copy()
        if sa.r and sb.r:
            comps[("V", "V")] = m[sa.hdim:, sb.hdim:].copy()
        return cls(spaces, comps)

    # --- dense form (for transports) ---------------------------------------

    def to_dense(self) -> np.ndarray:
        shape = tuple(sp.size for sp in self.spaces)
        dense = np.full(shape, QQ(0), dtype=object)
        for sig, val in self.comps.items():
            sel = tuple(
                k[1] if k != "V" else slice(sp.hdim, sp.size)
                for k, sp in zip(sig, self.spaces)
            )
            dense[sel] = dense[sel] + val
        return dense

    @classmethod
    def from_dense(cls, spaces, dense) -> "RealizedClass":
        comps = {}
        for sig in itertools.product(*(sp.kinds() for sp in spaces)):
            sel = tuple(
                k[1] if k != "V" else slice(sp.hdim, sp.size)
                for k, sp in zip(sig, spaces)
            )
            val = dense[sel]
            if isinstance(val, np.ndarray):
                val = val.copy()
            comps[sig] = val
        return cls(spaces, comps)

    def transport(self, mats, targets) -> "RealizedClass":
        """Apply one linear map per slot (matrix of shape target x source)."""
        if len(mats) != self.n or len(targets) != self.n:
            raise StructureError("need one transport matrix per slot")
        dense = self.to_dense()
        for s, m in enumerate(mats):
            dense = np.moveaxis(np.tensordot(m, dense, axes=([1], [s])), 0, s)
        return RealizedClass.from_dense(tuple(targets), dense)

    def middle_part(self) -> "RealizedClass":
        """Components with every slot in the middle degree (h^{d/2} or V)."""
        out = {}
        for sig, val in self.comps.items():
            if all(k == "V" or k == ("h", sp.vd.dim // 2) for k, sp in zip(sig, self.spaces)):
                out[sig] = val
        return RealizedClass(self.spaces, out)

    def __repr__(self):
        bits = []
        for sig in sorted(self.comps, key=str):
            val = self.comps[sig]
            tag = "x".join("h^%d" % k[1] if k != "V" else "V" for k in sig)
            if isinstance(val, np.ndarray):
                bits.append(f"{tag}:array{val.shape}")
            else:
                bits.append(f"{tag}:{rational_str(val)}")
        return "RealizedClass(" + ", ".join(bits) + ")"


def _component_product(spaces, sig_a, val_a, sig_b, val_b):
    """One pairwise product of components, or None when it vanishes."""
    out_sig = []
    factor = QQ(1)
    a_axes = [s for s, k in enumerate(sig_a) if k == "V"]
    b_axes = [s for s, k in enumerate(sig_b) if k == "V"]
    contracted = []
    for s, (ka, kb) in enumerate(zip(sig_a, sig_b)):
        sp = spaces[s]
        if ka == "V" and kb == "V":
            out_sig.append(("h", sp.vd.dim))
            contracted.append(s)
            factor = factor / sp.e
        elif ka == "V" or kb == "V":
            other = kb if ka == "V" else ka
            if other != ("h", 0):
                return None
            out_sig.append("V")
        else:
            k = ka[1] + kb[1]
            if k > sp.vd.dim:
                return None
            out_sig.append(("h", k))
    if not a_axes and not b_axes:
        return tuple(out_sig), val_a * val_b * factor
    if not a_axes:
        return tuple(out_sig), val_b * (val_a * factor)
    if not b_axes:
        return tuple(out_sig), val_a * (val_b * factor)
    # general case: contract paired V-slots through the Gram matrix
    la = {s: _LETTERS[i] for i, s in enumerate(a_axes)}
    lb = {s: _LETTERS[len(a_axes) + i] for i, s in enumerate(b_axes)}
    operands = [val_a]
    subs = ["".join(la[s] for s in a_axes)]
    for s in contracted:
        operands.append(spaces[s].gram)
        subs.append(la[s] + lb[s])
    operands.append(val_b)
    subs.append("".join(lb[s] for s in b_axes))
    out_letters = ""
    for s, k in enumerate(out_sig):
        if k == "V":
            out_letters += la[s] if s in la else lb[s]
    val = np.einsum(",".join(subs) + "->" + out_letters, *operands)
    if out_letters == "" and isinstance(val, np.ndarray):
        val = val.item()
    return tuple(out_sig), val * factor


# --- the realization functor ------------------------------------------------


def _diagonal_comps(space: Space, slots, n, deco_slot=None, deco=0):
    """Components of the diagonal on the two listed slots of an n-fold
    product (all slots over the same space), optionally decorated by h^deco
    on the complementary slot."""
    i, j = slots
    base = [("h", 0)] * n
    if deco_slot is not None:
        base[deco_slot] = ("h", deco)
    comps = {}
    inv_e = QQ(1) / space.e
    for a in range(space.hdim):
        sig = list(base)
        sig[i] = ("h", a)
        sig[j] = ("h", space.vd.dim - a)
        key = tuple(sig)
        comps[key] = comps.get(key, QQ(0)) + inv_e
    if space.r:
        sig = list(base)
        sig[i] = "V"
        sig[j] = "V"
        comps[tuple(sig)] = space.gram_inv.copy()
    return comps


def diagonal_realized(space: Space) -> RealizedClass:
    """real(D) = (1/e) sum_i h^i (x) h^{d-i} + kappa on X x X."""
    return RealizedClass((space, space), _diagonal_comps(space, (0, 1), 2))


def realize(x: CorrClass, cfg: RealizationConfig | Space) -> RealizedClass:
    """Realize a tautological correspondence class as a graded tensor.

    Ring homomorphism on the tautological generators: monomials go to
    h-tensors, each diagonal to its Kuenneth tensor, and the small diagonal
    to the product real(D_12) . real(D_13).
    """
    space = cfg.space if isinstance(cfg, RealizationConfig) else cfg
    if x.vd != space.vd:
        raise StructureError("correspondence and configuration disagree on the variety")
    spaces = (space,) * x.n
    out = RealizedClass(spaces, {})
    delta_cache = None
    for mon, c in x.terms.items():
        if mon[0] == "h":
            sig = tuple(("h", a) for a in mon[1])
            out = out + RealizedClass(spaces, {sig: c})
        elif mon[0] == "D":
            _, i, j, deco = mon
            k = (3 - i - j) if x.n == 3 else None
            comps = _diagonal_comps(space, (i, j), x.n, deco_slot=k, deco=deco)
            out = out + RealizedClass(spaces, comps).scale(c)
        else:  # small diagonal
            if delta_cache is None:
                d12 = RealizedClass(spaces, _diagonal_comps(space, (0, 1), 3))
                d13 = RealizedClass(spaces, _diagonal_comps(space, (0, 2), 3))
                delta_cache = d12 * d13
            out = out + delta_cache.scale(c)
    return out


def compose_realized(f: RealizedClass, g: RealizedClass) -> RealizedClass:
    """Composition of two-slot classes, f acting first (matching the
    correspondence-ring convention): matrix form M_f . Pi . M_g."""
    if f.n != 2 or g.n != 2:
        raise StructureError("composition needs two-slot classes")
    if f.spaces[1] != g.spaces[0]:
        raise StructureError("middle spaces do not match")
    m = f.to_matrix().dot(f.spaces[1].pairing).dot(g.to_matrix())
    return RealizedClass.from_matrix((f.spaces[0], g.spaces[1]), m)


def action_matrix(f: RealizedClass) -> np.ndarray:
    """Matrix of alpha |-> p2_*(p1^* alpha . f) on the realization bases."""
    if f.n != 2:
        raise StructureError("action needs a two-slot class")
    return f.to_matrix().T.dot(f.spaces[0].pairing)


def degree(x: RealizedClass):
    return x.degree()


# --- the small-diagonal defect polynomial -----------------------------------


def derive_P(cfg: RealizationConfig) -> CorrClass:
    """The symmetric polynomial P with

        real(delta) = (1/3)[real(D_12) h_3^4 + real(D_13) h_2^4
                            + real(D_23) h_1^4] + P(h_1, h_2, h_3).

    Every V-component of the difference must cancel identically (for any
    Gram matrix); a nonzero one signals a broken multiplicativity shadow.
    """
    vd = cfg.vd
    if vd.dim != 4:
        raise StructureError("the defect polynomial is computed on fourfolds")
    delta = realize(CorrClass.small_diagonal(vd), cfg)
    corr = CorrClass.zero(vd, 3)
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        corr = corr + CorrClass(vd, 3, {("D", i, j, vd.dim): QQ(1)})
    rem = delta - realize(corr, cfg).scale(QQ(1, vd.degree))
    terms = {}
    for sig, val in rem.comps.items():
        if any(k == "V" for k in sig):
            raise ShadowViolation("MCK shadow violated")
        terms[("h", tuple(k[1] for k in sig))] = val
    return CorrClass(vd, 3, terms)


def p_to_json(p: CorrClass):
    from .tautcorr import monomial_str

    return {monomial_str(mon): rational_str(c) for mon, c in p.sorted_terms()}


def p_to_text(p: CorrClass) -> str:
    from .tautcorr import monomial_str

    bits = []
    for mon, c in p.sorted_terms():
        bits.append(f"({rational_str(c)}) {monomial_str(mon)}")
    return " + ".join(bits) if bits else "0"


# --- kernel-projector identities ---------------------------------------------


def _check(checks, cid, claim, passed, witness=None):
    checks.append(
        {"id": cid, "claim": claim, "passed": bool(passed), "witness": witness}
    )


def _diff_witness(got: RealizedClass, want: RealizedClass) -> str | None:
    diff = got - want
    if diff.is_zero():
        return None
    sig = sorted(diff.comps, key=str)[0]
    tag = "x".join("h^%d" % k[1] if k != "V" else "V" for k in sig)
    return f"first differing component: {tag}"


def verify_kernel_identities(cfg: RealizationConfig):
    """Exact identities of the two projector kernels at the realized level.

    Returns a list of check dicts {id, claim, passed, witness}.
    """
    vd = cfg.vd
    checks = []
    kl = realize(_mukai.kernel_class(vd, "L"), cfg)
    kr = realize(_mukai.kernel_class(vd, "R"), cfg)
    pi4_prim = realize(ck_projectors(vd)["pi4_prim"], cfg)

    pairs = [
        ("pLpL", "p_L twice = p_L", compose_realized(kl, kl), kl),
        ("pRpR", "p_R twice = p_R", compose_realized(kr, kr), kr),
        ("pLpR", "p_L then p_R = p_L", compose_realized(kl, kr), kl),
        ("pRpL", "p_R then p_L = p_R", compose_realized(kr, kl), kr),
    ]
    for cid, claim, got, want in pairs:
        _check(checks, cid, claim, got == want, _diff_witness(got, want))

    for cid, k in (("sandwichL", kl), ("sandwichR", kr)):
        mid = k.middle_part()
        got = compose_realized(compose_realized(pi4_prim, mid), pi4_prim)
        _check(
            checks,
            cid,
            "primitive projector . middle part . primitive projector = primitive projector",
            got == pi4_prim,
            _diff_witness(got, pi4_prim),
        )

    # the middle part of each kernel restricts to the identity on V
    sp = cfg.space
    for cid, k in (("restrictL", kl), ("restrictR", kr)):
        a = action_matrix(k.middle_part())
        ok = mat_eq(a[:, sp.hdim:], eye(sp.size)[:, sp.hdim:])
        _check(
            checks,
            cid,
            "middle part acts as the identity on the primitive block",
            ok,
            None if ok else "V-column mismatch in the action matrix",
        )
    return checks
