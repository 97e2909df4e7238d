"""Graded permutation-type bifactorisations and their tensor decompositions.

Charge conventions: the variables carry charge 2/d, the differential has
charge 1, and hat(P_S) is P_S with its degree-0 generator at (1-|S|)/d (the
degree-1 generator then sits at (1-|S|)/d + (2/d)|S| - 1).  With these
charges the family is closed under duals and tensor products, and the
pairwise product decomposes through the explicit embeddings g-/g+ whose
components are pinned by charge bookkeeping.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclofield import CycNum, eta_power
from .fusionring import FusionRing
from .invariants import HomologyData, is_homotopy_iso
from .linop import as_linop, entry_is_poly
from .mfcore import (
    MatrixBifact,
    MFMorphism,
    perm_mf,
    sum_morphism,
    tensor_mf,
)
from .polyring import MPoly, NotDivisible, exact_div, perm_product

__all__ = [
    "GradedMF",
    "GradedLabel",
    "NotPolynomial",
    "hat_p",
    "graded_tensor",
    "graded_dual",
    "graded_check",
    "morphism_c_degree",
    "graded_hom_dim",
    "g_pair",
    "g_pair_certified",
    "decompose_product",
    "mf_fusion_ring",
    "graded_homotopy_degrees",
]


class NotPolynomial(ArithmeticError):
    pass


class GradedLabel:
    """Consecutive index label a:lam, the set {a, ..., a+lam} in Z_d."""

    __slots__ = ("d", "a", "lam")

    def __init__(self, d: int, a: int, lam: int):
        if not (0 <= lam <= d - 2):
            raise ValueError(f"lam = {lam} outside 0..{d - 2}")
        self.d = d
        self.a = a % d
        self.lam = lam

    @property
    def subset(self):
        return frozenset((self.a + j) % self.d for j in range(self.lam + 1))

    def dual(self) -> "GradedLabel":
        return GradedLabel(self.d, -(self.a + self.lam) % self.d, self.lam)

    def key(self):
        return (self.a, self.lam)

    def __eq__(self, other):
        return isinstance(other, GradedLabel) and (self.d, self.a, self.lam) == (other.d, other.a, other.lam)

    def __hash__(self):
        return hash((self.d, self.a, self.lam))

    def __repr__(self):
        return f"{self.a}:{self.lam}"


class GradedMF:
    """A bifactorisation with rational charges on each free generator."""

    def __init__(self, mf: MatrixBifact, charges0, charges1):
        assert len(charges0) == mf.rank0 and len(charges1) == mf.rank1
        self.mf = mf
        self.charges0 = tuple(Fraction(c) for c in charges0)
        self.charges1 = tuple(Fraction(c) for c in charges1)

    @property
    def d(self):
        return self.mf.d

    def __repr__(self):
        return f"GradedMF({self.mf!r}, q0={self.charges0}, q1={self.charges1})"


def hat_p(d: int, S, left="x", right="y", l: int = 1) -> GradedMF:
    """hat(P_S) = P_S{(1-|S|)/d}."""
    S = {s % d for s in S}
    mf = perm_mf(d, S, left, right, l)
    alpha = Fraction(1 - len(S), d)
    return GradedMF(mf, (alpha,), (alpha + Fraction(2 * len(S), d) - 1,))


def hat_label(label: GradedLabel, left="x", right="y", l: int = 1) -> GradedMF:
    return hat_p(label.d, label.subset, left, right, l)


def graded_tensor(A: GradedMF, B: GradedMF) -> GradedMF:
    mf = tensor_mf(A.mf, B.mf)
    c0 = [a + b for a in A.charges0 for b in B.charges0] + [a + b for a in A.charges1 for b in B.charges1]
    c1 = [a + b for a in A.charges1 for b in B.charges0] + [a + b for a in A.charges0 for b in B.charges1]
    return GradedMF(mf, c0, c1)


def graded_dual(A: GradedMF) -> GradedMF:
    """Dual charges for a rank-(1,1) object per the duality-degree bookkeeping."""
    from .mfcore import dual_rank1

    if A.mf.rank0 != 1:
        raise ValueError("graded duals implemented for rank-(1,1)")
    d = A.d
    alpha = A.charges0[0]
    deg1 = A.mf.d1[0][0].degree()
    c0 = -alpha + Fraction(2, d) * (1 - deg1)
    c1 = -alpha - 1 + Fraction(2, d)
    return GradedMF(dual_rank1(A.mf), (c0,), (c1,))


def _entry_degree(entry, d):
    """(uniform polynomial-degree shift, ok) of a matrix entry."""
    if entry_is_poly(entry):
        if entry.is_zero():
            return None, True
        if not entry.is_homogeneous():
            return None, False
        return Fraction(entry.degree()), True
    shift = as_linop(entry, d).degree_shift()
    if shift is None:
        op = as_linop(entry, d)
        if op.is_zero_form():
            return None, True
        return None, False
    return shift, True


def graded_check(A: GradedMF) -> bool:
    """Every nonzero differential entry is homogeneous of charge exactly 1."""
    d = A.d
    q = Fraction(2, d)
    for i in range(A.mf.rank0):
        for j in range(A.mf.rank1):
            deg, ok = _entry_degree(A.mf.d1[i][j], d)
            if not ok:
                return False
            if deg is not None and A.charges0[i] + q * deg != A.charges1[j] + 1:
                return False
    for i in range(A.mf.rank1):
        for j in range(A.mf.rank0):
            deg, ok = _entry_degree(A.mf.d0[i][j], d)
            if not ok:
                return False
            if deg is not None and A.charges1[i] + q * deg != A.charges0[j] + 1:
                return False
    return True


def morphism_c_degree(f: MFMorphism, srcg: GradedMF, tgtg: GradedMF) -> Fraction | None:
    """The uniform charge of a morphism, or None when entries disagree."""
    d = f.d
    q = Fraction(2, d)
    degrees = set()
    if f.z2_degree == 0:
        blocks = ((f.f0, tgtg.charges0, srcg.charges0), (f.f1, tgtg.charges1, srcg.charges1))
    else:
        blocks = ((f.f0, tgtg.charges1, srcg.charges0), (f.f1, tgtg.charges0, srcg.charges1))
    for mat, tgt_c, src_c in blocks:
        for i, row in enumerate(mat):
            for j, e in enumerate(row):
                deg, ok = _entry_degree(e, d)
                if not ok:
                    return None
                if deg is None:
                    continue
                degrees.add(tgt_c[i] + q * deg - src_c[j])
    if len(degrees) > 1:
        return None
    return degrees.pop() if degrees else Fraction(0)


def graded_hom_dim(d: int, R, S, l: int = 1) -> int:
    """dim of charge-0 cycles hat(P_R) -> hat(P_S): constants (p, q) with
    p * d1_R = d1_S * q after the charge bookkeeping forces them constant."""
    R = {r % d for r in R}
    S = {s % d for s in S}
    if not R or not S or len(R) == d or len(S) == d:
        raise ValueError("R, S must be proper nonempty subsets")
    if len(R) != len(S):
        return 0
    d1R = perm_product(d, R, "x", "y", l)
    d1S = perm_product(d, S, "x", "y", l)
    # p*d1R - q*d1S = 0: 2-unknown homogeneous system over the field
    rows = {}
    for e, c in d1R.terms.items():
        rows.setdefault((d1R.vars, e), [CycNum.zero(d), CycNum.zero(d)])[0] = c
    for e, c in d1S.terms.items():
        key = (d1S.vars, e)
        rows.setdefault(key, [CycNum.zero(d), CycNum.zero(d)])[1] = -c
    mat = list(rows.values())
    # rank of a #rows x 2 matrix
    rank = 0
    cols = [0, 1]
    used_rows = set()
    for c in cols:
        piv = None
        for idx, row in enumerate(mat):
            if idx not in used_rows and not row[c].is_zero():
                piv = idx
                break
        if piv is None:
            continue
        used_rows.add(piv)
        inv = mat[piv][c].inverse()
        pivrow = [x * inv for x in mat[piv]]
        for idx, row in enumerate(mat):
            if idx != piv and not row[c].is_zero():
                factor = row[c]
                mat[idx] = [a - factor * b for a, b in zip(row, pivrow)]
        rank += 1
    return 2 - rank


# -- the explicit tensor decomposition ------------------------------------------


def g_pair(d: int, a: int, b: int, mu: int, l: int = 1):
    """(g-, g+): the charge-0 embeddings of the two summands of
    hat(P_{a:1}) (x) hat(P_{b:mu}), with the closed-form components."""
    if not (1 <= mu <= d - 2):
        raise ValueError("mu must lie in 1..d-2")
    x, y, z = (MPoly.var(d, v) for v in "xyz")
    eta = lambda k: eta_power(d, k, l)
    one = CycNum.one(d)

    A = hat_p(d, {a, a + 1}, "x", "y", l)
    B = hat_p(d, {b + j for j in range(mu + 1)}, "y", "z", l)
    AB = graded_tensor(A, B)

    p1 = perm_product(d, {a, a + 1}, "x", "y", l)
    pmu = perm_product(d, {b + j for j in range(mu + 1)}, "y", "z", l)
    q_minus = perm_product(d, {a + b + 1 + j for j in range(mu)}, "x", "z", l)
    q_plus = perm_product(d, {a + b + j for j in range(mu + 2)}, "x", "z", l)
    xd_zd = x**d - z**d
    yd_zd = y**d - z**d
    xd_yd = x**d - y**d

    def div(f, g):
        try:
            return exact_div(f, g)
        except NotDivisible as exc:
            raise NotPolynomial(str(exc)) from exc

    ratio = lambda num, den: num * den.inverse()

    # g-: hat(P_{a+b+1:mu-1}) -> A (x) B
    gm01 = MPoly.one(d)
    c = eta(-a * mu)
    gm00 = (
        x * (-(eta(-a - 1)) * ratio(one - eta(-mu), one - eta(-1)))
        + y * ratio(one - eta(-mu - 1), one - eta(-1))
        - z * eta(b)
    ) * c
    gm10 = div(q_minus * gm00 - pmu, p1)
    gm11 = div(div(xd_zd, q_minus) - div(yd_zd, pmu) * gm00, p1)

    # g+: hat(P_{a+b:mu+1}) -> A (x) B
    gp00 = MPoly.one(d)
    cp = eta(a * (mu + 1))
    gp01 = (
        x * ratio(one - eta(mu + 2), one - eta(1))
        - y * (eta(a + 1) * ratio(one - eta(mu + 1), one - eta(1)))
        - z * eta(a + b + mu + 1)
    ) * cp
    gp10 = div(q_plus - pmu * gp01, p1)
    gp11 = div(div(xd_zd, q_plus) * gp01 - div(yd_zd, pmu), p1)

    Qm = hat_p(d, {(a + b + 1 + j) % d for j in range(mu)}, "x", "z", l)
    Qp = hat_p(d, {(a + b + j) % d for j in range(mu + 2)}, "x", "z", l)
    g_minus = MFMorphism(Qm.mf, AB.mf, 0, [[gm00], [gm11]], [[gm10], [gm01]])
    g_plus = MFMorphism(Qp.mf, AB.mf, 0, [[gp00], [gp11]], [[gp10], [gp01]])
    return g_minus, g_plus, Qm, Qp, AB


def g_pair_certified(d: int, a: int, b: int, mu: int, l: int = 1) -> dict:
    """Run every checkable property of the pair; returns a result dict."""
    g_minus, g_plus, Qm, Qp, AB = g_pair(d, a, b, mu, l)
    out = {
        "cycle_minus": g_minus.is_cycle(),
        "cycle_plus": g_plus.is_cycle(),
        "graded_endpoints": graded_check(Qm) and graded_check(Qp) and graded_check(AB),
        "degree_minus": morphism_c_degree(g_minus, Qm, AB),
        "degree_plus": morphism_c_degree(g_plus, Qp, AB),
    }
    paired = sum_morphism(g_minus, g_plus)
    out["homology_iso"] = is_homotopy_iso(paired)
    H = HomologyData(AB.mf)
    out["dims"] = (H.dim_h0, H.dim_h1)
    out["dims_expected"] = (1, 1) if mu == d - 2 else (2, 2)
    out["ok"] = (
        out["cycle_minus"]
        and out["cycle_plus"]
        and out["graded_endpoints"]
        and out["degree_minus"] == 0
        and out["degree_plus"] == 0
        and out["homology_iso"]
        and out["dims"] == out["dims_expected"]
    )
    return out


def decompose_product(d: int, a: int, lam: int, b: int, mu: int, l: int = 1, index_sign: int = 1):
    """Summands of hat(P_{a:lam}) (x) hat(P_{b:mu}) as GradedLabels.

    The first index of each summand is a + b + index_sign*(lam + mu - nu)/2;
    index_sign=+1 is the convention certified by the homology oracle
    (index_sign=-1 fails rigidity: the unit drops out of T (x) T)."""
    out = []
    for nu in range(abs(lam - mu), min(lam + mu, 2 * d - 4 - lam - mu) + 1, 2):
        shift = index_sign * (lam + mu - nu) // 2
        out.append(GradedLabel(d, (a + b + shift) % d, nu))
    return out


def mf_fusion_ring(d: int, l: int = 1, index_sign: int = 1) -> FusionRing:
    labels = [GradedLabel(d, a, lam) for a in range(d) for lam in range(d - 1)]
    products = {}
    for i in labels:
        for j in labels:
            outcome = {}
            for s in decompose_product(d, i.a, i.lam, j.a, j.lam, l, index_sign):
                outcome[s] = outcome.get(s, 0) + 1
            products[(i, j)] = outcome
    return FusionRing(labels, GradedLabel(d, 0, 0), products)


def graded_homotopy_degrees(srcg: GradedMF, tgtg: GradedMF):
    """Exact entry degrees for an odd charge-(-1) homotopy src -> tgt.

    Returns (table0, table1): table0[i][j] is the forced polynomial degree of
    the entry src0_j -> tgt1_i (None = forced zero), and mirrors for table1."""
    d = srcg.d

    def forced(c_src, c_tgt):
        val = Fraction(d) * (c_src - c_tgt - 1) / 2
        if val.denominator != 1 or val < 0:
            return None
        return int(val)

    table0 = [[forced(cs, ct) for cs in srcg.charges0] for ct in tgtg.charges1]
    table1 = [[forced(cs, ct) for cs in srcg.charges1] for ct in tgtg.charges0]
    return table0, table1
