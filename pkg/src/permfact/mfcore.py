"""Matrix bifactorisations of x^d - y^d and their morphism calculus.

Objects are Z2-graded free modules over the polynomial ring in an external
pair of variables (plus internal tensor variables), with an odd twisted
differential squaring to left^d - right^d.  Bimodule twists are kept in
"honest" matrix form: the twisted object ((a)M(b)) is the same free module
with the left variable scaled by eta^a and the right variable by eta^{-b}
inside the differentials, so twist isomorphisms have constant components.

Morphism components are matrices whose entries are polynomials or the exact
operators of :mod:`permfact.linop` (the unit isomorphisms substitute the
middle variable into an external one; evaluation maps extract residues).
"""

from __future__ import annotations

from .cyclofield import CycNum, EvenModulus, eta_power
from .linop import LinOp, ResidueCore, Subst, Term, as_linop, entry_is_poly
from .polyring import MPoly, exact_div, perm_product

__all__ = [
    "MatrixBifact",
    "MFMorphism",
    "PermLabel",
    "VariableMismatch",
    "RankUnsupported",
    "unit_mf",
    "perm_mf",
    "verify_factorisation",
    "tensor_mf",
    "direct_sum_mf",
    "reassoc",
    "identity_morphism",
    "unit_isos",
    "unit_sections",
    "dual_rank1",
    "perm_dual_iso",
    "g_residue",
    "ev_coev",
    "duality_un",
    "twist_mf",
    "diag_twist_mf",
    "twist_morphism",
    "s_iso",
    "chi",
    "mu",
    "tensor_morphism",
    "sum_morphism",
    "morphism_poly_form",
    "zigzag_morphisms",
]


class VariableMismatch(ValueError):
    pass


class RankUnsupported(ValueError):
    pass


class PermLabel:
    """A subset of Z_d, with the consecutive form a:lam for {a, ..., a+lam}."""

    def __init__(self, d: int, S=None, a: int | None = None, lam: int | None = None):
        if S is None:
            if lam is None or a is None:
                raise ValueError("give S or both a and lam")
            if not (0 <= lam <= d - 2):
                raise ValueError(f"lam = {lam} out of range 0..{d - 2}")
            S = {(a + j) % d for j in range(lam + 1)}
        self.d = d
        self.S = frozenset(s % d for s in S)

    def consecutive(self):
        """(a, lam) with S = {a, ..., a+lam}, or None when S is not an arc."""
        d, S = self.d, self.S
        if not S or len(S) == d:
            return None
        for a in range(d):
            if {(a + j) % d for j in range(len(S))} == S:
                return (a, len(S) - 1)
        return None

    def minus(self) -> "PermLabel":
        return PermLabel(self.d, {(-s) % self.d for s in self.S})

    def __repr__(self):
        return f"PermLabel(d={self.d}, S={sorted(self.S)})"


def _entry_zero(d):
    return MPoly.zero(d)


def _entry_mul(a, b, d):
    """Compose entries (a after b)."""
    if entry_is_poly(a) and entry_is_poly(b):
        return a * b
    return as_linop(a, d).compose(as_linop(b, d))


def _entry_add(a, b, d):
    if entry_is_poly(a) and entry_is_poly(b):
        return a + b
    return as_linop(a, d) + as_linop(b, d)


def _entry_factor_product(a, b, d):
    """Tensor-product of entries acting on disjoint variable groups."""
    if entry_is_poly(a) and entry_is_poly(b):
        return a * b
    if entry_is_poly(b):
        return as_linop(a, d).scaled(b)
    if entry_is_poly(a):
        return as_linop(b, d).scaled(a)
    raise VariableMismatch("tensor of two operator entries is not supported")


def _entry_eq(a, b, d, sample_vars):
    if entry_is_poly(a) and entry_is_poly(b):
        return a == b
    return as_linop(a, d).equals(as_linop(b, d), sample_vars=sample_vars)


def mat_mul(A, B, d):
    rows, mid, cols = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = _entry_zero(d)
            for k in range(mid):
                term = _entry_mul(A[i][k], B[k][j], d)
                acc = _entry_add(acc, term, d)
            row.append(acc)
        out.append(row)
    return out


def mat_add(A, B, d):
    return [[_entry_add(a, b, d) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c, d):
    out = []
    for row in A:
        out.append([e * c if entry_is_poly(e) else as_linop(e, d).scaled(c) for e in row])
    return out


def mat_eq(A, B, d, sample_vars):
    if len(A) != len(B) or any(len(ra) != len(rb) for ra, rb in zip(A, B)):
        return False
    return all(
        _entry_eq(a, b, d, sample_vars) for ra, rb in zip(A, B) for a, b in zip(ra, rb)
    )


def _identity_matrix(n, d):
    one, zero = MPoly.one(d), MPoly.zero(d)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def _zero_matrix(rows, cols, d):
    zero = MPoly.zero(d)
    return [[zero for _ in range(cols)] for _ in range(rows)]


class MatrixBifact:
    """Z2-graded factorisation data: d1: M1 -> M0, d0: M0 -> M1."""

    def __init__(self, d, left, right, int_vars, d1, d0, tags0=None, tags1=None):
        self.d = d
        self.left = left
        self.right = right
        self.int_vars = tuple(int_vars)
        self.d1 = d1
        self.d0 = d0
        self.rank0 = len(d1)
        self.rank1 = len(d0)
        self.tags0 = tuple(tags0) if tags0 is not None else tuple((("0", i),) for i in range(self.rank0))
        self.tags1 = tuple(tags1) if tags1 is not None else tuple((("1", i),) for i in range(self.rank1))

    @property
    def all_vars(self):
        return (self.left,) + self.int_vars + (self.right,)

    def potential(self) -> MPoly:
        x = MPoly.var(self.d, self.left)
        z = MPoly.var(self.d, self.right)
        return x**self.d - z**self.d

    def same_shape(self, other) -> bool:
        return (
            self.d == other.d
            and self.left == other.left
            and self.right == other.right
            and self.int_vars == other.int_vars
            and self.rank0 == other.rank0
            and self.rank1 == other.rank1
        )

    def __eq__(self, other):
        if not isinstance(other, MatrixBifact):
            return NotImplemented
        return self.same_shape(other) and self.d1 == other.d1 and self.d0 == other.d0

    def renamed(self, mapping: dict) -> "MatrixBifact":
        """Rename variables (an isomorphism of the presentation)."""
        sub = {v: MPoly.var(self.d, w) for v, w in mapping.items()}
        rn = lambda e: e.subs(sub)
        return MatrixBifact(
            self.d,
            mapping.get(self.left, self.left),
            mapping.get(self.right, self.right),
            tuple(mapping.get(v, v) for v in self.int_vars),
            [[rn(e) for e in row] for row in self.d1],
            [[rn(e) for e in row] for row in self.d0],
            self.tags0,
            self.tags1,
        )

    def __repr__(self):
        return (
            f"MatrixBifact(d={self.d}, {self.left}|{','.join(self.int_vars)}|{self.right}, "
            f"ranks=({self.rank0},{self.rank1}))"
        )


class MFMorphism:
    """Matrix morphism between bifactorisations.

    For even degree, f0: src0 -> tgt0 and f1: src1 -> tgt1; for odd degree,
    f0: src0 -> tgt1 and f1: src1 -> tgt0.
    """

    def __init__(self, src, tgt, z2_degree, f0, f1):
        self.src = src
        self.tgt = tgt
        self.z2_degree = z2_degree % 2
        sv = src.all_vars
        clean = lambda e: e if entry_is_poly(e) else _simplify_entry(e.pruned_for_source(sv))
        self.f0 = [[clean(e) for e in row] for row in f0]
        self.f1 = [[clean(e) for e in row] for row in f1]

    @property
    def d(self):
        return self.src.d

    def sample_vars(self):
        return tuple(dict.fromkeys(self.src.all_vars + self.tgt.all_vars))

    def compose(self, other: "MFMorphism") -> "MFMorphism":
        """self after other."""
        if not other.tgt.same_shape(self.src):
            raise VariableMismatch(f"cannot compose: {other.tgt!r} -> {self.src!r}")
        deg = (self.z2_degree + other.z2_degree) % 2
        mine = [self.f0, self.f1]
        f0 = mat_mul(mine[other.z2_degree % 2], other.f0, self.d)
        f1 = mat_mul(mine[(1 + other.z2_degree) % 2], other.f1, self.d)
        return MFMorphism(other.src, self.tgt, deg, f0, f1)

    def __add__(self, other):
        assert self.z2_degree == other.z2_degree
        return MFMorphism(
            self.src, self.tgt, self.z2_degree,
            mat_add(self.f0, other.f0, self.d), mat_add(self.f1, other.f1, self.d),
        )

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c) -> "MFMorphism":
        return MFMorphism(self.src, self.tgt, self.z2_degree, mat_scale(self.f0, c, self.d), mat_scale(self.f1, c, self.d))

    def is_cycle(self) -> bool:
        """Both commuting-square conditions, checked exactly."""
        sv = self.sample_vars()
        d = self.d
        if self.z2_degree == 0:
            lhs1 = mat_mul(self.f0, self.src.d1, d)
            rhs1 = mat_mul(self.tgt.d1, self.f1, d)
            lhs2 = mat_mul(self.f1, self.src.d0, d)
            rhs2 = mat_mul(self.tgt.d0, self.f0, d)
        else:
            # odd cycles anticommute with the differentials
            lhs1 = mat_mul(self.f0, self.src.d1, d)
            rhs1 = mat_scale(mat_mul(self.tgt.d0, self.f1, d), -1, d)
            lhs2 = mat_mul(self.f1, self.src.d0, d)
            rhs2 = mat_scale(mat_mul(self.tgt.d1, self.f0, d), -1, d)
        return mat_eq(lhs1, rhs1, d, sv) and mat_eq(lhs2, rhs2, d, sv)

    def delta(self) -> "MFMorphism":
        """delta(f) = d_tgt . f - (-1)^{|f|} f . d_src, as component matrices."""
        d = self.d
        if self.z2_degree == 0:
            c0 = mat_add(mat_mul(self.tgt.d0, self.f0, d), mat_scale(mat_mul(self.f1, self.src.d0, d), -1, d), d)
            c1 = mat_add(mat_mul(self.tgt.d1, self.f1, d), mat_scale(mat_mul(self.f0, self.src.d1, d), -1, d), d)
            return MFMorphism(self.src, self.tgt, 1, c0, c1)
        c0 = mat_add(mat_mul(self.tgt.d1, self.f0, d), mat_mul(self.f1, self.src.d0, d), d)
        c1 = mat_add(mat_mul(self.tgt.d0, self.f1, d), mat_mul(self.f0, self.src.d1, d), d)
        return MFMorphism(self.src, self.tgt, 0, c0, c1)

    def equals(self, other: "MFMorphism") -> bool:
        if self.z2_degree != other.z2_degree:
            return False
        sv = tuple(dict.fromkeys(self.sample_vars() + other.sample_vars()))
        return mat_eq(self.f0, other.f0, self.d, sv) and mat_eq(self.f1, other.f1, self.d, sv)

    def is_zero(self) -> bool:
        sv = self.sample_vars()
        z0 = _zero_matrix(len(self.f0), len(self.f0[0]) if self.f0 else 0, self.d)
        z1 = _zero_matrix(len(self.f1), len(self.f1[0]) if self.f1 else 0, self.d)
        return mat_eq(self.f0, z0, self.d, sv) and mat_eq(self.f1, z1, self.d, sv)

    def renamed(self, mapping: dict) -> "MFMorphism":
        """Rename variables in source, target, and all entries."""
        d = self.d

        def conv(e):
            if entry_is_poly(e):
                relevant = {v: MPoly.var(d, w) for v, w in mapping.items() if v in e.vars}
                return e.subs(relevant) if relevant else e
            return _simplify_entry(e.renamed(mapping))

        return MFMorphism(
            self.src.renamed(mapping),
            self.tgt.renamed(mapping),
            self.z2_degree,
            [[conv(e) for e in row] for row in self.f0],
            [[conv(e) for e in row] for row in self.f1],
        )

    def rename_target(self, mapping: dict) -> "MFMorphism":
        """Compose with the renaming isomorphism of the target presentation."""
        sub = Subst(self.d, {v: (1, w) for v, w in mapping.items()})
        ren = LinOp(self.d, [Term(MPoly.one(self.d), sub)])
        f0 = [[ren.compose(as_linop(e, self.d)) for e in row] for row in self.f0]
        f1 = [[ren.compose(as_linop(e, self.d)) for e in row] for row in self.f1]
        f0 = [[_simplify_entry(e) for e in row] for row in f0]
        f1 = [[_simplify_entry(e) for e in row] for row in f1]
        return MFMorphism(self.src, self.tgt.renamed(mapping), self.z2_degree, f0, f1)

    def __repr__(self):
        return f"MFMorphism({self.src!r} -> {self.tgt!r}, deg={self.z2_degree})"


def _simplify_entry(e):
    if isinstance(e, LinOp):
        p = e.as_poly()
        if p is not None:
            return p
    return e


def morphism_poly_form(f: MFMorphism) -> MFMorphism | None:
    """Rewrite every entry as a multiplication polynomial, or None if one resists."""
    src_vars = f.src.all_vars

    def conv(matrix):
        out = []
        for row in matrix:
            new = []
            for e in row:
                if entry_is_poly(e):
                    new.append(e)
                    continue
                p = e.as_multiplication(src_vars)
                if p is None:
                    return None
                new.append(p)
            out.append(new)
        return out

    f0 = conv(f.f0)
    f1 = conv(f.f1)
    if f0 is None or f1 is None:
        return None
    return MFMorphism(f.src, f.tgt, f.z2_degree, f0, f1)


def identity_morphism(M: MatrixBifact) -> MFMorphism:
    return MFMorphism(M, M, 0, _identity_matrix(M.rank0, M.d), _identity_matrix(M.rank1, M.d))


# -- constructors ---------------------------------------------------------------


def unit_mf(d: int, left="x", right="y") -> MatrixBifact:
    """The tensor unit: d1 = left - right, d0 = (left^d - right^d)/(left - right)."""
    x = MPoly.var(d, left)
    y = MPoly.var(d, right)
    d1 = x - y
    d0 = exact_div(x**d - y**d, d1)
    return MatrixBifact(d, left, right, (), [[d1]], [[d0]], tags0=((0,),), tags1=((1,),))


def perm_mf(d: int, S, left="x", right="y", l: int = 1) -> MatrixBifact:
    """Permutation-type object: d1 = prod_{j in S}(left - eta^{lj} right)."""
    if isinstance(S, PermLabel):
        assert S.d == d
        S = S.S
    S = {s % d for s in S}
    d1 = perm_product(d, S, left, right, l)
    d0 = perm_product(d, sorted(set(range(d)) - S), left, right, l)
    return MatrixBifact(d, left, right, (), [[d1]], [[d0]], tags0=((0,),), tags1=((1,),))


def verify_factorisation(M: MatrixBifact) -> bool:
    d = M.d
    W = M.potential()
    sv = M.all_vars
    target0 = mat_scale(_identity_matrix(M.rank0, d), W, d)
    target1 = mat_scale(_identity_matrix(M.rank1, d), W, d)
    return mat_eq(mat_mul(M.d1, M.d0, d), target0, d, sv) and mat_eq(
        mat_mul(M.d0, M.d1, d), target1, d, sv
    )


def tensor_mf(M: MatrixBifact, N: MatrixBifact) -> MatrixBifact:
    """Koszul-signed tensor product over the shared middle variable."""
    if M.right != N.left:
        raise VariableMismatch(f"middle variables differ: {M.right} vs {N.left}")
    if M.d != N.d:
        raise VariableMismatch("moduli differ")
    overlap = set((M.left,) + M.int_vars) & set(N.int_vars + (N.right,))
    if overlap:
        raise VariableMismatch(f"variable collision: {overlap}")
    d = M.d
    zero = MPoly.zero(d)

    def kron(A, B, sign=1):
        rows = len(A) * len(B)
        out = []
        for i in range(len(A)):
            for bi in range(len(B)):
                row = []
                for j in range(len(A[0])):
                    for bj in range(len(B[0])):
                        a = A[i][j]
                        b = B[bi][bj]
                        if (entry_is_poly(a) and a.is_zero()) or (entry_is_poly(b) and b.is_zero()):
                            row.append(zero)
                        else:
                            e = _entry_factor_product(a, b, d)
                            row.append(e * sign if entry_is_poly(e) else e.scaled(sign))
                out.append(row)
        return out

    idm0 = _identity_matrix(M.rank0, d)
    idm1 = _identity_matrix(M.rank1, d)
    idn0 = _identity_matrix(N.rank0, d)
    idn1 = _identity_matrix(N.rank1, d)

    def hstack(A, B):
        return [ra + rb for ra, rb in zip(A, B)]

    def vstack(A, B):
        return A + B

    # degree-1 part (M1N0 | M0N1) -> degree-0 part (M0N0 | M1N1)
    d1 = vstack(
        hstack(kron(M.d1, idn0), kron(idm0, N.d1)),
        hstack(kron(idm1, N.d0, -1), kron(M.d0, idn1)),
    )
    # degree-0 part (M0N0 | M1N1) -> degree-1 part (M1N0 | M0N1)
    d0 = vstack(
        hstack(kron(M.d0, idn0), kron(idm1, N.d1, -1)),
        hstack(kron(idm0, N.d0), kron(M.d1, idn1)),
    )
    tags0 = tuple(a + b for a in M.tags0 for b in N.tags0) + tuple(a + b for a in M.tags1 for b in N.tags1)
    tags1 = tuple(a + b for a in M.tags1 for b in N.tags0) + tuple(a + b for a in M.tags0 for b in N.tags1)
    int_vars = M.int_vars + (M.right,) + N.int_vars
    return MatrixBifact(d, M.left, N.right, int_vars, d1, d0, tags0, tags1)


def tensor_morphism(f: MFMorphism, g: MFMorphism) -> MFMorphism:
    """f (x) g with the Koszul sign (-1)^{|g| * |m|} on the M_i summands."""
    M, N = f.src, g.src
    src = tensor_mf(M, N)
    tgt = tensor_mf(f.tgt, g.tgt)
    d = f.d
    deg = (f.z2_degree + g.z2_degree) % 2
    zero = MPoly.zero(d)

    fc = {0: f.f0, 1: f.f1}
    gc = {0: g.f0, 1: g.f1}

    def src_summands(par):
        # (i, j, block_row_rank, block_col_rank) in storage order
        if par == 0:
            return [(0, 0, M.rank0, N.rank0), (1, 1, M.rank1, N.rank1)]
        return [(1, 0, M.rank1, N.rank0), (0, 1, M.rank0, N.rank1)]

    def tgt_index(par, i, j, T, U):
        # offset of summand T_i (x) U_j inside (T (x) U)_par
        if par == 0:
            order = [(0, 0, T.rank0 * U.rank0), (1, 1, T.rank1 * U.rank1)]
        else:
            order = [(1, 0, T.rank1 * U.rank0), (0, 1, T.rank0 * U.rank1)]
        off = 0
        for a, b, size in order:
            if (a, b) == (i, j):
                return off
            off += size
        raise AssertionError

    def build(par):
        src_rank = src.rank0 if par == 0 else src.rank1
        tpar = (par + deg) % 2
        tgt_rank = tgt.rank0 if tpar == 0 else tgt.rank1
        out = [[zero for _ in range(src_rank)] for _ in range(tgt_rank)]
        col_off = 0
        for (i, j, ri, rj) in src_summands(par):
            fi = fc[i]
            gj = gc[j]
            ti = (i + f.z2_degree) % 2
            tj = (j + g.z2_degree) % 2
            row_off = tgt_index(tpar, ti, tj, f.tgt, g.tgt)
            sign = -1 if (g.z2_degree % 2 and i % 2) else 1
            tgN = g.tgt.rank0 if tj == 0 else g.tgt.rank1
            for a in range(len(fi)):
                for b in range(len(gj)):
                    for a2 in range(len(fi[0])):
                        for b2 in range(len(gj[0])):
                            fa = fi[a][a2]
                            gb = gj[b][b2]
                            if (entry_is_poly(fa) and fa.is_zero()) or (entry_is_poly(gb) and gb.is_zero()):
                                continue
                            e = _entry_factor_product(fa, gb, d)
                            if sign == -1:
                                e = e * -1 if entry_is_poly(e) else e.scaled(-1)
                            out[row_off + a * tgN + b][col_off + a2 * rj + b2] = e
            col_off += ri * rj
        return out

    return MFMorphism(src, tgt, deg, build(0), build(1))


def direct_sum_mf(A: MatrixBifact, B: MatrixBifact) -> MatrixBifact:
    if not (A.d == B.d and A.left == B.left and A.right == B.right and A.int_vars == B.int_vars):
        raise VariableMismatch("direct sum needs identical variable data")
    d = A.d

    def block(PA, PB):
        rows = len(PA) + len(PB)
        cols = len(PA[0]) + len(PB[0])
        out = _zero_matrix(rows, cols, d)
        for i, row in enumerate(PA):
            for j, e in enumerate(row):
                out[i][j] = e
        for i, row in enumerate(PB):
            for j, e in enumerate(row):
                out[len(PA) + i][len(PA[0]) + j] = e
        return out

    tags0 = tuple(("L",) + t for t in A.tags0) + tuple(("R",) + t for t in B.tags0)
    tags1 = tuple(("L",) + t for t in A.tags1) + tuple(("R",) + t for t in B.tags1)
    return MatrixBifact(d, A.left, A.right, A.int_vars, block(A.d1, B.d1), block(A.d0, B.d0), tags0, tags1)


def sum_morphism(f: MFMorphism, g: MFMorphism) -> MFMorphism:
    """(f, g): src(f) (+) src(g) -> common target."""
    assert f.tgt.same_shape(g.tgt) and f.z2_degree == g.z2_degree == 0
    src = direct_sum_mf(f.src, g.src)
    d = f.d
    f0 = [rf + rg for rf, rg in zip(f.f0, g.f0)]
    f1 = [rf + rg for rf, rg in zip(f.f1, g.f1)]
    return MFMorphism(src, f.tgt, 0, f0, f1)


def reassoc(A: MatrixBifact, B: MatrixBifact) -> MFMorphism:
    """The permutation isomorphism between two bracketings of one tensor word."""
    if set(A.tags0) != set(B.tags0) or set(A.tags1) != set(B.tags1):
        raise VariableMismatch("objects are not bracketings of the same word")
    d = A.d
    one, zero = MPoly.one(d), MPoly.zero(d)

    def perm(ta, tb):
        out = [[zero for _ in ta] for _ in tb]
        for j, t in enumerate(ta):
            out[tb.index(t)][j] = one
        return out

    return MFMorphism(A, B, 0, perm(A.tags0, B.tags0), perm(A.tags1, B.tags1))


# -- unit isomorphisms ----------------------------------------------------------


def unit_isos(M: MatrixBifact, mid: str = "y1") -> tuple[MFMorphism, MFMorphism]:
    """lambda_M: I (x) M -> M and rho_M: M (x) I -> M (middle-variable substitutions)."""
    d = M.d
    if mid in M.all_vars:
        raise VariableMismatch(f"middle name {mid} already used")
    # lambda: I(left, mid) (x) M(mid, ...) -> M
    I_left = unit_mf(d, M.left, mid)
    M_shift = M.renamed({M.left: mid})
    IM = tensor_mf(I_left, M_shift)
    sub = LinOp.substitution(d, {mid: (1, M.left)})
    zero = MPoly.zero(d)

    lam0 = [[sub if (i == j) else zero for j in range(IM.rank0)] for i in range(M.rank0)]
    # degree-1 source order: (I1 M0 | I0 M1); only the I0 M1 block maps
    lam1 = [[sub if (j == M.rank0 + i) else zero for j in range(IM.rank1)] for i in range(M.rank1)]
    lam = MFMorphism(IM, M, 0, lam0, lam1)

    I_right = unit_mf(d, mid, M.right)
    M_shift2 = M.renamed({M.right: mid})
    MI = tensor_mf(M_shift2, I_right)
    sub2 = LinOp.substitution(d, {mid: (1, M.right)})
    rho0 = [[sub2 if (i == j) else zero for j in range(MI.rank0)] for i in range(M.rank0)]
    rho1 = [[sub2 if (i == j) else zero for j in range(MI.rank1)] for i in range(M.rank1)]
    rho = MFMorphism(MI, M, 0, rho0, rho1)
    return lam, rho


def unit_sections(M: MatrixBifact, mid: str = "y1") -> tuple[MFMorphism, MFMorphism]:
    """Strict polynomial sections: lambda . sec_l = 1_M and rho . sec_r = 1_M."""
    if M.rank0 != 1 or M.rank1 != 1:
        raise RankUnsupported("sections are implemented for rank-(1,1) objects")
    d = M.d
    lam, rho = unit_isos(M, mid)
    one = MPoly.one(d)
    m1 = M.d1[0][0]
    m0 = M.d0[0][0]
    # section of lambda: M -> I(left, mid) (x) M(mid, right)
    m1_mid = m1.subs({M.left: MPoly.var(d, mid)})
    m0_mid = m0.subs({M.left: MPoly.var(d, mid)})
    dq = lambda p, pm: exact_div(p - pm, MPoly.var(d, M.left) - MPoly.var(d, mid))
    sec_l = MFMorphism(M, lam.src, 0, [[one], [dq(m0, m0_mid)]], [[dq(m1, m1_mid)], [one]])
    # section of rho: M -> M(left, mid) (x) I(mid, right)
    m1_mid2 = m1.subs({M.right: MPoly.var(d, mid)})
    m0_mid2 = m0.subs({M.right: MPoly.var(d, mid)})
    dq2 = lambda pm, p: exact_div(pm - p, MPoly.var(d, mid) - MPoly.var(d, M.right))
    sec_r = MFMorphism(M, rho.src, 0, [[one], [dq2(m0_mid2, m0)]], [[one], [-dq2(m1_mid2, m1)]])
    return sec_l, sec_r


# -- duals, evaluation, coevaluation ----------------------------------------------


def dual_rank1(M: MatrixBifact) -> MatrixBifact:
    if M.rank0 != 1 or M.rank1 != 1 or M.int_vars:
        raise RankUnsupported("duals are implemented for rank-(1,1) objects")
    d = M.d
    swap = {M.left: MPoly.var(d, M.right), M.right: MPoly.var(d, M.left)}
    d1 = -(M.d1[0][0].subs(swap))
    d0 = M.d0[0][0].subs(swap)
    return MatrixBifact(d, M.left, M.right, (), [[d1]], [[d0]], M.tags0, M.tags1)


def perm_dual_iso(d: int, S, left="x", right="y", l: int = 1) -> MFMorphism:
    """The cycle P_{-S} -> (P_S)^+ with components ((-1)^{|S|+1} prod eta^{-lj}, 1)."""
    S = {s % d for s in S}
    src = perm_mf(d, {(-s) % d for s in S}, left, right, l)
    tgt = dual_rank1(perm_mf(d, S, left, right, l))
    c = CycNum.one(d)
    for j in S:
        c = c * eta_power(d, -j, l)
    sign = 1 if (len(S) + 1) % 2 == 0 else -1
    f1 = MPoly.constant(d, c * sign)
    return MFMorphism(src, tgt, 0, [[MPoly.one(d)]], [[f1]])


def g_residue(M: MatrixBifact, f: MPoly) -> MPoly:
    """The residue extraction G_M(f), a polynomial in x and z."""
    if M.rank0 != 1 or M.rank1 != 1:
        raise RankUnsupported("g_residue needs a rank-(1,1) object")
    d = M.d
    d0yz = M.d0[0][0].subs({M.left: MPoly.var(d, "y"), M.right: MPoly.var(d, "z")})
    x, y, z = (MPoly.var(d, v) for v in "xyz")
    prem = (x - z - y) * d0yz
    return ResidueCore(prem, "y", "z", CycNum.one(d), d).apply(f)


def ev_coev(M: MatrixBifact) -> tuple[MFMorphism, MFMorphism]:
    """Evaluation M+ (x) M -> I and coevaluation I -> M (x) M+ (variables x,y,z)."""
    if M.rank0 != 1 or M.rank1 != 1:
        raise RankUnsupported("duality maps need a rank-(1,1) object")
    d = M.d
    x, y, z = (MPoly.var(d, v) for v in "xyz")
    Mxy = M.renamed(dict(zip((M.left, M.right), ("x", "y"))))
    Myz = M.renamed(dict(zip((M.left, M.right), ("y", "z"))))
    dual_xy = dual_rank1(Mxy)
    dual_yz = dual_rank1(Mxy).renamed({"x": "y", "y": "z"})
    I_xz = unit_mf(d, "x", "z")

    d1 = Mxy.d1[0][0]
    d0 = Mxy.d0[0][0]
    d1_yz = d1.subs({"x": y, "y": z})
    d0_yz = d0.subs({"x": y, "y": z})
    d1_yx = d1.subs({"x": y, "y": x})

    # ev: dual(x,y) (x) M(y,z) -> I(x,z)
    src_ev = tensor_mf(dual_xy, Myz)
    prem = (x - z - y) * d0_yz
    G = LinOp(d, [Term(MPoly.one(d), Subst.identity(d), ResidueCore(prem, "y", "z", CycNum.one(d), d))])
    A = G.scaled(-1)
    B = LinOp(
        d,
        [Term(MPoly.one(d), Subst.identity(d), ResidueCore(prem * d1_yx, "y", "z", CycNum.one(d), d), den=x - z)],
    )
    C = LinOp.substitution(d, {"y": None}, coeff=-1)
    ev = MFMorphism(src_ev, I_xz, 0, [[A, MPoly.zero(d)]], [[B, C]])

    # coev: I(x,z) -> M(x,y) (x) dual(y,z)
    tgt_coev = tensor_mf(Mxy, dual_yz)
    col0 = [
        [exact_div(d1 - d1.subs({"x": z}), x - z)],
        [exact_div(d0 - d0.subs({"x": z}), x - z)],
    ]
    col1 = [[MPoly.one(d)], [MPoly.one(d)]]
    coev = MFMorphism(I_xz, tgt_coev, 0, col0, col1)
    return ev, coev


def duality_un(d: int, l: int = 1):
    """(u, n, T, t): the self-dual generator T and its duality maps.

    u = ev_T . (t (x) 1): T(x,y) (x) T(y,z) -> I(x,z)
    n = (1 (x) t^{-1}) . coev_T : I(x,z) -> T(x,y) (x) T(y,z)
    """
    if d % 2 == 0:
        raise EvenModulus("the self-dual consecutive pair needs odd d")
    a = (d - 1) // 2
    S = {a, a + 1}
    T = perm_mf(d, S, "x", "y", l)
    t = perm_dual_iso(d, S, "x", "y", l)  # source is P_{-S} = T
    assert t.src == T
    ev, coev = ev_coev(T)
    Tyz = T.renamed({"x": "y", "y": "z"})
    tinv0 = [[exact_div(MPoly.one(d), t.f0[0][0])]]
    tinv1 = [[MPoly.constant(d, t.f1[0][0].constant_value().inverse())]]
    t_yz = MFMorphism(Tyz, t.tgt.renamed({"x": "y", "y": "z"}), 0,
                      [[t.f0[0][0]]], [[t.f1[0][0]]])
    tinv_yz = MFMorphism(t_yz.tgt, Tyz, 0, tinv0, tinv1)
    u = ev.compose(tensor_morphism(t, identity_morphism(Tyz)))
    n = tensor_morphism(identity_morphism(T), tinv_yz).compose(coev)
    return u, n, T, t


# -- Z_d twists -------------------------------------------------------------------


def twist_mf(M: MatrixBifact, a: int, b: int, l: int = 1) -> MatrixBifact:
    """((a)M(b)) in honest form: left var scaled by eta^{la}, right by eta^{-lb}."""
    d = M.d
    sub = {
        M.left: MPoly.var(d, M.left) * eta_power(d, a, l),
        M.right: MPoly.var(d, M.right) * eta_power(d, -b, l),
    }
    tw = lambda e: e.subs(sub)
    return MatrixBifact(
        d, M.left, M.right, M.int_vars,
        [[tw(e) for e in row] for row in M.d1],
        [[tw(e) for e in row] for row in M.d0],
        M.tags0, M.tags1,
    )


def diag_twist_mf(M: MatrixBifact, a: int, l: int = 1) -> MatrixBifact:
    """((a)M(-a)) with every variable scaled: the per-factor form for tensor words."""
    d = M.d
    e = eta_power(d, a, l)
    sub = {v: MPoly.var(d, v) * e for v in M.all_vars}
    tw = lambda q: q.subs(sub)
    return MatrixBifact(
        d, M.left, M.right, M.int_vars,
        [[tw(q) for q in row] for row in M.d1],
        [[tw(q) for q in row] for row in M.d0],
        M.tags0, M.tags1,
    )


def twist_morphism(f: MFMorphism, a: int, l: int = 1) -> MFMorphism:
    """Apply the diagonal twist functor ((a)(-)(-a)) to a morphism (honest form)."""
    d = f.d
    e = eta_power(d, a, l)
    einv = eta_power(d, -a, l)
    out_map = Subst(d, {v: (e, v) for v in f.tgt.all_vars})
    in_map = Subst(d, {v: (einv, v) for v in f.src.all_vars})

    def conv(entry):
        return _simplify_entry(as_linop(entry, d).conjugated(out_map, in_map))

    return MFMorphism(
        diag_twist_mf(f.src, a, l), diag_twist_mf(f.tgt, a, l), f.z2_degree,
        [[conv(x) for x in row] for row in f.f0],
        [[conv(x) for x in row] for row in f.f1],
    )


def s_iso(d: int, S, a: int, b: int, left="x", right="y", l: int = 1) -> MFMorphism:
    """The twist comparison P_{S-a-b} -> ((a)P_S(b)), components (1, eta^{-l|S|a})."""
    S = {s % d for s in S}
    src = perm_mf(d, {(s - a - b) % d for s in S}, left, right, l)
    tgt = twist_mf(perm_mf(d, S, left, right, l), a, b, l)
    f1 = MPoly.constant(d, eta_power(d, -len(S) * a, l))
    return MFMorphism(src, tgt, 0, [[MPoly.one(d)]], [[f1]])


def chi(d: int, a: int, left="x", right="y", l: int = 1) -> MatrixBifact:
    """chi(a) = ((a)I): d1 = eta^{la} left - right."""
    return twist_mf(unit_mf(d, left, right), a, 0, l)


def mu(d: int, a: int, b: int, l: int = 1) -> MFMorphism:
    """mu_{a,b} = ((a)(lambda_{(b)I})): chi(a) (x) chi(b) -> chi(a+b).

    In honest form it projects to the I0-summands and substitutes the middle
    variable by eta^{la} * left.
    """
    ca = chi(d, a, "x", "y1", l)
    cb = chi(d, b, "y1", "z", l)
    src = tensor_mf(ca, cb)
    tgt = chi(d, (a + b) % d, "x", "z", l)
    sub = LinOp.substitution(d, {"y1": (eta_power(d, a, l), "x")})
    zero = MPoly.zero(d)
    f0 = [[sub, zero]]
    f1 = [[zero, sub]]
    return MFMorphism(src, tgt, 0, f0, f1)


# -- duality zig-zags --------------------------------------------------------------


def zigzag_morphisms(d: int, l: int = 1) -> tuple[MFMorphism, MFMorphism]:
    """Both zig-zag composites for (T, u, n), reduced to endomorphisms of T.

    The unit isomorphisms are invertible only up to homotopy, so the
    composites are precomposed with the strict polynomial sections of
    lambda/rho (certified homotopy inverses); each returned morphism is a
    T -> T endomorphism which the duality identities make homotopic to 1_T.
    """
    S = {(d - 1) // 2, (d + 1) // 2}
    T_xz = perm_mf(d, S, "x", "z", l)
    T_xy1 = perm_mf(d, S, "x", "y1", l)
    T_y2z = perm_mf(d, S, "y2", "z", l)
    u, n, _, _ = duality_un(d, l)

    n_right = n.renamed({"x": "y1", "y": "y2"})  # I(y1,z) -> T(y1,y2) (x) T(y2,z)
    u_left = u.renamed({"y": "y1", "z": "y2"})  # T(x,y1) (x) T(y1,y2) -> I(x,y2)
    n_left = n.renamed({"y": "y1", "z": "y2"})  # I(x,y2) -> T(x,y1) (x) T(y1,y2)
    u_right = u.renamed({"x": "y1", "y": "y2"})  # T(y1,y2) (x) T(y2,z) -> I(y1,z)

    lam1, rho1 = unit_isos(T_xz, mid="y1")
    lam2, rho2 = unit_isos(T_xz, mid="y2")
    sec_l2, _ = unit_sections(T_xz, mid="y2")
    _, sec_r1 = unit_sections(T_xz, mid="y1")

    # zz2 = lambda . (u (x) 1) . assoc . (1 (x) n) . sec_rho
    step_a = tensor_morphism(identity_morphism(T_xy1), n_right)
    step_b = tensor_morphism(u_left, identity_morphism(T_y2z))
    zz2 = lam2.compose(step_b).compose(reassoc(step_a.tgt, step_b.src)).compose(step_a).compose(sec_r1)

    # zz1 = rho . (1 (x) u) . assoc^{-1} . (n (x) 1) . sec_lambda
    step_c = tensor_morphism(n_left, identity_morphism(T_y2z))
    step_d = tensor_morphism(identity_morphism(T_xy1), u_right)
    zz1 = rho1.compose(step_d).compose(reassoc(step_c.tgt, step_d.src)).compose(step_c).compose(sec_l2)
    return zz1, zz2
