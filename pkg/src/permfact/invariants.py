"""Homology of bifactorisations and the homotopy-equation solver.

The isomorphism detector: kill the external pair in the differentials, compute
the homology of the resulting 2-periodic complex over the coefficient field
(no internal variable) or over the univariate polynomial ring K[y] via Smith
normal form (one internal variable).  A degree-zero cycle between two objects
is invertible up to homotopy exactly when the induced map on this homology is
a linear isomorphism.
"""

from __future__ import annotations

from .cyclofield import CycNum
from .linop import as_linop, entry_is_poly
from .mfcore import MatrixBifact, MFMorphism
from .polyring import MPoly

__all__ = [
    "TooManyInternalVariables",
    "UPoly",
    "smith_normal_form",
    "HomologyData",
    "quotient_homology",
    "induced_h",
    "is_homotopy_iso",
    "homotopy_solve",
]


class TooManyInternalVariables(ValueError):
    pass


class UPoly:
    """Univariate polynomial over Q(zeta_{2d}), coefficients low to high."""

    __slots__ = ("d", "coeffs")

    def __init__(self, d: int, coeffs):
        while coeffs and coeffs[-1].is_zero():
            coeffs = coeffs[:-1]
        self.d = d
        self.coeffs = tuple(coeffs)

    @staticmethod
    def zero(d):
        return UPoly(d, ())

    @staticmethod
    def one(d):
        return UPoly(d, (CycNum.one(d),))

    @staticmethod
    def const(d, c):
        if not isinstance(c, CycNum):
            c = CycNum.from_rational(d, c)
        return UPoly(d, (c,))

    @staticmethod
    def monomial(d, k, c=None):
        c = CycNum.one(d) if c is None else c
        return UPoly(d, (CycNum.zero(d),) * k + (c,))

    @staticmethod
    def from_mpoly(p: MPoly, var: str | None) -> "UPoly":
        if p.is_zero():
            return UPoly.zero(p.d)
        extra = [v for v in p.vars if v != var]
        if extra:
            raise ValueError(f"{p!r} involves {extra}, not univariate in {var}")
        if var is None or var not in p.vars:
            return UPoly.const(p.d, p.constant_value())
        parts = p.coeff_dict_in(var)
        top = max(parts)
        coeffs = [CycNum.zero(p.d)] * (top + 1)
        for k, c in parts.items():
            coeffs[k] = c.constant_value()
        return UPoly(p.d, coeffs)

    def to_mpoly(self, var: str) -> MPoly:
        out = MPoly.zero(self.d)
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                out = out + MPoly.var(self.d, var) ** k * c
        return out

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self) -> CycNum:
        return self.coeffs[-1]

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = CycNum.zero(self.d)
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return UPoly(self.d, [x + y for x, y in zip(a, b)])

    def __neg__(self):
        return UPoly(self.d, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CycNum):
            return UPoly(self.d, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UPoly.zero(self.d)
        out = [CycNum.zero(self.d)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return UPoly(self.d, out)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        q = UPoly.zero(self.d)
        r = self
        dn = other.degree()
        lead_inv = other.lead().inverse()
        while not r.is_zero() and r.degree() >= dn:
            k = r.degree() - dn
            c = r.lead() * lead_inv
            term = UPoly.monomial(self.d, k, c)
            q = q + term
            r = r - term * other
        return q, r

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.d == other.d and self.coeffs == other.coeffs

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"({c!r})t^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero())


def _u_identity(n, d):
    return [[UPoly.one(d) if i == j else UPoly.zero(d) for j in range(n)] for i in range(n)]


def _u_matmul(A, B, d):
    if not A or not B:
        return []
    rows, mid, cols = len(A), len(B), len(B[0])
    out = [[UPoly.zero(d) for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for k in range(mid):
            a = A[i][k]
            if a.is_zero():
                continue
            for j in range(cols):
                b = B[k][j]
                if not b.is_zero():
                    out[i][j] = out[i][j] + a * b
    return out


def smith_normal_form(A, d):
    """(S, D, T, Sinv, Tinv) with S*A*T = D diagonal, entries successively dividing."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [row[:] for row in A]
    S = _u_identity(m, d)
    Sinv = _u_identity(m, d)
    T = _u_identity(n, d)
    Tinv = _u_identity(n, d)

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        S[i], S[j] = S[j], S[i]
        for r in Sinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in T:
            r[i], r[j] = r[j], r[i]
        Tinv[i], Tinv[j] = Tinv[j], Tinv[i]

    def row_add(i, j, q):
        # row_i += q * row_j ; Sinv col_j -= q * col_i
        D[i] = [a + q * b for a, b in zip(D[i], D[j])]
        S[i] = [a + q * b for a, b in zip(S[i], S[j])]
        for r in Sinv:
            r[j] = r[j] - q * r[i]

    def col_add(i, j, q):
        # col_i += q * col_j ; Tinv row_j -= q * row_i
        for r in D:
            r[i] = r[i] + q * r[j]
        for r in T:
            r[i] = r[i] + q * r[j]
        Tinv[j] = [a - q * b for a, b in zip(Tinv[j], Tinv[i])]

    def row_scale(i, c):
        D[i] = [a * c for a in D[i]]
        S[i] = [a * c for a in S[i]]
        cinv = c.inverse()
        for r in Sinv:
            r[i] = r[i] * cinv

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if not D[i][j].is_zero():
                        if pivot is None or D[i][j].degree() < D[pivot[0]][pivot[1]].degree():
                            pivot = (i, j)
            if pivot is None:
                break
            if pivot[0] != t:
                row_swap(t, pivot[0])
            if pivot[1] != t:
                col_swap(t, pivot[1])
            clean = True
            for i in range(t + 1, m):
                if D[i][t].is_zero():
                    continue
                q, _ = D[i][t].divmod(D[t][t])
                row_add(i, t, -q)
                if not D[i][t].is_zero():
                    clean = False
            for j in range(t + 1, n):
                if D[t][j].is_zero():
                    continue
                q, _ = D[t][j].divmod(D[t][t])
                col_add(j, t, -q)
                if not D[t][j].is_zero():
                    clean = False
            if not clean:
                continue
            # divisibility of the remaining block
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if not D[i][j].is_zero():
                        _, r = D[i][j].divmod(D[t][t])
                        if not r.is_zero():
                            offender = i
                            break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, UPoly.one(d))
        if not D[t][t].is_zero() and D[t][t].lead() != CycNum.one(d):
            row_scale(t, D[t][t].lead().inverse())
    return S, D, T, Sinv, Tinv


class _ParityHomology:
    """Homology of ker(d_out)/im(d_in) for one parity, with a reduction closure."""

    def __init__(self, d, var, d_out, d_in):
        self.d = d
        self.var = var
        n = len(d_out[0]) if d_out else 0
        self.ambient = n
        S, D, T, Sinv, Tinv = smith_normal_form(d_out, d)
        m = len(d_out)
        diag = [D[i][i] for i in range(min(m, n))]
        self.pivots = [i for i, q in enumerate(diag) if not q.is_zero()]
        self.kernel_idx = [i for i in range(n) if i >= len(diag) or diag[i].is_zero()]
        self.Tinv = Tinv
        self.T = T
        k = len(self.kernel_idx)
        # image of d_in expressed in kernel coordinates
        cols = len(d_in[0]) if d_in else 0
        X = [[UPoly.zero(d) for _ in range(cols)] for _ in range(k)]
        for c in range(cols):
            vec = [d_in[r][c] for r in range(n)]
            w = self._to_coords(vec)
            for a, i in enumerate(self.kernel_idx):
                X[a][c] = w[i]
        S2, D2, T2, S2inv, T2inv = smith_normal_form(X, d)
        self.S2 = S2
        self.S2inv = S2inv
        self.field_mode = var is None
        self.factors = []
        for i in range(k):
            q = D2[i][i] if i < min(len(D2), len(D2[0]) if D2 else 0) else UPoly.zero(d)
            self.factors.append(q)
        if self.field_mode:
            # base ring is the field itself: K/(0) = K, K/(unit) = 0
            self.labels = [(i, 0) for i, q in enumerate(self.factors) if q.is_zero()]
        else:
            if any(q.is_zero() for q in self.factors):
                raise ValueError("homology has a free summand: not finite dimensional")
            self.labels = [(i, e) for i, q in enumerate(self.factors) for e in range(q.degree())]
        self.dims = len(self.labels)

    def _to_coords(self, vec):
        w = []
        for i in range(self.ambient):
            acc = UPoly.zero(self.d)
            for j in range(self.ambient):
                if not self.Tinv[i][j].is_zero() and not vec[j].is_zero():
                    acc = acc + self.Tinv[i][j] * vec[j]
            w.append(acc)
        return w

    def reduce(self, vec) -> list[CycNum]:
        """K-coordinates of the homology class of a cycle vector."""
        w = self._to_coords(vec)
        for i in self.pivots:
            if not w[i].is_zero():
                raise ValueError("vector is not a cycle")
        kc = [w[i] for i in self.kernel_idx]
        u = []
        for row in self.S2:
            acc = UPoly.zero(self.d)
            for a, val in enumerate(kc):
                if not row[a].is_zero() and not val.is_zero():
                    acc = acc + row[a] * val
            u.append(acc)
        out = []
        for (i, e) in self.labels:
            if self.field_mode:
                r = u[i]
                assert r.degree() <= 0
            else:
                _, r = u[i].divmod(self.factors[i])
            c = r.coeffs[e] if e < len(r.coeffs) else CycNum.zero(self.d)
            out.append(c)
        return out

    def basis(self):
        """Cycle representatives of the K-basis, as UPoly vectors."""
        reps = []
        for (i, e) in self.labels:
            kc = [self.S2inv[a][i] * UPoly.monomial(self.d, e) for a in range(len(self.kernel_idx))]
            vec = [UPoly.zero(self.d) for _ in range(self.ambient)]
            for a, idx in enumerate(self.kernel_idx):
                if not kc[a].is_zero():
                    for r in range(self.ambient):
                        if not self.T[r][idx].is_zero():
                            vec[r] = vec[r] + self.T[r][idx] * kc[a]
        # note: T columns at kernel_idx are the kernel basis
            reps.append(vec)
        return reps


class HomologyData:
    """dim H_0, dim H_1 and basis representatives of the reduced complex."""

    def __init__(self, M: MatrixBifact):
        if len(M.int_vars) > 1:
            raise TooManyInternalVariables(f"{M!r} has internal variables {M.int_vars}")
        d = M.d
        var = M.int_vars[0] if M.int_vars else None
        kill = {M.left: MPoly.zero(d), M.right: MPoly.zero(d)}

        def reduce_mat(mat):
            out = []
            for row in mat:
                out.append([UPoly.from_mpoly(e.subs(kill), var) for e in row])
            return out

        self.object = M
        self.var = var
        self.d = d
        self.d1_bar = reduce_mat(M.d1)  # C1 -> C0
        self.d0_bar = reduce_mat(M.d0)  # C0 -> C1
        self.h0 = _ParityHomology(d, var, self.d0_bar, self.d1_bar)
        self.h1 = _ParityHomology(d, var, self.d1_bar, self.d0_bar)

    @property
    def dim_h0(self):
        return self.h0.dims

    @property
    def dim_h1(self):
        return self.h1.dims

    def __repr__(self):
        return f"HomologyData(dims=({self.dim_h0},{self.dim_h1}))"


def quotient_homology(M: MatrixBifact) -> HomologyData:
    return HomologyData(M)


def _apply_reduced_entry(entry, vec_poly, d, kill):
    if entry_is_poly(entry):
        return (entry * vec_poly).subs(kill)
    return as_linop(entry, d).apply(vec_poly).subs(kill)


def induced_h(f: MFMorphism, src_h: HomologyData | None = None, tgt_h: HomologyData | None = None):
    """Matrices of H(f) on (H_0, H_1), as lists of K-coordinate columns."""
    if f.z2_degree != 0:
        raise ValueError("induced map is defined for even morphisms")
    src_h = src_h or HomologyData(f.src)
    tgt_h = tgt_h or HomologyData(f.tgt)
    d = f.d
    kill = {f.tgt.left: MPoly.zero(d), f.tgt.right: MPoly.zero(d), f.src.left: MPoly.zero(d), f.src.right: MPoly.zero(d)}
    out = []
    for par, mat, src_par, tgt_par in ((0, f.f0, src_h.h0, tgt_h.h0), (1, f.f1, src_h.h1, tgt_h.h1)):
        cols = []
        for rep in src_par.basis():
            lifted = [c.to_mpoly(src_h.var) if src_h.var else c.to_mpoly("y1") for c in rep]
            image = []
            for i in range(len(mat)):
                acc = MPoly.zero(d)
                for j, v in enumerate(lifted):
                    if v.is_zero():
                        continue
                    e = mat[i][j]
                    if entry_is_poly(e) and e.is_zero():
                        continue
                    acc = acc + _apply_reduced_entry(e, v, d, kill)
                image.append(acc)
            image_u = [UPoly.from_mpoly(p, tgt_h.var) for p in image]
            cols.append(tgt_par.reduce(image_u))
        out.append(cols)
    return out


def _rank(cols, d) -> int:
    if not cols:
        return 0
    rows = len(cols[0])
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(rows)]
    rank = 0
    col = 0
    for col in range(len(cols)):
        piv = None
        for r in range(rank, rows):
            if not mat[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = mat[rank][col].inverse()
        mat[rank] = [c * inv for c in mat[rank]]
        for r in range(rows):
            if r != rank and not mat[r][col].is_zero():
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def is_homotopy_iso(f: MFMorphism) -> bool:
    """True iff H(f) is a linear isomorphism in both parities."""
    src_h = HomologyData(f.src)
    tgt_h = HomologyData(f.tgt)
    m0, m1 = induced_h(f, src_h, tgt_h)
    if src_h.dim_h0 != tgt_h.dim_h0 or src_h.dim_h1 != tgt_h.dim_h1:
        return False
    return _rank(m0, f.d) == src_h.dim_h0 and _rank(m1, f.d) == src_h.dim_h1


# -- homotopy solving -----------------------------------------------------------


def _monomials_upto(vars, bound, d):
    out = [{}]
    for v in vars:
        out = [dict(m, **{v: k}) for m in out for k in range(bound + 1)]
    return [m for m in out if sum(m.values()) <= bound]


def _monomials_exact(vars, total, d):
    if total < 0:
        return []
    out = [{}]
    for v in vars:
        out = [dict(m, **{v: k}) for m in out for k in range(total + 1)]
    return [m for m in out if sum(m.values()) == total]


def _mono_poly(mono, d):
    p = MPoly.one(d)
    for v, k in mono.items():
        if k:
            p = p * MPoly.var(d, v) ** k
    return p


def default_degree_bound(f: MFMorphism, g: MFMorphism) -> int:
    degs = [0]
    for mat in (f.f0, f.f1, g.f0, g.f1, f.src.d1, f.src.d0, f.tgt.d1, f.tgt.d0):
        for row in mat:
            for e in row:
                if entry_is_poly(e) and not e.is_zero():
                    degs.append(e.degree())
    return max(degs) + f.d


def homotopy_solve(
    f: MFMorphism,
    g: MFMorphism,
    degree_bound: int | None = None,
    entry_degrees=None,
) -> MFMorphism | None:
    """An odd h with f - g = d_tgt . h + h . d_src, or None at this bound.

    Entries of h are polynomials of total degree <= degree_bound; when
    `entry_degrees` = (table0, table1) is given (the graded case), entry
    (i, j) is instead exactly homogeneous of the stated degree, with None
    entries forced to zero, and the outcome is definitive.
    """
    assert f.src.same_shape(g.src) and f.tgt.same_shape(g.tgt)
    d = f.d
    diff = f - g
    if diff.is_zero():
        h0 = [[MPoly.zero(d) for _ in range(f.src.rank0)] for _ in range(f.tgt.rank1)]
        h1 = [[MPoly.zero(d) for _ in range(f.src.rank1)] for _ in range(f.tgt.rank0)]
        return MFMorphism(f.src, f.tgt, 1, h0, h1)
    for mat in (diff.f0, diff.f1):
        for row in mat:
            for e in row:
                if not entry_is_poly(e):
                    raise ValueError("homotopy_solve needs polynomial difference entries")
    vars = tuple(dict.fromkeys(f.src.all_vars + f.tgt.all_vars))
    if degree_bound is None:
        degree_bound = default_degree_bound(f, g)

    unknowns = []
    shapes = {
        0: (f.tgt.rank1, f.src.rank0),
        1: (f.tgt.rank0, f.src.rank1),
    }
    entries: dict = {0: {}, 1: {}}
    for par in (0, 1):
        rows, cols = shapes[par]
        for i in range(rows):
            for j in range(cols):
                if entry_degrees is not None:
                    deg = entry_degrees[par][i][j]
                    monos = [] if deg is None else _monomials_exact(vars, deg, d)
                else:
                    monos = _monomials_upto(vars, degree_bound, d)
                cell = []
                for mono in monos:
                    idx = len(unknowns)
                    unknowns.append((par, i, j, mono))
                    cell.append((mono, idx))
                entries[par][(i, j)] = cell

    nunk = len(unknowns)
    # delta(h)_par = d_tgt . h_par + h_{par+1} . d_src : src_par -> tgt_par
    # rows of the linear system: (par, i, j, monomial) -> coeffs
    system: dict = {}

    def add_lin(par, i, j, mono_key, unk, coeff):
        system.setdefault((par, i, j, mono_key), {})[unk] = (
            system.get((par, i, j, mono_key), {}).get(unk, CycNum.zero(d)) + coeff
        )

    def accumulate(par_out, i, j, poly_entry, cell):
        # contribution poly_entry * (sum over cell unknown monomials)
        for mono, idx in cell:
            mp = _mono_poly(mono, d)
            prod = poly_entry * mp
            for e, c in prod.terms.items():
                key = tuple(sorted(zip(prod.vars, e)))
                add_lin(par_out, i, j, key, idx, c)

    # (delta h)_0 = d1_tgt . h0 + h1 . d0_src   (src0 -> tgt0)
    for i in range(f.tgt.rank0):
        for j in range(f.src.rank0):
            for k in range(f.tgt.rank1):
                e = f.tgt.d1[i][k]
                if not e.is_zero():
                    accumulate(0, i, j, e, entries[0][(k, j)])
            for k in range(f.src.rank1):
                e = f.src.d0[k][j]
                if not e.is_zero():
                    accumulate(0, i, j, e, entries[1][(i, k)])
    # (delta h)_1 = d0_tgt . h1 + h0 . d1_src   (src1 -> tgt1)
    for i in range(f.tgt.rank1):
        for j in range(f.src.rank1):
            for k in range(f.tgt.rank0):
                e = f.tgt.d0[i][k]
                if not e.is_zero():
                    accumulate(1, i, j, e, entries[1][(k, j)])
            for k in range(f.src.rank0):
                e = f.src.d1[k][j]
                if not e.is_zero():
                    accumulate(1, i, j, e, entries[0][(i, k)])

    # right-hand side from diff
    rhs: dict = {}
    for par, mat in ((0, diff.f0), (1, diff.f1)):
        for i, row in enumerate(mat):
            for j, e in enumerate(row):
                if e.is_zero():
                    continue
                for ex, c in e.terms.items():
                    key = tuple(sorted(zip(e.vars, ex)))
                    rhs[(par, i, j, key)] = c

    keys = sorted(set(system) | set(rhs), key=repr)
    rows = []
    for key in keys:
        coeffs = system.get(key, {})
        rows.append((coeffs, rhs.get(key, CycNum.zero(d))))

    solution = _solve_linear(rows, nunk, d)
    if solution is None:
        return None
    h0 = [[MPoly.zero(d) for _ in range(f.src.rank0)] for _ in range(f.tgt.rank1)]
    h1 = [[MPoly.zero(d) for _ in range(f.src.rank1)] for _ in range(f.tgt.rank0)]
    for idx, (par, i, j, mono) in enumerate(unknowns):
        c = solution[idx]
        if c.is_zero():
            continue
        target = h0 if par == 0 else h1
        target[i][j] = target[i][j] + _mono_poly(mono, d) * c
    return MFMorphism(f.src, f.tgt, 1, h0, h1)


def _solve_linear(rows, nunk, d):
    """Solve a sparse linear system over the field; None if inconsistent."""
    dense = [[CycNum.zero(d)] * nunk + [rhs] for coeffs, rhs in rows for _ in [0]]
    for r, (coeffs, _rhs) in enumerate(rows):
        for idx, c in coeffs.items():
            dense[r][idx] = c
    nrows = len(dense)
    pivot_cols = []
    r = 0
    for c in range(nunk):
        piv = None
        for rr in range(r, nrows):
            if not dense[rr][c].is_zero():
                piv = rr
                break
        if piv is None:
            continue
        dense[r], dense[piv] = dense[piv], dense[r]
        inv = dense[r][c].inverse()
        dense[r] = [x * inv for x in dense[r]]
        for rr in range(nrows):
            if rr != r and not dense[rr][c].is_zero():
                factor = dense[rr][c]
                dense[rr] = [a - factor * b for a, b in zip(dense[rr], dense[r])]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    for rr in range(r, nrows):
        if not dense[rr][nunk].is_zero():
            return None
    solution = [CycNum.zero(d)] * nunk
    for row_idx, c in enumerate(pivot_cols):
        solution[c] = dense[row_idx][nunk]
    return solution
