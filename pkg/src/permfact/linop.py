"""Exact linear operators used as matrix-morphism entries.

Most morphism components between bifactorisations are plain polynomial
multiplications, but the unit isomorphisms substitute the shared internal
variable into an external one, and the evaluation maps extract a residue-type
coefficient.  Both are linear over the external pair, and together with
polynomial multiplication they close under every composition this package
performs.  An operator is a finite sum of terms

    f  |->  num * phi( core(f) ) / den

where phi is a monomial substitution homomorphism (each variable goes to
scalar * variable, possibly to 0) and core is the optional residue extractor

    core(f) = sum_{m >= 0} (injc*inj)^{step*m} * coeff_elim(prem * f, step*(m+1)).

Normal form: prem is reduced modulo elim^step - (injc*inj)^step; the quotient
telescopes to an evaluation at elim = 0.  Equality of operators is decided on
the normal form, with a sound fallback that samples monomials up to the exact
quasi-periodicity bound (every term scales by a fixed multiplier when any one
variable's exponent grows by `step`, so a Vandermonde argument makes the
sampled grid conclusive).
"""

from __future__ import annotations

from fractions import Fraction

from .cyclofield import CycNum
from .polyring import MPoly, exact_div

__all__ = ["Subst", "ResidueCore", "Term", "LinOp", "LinOpCompositionError", "as_linop", "entry_is_poly"]


class LinOpCompositionError(RuntimeError):
    pass


class Subst:
    """Monomial substitution homomorphism: each var maps to c*w or to 0."""

    __slots__ = ("d", "mapping")

    def __init__(self, d: int, mapping: dict):
        clean = {}
        one = CycNum.one(d)
        for v, img in mapping.items():
            if img is None:
                clean[v] = None
                continue
            c, w = img
            if not isinstance(c, CycNum):
                c = CycNum.from_rational(d, c)
            if c.is_zero():
                clean[v] = None
            elif not (w == v and c == one):
                clean[v] = (c, w)
        self.d = d
        self.mapping = clean

    @staticmethod
    def identity(d: int) -> "Subst":
        return Subst(d, {})

    def is_identity(self) -> bool:
        return not self.mapping

    def image_of(self, v: str):
        """(scalar, var) image of v, or None when v maps to 0."""
        if v in self.mapping:
            return self.mapping[v]
        return (CycNum.one(self.d), v)

    def apply(self, p: MPoly) -> MPoly:
        if self.is_identity() or p.is_zero() or not any(v in self.mapping for v in p.vars):
            return p
        sub = {}
        for v in p.vars:
            if v not in self.mapping:
                continue
            img = self.mapping[v]
            if img is None:
                sub[v] = MPoly.zero(self.d)
            else:
                c, w = img
                sub[v] = MPoly.var(self.d, w) * c
        return p.subs(sub)

    def compose(self, other: "Subst") -> "Subst":
        """self after other."""
        out = {}
        for v, img in other.mapping.items():
            if img is None:
                out[v] = None
            else:
                c, w = img
                img2 = self.image_of(w)
                out[v] = None if img2 is None else (c * img2[0], img2[1])
        for v, img in self.mapping.items():
            if v not in out and v not in other.mapping:
                out[v] = img
        return Subst(self.d, out)

    def key(self):
        return tuple(
            sorted((v, None if img is None else (img[0], img[1])) for v, img in self.mapping.items())
        )

    def touches(self, v: str) -> bool:
        return v in self.mapping

    def maps_onto(self, var: str) -> bool:
        """True if some explicitly mapped variable lands on `var`."""
        return any(img is not None and img[1] == var for img in self.mapping.values())

    def restricted_without(self, v: str) -> "Subst":
        return Subst(self.d, {w: img for w, img in self.mapping.items() if w != v})

    def inverse_scaling(self) -> "Subst":
        """Inverse, defined when every image is a nonzero scaling of the same var."""
        out = {}
        for v, img in self.mapping.items():
            if img is None or img[1] != v:
                raise LinOpCompositionError(f"{self!r} is not a pure scaling")
            out[v] = (img[0].inverse(), v)
        return Subst(self.d, out)

    def __repr__(self):
        if self.is_identity():
            return "id"
        bits = []
        for v, img in sorted(self.mapping.items()):
            bits.append(f"{v}->0" if img is None else f"{v}->({img[0]!r})*{img[1]}")
        return "{" + ", ".join(bits) + "}"


class ResidueCore:
    """f |-> sum_m (injc*inj)^{step*m} coeff_elim(prem*f, step*(m+1))."""

    __slots__ = ("prem", "elim", "inj", "injc", "step")

    def __init__(self, prem: MPoly, elim: str, inj: str, injc: CycNum, step: int):
        assert elim != inj
        self.prem = prem
        self.elim = elim
        self.inj = inj
        self.injc = injc
        self.step = step

    def modulus_rhs(self) -> MPoly:
        return (MPoly.var(self.prem.d, self.inj) * self.injc) ** self.step

    def apply(self, f: MPoly) -> MPoly:
        d = f.d
        g = self.prem * f
        out = MPoly.zero(d)
        if g.is_zero():
            return out
        parts = g.coeff_dict_in(self.elim)
        top = max(parts)
        inj = MPoly.var(d, self.inj) * self.injc
        m = 0
        while self.step * (m + 1) <= top:
            c = parts.get(self.step * (m + 1))
            if c is not None:
                out = out + inj ** (self.step * m) * c
            m += 1
        return out

    def key(self):
        return (self.elim, self.inj, self.injc, self.step)

    def output_vars(self):
        vars = {self.inj}
        vars.update(v for v in self.prem.vars if v != self.elim)
        return vars


class Term:
    """f |-> num * phi(core(f)) / den, with core optional."""

    __slots__ = ("num", "den", "phi", "core")

    def __init__(self, num: MPoly, phi: Subst, core: ResidueCore | None = None, den: MPoly | None = None):
        self.num = num
        self.phi = phi
        self.core = core
        self.den = den if den is not None else MPoly.one(num.d)

    def apply_num(self, f: MPoly) -> MPoly:
        out = self.core.apply(f) if self.core is not None else f
        return self.num * self.phi.apply(out)

    def output_free_of(self, var: str) -> bool:
        """True if no input can produce `var` in this term's image."""
        if var in self.num.vars:
            return False
        if self.phi.maps_onto(var):
            return False
        consumed = self.core is not None and self.core.elim == var
        if self.core is not None and not consumed:
            img = self.phi.image_of(self.core.inj)
            if img is not None and img[1] == var:
                return False
            for v in self.core.prem.vars:
                if v == self.core.elim:
                    continue
                img = self.phi.image_of(v)
                if img is not None and img[1] == var:
                    return False
        return consumed or (self.phi.touches(var) and not self.phi.maps_onto(var))

    def _cancelled(self) -> "Term":
        if self.den.is_constant():
            c = self.den.constant_value()
            if c == CycNum.one(self.num.d):
                return self
            return Term(self.num * c.inverse(), self.phi, self.core, None)
        try:
            num = exact_div(self.num, self.den)
        except Exception:
            return self
        return Term(num, self.phi, self.core, None)

    def normalized(self) -> list["Term"]:
        """Reduce prem modulo elim^step - (injc*inj)^step; split the telescoped part."""
        if self.num.is_zero():
            return []
        if self.core is None:
            return [self._cancelled()]
        d = self.num.d
        core = self.core
        if core.prem.is_zero():
            return []
        elim = core.elim
        rhs = core.modulus_rhs()
        rem_parts = dict(core.prem.coeff_dict_in(elim))
        quot = MPoly.zero(d)
        while True:
            high = [k for k in rem_parts if k >= core.step and not rem_parts[k].is_zero()]
            if not high:
                break
            k = max(high)
            cur = rem_parts.pop(k)
            lower = k - core.step
            quot = quot + cur * MPoly.var(d, elim) ** lower
            rem_parts[lower] = rem_parts.get(lower, MPoly.zero(d)) + cur * rhs
        rem = MPoly.zero(d)
        for k, c in rem_parts.items():
            rem = rem + c * MPoly.var(d, elim) ** k
        out = []
        if not rem.is_zero():
            out.append(Term(self.num, self.phi, ResidueCore(rem, elim, core.inj, core.injc, core.step), self.den)._cancelled())
        q0 = quot.subs({elim: MPoly.zero(d)}) if elim in quot.vars else quot
        if not q0.is_zero():
            ev = Subst(d, {elim: None})
            out.append(Term(self.num * self.phi.apply(q0), self.phi.compose(ev), None, self.den)._cancelled())
        return out

    def __repr__(self):
        core = "" if self.core is None else f" . Res[{self.core.prem!r}; {self.core.elim}=>{self.core.injc!r}*{self.core.inj}]"
        den = "" if self.den.is_constant() and self.den == MPoly.one(self.num.d) else f" / ({self.den!r})"
        return f"[({self.num!r}) . {self.phi!r}{core}{den}]"


def _compose_terms(t2: Term, t1: Term) -> list[Term]:
    """t2 after t1, rewritten into normal-form terms."""
    d = t1.num.d
    if t2.core is None:
        num = t2.num * t2.phi.apply(t1.num)
        den = t2.den * t2.phi.apply(t1.den)
        return Term(num, t2.phi.compose(t1.phi), t1.core, den).normalized()
    elim = t2.core.elim
    if elim in t1.den.vars:
        raise LinOpCompositionError("denominator carries the eliminated variable")
    # Absorb t1's numerator into the premultiplier; what remains of t1 is
    # phi1(core1(f)) / den1.
    prem = t2.core.prem * t1.num
    stripped = Term(MPoly.one(d), t1.phi, t1.core)
    if stripped.output_free_of(elim):
        # core2 sees an elim-free input: it collapses to its value at 1
        const = ResidueCore(prem, elim, t2.core.inj, t2.core.injc, t2.core.step).apply(MPoly.one(d))
        outer = Term(t2.num * t2.phi.apply(const), t2.phi, None, t2.den)
        return _compose_terms(outer, Term(MPoly.one(d), t1.phi, t1.core, t1.den))
    if t1.core is None:
        img = t1.phi.image_of(elim)
        if img is not None and img[1] == elim:
            # phi1 scales elim (possibly trivially): conjugate it through the core
            s = img[0]
            rest = t1.phi.restricted_without(elim)
            rest_inv = rest.inverse_scaling()
            inv = s.inverse()
            parts = prem.coeff_dict_in(elim)
            prem2 = MPoly.zero(d)
            for k, c in parts.items():
                prem2 = prem2 + rest_inv.apply(c) * inv**k * MPoly.var(d, elim) ** k
            inj_scale = rest.image_of(t2.core.inj)
            if inj_scale is None or inj_scale[1] != t2.core.inj:
                raise LinOpCompositionError("substitution moves the injection variable")
            injc2 = t2.core.injc * s / inj_scale[0]
            core = ResidueCore(prem2, elim, t2.core.inj, injc2, t2.core.step)
            num = t2.num * s**t2.core.step
            return Term(num, t2.phi.compose(rest), core, t2.den * t2.phi.apply(t1.den)).normalized()
        raise LinOpCompositionError(f"unsupported composition through {t1.phi!r}")
    raise LinOpCompositionError("residue core fed by an image still carrying its variable")


class LinOp:
    """A finite sum of Terms; the entry type for non-polynomial morphisms."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms):
        flat: list[Term] = []
        for t in terms:
            flat.extend(t.normalized())
        self.d = d
        self.terms = tuple(self._group(flat))

    @staticmethod
    def _group(terms):
        homs: dict = {}
        cores: dict = {}
        order: list = []
        for t in terms:
            if t.core is None:
                key = ("h", t.phi.key(), t.den)
                if key in homs:
                    prev = homs[key]
                    homs[key] = Term(prev.num + t.num, t.phi, None, t.den)
                else:
                    homs[key] = t
                    order.append(key)
            else:
                key = ("c", t.phi.key(), t.core.key(), t.den, t.num)
                if key in cores:
                    prev = cores[key]
                    core = ResidueCore(prev.core.prem + t.core.prem, t.core.elim, t.core.inj, t.core.injc, t.core.step)
                    cores[key] = Term(t.num, t.phi, core, t.den)
                else:
                    cores[key] = t
                    order.append(key)
        out = []
        for key in order:
            t = homs[key] if key[0] == "h" else cores[key]
            if t.num.is_zero():
                continue
            if t.core is not None and t.core.prem.is_zero():
                continue
            out.append(t)
        return out

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def poly(p: MPoly) -> "LinOp":
        return LinOp(p.d, [Term(p, Subst.identity(p.d))])

    @staticmethod
    def substitution(d: int, mapping: dict, coeff=None) -> "LinOp":
        num = MPoly.one(d) if coeff is None else (coeff if isinstance(coeff, MPoly) else MPoly.constant(d, coeff))
        return LinOp(d, [Term(num, Subst(d, mapping))])

    @staticmethod
    def zero(d: int) -> "LinOp":
        return LinOp(d, [])

    def is_zero_form(self) -> bool:
        return not self.terms

    def as_poly(self) -> MPoly | None:
        """The multiplication polynomial, if this operator is one."""
        if not self.terms:
            return MPoly.zero(self.d)
        if len(self.terms) == 1:
            t = self.terms[0]
            if t.core is None and t.phi.is_identity() and t.den == MPoly.one(self.d):
                return t.num
        return None

    def as_multiplication(self, input_vars) -> MPoly | None:
        """Multiplication polynomial on inputs drawn from `input_vars`.

        Valid when every term is manifestly linear over those variables (no
        substitution touches them and no residue core eliminates one); then
        the operator acts as multiplication by its value at 1.
        """
        one = CycNum.one(self.d)
        for t in self.terms:
            if t.core is not None and t.core.elim in input_vars:
                return None
            for v in input_vars:
                img = t.phi.image_of(v)
                if img is None or img != (one, v):
                    return None
        return self.apply(MPoly.one(self.d))

    # -- algebra -----------------------------------------------------------------

    def __add__(self, other):
        other = as_linop(other, self.d)
        return LinOp(self.d, self.terms + other.terms)

    def __neg__(self):
        return LinOp(self.d, [Term(-t.num, t.phi, t.core, t.den) for t in self.terms])

    def __sub__(self, other):
        other = as_linop(other, self.d)
        return self + (-other)

    def scaled(self, c) -> "LinOp":
        p = c if isinstance(c, MPoly) else MPoly.constant(self.d, c)
        return LinOp(self.d, [Term(t.num * p, t.phi, t.core, t.den) for t in self.terms])

    def compose(self, other) -> "LinOp":
        """self after other."""
        other = as_linop(other, self.d)
        out: list[Term] = []
        for t2 in self.terms:
            for t1 in other.terms:
                out.extend(_compose_terms(t2, t1))
        return LinOp(self.d, out)

    def conjugated(self, out_map: Subst, in_map: Subst) -> "LinOp":
        """out_map . self . in_map (coordinate change by scalings/renames)."""
        left = LinOp(self.d, [Term(MPoly.one(self.d), out_map)])
        right = LinOp(self.d, [Term(MPoly.one(self.d), in_map)])
        return left.compose(self).compose(right)

    def pruned_for_source(self, src_vars) -> "LinOp":
        """Drop substitution assignments for variables no input can contain.

        A term's substitution acts on the residue-core output, whose variables
        lie in (src_vars minus the eliminated one) + the injection variable +
        the premultiplier's variables; assignments outside that set are
        vacuous and only obstruct composition rewrites."""
        terms = []
        for t in self.terms:
            allowed = set(src_vars)
            if t.core is not None:
                allowed.discard(t.core.elim)
                allowed.add(t.core.inj)
                allowed.update(v for v in t.core.prem.vars if v != t.core.elim)
            mapping = {v: img for v, img in t.phi.mapping.items() if v in allowed}
            terms.append(Term(t.num, Subst(self.d, mapping), t.core, t.den))
        return LinOp(self.d, terms)

    def renamed(self, mapping: dict) -> "LinOp":
        """Rename variables throughout (mapping must be injective where applied)."""
        d = self.d

        def rp(p: MPoly) -> MPoly:
            relevant = {v: MPoly.var(d, w) for v, w in mapping.items() if v in p.vars}
            return p.subs(relevant) if relevant else p

        terms = []
        for t in self.terms:
            phi2 = {}
            for v, img in t.phi.mapping.items():
                tgt = None if img is None else (img[0], mapping.get(img[1], img[1]))
                phi2[mapping.get(v, v)] = tgt
            core2 = None
            if t.core is not None:
                core2 = ResidueCore(
                    rp(t.core.prem),
                    mapping.get(t.core.elim, t.core.elim),
                    mapping.get(t.core.inj, t.core.inj),
                    t.core.injc,
                    t.core.step,
                )
            terms.append(Term(rp(t.num), Subst(d, phi2), core2, rp(t.den)))
        return LinOp(d, terms)

    # -- action -----------------------------------------------------------------

    def apply(self, f: MPoly) -> MPoly:
        dens = []
        for t in self.terms:
            if t.den not in dens:
                dens.append(t.den)
        common = MPoly.one(self.d)
        for q in dens:
            common = common * q
        total = MPoly.zero(self.d)
        for t in self.terms:
            total = total + t.apply_num(f) * exact_div(common, t.den)
        if common == MPoly.one(self.d):
            return total
        return exact_div(total, common)

    # -- equality ------------------------------------------------------------------

    def equals(self, other, sample_vars=()) -> bool:
        other = as_linop(other, self.d)
        diff = self - other
        if diff.is_zero_form():
            return True
        return _sampled_zero(diff, sample_vars)

    def degree_shift(self) -> Fraction | None:
        """Uniform polynomial-degree shift of the operator, None if mixed."""
        shifts = set()
        for t in self.terms:
            if not (t.num.is_homogeneous() and t.den.is_homogeneous()):
                return None
            s = t.num.degree() - t.den.degree()
            if t.core is not None:
                parts = t.core.prem.coeff_dict_in(t.core.elim)
                wdeg = {k + c.degree() for k, c in parts.items()}
                if len(wdeg) != 1:
                    return None
                s += wdeg.pop() - t.core.step
            shifts.add(s)
        if len(shifts) != 1:
            return None
        return Fraction(shifts.pop())

    def __repr__(self):
        return " + ".join(repr(t) for t in self.terms) if self.terms else "0op"


def as_linop(entry, d: int) -> LinOp:
    if isinstance(entry, LinOp):
        return entry
    if isinstance(entry, MPoly):
        return LinOp.poly(entry)
    if isinstance(entry, (int, CycNum, Fraction)):
        return LinOp.poly(MPoly.constant(d, entry))
    raise TypeError(f"cannot view {entry!r} as an operator")


def entry_is_poly(entry) -> bool:
    return isinstance(entry, MPoly)


def _sampled_zero(op: LinOp, sample_vars) -> bool:
    """Exact zero test on the quasi-periodicity grid.

    For each variable v every term scales by a fixed multiplier when the
    exponent of v grows by `step` (phi(v)^step for substitution terms,
    (injc*inj)^step for the eliminated variable of a residue term), valid
    for exponents >= 1.  Per residue class mod step the sampled sequence is
    a generalized power sum with at most n_v distinct nonzero ratios, so
    vanishing at exponents 0..step*n_v per variable is conclusive
    (Vandermonde).  Variables no term acts on are skipped: the operator is
    linear over them.
    """
    steps = [t.core.step for t in op.terms if t.core is not None]
    step = max(steps) if steps else 1
    d = op.d
    bounds = {}
    for v in sample_vars:
        touched = False
        muls = set()
        for t in op.terms:
            if t.core is not None and t.core.elim == v:
                touched = True
                muls.add(("res", t.core.injc**t.core.step, t.core.inj))
            else:
                img = t.phi.image_of(v)
                if img is None:
                    touched = True  # zero map: only the exponent-0 slice survives
                elif img != (CycNum.one(d), v):
                    touched = True
                    muls.add(("sub", img[0] ** step, img[1]))
                else:
                    muls.add(("sub", CycNum.one(d), v))
        if touched:
            bounds[v] = step * max(len(muls), 1)
    grid = [MPoly.one(d)]
    for v, bound in bounds.items():
        grid = [g * MPoly.var(d, v) ** k for g in grid for k in range(bound + 1)]
    dens = []
    for t in op.terms:
        if t.den not in dens:
            dens.append(t.den)
    common = MPoly.one(d)
    for q in dens:
        common = common * q
    factors = [exact_div(common, t.den) for t in op.terms]
    for g in grid:
        total = MPoly.zero(d)
        for t, fac in zip(op.terms, factors):
            total = total + t.apply_num(g) * fac
        if not total.is_zero():
            return False
    return True
