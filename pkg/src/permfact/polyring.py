"""Sparse multivariate polynomials over Q(zeta_{2d}).

The variable universe is fixed and ordered: the external pair x < z sandwiches
the internal tensor variables y, y1, y2, ...  Terms are stored as a dict from
exponent tuples to nonzero CycNum coefficients, with unused variables pruned,
so two polynomials are equal iff their (vars, terms) data coincide.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclofield import CycNum, eta_power

__all__ = [
    "MPoly",
    "NotDivisible",
    "poly_arith",
    "exact_div",
    "scale_var",
    "coeff_of",
    "perm_product",
]


class NotDivisible(ArithmeticError):
    pass


def _var_key(name: str):
    if name == "x":
        return (0, 0)
    if name == "z":
        return (2, 0)
    if name == "y":
        return (1, 0)
    if name.startswith("y") and name[1:].isdigit():
        return (1, int(name[1:]))
    return (3, name)


def sort_vars(names) -> tuple:
    return tuple(sorted(set(names), key=_var_key))


class MPoly:
    """Polynomial in named variables with CycNum coefficients."""

    __slots__ = ("d", "vars", "terms", "_hash")

    def __init__(self, d: int, vars: tuple, terms: dict, _normalize: bool = True):
        if _normalize:
            vars, terms = self._prune(vars, terms)
        self.d = d
        self.vars = vars
        self.terms = terms
        self._hash = None

    @staticmethod
    def _prune(vars, terms):
        vars = tuple(vars)
        terms = {e: c for e, c in terms.items() if not c.is_zero()}
        if not terms:
            return (), {}
        used = [i for i in range(len(vars)) if any(e[i] for e in terms)]
        if len(used) != len(vars):
            vars2 = tuple(vars[i] for i in used)
            terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
            return vars2, terms
        return vars, terms

    # -- constructors --------------------------------------------------------

    @staticmethod
    def constant(d: int, value) -> "MPoly":
        c = value if isinstance(value, CycNum) else CycNum.from_rational(d, value)
        return MPoly(d, (), {(): c})

    @staticmethod
    def zero(d: int) -> "MPoly":
        return MPoly(d, (), {})

    @staticmethod
    def one(d: int) -> "MPoly":
        return MPoly.constant(d, 1)

    @staticmethod
    def var(d: int, name: str, power: int = 1) -> "MPoly":
        if power == 0:
            return MPoly.one(d)
        return MPoly(d, (name,), {(power,): CycNum.one(d)})

    # -- plumbing --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self) -> CycNum:
        if self.is_zero():
            return CycNum.zero(self.d)
        if self.vars:
            raise ValueError(f"{self} is not constant")
        return self.terms[()]

    def _aligned(self, other: "MPoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        vars = sort_vars(self.vars + other.vars)
        return vars, self._embed(vars), other._embed(vars)

    def _embed(self, vars: tuple) -> dict:
        pos = {v: i for i, v in enumerate(vars)}
        idx = [pos[v] for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(vars)
            for i, p in zip(idx, e):
                e2[i] = p
            out[tuple(e2)] = c
        return out

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction, CycNum)):
            return MPoly.constant(self.d, other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vars, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            if e in out:
                out[e] = out[e] + c
            else:
                out[e] = c
        return MPoly(self.d, vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.d, self.vars, {e: -c for e, c in self.terms.items()}, _normalize=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return MPoly.zero(self.d)
        vars, a, b = self._aligned(other)
        n = len(vars)
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(e1[i] + e2[i] for i in range(n))
                c = c1 * c2
                if e in out:
                    out[e] = out[e] + c
                else:
                    out[e] = c
        return MPoly(self.d, vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MPoly.one(self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.d == other.d and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.d, self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- structure ---------------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, v: str) -> int:
        if v not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(v)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        if self.is_zero():
            return True
        degs = {sum(e) for e in self.terms}
        return len(degs) == 1

    def coeff_dict_in(self, v: str) -> dict:
        """Decompose along v: {k: coefficient of v^k, an MPoly in the rest}."""
        if v not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(v)
        rest = self.vars[:i] + self.vars[i + 1 :]
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + e[i + 1 :]
            bucket = out.setdefault(k, {})
            bucket[e2] = bucket.get(e2, CycNum.zero(self.d)) + c
        return {k: MPoly(self.d, rest, t) for k, t in out.items()}

    def subs(self, mapping: dict) -> "MPoly":
        """Substitute variables by polynomials (or scalars)."""
        out = MPoly.zero(self.d)
        images = {}
        for v, img in mapping.items():
            images[v] = img if isinstance(img, MPoly) else MPoly.constant(self.d, img)
        for e, c in self.terms.items():
            term = MPoly.constant(self.d, c)
            for v, p in zip(self.vars, e):
                if p == 0:
                    continue
                factor = images.get(v, MPoly.var(self.d, v))
                term = term * factor**p
            out = out + term
        return out

    def monomials(self):
        for e, c in self.terms.items():
            yield dict(zip(self.vars, e)), c

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{v}^{p}" if p > 1 else v for v, p in zip(self.vars, e) if p
            )
            cs = repr(c)
            parts.append(f"({cs})*{mono}" if mono else f"({cs})")
        return " + ".join(parts)


# -- module operations -------------------------------------------------------------


def poly_arith(f: MPoly, g: MPoly, op: str) -> MPoly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def _lead(terms, vars):
    # graded lexicographic leading exponent
    return max(terms, key=lambda e: (sum(e), e))


def exact_div(f: MPoly, g: MPoly) -> MPoly:
    """The h with g*h = f, or NotDivisible."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return MPoly.zero(f.d)
    vars = sort_vars(f.vars + g.vars)
    rem = dict(f._embed(vars))
    gt = g._embed(vars)
    glead = _lead(gt, vars)
    gcoef = gt[glead]
    quot: dict = {}
    n = len(vars)
    while rem:
        rlead = _lead(rem, vars)
        qe = tuple(rlead[i] - glead[i] for i in range(n))
        if any(p < 0 for p in qe):
            raise NotDivisible(f"{f!r} is not divisible by {g!r}")
        qc = rem[rlead] / gcoef
        quot[qe] = qc
        for e, c in gt.items():
            te = tuple(e[i] + qe[i] for i in range(n))
            nc = rem.get(te, CycNum.zero(f.d)) - qc * c
            if nc.is_zero():
                rem.pop(te, None)
            else:
                rem[te] = nc
    return MPoly(f.d, vars, quot)


def scale_var(f: MPoly, v: str, c) -> MPoly:
    if not isinstance(c, CycNum):
        c = CycNum.from_rational(f.d, c)
    if v not in f.vars:
        return f
    i = f.vars.index(v)
    out = {}
    for e, coeff in f.terms.items():
        out[e] = coeff * c ** e[i]
    return MPoly(f.d, f.vars, out)


def coeff_of(f: MPoly, v: str, k: int) -> MPoly:
    if k < 0:
        raise ValueError("k must be >= 0")
    return f.coeff_dict_in(v).get(k, MPoly.zero(f.d))


def perm_product(d: int, S, u: str, v: str, l: int = 1) -> MPoly:
    """prod_{j in S} (u - eta^{lj} v); the empty product is 1."""
    out = MPoly.one(d)
    uu = MPoly.var(d, u)
    vv = MPoly.var(d, v)
    for j in sorted(s % d for s in S):
        out = out * (uu - vv * eta_power(d, j, l))
    return out


def difference_quotient(f: MPoly, v: str, w: str) -> MPoly:
    """(f - f[v := w]) / (v - w), always a polynomial."""
    num = f - f.subs({v: MPoly.var(f.d, w)})
    den = MPoly.var(f.d, v) - MPoly.var(f.d, w)
    return exact_div(num, den)
