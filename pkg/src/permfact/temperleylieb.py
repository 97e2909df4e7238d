"""Planar Temperley-Lieb calculus and its realisation on bifactorisations.

Diagrams are perfect non-crossing matchings of boundary points (bottom row
left to right, then top row); composition stacks diagrams and converts each
closed loop into a factor of the loop parameter kappa = 2 cos(pi/d).  The
functor into bifactorisations sends k strands to the k-fold product of the
self-dual generator T (left-bracketed, strand variables x, y1, ..., z), a cap
to the evaluation map u, and a cup to the coevaluation map n; the unit
isomorphisms and their strict sections splice the tensor unit in and out.
"""

from __future__ import annotations

from functools import lru_cache

from .cyclofield import CycNum, EvenModulus, kappa, q_root, quantum_int
from .mfcore import (
    MFMorphism,
    duality_un,
    identity_morphism,
    perm_mf,
    reassoc,
    tensor_mf,
    tensor_morphism,
    unit_isos,
    unit_mf,
    unit_sections,
)

__all__ = [
    "StrandMismatch",
    "UndefinedProjector",
    "TLDiagram",
    "TLMorphism",
    "tl_identity",
    "tl_e",
    "cap_diagram",
    "cup_diagram",
    "tl_compose",
    "tl_tensor",
    "tl_trace",
    "tl_dim",
    "enumerate_diagrams",
    "jw",
    "strand_object",
    "evaluate_F",
]


class StrandMismatch(ValueError):
    pass


class UndefinedProjector(ValueError):
    pass


class TLDiagram:
    """Planar matching on n_bottom + n_top boundary points.

    Points 0..n_bottom-1 run along the bottom left to right; points
    n_bottom..n_bottom+n_top-1 along the top left to right.
    """

    __slots__ = ("n_bottom", "n_top", "pairs", "_hash")

    def __init__(self, n_bottom: int, n_top: int, pairs):
        total = n_bottom + n_top
        if total % 2:
            raise ValueError("odd number of boundary points")
        norm = tuple(sorted(tuple(sorted(p)) for p in pairs))
        seen = [q for p in norm for q in p]
        if sorted(seen) != list(range(total)):
            raise ValueError(f"not a perfect matching on {total} points: {norm}")
        self.n_bottom = n_bottom
        self.n_top = n_top
        self.pairs = norm
        self._hash = hash((n_bottom, n_top, norm))
        if not self._planar():
            raise ValueError(f"matching is not planar: {norm}")

    def _circle_pos(self, p: int) -> int:
        # circular boundary order: bottom left-to-right, then top right-to-left
        if p < self.n_bottom:
            return p
        return self.n_bottom + (self.n_top - 1 - (p - self.n_bottom))

    def _planar(self) -> bool:
        chords = [tuple(sorted((self._circle_pos(a), self._circle_pos(b)))) for a, b in self.pairs]
        for i, (a, b) in enumerate(chords):
            for c, e in chords[i + 1 :]:
                if (a < c < b) != (a < e < b):
                    return False
        return True

    def partner(self, p: int) -> int:
        for a, b in self.pairs:
            if a == p:
                return b
            if b == p:
                return a
        raise KeyError(p)

    def __eq__(self, other):
        return (
            isinstance(other, TLDiagram)
            and (self.n_bottom, self.n_top, self.pairs) == (other.n_bottom, other.n_top, other.pairs)
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"TLDiagram({self.n_bottom}->{self.n_top}, {list(self.pairs)})"


def tl_identity_diagram(n: int) -> TLDiagram:
    return TLDiagram(n, n, [(i, n + i) for i in range(n)])


def e_diagram(n: int, i: int) -> TLDiagram:
    """The generator e_i (1-indexed): cap-cup on strands i, i+1."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"e_{i} does not exist on {n} strands")
    pairs = [(i - 1, i), (n + i - 1, n + i)]
    for j in range(n):
        if j not in (i - 1, i):
            pairs.append((j, n + j))
    return TLDiagram(n, n, pairs)


def cap_diagram() -> TLDiagram:
    return TLDiagram(2, 0, [(0, 1)])


def cup_diagram() -> TLDiagram:
    return TLDiagram(0, 2, [(0, 1)])


def _compose_diagrams(f: TLDiagram, g: TLDiagram):
    """(f . g) for g: a -> b, f: b -> c; returns (diagram, loop_count).

    The union of the two matchings decomposes into alternating paths (between
    outer boundary points) and alternating loops inside the interface."""
    if g.n_top != f.n_bottom:
        raise StrandMismatch(f"{g!r} then {f!r}")
    a, b, c = g.n_bottom, g.n_top, f.n_top
    # node labels: 0..a-1 bottom, a..a+b-1 interface, a+b..a+b+c-1 top
    gp = {}
    for p, q in g.pairs:
        gp[p], gp[q] = q, p
    fp = {}
    for p, q in f.pairs:
        u = a + p if p < b else a + b + (p - b)
        v = a + q if q < b else a + b + (q - b)
        fp[u], fp[v] = v, u
    visited = set()
    pairs = []
    for start in list(range(a)) + list(range(a + b, a + b + c)):
        if start in visited:
            continue
        visited.add(start)
        cur, use_g = start, start < a
        while True:
            cur = gp[cur] if use_g else fp[cur]
            use_g = not use_g
            visited.add(cur)
            if cur < a or cur >= a + b:
                break
        pa = start if start < a else start - b
        pb = cur if cur < a else cur - b
        pairs.append((pa, pb))
    loops = 0
    for start in range(a, a + b):
        if start in visited:
            continue
        loops += 1
        cur, use_g = start, True
        while True:
            visited.add(cur)
            cur = gp[cur] if use_g else fp[cur]
            use_g = not use_g
            if cur == start:
                break
    return TLDiagram(a, c, pairs), loops


class TLMorphism:
    """Formal CycNum-combination of diagrams with common source and target."""

    def __init__(self, d: int, src: int, tgt: int, combo: dict, l: int = 1):
        self.d = d
        self.l = l
        self.src = src
        self.tgt = tgt
        self.combo = {dg: c for dg, c in combo.items() if not c.is_zero()}
        for dg in self.combo:
            if (dg.n_bottom, dg.n_top) != (src, tgt):
                raise StrandMismatch(f"{dg!r} in a {src}->{tgt} morphism")

    @staticmethod
    def from_diagram(d: int, dg: TLDiagram, l: int = 1) -> "TLMorphism":
        return TLMorphism(d, dg.n_bottom, dg.n_top, {dg: CycNum.one(d)}, l)

    def __add__(self, other):
        assert (self.src, self.tgt) == (other.src, other.tgt)
        combo = dict(self.combo)
        for dg, c in other.combo.items():
            combo[dg] = combo.get(dg, CycNum.zero(self.d)) + c
        return TLMorphism(self.d, self.src, self.tgt, combo, self.l)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c) -> "TLMorphism":
        if not isinstance(c, CycNum):
            c = CycNum.from_rational(self.d, c)
        return TLMorphism(self.d, self.src, self.tgt, {dg: v * c for dg, v in self.combo.items()}, self.l)

    def compose(self, other: "TLMorphism") -> "TLMorphism":
        """self after other."""
        if other.tgt != self.src:
            raise StrandMismatch(f"{other.tgt} strands into {self.src}")
        kap = kappa(self.d, self.l)
        combo: dict = {}
        for dg1, c1 in other.combo.items():
            for dg2, c2 in self.combo.items():
                dg, loops = _compose_diagrams(dg2, dg1)
                c = c1 * c2 * kap**loops
                combo[dg] = combo.get(dg, CycNum.zero(self.d)) + c
        return TLMorphism(self.d, other.src, self.tgt, combo, self.l)

    def tensor(self, other: "TLMorphism") -> "TLMorphism":
        combo: dict = {}
        for dg1, c1 in self.combo.items():
            for dg2, c2 in other.combo.items():
                nb = dg1.n_bottom + dg2.n_bottom
                nt = dg1.n_top + dg2.n_top
                pairs = []
                for p, q in dg1.pairs:
                    pairs.append(
                        (
                            p if p < dg1.n_bottom else p + dg2.n_bottom,
                            q if q < dg1.n_bottom else q + dg2.n_bottom,
                        )
                    )
                shift_b = dg1.n_bottom
                shift_t = nb + dg1.n_top
                for p, q in dg2.pairs:
                    u = shift_b + p if p < dg2.n_bottom else shift_t + (p - dg2.n_bottom)
                    v = shift_b + q if q < dg2.n_bottom else shift_t + (q - dg2.n_bottom)
                    pairs.append((u, v))
                dg = TLDiagram(nb, nt, pairs)
                combo[dg] = combo.get(dg, CycNum.zero(self.d)) + c1 * c2
        return TLMorphism(self.d, self.src + other.src, self.tgt + other.tgt, combo, self.l)

    def trace(self) -> CycNum:
        """Markov closure: join bottom i to top i, count loops.

        The diagram pairing and the closure pairing are two perfect matchings
        on the same points; their union is a disjoint set of loops."""
        if self.src != self.tgt:
            raise StrandMismatch("trace needs equal strand counts")
        kap = kappa(self.d, self.l)
        total = CycNum.zero(self.d)
        n = self.src
        for dg, c in self.combo.items():
            closure = {}
            for i in range(n):
                closure[i] = n + i
                closure[n + i] = i
            visited = set()
            loops = 0
            for start in range(2 * n):
                if start in visited:
                    continue
                loops += 1
                cur, use_diagram = start, True
                while cur not in visited:
                    visited.add(cur)
                    cur = dg.partner(cur) if use_diagram else closure[cur]
                    use_diagram = not use_diagram
            total = total + c * kap**loops
        return total

    def equals(self, other: "TLMorphism") -> bool:
        return (self - other).combo == {}

    def __repr__(self):
        return f"TLMorphism({self.src}->{self.tgt}, {len(self.combo)} diagrams)"


def tl_identity(d: int, n: int, l: int = 1) -> TLMorphism:
    return TLMorphism.from_diagram(d, tl_identity_diagram(n), l)


def tl_e(d: int, n: int, i: int, l: int = 1) -> TLMorphism:
    return TLMorphism.from_diagram(d, e_diagram(n, i), l)


def tl_compose(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    return f.compose(g)


def tl_tensor(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    return f.tensor(g)


def tl_trace(f: TLMorphism) -> CycNum:
    return f.trace()


def enumerate_diagrams(nb: int, nt: int):
    """All planar matchings with nb bottom and nt top points."""
    total = nb + nt
    if total % 2:
        return []
    # enumerate non-crossing matchings along the circular boundary order
    circle = list(range(nb)) + [nb + nt - 1 - i for i in range(nt)]

    def rec(points):
        if not points:
            return [[]]
        first = points[0]
        out = []
        for idx in range(1, len(points), 2):
            for inside in rec(points[1:idx]):
                for outside in rec(points[idx + 1 :]):
                    out.append([(first, points[idx])] + inside + outside)
        return out

    return [TLDiagram(nb, nt, pairs) for pairs in rec(circle)]


def tl_dim(n: int) -> int:
    return len(enumerate_diagrams(n, n))


def jw(n: int, d: int, l: int = 1) -> TLMorphism:
    """Jones-Wenzl idempotent on n strands at q = zeta_{2d}^{l-adjusted}."""
    q = q_root(d, l)
    p = tl_identity(d, 1, l)
    for k in range(1, n):
        denom = quantum_int(k + 1, q)
        if denom.is_zero():
            raise UndefinedProjector(f"[{k + 1}] vanishes; p_{k + 1} undefined")
        coeff = quantum_int(k, q) * denom.inverse()
        pk1 = p.tensor(tl_identity(d, 1, l))
        correction = pk1.compose(tl_e(d, k + 1, k, l)).compose(pk1)
        p = pk1 - correction.scaled(coeff)
    return p


# -- the functor into bifactorisations ---------------------------------------------


def _strand_vars(m: int):
    if m == 0:
        return ["x", "z"]
    return ["x"] + [f"y{i}" for i in range(1, m)] + ["z"]


@lru_cache(maxsize=None)
def _T_obj(d: int, left: str, right: str, l: int):
    return perm_mf(d, {(d - 1) // 2, (d + 1) // 2}, left, right, l)


def strand_object(d: int, m: int, l: int = 1):
    """T^{(x) m}, left-bracketed, on variables x, y1, ..., y_{m-1}, z."""
    if m == 0:
        return unit_mf(d, "x", "z")
    v = _strand_vars(m)
    out = _T_obj(d, v[0], v[1], l)
    for i in range(1, m):
        out = tensor_mf(out, _T_obj(d, v[i], v[i + 1], l))
    return out


def _fold_tensor(morphs):
    out = morphs[0]
    for f in morphs[1:]:
        out = tensor_morphism(out, f)
    return out


def _finish_layer(F: MFMorphism, src_obj, tgt_obj, rename: dict) -> MFMorphism:
    g = F.compose(reassoc(src_obj, F.src))
    if rename:
        g = g.rename_target(rename)
    return reassoc(g.tgt, tgt_obj).compose(g)


def cap_layer(d: int, m: int, i: int, l: int = 1) -> MFMorphism:
    """id^i (x) u (x) id^{m-i-2} followed by splicing out the unit: T^m -> T^{m-2}."""
    assert m >= 2 and 0 <= i <= m - 2
    v = _strand_vars(m)
    u, n, _, _ = duality_un(d, l)
    u_loc = u.renamed({"x": v[i], "y": v[i + 1], "z": v[i + 2]})
    src_obj = strand_object(d, m, l)
    tgt_obj = strand_object(d, m - 2, l)
    ids = [identity_morphism(_T_obj(d, v[k], v[k + 1], l)) for k in range(m)]
    factors = ids[:i] + [u_loc] + ids[i + 2 :]
    F = _fold_tensor(factors) if len(factors) > 1 else factors[0]
    if m == 2:
        return _finish_layer(F, src_obj, tgt_obj, {})
    if i > 0:
        # absorb I(v_i, v_{i+2}) into the left neighbour via rho
        carrier = _T_obj(d, v[i - 1], v[i + 2], l)
        _, rho = unit_isos(carrier, mid=v[i])
        factors2 = ids[: i - 1] + [rho] + ids[i + 2 :]
    else:
        # absorb I(x, v_2) into the right neighbour via lambda
        carrier = _T_obj(d, v[0], v[3], l)
        lam, _ = unit_isos(carrier, mid=v[2])
        factors2 = [lam] + ids[3:]
    F2 = _fold_tensor(factors2) if len(factors2) > 1 else factors2[0]
    g = F2.compose(reassoc(F.tgt, F2.src)).compose(F)
    rename = {v[k]: v[k - 2] for k in range(i + 2, m)} if i > 0 else {v[k]: v[k - 2] for k in range(3, m)}
    return _finish_layer(g, src_obj, tgt_obj, rename)


def cup_layer(d: int, m: int, i: int, l: int = 1) -> MFMorphism:
    """Splice the unit in at slot i and apply n: T^m -> T^{m+2}."""
    assert 0 <= i <= m
    u, n, _, _ = duality_un(d, l)
    src_obj = strand_object(d, m, l)
    tgt_obj = strand_object(d, m + 2, l)
    if m == 0:
        g = n.renamed({"y": "y1"})
        return reassoc(g.tgt, tgt_obj).compose(g)
    v = _strand_vars(m)
    ids = [identity_morphism(_T_obj(d, v[k], v[k + 1], l)) for k in range(m)]
    if i > 0:
        nbr = _T_obj(d, v[i - 1], v[i], l)
        _, sec_r = unit_sections(nbr, mid="w1")
        factors = ids[: i - 1] + [sec_r] + ids[i:]
        n_loc = n.renamed({"x": "w1", "y": "w2", "z": v[i]})
        rename = {"w1": f"y{i}", "w2": f"y{i + 1}"}
        for k in range(i, m):
            rename[v[k]] = f"y{k + 2}" if k + 2 <= m + 1 else "z"
    else:
        nbr = _T_obj(d, v[0], v[1], l)
        sec_l, _ = unit_sections(nbr, mid="w1")
        factors = [sec_l] + ids[1:]
        n_loc = n.renamed({"y": "w2", "z": "w1"})  # I(x, w1) -> T(x, w2) (x) T(w2, w1)
        rename = {"w2": "y1", "w1": "y2"}
        for k in range(1, m):
            rename[v[k]] = f"y{k + 2}" if k + 2 <= m + 1 else "z"
    F = _fold_tensor(factors) if len(factors) > 1 else factors[0]
    g = F.compose(reassoc(src_obj, F.src))
    # insert n into the freshly created unit slot
    pos = i  # index of the unit factor in the target chain
    chain = []
    idx = 0
    for k in range(m):
        if k == i - 1 and i > 0:
            chain.append(identity_morphism(_T_obj(d, v[i - 1], "w1", l)))
            chain.append(n_loc)
        elif k == 0 and i == 0:
            chain.append(n_loc)
            chain.append(identity_morphism(_T_obj(d, "w1", v[1], l)))
        else:
            chain.append(ids[k])
    F2 = _fold_tensor(chain) if len(chain) > 1 else chain[0]
    g2 = F2.compose(reassoc(g.tgt, F2.src)).compose(g)
    g2 = g2.rename_target(rename)
    return reassoc(g2.tgt, tgt_obj).compose(g2)


def _factor_diagram(dg: TLDiagram):
    """(caps, cups): peel positions; caps applied in order, cups in reverse."""
    nb, nt = dg.n_bottom, dg.n_top

    def peel(points, is_bottom):
        out = []
        pts = list(points)
        changed = True
        while changed:
            changed = False
            for idx in range(len(pts) - 1):
                p, q = pts[idx], pts[idx + 1]
                if dg.partner(p) == q:
                    out.append(idx)
                    del pts[idx : idx + 2]
                    changed = True
                    break
        return out, pts

    caps, through_b = peel(range(nb), True)
    cups, through_t = peel(range(nb, nb + nt), False)
    if len(through_b) != len(through_t):
        raise AssertionError("factorisation lost strands")
    for p, q in zip(through_b, through_t):
        if dg.partner(p) != q:
            raise AssertionError("through strands are not order preserving")
    return caps, cups


def evaluate_F(f: TLMorphism, d: int | None = None, l: int | None = None) -> MFMorphism:
    """Image of a TL morphism under the duality-data functor.

    Strand count k goes to T^{(x) k}; a cap layer to u (spliced), a cup layer
    to n (spliced); linear combinations are taken entrywise.
    """
    d = d if d is not None else f.d
    l = l if l is not None else f.l
    if d % 2 == 0:
        raise EvenModulus("the functor needs odd d")
    total = None
    for dg, c in f.combo.items():
        caps, cups = _factor_diagram(dg)
        m = dg.n_bottom
        morph = identity_morphism(strand_object(d, m, l))
        for pos in caps:
            layer = cap_layer(d, m, pos, l)
            morph = layer.compose(morph)
            m -= 2
        for pos in reversed(cups):
            layer = cup_layer(d, m, pos, l)
            morph = layer.compose(morph)
            m += 2
        assert m == dg.n_top
        piece = morph.scaled(c)
        total = piece if total is None else total + piece
    if total is None:
        from .polyring import MPoly

        src = strand_object(d, f.src, l)
        tgt = strand_object(d, f.tgt, l)
        return MFMorphism(
            src, tgt, 0,
            [[MPoly.zero(d) for _ in range(src.rank0)] for _ in range(tgt.rank0)],
            [[MPoly.zero(d) for _ in range(src.rank1)] for _ in range(tgt.rank1)],
        )
    return total
