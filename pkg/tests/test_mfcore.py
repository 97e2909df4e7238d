import pytest

from permfact.cyclofield import CycNum, eta_power, kappa
from permfact.mfcore import (
    MatrixBifact,
    MFMorphism,
    PermLabel,
    RankUnsupported,
    VariableMismatch,
    chi,
    diag_twist_mf,
    dual_rank1,
    duality_un,
    ev_coev,
    g_residue,
    identity_morphism,
    morphism_poly_form,
    mu,
    perm_dual_iso,
    perm_mf,
    reassoc,
    s_iso,
    tensor_mf,
    tensor_morphism,
    twist_mf,
    twist_morphism,
    unit_isos,
    unit_mf,
    unit_sections,
    verify_factorisation,
    zigzag_morphisms,
)
from permfact.polyring import MPoly, exact_div, perm_product


class TestPermObjects:
    def test_unit_is_p_zero(self):
        for d in (3, 5):
            assert perm_mf(d, {0}) == unit_mf(d)

    def test_empty_set_gives_unit_differential(self):
        P = perm_mf(5, set())
        assert P.d1[0][0] == MPoly.one(5)

    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_factorisation_condition(self, d):
        for a in range(d):
            for lam in range(d - 1):
                S = {(a + j) % d for j in range(lam + 1)}
                assert verify_factorisation(perm_mf(d, S))

    def test_broken_factorisation_detected(self):
        M = perm_mf(5, {1, 2})
        bad = MatrixBifact(5, "x", "y", (), [[M.d1[0][0] + 1]], [[M.d0[0][0]]])
        assert not verify_factorisation(bad)

    def test_perm_label_consecutive(self):
        lab = PermLabel(5, a=3, lam=2)
        assert lab.S == frozenset({3, 4, 0})
        assert lab.consecutive() == (3, 2)
        assert PermLabel(5, {0, 2}).consecutive() is None
        assert PermLabel(5, {1, 2}).minus().S == frozenset({3, 4})
        assert perm_mf(5, lab) == perm_mf(5, {3, 4, 0})
        with pytest.raises(ValueError):
            PermLabel(5, a=0, lam=4)


class TestTensor:
    def test_ranks_add(self):
        d = 5
        AB = tensor_mf(perm_mf(d, {0}, "x", "y1"), perm_mf(d, {0}, "y1", "z"))
        assert (AB.rank0, AB.rank1) == (2, 2)

    def test_block_signs_match_display(self):
        # d1 = [[m1, n1], [-n0, m0]], d0 = [[m0, -n1], [n0, m1]]
        d = 5
        A = perm_mf(d, {0, 1}, "x", "y1")
        B = perm_mf(d, {1, 2}, "y1", "z")
        AB = tensor_mf(A, B)
        m1, m0 = A.d1[0][0], A.d0[0][0]
        n1, n0 = B.d1[0][0], B.d0[0][0]
        assert AB.d1 == [[m1, n1], [-n0, m0]]
        assert AB.d0 == [[m0, -n1], [n0, m1]]

    @pytest.mark.parametrize("d", [3, 5])
    def test_tensor_factorises(self, d):
        A = perm_mf(d, {0, 1}, "x", "y1")
        B = perm_mf(d, {1, 2}, "y1", "z")
        assert verify_factorisation(tensor_mf(A, B))

    def test_variable_mismatch(self):
        with pytest.raises(VariableMismatch):
            tensor_mf(perm_mf(3, {0}, "x", "y1"), perm_mf(3, {0}, "y2", "z"))

    def test_reassoc_is_cycle(self):
        d = 3
        T = lambda a, b: perm_mf(d, {1, 2}, a, b)
        left = tensor_mf(tensor_mf(T("x", "y1"), T("y1", "y2")), T("y2", "z"))
        right = tensor_mf(T("x", "y1"), tensor_mf(T("y1", "y2"), T("y2", "z")))
        al = reassoc(right, left)
        assert al.is_cycle()
        back = reassoc(left, right)
        assert al.compose(back).equals(identity_morphism(right))


class TestUnitIsos:
    @pytest.mark.parametrize("d,S", [(3, (0,)), (3, (1, 2)), (5, (2, 3)), (5, (0,))])
    def test_cycles_and_sections(self, d, S):
        M = perm_mf(d, set(S), "x", "z")
        lam, rho = unit_isos(M)
        sl, sr = unit_sections(M)
        assert lam.is_cycle() and rho.is_cycle() and sl.is_cycle() and sr.is_cycle()
        assert morphism_poly_form(lam.compose(sl)).equals(identity_morphism(M))
        assert morphism_poly_form(rho.compose(sr)).equals(identity_morphism(M))

    def test_lambda_rho_agree_on_unit_square(self):
        # both unit isos of I (x) I compose with the same section to the identity
        I = unit_mf(3, "x", "z")
        lam, rho = unit_isos(I)
        sl, _ = unit_sections(I)
        assert morphism_poly_form(lam.compose(sl)).equals(identity_morphism(I))
        assert morphism_poly_form(rho.compose(sl)).equals(identity_morphism(I))


class TestDuals:
    def test_unit_self_dual(self):
        for d in (3, 5):
            assert dual_rank1(unit_mf(d)) == unit_mf(d)

    def test_double_dual(self):
        M = perm_mf(5, {1, 2})
        assert dual_rank1(dual_rank1(M)) == M

    def test_rank_guard(self):
        AB = tensor_mf(perm_mf(3, {0}, "x", "y1"), perm_mf(3, {0}, "y1", "z"))
        with pytest.raises(RankUnsupported):
            dual_rank1(AB)

    @pytest.mark.parametrize("d", [3, 5])
    def test_dual_comparison_cycles(self, d):
        for S in ({0}, {1}, {1, 2}, {0, 2}):
            f = perm_dual_iso(d, S)
            assert f.is_cycle()
            assert f.src == perm_mf(d, {(-s) % d for s in S})
            assert f.tgt == dual_rank1(perm_mf(d, S))

    def test_prefactor_example(self):
        # |S| = 2 at d = 5: (-1)^3 eta^{-5} = -1
        f = perm_dual_iso(5, {2, 3})
        assert f.f1[0][0] == MPoly.constant(5, -1)
        g = perm_dual_iso(5, {0})
        assert g.f1[0][0] == MPoly.one(5)


class TestResidue:
    def test_unit_examples(self):
        d = 3
        I = unit_mf(d)
        one = MPoly.one(d)
        x, y, z = (MPoly.var(d, v) for v in "xyz")
        assert g_residue(I, one) == -one
        d1yz = y - z
        assert g_residue(I, d1yz) == x - z
        assert g_residue(I, d1yz * y**2).is_zero()

    @pytest.mark.parametrize("d,S", [(3, (1, 2)), (5, (2, 3)), (5, (1,))])
    def test_residue_sum_oracle(self, d, S):
        """Independent oracle: sum of residues at y = 0 and the roots of d1."""
        S = set(S)
        M = perm_mf(d, S)
        x, y, z = (MPoly.var(d, v) for v in "xyz")
        probes = [MPoly.one(d), y, y**2, x + z * y, y ** (d + 1), x * z * y**3]
        for f in probes:
            # common denominator z^{|S|}; each residue contributes a polynomial
            # numerator times a unit scalar
            num = MPoly.zero(d)
            d1_at = lambda yy: perm_product(d, S, "u", "v").subs(
                {"u": yy, "v": z}
            )
            # residue at y = 0: (x - z) f(x, 0, z) / d1(0, z)
            c0 = CycNum.one(d)
            for j in S:
                c0 = c0 * (-eta_power(d, j))
            f0 = f.subs({"y": MPoly.zero(d)})
            num = num + (x - z) * f0 * c0.inverse()
            # residues at y = eta^j z
            for j in S:
                cj = CycNum.one(d)
                for i in S:
                    if i != j:
                        cj = cj * (eta_power(d, j) - eta_power(d, i))
                ej = eta_power(d, j)
                fj = f.subs({"y": z * ej})
                num = num + (x - z - z * ej) * fj * (ej * cj).inverse()
            oracle = exact_div(num, z ** len(S))
            assert g_residue(M, f) == oracle, f


class TestEvCoev:
    @pytest.mark.parametrize("d,S", [(3, (1, 2)), (5, (2, 3)), (5, (0,))])
    def test_cycles(self, d, S):
        ev, coev = ev_coev(perm_mf(d, set(S)))
        assert ev.is_cycle()
        assert coev.is_cycle()

    def test_coev_components_match_display(self):
        d = 3
        M = perm_mf(d, {1, 2})
        _, coev = ev_coev(M)
        x, y, z = (MPoly.var(d, v) for v in "xyz")
        d1 = M.d1[0][0]
        d0 = M.d0[0][0]
        dq = lambda p: exact_div(p - p.subs({"x": z}), x - z)
        assert coev.f0 == [[dq(d1)], [dq(d0)]]
        assert coev.f1 == [[MPoly.one(d)], [MPoly.one(d)]]


class TestDualityMaps:
    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_un_equals_kappa(self, d):
        u, n, T, t = duality_un(d)
        un = morphism_poly_form(u.compose(n))
        k = MPoly.constant(d, kappa(d))
        assert un.f0[0][0] == k
        assert un.f1[0][0] == k

    def test_t_components(self):
        _, _, _, t = duality_un(5)
        assert t.f0[0][0] == MPoly.one(5)
        assert t.f1[0][0] == MPoly.constant(5, -1)

    @pytest.mark.parametrize("d", [3, 5])
    def test_un_cycles(self, d):
        u, n, _, _ = duality_un(d)
        assert u.is_cycle()
        assert n.is_cycle()

    @pytest.mark.parametrize("d", [3, 5])
    def test_zigzags_reduce_to_identity(self, d):
        zz1, zz2 = zigzag_morphisms(d)
        idT = identity_morphism(zz1.src)
        assert morphism_poly_form(zz1).equals(idT)
        assert morphism_poly_form(zz2).equals(idT)


class TestTwists:
    def test_twist_objects_factorise(self):
        for d in (3, 5):
            for a in range(d):
                for b in (0, 1, d - 1):
                    assert verify_factorisation(twist_mf(perm_mf(d, {1, 2}), a, b))

    def test_s_iso_cycle_and_identity_at_zero(self):
        for d in (3, 5):
            for S in ({0}, {1, 2}):
                f = s_iso(d, S, 0, 0)
                assert f.equals(identity_morphism(f.src))
                for a in range(d):
                    g = s_iso(d, S, a, -a)
                    assert g.is_cycle()

    def test_prefactor_example(self):
        # d=5, S={1,2}, a=1, b=-1: eta^{-|S|a} = eta^{-2}
        f = s_iso(5, {1, 2}, 1, -1)
        assert f.f1[0][0] == MPoly.constant(5, eta_power(5, -2))

    def test_chi_object(self):
        d = 5
        for a in range(d):
            c = chi(d, a)
            assert verify_factorisation(c)
            f = s_iso(d, {0}, a, 0)
            assert f.tgt == c
            assert f.is_cycle()

    def test_diag_twist_is_tensor_compatible(self):
        d = 3
        A = perm_mf(d, {0, 1}, "x", "y1")
        B = perm_mf(d, {1, 2}, "y1", "z")
        lhs = diag_twist_mf(tensor_mf(A, B), 1)
        rhs = tensor_mf(diag_twist_mf(A, 1), diag_twist_mf(B, 1))
        assert lhs == rhs

    def test_twist_morphism_functorial(self):
        d = 5
        f = perm_dual_iso(d, {1, 2})
        tw = twist_morphism(f, 2)
        assert tw.is_cycle()


class TestMu:
    @pytest.mark.parametrize("d", [3, 5])
    def test_mu_cycles(self, d):
        for a in range(d):
            for b in range(d):
                assert mu(d, a, b).is_cycle()

    def test_mu_00_is_unit_iso(self):
        d = 3
        m = mu(d, 0, 0)
        lam, _ = unit_isos(unit_mf(d, "x", "z"))
        assert m.equals(lam)
