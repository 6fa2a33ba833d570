import random

import pytest
import sympy

from lmhs.exactlin import ExactMatrix, GaussianScalar
from lmhs.geomodels import (
    LefschetzInput,
    OdpInput,
    ResolutionData,
    _derived_betti,
    _kunneth,
    blowup_gysin,
    blowup_restriction,
    fiber_product_dim_check,
    fiber_product_middle_betti,
    fiber_product_readings,
    full_signature,
    hashimoto_sano_pic_fixture,
    k3_hodge_numbers,
    kahler_index_formula,
    lefschetz_middle_betti,
    o16_evaluator,
    odp_index_formula,
    odp_semistable_model,
    quadric_cohomology,
    sano_index_table,
    sano_negative_count,
    schoen_input,
)
from lmhs.steenbrink import (
    DegenerationData,
    e2_page,
    nearby_hodge_index,
    validate_degeneration_data,
    weight_criterion,
)

M = ExactMatrix.from_rational


class TestQuadricCohomology:
    def test_surface_middle_pairing(self):
        q = quadric_cohomology(2)
        assert q.dim(2) == 2
        assert q.pairing(2) == M([[0, 1], [1, 0]])

    def test_fourfold_plane_classes(self):
        q = quadric_cohomology(4)
        P = q.pairing(4)
        # A.A = B.B = 1, A.B = 0, and (A - B).(A + B) = 0
        assert P == M([[1, 0], [0, 1]])
        a_minus_b = M([[1], [-1]])
        a_plus_b = M([[1], [1]])
        assert (a_minus_b.transpose() @ P @ a_plus_b).is_zero()
        # the sum of the plane classes is the hyperplane power: degree 2
        assert (a_plus_b.transpose() @ P @ a_plus_b) == M([[2]])

    def test_odd_dimensions_have_no_middle(self):
        for n in (1, 3, 5):
            q = quadric_cohomology(n)
            assert n not in q.cohomology
            for j in range(0, n):
                if 2 * j < n:
                    assert q.dim(2 * j) == 1
                    assert q.dim(2 * n - 2 * j) == 1

    def test_single_stratum_validates(self):
        for n in range(1, 6):
            data = DegenerationData(n, [quadric_cohomology(n)])
            assert validate_degeneration_data(data).ok

    def test_complementary_pairings_are_unimodular(self):
        q = quadric_cohomology(6)
        for deg in (0, 2, 4):
            assert q.pairing(deg) == ExactMatrix.identity(q.dim(deg))


class TestBlowupAssembly:
    def test_restriction_blocks(self):
        a = M([[1, 2], [3, 4], [5, 6]])
        b = M([[7], [8], [9]])
        out = blowup_restriction(a, b)
        assert out == M([[1, 2, 7], [3, 4, 8], [5, 6, 9]])

    def test_gysin_blocks_negate_second(self):
        a = M([[1, 2], [3, 4]])
        b = M([[5, 6]])
        out = blowup_gysin(a, b)
        assert out == M([[1, 2], [3, 4], [-5, -6]])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(AssertionError):
            blowup_restriction(M([[1, 2]]), M([[1], [2]]))
        with pytest.raises(AssertionError):
            blowup_gysin(M([[1, 2]]), M([[1], [2]]))

    def test_adjointness_sample(self):
        # pairings on source and target sides carry adjointness through the
        # block assembly: if i2! is the pairing-adjoint of i2*, the stacked
        # map pairs against the concatenated one the same way up to the sign
        # on the second block.
        P = ExactMatrix.identity(3)
        i1_star = M([[2, 0, 1], [0, 1, 1], [1, 1, 0]])
        i2_star = M([[1, 0, 2], [0, 3, 0], [2, 0, 1]])
        i1_gysin = i1_star.transpose()
        i2_gysin = i2_star.transpose()
        rest = blowup_restriction(i1_star, i2_gysin)
        gys = blowup_gysin(i1_gysin, i2_star)
        prod = rest @ gys
        expected = i1_star @ i1_star.transpose() - i2_gysin @ i2_star
        assert prod == expected


def odd_resolution(l, rho, signs=(-1,)):
    return ResolutionData(3, l, signs=signs, rho=rho)


class TestOdpModelOdd:
    def test_minimal_model_graded_pieces(self):
        res = odd_resolution(1, ExactMatrix.zero(1, 0))
        data = odp_semistable_model(res)
        assert validate_degeneration_data(data).ok
        page = e2_page(data, 3)
        # one-dimensional graded pieces in weights 2 and 4
        assert page.dim(-1) == 1
        assert page.dim(1) == 1
        assert weight_criterion(data, 3).ok

    def test_no_relations_concentrates_weight(self):
        res = odd_resolution(2, ExactMatrix.identity(2))
        assert res.R == 0
        data = odp_semistable_model(res)
        assert validate_degeneration_data(data).ok
        for d in range(0, 7):
            page = e2_page(data, d)
            for r in range(-d, d + 1):
                if r != 0:
                    assert page.dim(r) == 0

    def test_no_double_points(self):
        res = odd_resolution(0, ExactMatrix.zero(0, 0), signs=(-1, 1))
        data = odp_semistable_model(res)
        assert validate_degeneration_data(data).ok
        rep = nearby_hodge_index(data)
        assert rep.verdict
        assert rep.signature[1] == (1, 1)
        assert rep.signature[2] == (1, 1)

    @pytest.mark.parametrize("l,rho_cols", [(1, 0), (2, 1), (3, 1), (3, 3)])
    def test_two_path_index_agreement(self, l, rho_cols):
        rows = [[1 if t == i % max(rho_cols, 1) else 0 for t in range(rho_cols)]
                for i in range(l)]
        rho = ExactMatrix.from_rational(rows) if rho_cols else ExactMatrix.zero(l, 0)
        res = odd_resolution(l, rho, signs=(-1, -1))
        data = odp_semistable_model(res)
        assert validate_degeneration_data(data).ok
        rep = nearby_hodge_index(data)
        assert rep.verdict and not rep.failures
        assert rep.signature == odp_index_formula(OdpInput.from_resolution(res))


class TestOdpModelEven:
    @pytest.mark.parametrize("l,signs", [(1, (1, 1, -1)), (2, (1,)), (3, ())])
    def test_two_path_index_agreement(self, l, signs):
        res = ResolutionData(4, l, vhat_signs=signs)
        data = odp_semistable_model(res)
        assert validate_degeneration_data(data).ok
        rep = nearby_hodge_index(data)
        assert rep.verdict and not rep.failures
        assert rep.signature == odp_index_formula(OdpInput.from_resolution(res))

    def test_criterion_trivial_at_middle(self):
        # the double loci are odd-dimensional quadrics with no middle
        # cohomology, so nothing can obstruct the criterion at degree m
        res = ResolutionData(4, 1, vhat_signs=(1,))
        data = odp_semistable_model(res)
        crit = weight_criterion(data, 4)
        assert crit.ok
        assert all(crit.per_r.values())


class TestOdpIndexFormula:
    def test_odd_adds_relations_at_adjacent_rows(self):
        inp = OdpInput(3, 3, R=2, table={1: (5, 0), 2: (5, 0)})
        out = odp_index_formula(inp)
        assert out[2] == (7, 0)
        assert out[1] == (7, 0)
        assert out[0] == (0, 0)

    def test_even_replaces_middle_row(self):
        inp = OdpInput(4, 3, vhat=(4, 0), table={2: (9, 9), 1: (2, 1)})
        out = odp_index_formula(inp)
        assert out[2] == (7, 0)
        assert out[1] == (2, 1)

    def test_no_double_points_passthrough(self):
        table = {1: (3, 2), 2: (3, 2)}
        inp = OdpInput(3, 0, R=0, table=table)
        out = odp_index_formula(inp)
        for k, row in table.items():
            assert out[k] == row


class TestKahlerIndexFormula:
    def test_k3(self):
        k3 = k3_hodge_numbers()
        assert kahler_index_formula(k3, 2, 1) == (19, 1)
        assert kahler_index_formula(k3, 2, 2) == (1, 0)
        assert kahler_index_formula(k3, 2, 0) == (1, 0)
        assert full_signature(k3, 2) == -16

    def test_row_sums_match_hodge_numbers(self):
        k3 = k3_hodge_numbers()
        for p in range(0, 3):
            plus, minus = kahler_index_formula(k3, 2, p)
            assert plus + minus == k3.get((p, 2 - p), 0)

    def test_consistency_with_full_signature(self):
        # the alternating sum of the middle rows recovers the cup-product
        # signature: duality folds the off-middle Hodge numbers into the
        # telescoping chains
        k3 = k3_hodge_numbers()
        middle = sum(
            (-1) ** p * (lambda s: s[0] - s[1])(kahler_index_formula(k3, 2, p))
            for p in range(0, 3)
        )
        assert middle == full_signature(k3, 2)

    def test_quintic_threefold(self):
        # odd middle cohomology is entirely primitive, so each row is
        # definite
        hodge = {(0, 0): 1, (1, 1): 1, (2, 2): 1, (3, 3): 1,
                 (3, 0): 1, (0, 3): 1, (2, 1): 101, (1, 2): 101}
        assert kahler_index_formula(hodge, 3, 2) == (101, 0)
        assert kahler_index_formula(hodge, 3, 3) == (1, 0)

    def test_non_admissible_chain_rejected(self):
        hodge = {(0, 0): 3, (1, 1): 1, (2, 2): 3, (2, 0): 0, (0, 2): 0}
        with pytest.raises(ValueError):
            kahler_index_formula(hodge, 2, 1)


class TestLefschetz:
    def test_rational_elliptic_surface(self):
        assert lefschetz_middle_betti(schoen_input(), 1) == 10

    def test_schoen_readings(self):
        readings = fiber_product_readings(schoen_input())
        assert readings["symmetric"] == 19
        assert readings["printed"] == 31
        assert fiber_product_middle_betti(schoen_input()) == 19

    def test_schoen_dim_check(self):
        chk = fiber_product_dim_check(schoen_input())
        assert chk["ok"]
        assert chk["fiber_product"] == chk["tensor_ring"] == 19

    def test_negative_middle_rejected(self):
        inp = LefschetzInput(2, 2, 0, 0, [1, 4, 1], [1, 4, 1], 4, 4)
        with pytest.raises(ValueError):
            lefschetz_middle_betti(inp, 1)

    def test_random_dim_checks(self):
        rng = random.Random(20260826)

        def betti(m):
            n = m - 1
            half = [rng.randint(0, 9) for _ in range(n)]
            return half + [rng.randint(0, 9)] + half[::-1]

        for _ in range(50):
            m1 = rng.choice([2, 3, 4])
            m2 = rng.choice([2, 3, 4])
            b1, b2 = betti(m1), betti(m2)
            inp = LefschetzInput(
                m1, m2, rng.randint(40, 80), rng.randint(40, 80), b1, b2,
                rng.randint(0, b1[m1 - 1]), rng.randint(0, b2[m2 - 1]),
                van_b1=rng.randint(0, 9), van_b2=rng.randint(0, 9))
            assert fiber_product_dim_check(inp)["ok"]

    @pytest.mark.parametrize("m1,m2", [(2, 2), (2, 3), (3, 3), (2, 4)])
    def test_symbolic_identity(self, m1, m2):
        def betti(m, tag):
            n = m - 1
            half = [sympy.Symbol(f"b{tag}{k}") for k in range(n)]
            return half + [sympy.Symbol(f"b{tag}m")] + half[::-1]

        d1, d2, v1, v2, w1, w2 = sympy.symbols("d1 d2 v1 v2 w1 w2")
        inp = LefschetzInput(m1, m2, d1, d2, betti(m1, "1"), betti(m2, "2"),
                             v1, v2, van_b1=w1, van_b2=w2)
        sym = fiber_product_readings(inp)["symmetric"]
        total = m1 + m2
        bB1, bX1, bXt1 = _derived_betti(inp, 1)
        bB2, bX2, bXt2 = _derived_betti(inp, 2)
        tensor = (
            _kunneth(bXt1, bXt2, total - 2)
            - _kunneth(bB1, bB2, total - 6)
            - _kunneth(bB1, bX2, total - 4)
            - _kunneth(bX1, bB2, total - 4)
            + _kunneth(bB1, bB2, total - 4)
            - w1 * w2
        )
        assert sympy.expand(sym - tensor) == 0

    def test_no_vanishing_reduces_to_kunneth(self):
        inp = LefschetzInput(2, 3, 5, 7, [1, 2, 1], [1, 0, 4, 0, 1],
                             0, 0, van_b1=0, van_b2=0)
        value = fiber_product_middle_betti(inp)
        expected = (_kunneth(inp.betti1, inp.betti2, 3)
                    + _kunneth(inp.betti1, inp.betti2, 1)
                    + inp.d1 * inp.betti2[1] + inp.d2 * inp.betti1[0])
        assert value == expected


class TestSanoTable:
    def test_closed_forms(self):
        assert sano_negative_count(5, 1) == 277
        assert sano_negative_count(4, 1) == 2
        assert sano_negative_count(6, 1) == 3
        assert sano_negative_count(7, 5) == 0
        assert sano_negative_count(11, 2) == 0
        assert sano_negative_count(9, 1) == 9 * 30 + 7

    def test_table_placement(self):
        tab = sano_index_table(5, 1)
        assert {k for k, v in tab.items() if v["negative"]} == {2, 3}
        tab = sano_index_table(4, 1)
        assert {k for k, v in tab.items() if v["negative"]} == {2}
        tab = sano_index_table(7, 3)
        assert all(v["negative"] == 0 for v in tab.values())
        tab = sano_index_table(8, 2)
        assert {k for k, v in tab.items() if v["negative"]} == {4}
        assert tab[4]["negative"] == 4

    def test_row_sums_with_declared_hodge(self):
        hodge = {k: 300 for k in range(0, 6)}
        tab = sano_index_table(5, 1, hodge=hodge)
        for k, row in tab.items():
            assert row["positive"] + row["negative"] == hodge[k]
        assert tab[2] == {"negative": 277, "positive": 23}


class TestHashimotoSano:
    def test_small_case(self):
        fx = hashimoto_sano_pic_fixture(1)
        assert fx["matrix"] == M([[1, 2, 6], [0, -1, -2], [0, 2, 3]])
        assert fx["det"] == GaussianScalar(1)
        assert fx["unimodular"]
        assert fx["form_preserved"]
        assert fx["composite_rank"] == 3
        assert fx["ok"]

    @pytest.mark.parametrize("a", [1, 2, 3])
    def test_family(self, a):
        fx = hashimoto_sano_pic_fixture(a)
        assert fx["ok"]
        assert fx["det"] == GaussianScalar(1)
        G = fx["form"]
        Mm = fx["matrix"]
        assert (Mm.transpose() @ G @ Mm) == G


class TestO16:
    def test_zero_defect_polarized(self):
        rep = o16_evaluator(0, {1: (5, 0), 2: (5, 0)})
        assert rep["verdict"]
        assert rep["polarized"]
        assert rep["criterion_gap"] == 0
        assert rep["gr4_dim"] == 6

    def test_positive_defect_fails(self):
        rep = o16_evaluator(2, {1: (5, 0), 2: (5, 0)})
        assert not rep["verdict"]
        assert rep["criterion_gap"] == 2
        assert rep["gr4_dim"] == 4
        assert not rep["polarized"]

    def test_unpolarized_passthrough(self):
        rep = o16_evaluator(0, {1: (4, 1), 2: (4, 1)})
        assert rep["verdict"]
        assert not rep["polarized"]
        assert rep["table"][1] == (4, 1)
