"""Unit and property tests for the exact linear algebra layer."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lmhs.exactlin import (
    ExactMatrix,
    GaussianScalar,
    PolyScalar,
    Subspace,
    ZeroMinorError,
    G_I,
    G_ONE,
    G_ZERO,
    gaussian_from_str,
    gaussian_to_str,
    hermitian_diagonalize,
    hermitian_signature,
    i_power,
    image,
    kernel,
    leading_principal_minors,
    leading_sign,
    poly_det,
    rank,
    rref,
    solve,
)


def gm(rows):
    return ExactMatrix.from_rational(rows)


def g(re, im=0):
    return GaussianScalar(re, im)


class TestGaussianScalar:
    def test_field_ops(self):
        a = g(1, 2)
        b = g(3, -1)
        assert a + b == g(4, 1)
        assert a * b == g(5, 5)
        assert (a / b) * b == a
        assert a - a == G_ZERO
        assert a.conj().conj() == a

    def test_i_power(self):
        assert i_power(0) == G_ONE
        assert i_power(1) == G_I
        assert i_power(2) == -G_ONE
        assert i_power(-1) == -G_I
        assert i_power(6) == -G_ONE

    def test_serialization_roundtrip(self):
        for x in [g(0), g(Fraction(3, 7)), g(1, -2), g(Fraction(-1, 2), Fraction(5, 3))]:
            assert gaussian_from_str(gaussian_to_str(x)) == x
        assert gaussian_to_str(g(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4*i"
        assert gaussian_from_str("2/3+1/5*i") == g(Fraction(2, 3), Fraction(1, 5))


class TestPolyScalar:
    def test_normalization(self):
        assert PolyScalar([1, 2, 0, 0]).degree() == 1
        assert PolyScalar([0, 0]).is_zero()
        assert PolyScalar().degree() == -1

    def test_ring_ops(self):
        t = PolyScalar.variable()
        p = t * t - 1
        q = t + 1
        assert p.exact_div(q) == t - 1
        assert (p * q).exact_div(p) == q
        assert p.evaluate(2) == g(3)
        assert p.evaluate(G_I) == g(-2)

    def test_exact_div_rejects_inexact(self):
        t = PolyScalar.variable()
        with pytest.raises(AssertionError):
            (t * t + 1).exact_div(t + 1)

    def test_conj_fixes_t(self):
        p = PolyScalar([g(0, 1), g(2, -3)])
        assert p.conj() == PolyScalar([g(0, -1), g(2, 3)])


class TestRref:
    def test_identity(self):
        R, pivots, rk = rref(ExactMatrix.identity(2))
        assert R == ExactMatrix.identity(2)
        assert pivots == [0, 1] and rk == 2

    def test_rank_one_hermitian_example(self):
        M = ExactMatrix([[g(1), g(0, 1)], [g(0, -1), g(1)]])
        assert rank(M) == 1

    def test_zero_matrix(self):
        _, pivots, rk = rref(ExactMatrix.zero(3, 4))
        assert pivots == [] and rk == 0


class TestKernelImage:
    def test_kernel_of_identity(self):
        assert kernel(ExactMatrix.identity(3)).dim == 0

    def test_kernel_of_row(self):
        K = kernel(gm([[1, 1]]))
        assert K.dim == 1
        assert K.contains_vector([g(1), g(-1)])

    def test_image_of_rank_one(self):
        M = ExactMatrix([[g(1), g(0, 1)], [g(0, -1), g(1)]])
        assert image(M).dim == 1

    def test_rank_nullity(self):
        rng = random.Random(7)
        for _ in range(25):
            rows = rng.randrange(1, 6)
            cols = rng.randrange(1, 6)
            M = ExactMatrix(
                [
                    [g(rng.randrange(-2, 3), rng.randrange(-2, 3)) for _ in range(cols)]
                    for _ in range(rows)
                ]
            )
            assert kernel(M).dim + rank(M) == cols

    def test_solve(self):
        M = gm([[1, 2], [3, 4]])
        x = solve(M, [g(5), g(11)])
        assert x == [g(1), g(2)]
        assert solve(gm([[1, 1], [1, 1]]), [g(0), g(1)]) is None


class TestSubspace:
    def test_intersect_sum_trivial(self):
        U = Subspace.span(2, [[g(1), g(0)]])
        assert U.intersect(U) == U
        assert U.add(U) == U
        V = Subspace.span(2, [[g(0), g(1)]])
        assert U.intersect(V).dim == 0

    def test_intersect_complex_line(self):
        U = Subspace.span(2, [[g(1), g(0, 1)]])
        V = Subspace.span(2, [[g(1), g(0, -1)], [g(0), g(1)]])
        W = U.intersect(V)
        assert W.dim == 1
        assert W.contains_vector([g(1), g(0, 1)])

    def test_modular_dimension_law(self):
        rng = random.Random(11)
        for _ in range(25):
            n = rng.randrange(1, 6)
            U = Subspace.span(
                n,
                [
                    [g(rng.randrange(-2, 3)) for _ in range(n)]
                    for _ in range(rng.randrange(0, n + 1))
                ],
            )
            V = Subspace.span(
                n,
                [
                    [g(rng.randrange(-2, 3)) for _ in range(n)]
                    for _ in range(rng.randrange(0, n + 1))
                ],
            )
            assert U.dim + V.dim == U.intersect(V).dim + U.add(V).dim

    def test_ambient_mismatch(self):
        U = Subspace.full(2)
        V = Subspace.full(3)
        with pytest.raises(AssertionError):
            U.intersect(V)


class TestHermitianSignature:
    def test_diag(self):
        assert hermitian_signature(gm([[1, 0], [0, -1]])) == (1, 1, 0)

    def test_hyperbolic(self):
        assert hermitian_signature(gm([[0, 1], [1, 0]])) == (1, 1, 0)

    def test_indefinite_gaussian(self):
        H = ExactMatrix([[g(2), g(0, 2)], [g(0, -2), g(1)]])
        assert hermitian_signature(H) == (1, 1, 0)

    def test_nulls(self):
        assert hermitian_signature(ExactMatrix.zero(3, 3)) == (0, 0, 3)
        assert hermitian_signature(gm([[1, 1], [1, 1]])) == (1, 0, 1)

    def test_rejects_non_hermitian(self):
        with pytest.raises(AssertionError):
            hermitian_signature(gm([[0, 1], [2, 0]]))

    def test_congruence_invariance(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.randrange(1, 9)
            # random Hermitian H = B + B^*
            B = ExactMatrix(
                [
                    [g(rng.randrange(-3, 4), rng.randrange(-3, 4)) for _ in range(n)]
                    for _ in range(n)
                ]
            )
            H = B + B.conj().transpose()
            while True:
                P = ExactMatrix(
                    [
                        [g(rng.randrange(-2, 3), rng.randrange(-2, 3)) for _ in range(n)]
                        for _ in range(n)
                    ]
                )
                if rank(P) == n:
                    break
            H2 = P.conj().transpose() @ H @ P
            assert hermitian_signature(H) == hermitian_signature(H2)

    def test_diagonalize_gram_property(self):
        rng = random.Random(5)
        for _ in range(20):
            n = rng.randrange(1, 7)
            B = ExactMatrix(
                [
                    [g(rng.randrange(-2, 3), rng.randrange(-2, 3)) for _ in range(n)]
                    for _ in range(n)
                ]
            )
            H = B + B.conj().transpose()
            vectors, values, nulls = hermitian_diagonalize(H)

            def h(x, y):
                acc = G_ZERO
                for a in range(n):
                    for b in range(n):
                        acc = acc + x[a] * y[b].conj() * H.entries[a][b]
                return acc

            for a, va in enumerate(vectors):
                for b, vb in enumerate(vectors):
                    expect = g(values[a]) if a == b else G_ZERO
                    assert h(va, vb) == expect
            for nv in nulls:
                for va in vectors + nulls:
                    assert h(nv, va) == G_ZERO
            assert len(vectors) + len(nulls) == n


def pm(rows):
    return ExactMatrix([[PolyScalar.coerce(e) for e in row] for row in rows])


class TestPolyDet:
    def test_one_by_one(self):
        t = PolyScalar.variable()
        assert poly_det(pm([[t * t]])) == t * t

    def test_two_by_two(self):
        t = PolyScalar.variable()
        assert poly_det(pm([[t, 1], [1, t]])) == t * t - 1

    def test_taylor_block(self):
        # [[x^2/2, x^3/6], [x, x^2/2]] has determinant x^4/12
        x = PolyScalar.variable()
        half = Fraction(1, 2)
        sixth = Fraction(1, 6)
        M = pm([[x * x * half, x * x * x * sixth], [x, x * x * half]])
        d = poly_det(M)
        assert d == x.coerce(Fraction(1, 12)) * x * x * x * x

    def test_multiplicative(self):
        rng = random.Random(13)
        for _ in range(20):
            n = rng.randrange(1, 5)

            def rand_poly():
                if rng.random() < 0.5:
                    return PolyScalar()
                return PolyScalar(
                    [g(rng.randrange(-2, 3)) for _ in range(rng.randrange(1, 3))]
                )

            A = pm([[rand_poly() for _ in range(n)] for _ in range(n)])
            B = pm([[rand_poly() for _ in range(n)] for _ in range(n)])
            assert poly_det(A @ B) == poly_det(A) * poly_det(B)

    def test_row_swap_sign(self):
        M = pm([[0, 1], [1, 0]])
        assert poly_det(M) == PolyScalar([-1])


class TestLeadingMinors:
    def test_principal_minors(self):
        t = PolyScalar.variable()
        M = pm([[t, 1], [1, t]])
        minors = leading_principal_minors(M)
        assert minors == [t, t * t - 1]

    def test_zero_pivot_raises(self):
        M = pm([[0, 1], [1, 0]])
        with pytest.raises(ZeroMinorError) as e:
            leading_principal_minors(M)
        assert e.value.index == 1

    def test_matches_determinants_of_blocks(self):
        rng = random.Random(17)
        for _ in range(10):
            n = rng.randrange(1, 5)
            M = pm(
                [
                    [
                        PolyScalar([g(rng.randrange(1, 4)), g(rng.randrange(-2, 3))])
                        for _ in range(n)
                    ]
                    for _ in range(n)
                ]
            )
            try:
                minors = leading_principal_minors(M)
            except ZeroMinorError:
                continue
            for k in range(1, n + 1):
                block = ExactMatrix(
                    [[M.entries[j][l] for l in range(k)] for j in range(k)]
                )
                assert minors[k - 1] == poly_det(block)


class TestLeadingSign:
    def test_examples(self):
        t = PolyScalar.variable()
        assert leading_sign(t * t * 3 - t * 5) == (2, 1)
        assert leading_sign(t * t * (-2)) == (2, -1)
        assert leading_sign(t * t * t * t * Fraction(1, 12)) == (4, 1)

    def test_contract_errors(self):
        with pytest.raises(AssertionError):
            leading_sign(PolyScalar())
        with pytest.raises(AssertionError):
            leading_sign(PolyScalar([0, g(0, 1)]))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=6
    )
)
def test_poly_eval_is_ring_hom(coeffs):
    p = PolyScalar([g(a, b) for a, b in coeffs])
    q = PolyScalar([g(b, a) for a, b in coeffs])
    t0 = Fraction(7, 3)
    assert (p * q).evaluate(t0) == p.evaluate(t0) * q.evaluate(t0)
    assert (p + q).evaluate(t0) == p.evaluate(t0) + q.evaluate(t0)
