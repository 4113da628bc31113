import random

import numpy as np
import pytest

from oddfact.gf import is_square, make_field, nonsquare
from oddfact.orthospace import (IsomClass, Mat, NotInvertible, SingularVector,
                                Subspace, WittKind, beta, choose_lambda,
                                in_omega, minus_vector, perp, qvalue,
                                reflection, reflection_decomposition, span,
                                standard_space, witt_type)

F3 = make_field(3, 1)
F5 = make_field(5, 1)
F9 = make_field(3, 2)


def cofactor_det(field, M):
    """Independent determinant oracle: Laplace expansion on code matrices."""
    n = M.shape[0]
    if n == 1:
        return int(M[0, 0])
    total = 0
    sign = 1
    for j in range(n):
        if M[0, j]:
            minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
            term = field.c_mul(int(M[0, j]), cofactor_det(field, minor))
            total = field.c_add(total, term if sign > 0 else field.c_neg(term))
        sign = -sign
    return total


def rand_vec(rng, space):
    return np.array([rng.randrange(space.field.q) for _ in range(space.dim)],
                    dtype=np.int16)


# -- Mat basics


def test_mat_mul_identity_and_inverse():
    rng = random.Random(1)
    for F in (F3, F9):
        I = Mat.identity(F, 4)
        for _ in range(10):
            A = Mat(F, [[rng.randrange(F.q) for _ in range(4)] for _ in range(4)])
            if A.det().is_zero():
                continue
            assert A @ I == A
            assert A @ A.inverse() == I


def test_mat_det_matches_cofactor_oracle():
    rng = random.Random(7)
    for F in (F3, F5, F9):
        for _ in range(8):
            A = np.array([[rng.randrange(F.q) for _ in range(4)] for _ in range(4)],
                         dtype=np.int16)
            assert Mat(F, A).det().code == cofactor_det(F, A)


def test_mat_inverse_singular_raises():
    with pytest.raises(NotInvertible):
        Mat(F3, [[1, 2], [2, 1]]).inverse()  # rows are parallel mod 3


def test_null_rows():
    M = Mat(F3, [[1, 0, 2], [0, 0, 0]])
    K = M.null_rows()
    for i in range(K.rows):
        v = K.a[i]
        assert (M.a @ v % 3 == 0).all()
    assert K.rows == 2


# -- standard space and beta


def test_standard_space_gram_shape():
    V = standard_space(3, F3)
    assert V.gram.rows == 7
    g = V.gram.a
    for i in range(3):
        assert g[2 * i, 2 * i + 1] == 1 and g[2 * i + 1, 2 * i] == 1
        assert g[2 * i, 2 * i] == 0 and g[2 * i + 1, 2 * i + 1] == 0
    assert g[6, 6] == 1
    assert beta(V, V.e(1), V.f(1)) == F3.one
    assert beta(V, V.e(1), V.e(1)).is_zero()
    assert beta(V, V.d, V.d) == F3.one


def test_standard_space_m4_nonsingular_gram():
    V = standard_space(4, F3)
    assert V.gram.det().code == cofactor_det(F3, V.gram.a)
    assert not V.gram.det().is_zero()


def test_beta_of_v_equals_two_lambda():
    V = standard_space(3, F5)
    for lam in range(1, 5):
        v = V.vector([1, lam, 0, 0, 0, 0, 0])
        assert qvalue(V, v) == F5.element(2 * lam)


# -- reflections


def test_reflection_in_d():
    V = standard_space(3, F3)
    r = reflection(V, V.d)
    assert (V.e(1) @ r.a % 3 == V.e(1)).all()
    assert ((V.d @ r.a) % 3 == (-V.d) % 3).all()


def test_reflection_is_involution():
    V = standard_space(3, F3)
    u = V.vector([1, 1, 0, 0, 0, 0, 0])  # e_1 + f_1
    r = reflection(V, u)
    assert r @ r == Mat.identity(F3, 7)


def test_reflection_det_minus_one():
    V = standard_space(3, F3)
    v = V.vector([1, 2, 0, 0, 0, 0, 0])  # e_1 + 2 f_1
    r = reflection(V, v)
    assert r.det() == F3.element(-1)
    assert cofactor_det(F3, r.a) == F3.element(-1).code


def test_reflection_rejects_singular_vector():
    V = standard_space(3, F3)
    with pytest.raises(SingularVector):
        reflection(V, V.e(1))


def test_reflections_preserve_form():
    rng = random.Random(11)
    V = standard_space(3, F3)
    for _ in range(20):
        u = rand_vec(rng, V)
        if qvalue(V, u).is_zero():
            continue
        r = reflection(V, u)
        assert in_omega(V, r) != IsomClass.NOT_ISOMETRY


# -- perp and witt types


def test_perp_dimensions():
    V = standard_space(3, F3)
    v = minus_vector(V)
    assert perp(span(V, v)).dim == 6
    whole = Subspace(V, Mat.identity(F3, 7))
    assert perp(whole).dim == 0
    pe = perp(span(V, V.e(1)))
    assert pe.contains(V.e(1))


def test_witt_types_basic():
    V = standard_space(3, F3)
    assert witt_type(span(V, V.e(1), V.f(1))).kind is WittKind.PLUS
    assert witt_type(span(V, V.d)).kind is WittKind.ODD_DIM
    assert witt_type(span(V, V.e(1))).kind is WittKind.DEGENERATE
    assert witt_type(span(V, V.e(1))).radical_dim == 1


def test_choose_lambda_gives_minus_perp():
    for F in (F3, F5, F9):
        V = standard_space(3, F)
        lam = choose_lambda(V)
        assert not lam.is_zero()
        v = V.vector([1, lam, 0, 0, 0, 0, 0])
        assert witt_type(perp(span(V, v))).kind is WittKind.MINUS


def test_valid_lambda_set_is_one_square_class_gf5():
    V = standard_space(3, F5)
    good = []
    for lam in range(1, 5):
        v = V.vector([1, lam, 0, 0, 0, 0, 0])
        if witt_type(perp(span(V, v))).kind is WittKind.MINUS:
            good.append(lam)
    assert len(good) == 2
    kinds = {is_square(F5.element(l)) for l in good}
    assert len(kinds) == 1


def test_witt_type_counts_singular_vectors():
    # oracle: a nondegenerate 4-space of type eps has
    # (q^2 - eps)(q + eps) singular nonzero vectors
    V = standard_space(3, F3)
    four_plus = span(V, V.e(1), V.f(1), V.e(2), V.f(2))
    assert witt_type(four_plus).kind is WittKind.PLUS

    def count_singular(S):
        n = 0
        B = S.basis.a
        for code in range(1, 3 ** S.dim):
            co = []
            c = code
            for _ in range(S.dim):
                co.append(c % 3)
                c //= 3
            vec = (np.array(co, dtype=np.int64) @ B.astype(np.int64)) % 3
            if qvalue(V, vec.astype(np.int16)).is_zero():
                n += 1
        return n

    assert count_singular(four_plus) == (9 - 1) * (3 + 1)
    v = minus_vector(V)
    S = perp(span(V, span(V, v).basis.a[0]))
    # 6-dim minus: (q^3 + 1)(q^2 - 1)
    assert witt_type(S).kind is WittKind.MINUS
    assert count_singular(S) == (27 + 1) * (9 - 1)


def test_witt_type_is_basis_independent():
    rng = random.Random(5)
    V = standard_space(3, F3)
    v = minus_vector(V)
    S = perp(span(V, v))
    base_kind = witt_type(S).kind
    for _ in range(5):
        # a random isometry: product of reflections
        g = Mat.identity(F3, 7)
        for _ in range(4):
            u = rand_vec(rng, V)
            if not qvalue(V, u).is_zero():
                g = g @ reflection(V, u)
        moved = Subspace(V, (S.basis @ g).a)
        assert witt_type(moved).kind is base_kind


# -- reflection decomposition and in_omega


def test_in_omega_identity():
    V = standard_space(3, F3)
    assert in_omega(V, Mat.identity(F3, 7)) is IsomClass.IN_OMEGA


def test_in_omega_reflection_d():
    V = standard_space(3, F3)
    assert in_omega(V, reflection(V, V.d)) is IsomClass.O_NOT_SO


def test_in_omega_rejects_non_isometry():
    V = standard_space(3, F3)
    g = Mat(F3, np.diag([2, 1, 1, 1, 1, 1, 1]).astype(np.int16))
    assert in_omega(V, g) is IsomClass.NOT_ISOMETRY


def test_minus_one_on_plus_four_space_is_in_omega():
    # -1 on <e_2,f_2,e_3,f_3>, identity elsewhere
    V = standard_space(3, F3)
    diag = [1, 1, -1, -1, -1, -1, 1]
    g = Mat(F3, np.diag(diag).astype(np.int16) % 3)
    assert in_omega(V, g) is IsomClass.IN_OMEGA


def test_decomposition_round_trip():
    rng = random.Random(23)
    V = standard_space(3, F3)
    for _ in range(15):
        g = Mat.identity(F3, 7)
        for _ in range(rng.randrange(1, 6)):
            u = rand_vec(rng, V)
            if not qvalue(V, u).is_zero():
                g = g @ reflection(V, u)
        refs = reflection_decomposition(V, g)
        prod = Mat.identity(F3, 7)
        for u in refs:
            prod = prod @ reflection(V, u)
        assert prod == g


def test_random_double_reflections_classify_by_square_class():
    rng = random.Random(101)
    V = standard_space(3, F3)
    checked = 0
    while checked < 100:
        u, w = rand_vec(rng, V), rand_vec(rng, V)
        if qvalue(V, u).is_zero() or qvalue(V, w).is_zero():
            continue
        g = reflection(V, u) @ reflection(V, w)
        want = IsomClass.IN_OMEGA if is_square(qvalue(V, u) * qvalue(V, w)) \
            else IsomClass.SO_NOT_OMEGA
        assert in_omega(V, g) is want
        checked += 1


def test_in_omega_extension_field():
    V = standard_space(2, F9)
    r1 = reflection(V, V.d)
    u = V.vector([1, 1, 0, 0, 0])
    r2 = reflection(V, u)
    g = r1 @ r2
    want = IsomClass.IN_OMEGA if is_square(qvalue(V, V.d) * qvalue(V, u)) \
        else IsomClass.SO_NOT_OMEGA
    assert in_omega(V, g) is want
