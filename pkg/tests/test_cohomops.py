import random
from math import comb

import numpy as np
import pytest

from smoothings.cohomops import (
    SingularPairingError,
    SyntheticInputError,
    Undefined,
    beta_matrix,
    bockstein_higher,
    compose,
    cup,
    cup_i,
    d2_connecting,
    d2_matrix,
    evaluate_top,
    reduce_class,
    reduction_matrix,
    sq_matrix,
    steenrod_sq,
    wu_and_sw,
)
from smoothings.complex_core import (
    CohomClass,
    class_coordinates,
    cohomology,
    cross_polytope_rp,
    moore_chain_complex,
    product_complex,
    rp2,
    sphere_boundary,
)
from smoothings.oracle import brute_bockstein, brute_d2


def powers(K, n):
    """Generator x of H^1(K;Z/2) and its cup powers x^1..x^n."""
    _, (x,) = cohomology(K, 1, 2)
    out = [None, x]
    for _ in range(2, n + 1):
        out.append(cup(K, out[-1], x))
    return out


def coord(K, a):
    return tuple(class_coordinates(K, a))


@pytest.mark.parametrize("K,n", [(rp2(), 2), (cross_polytope_rp(3), 3)])
def test_binomial_rule(K, n):
    x = powers(K, n)
    for j in range(1, n + 1):
        assert coord(K, x[j]) == (1,)
        for i in (1, 2):
            if i + j > n:
                continue
            expected = comb(j, i) % 2
            assert coord(K, steenrod_sq(K, i, x[j])) == (expected,), (i, j)


@pytest.mark.parametrize("K", [rp2(), cross_polytope_rp(3)])
def test_sq1_equals_beta1(K):
    for d in range(K.dim):
        assert sq_matrix(K, 1, d).matrix == beta_matrix(K, 1, d).matrix


def test_sq0_identity_and_top_square():
    K = cross_polytope_rp(3)
    x = powers(K, 3)
    assert coord(K, steenrod_sq(K, 0, x[2])) == (1,)
    # Sq^k a = a^2 when k = deg a
    assert coord(K, steenrod_sq(K, 1, x[1])) == coord(K, x[2])


def test_cartan_sq2_on_basis_pairs():
    K = cross_polytope_rp(3)
    x = powers(K, 3)
    for a in (x[1],):
        for b in (x[1], x[2]):
            if a.degree + b.degree + 2 > K.dim:
                continue
            lhs = coord(K, steenrod_sq(K, 2, cup(K, a, b)))
            rhs = np.zeros(1, dtype=int)
            for i in range(3):
                sa, sb = steenrod_sq(K, i, a), steenrod_sq(K, 2 - i, b)
                rhs = (rhs + np.array(coord(K, cup(K, sa, sb)))) % 2
            assert lhs == tuple(rhs)


def test_cartan_sq2_on_torus_product():
    K = product_complex(sphere_boundary(1), rp2())
    _, b1 = cohomology(K, 1, 2)
    for a in b1:
        for b in b1:
            lhs = coord(K, steenrod_sq(K, 2, cup(K, a, b)))
            rhs = (0,) * len(lhs)
            for i in range(3):
                t = coord(K, cup(K, steenrod_sq(K, i, a), steenrod_sq(K, 2 - i, b)))
                rhs = tuple((u + v) % 2 for u, v in zip(rhs, t))
            assert lhs == rhs


def _perturb(K, a, rng):
    k = a.degree
    c = np.array([rng.randrange(2) for _ in K.simplices[k - 1]], dtype=np.int64)
    d = K.chains.coboundary(k - 1, c)
    return CohomClass(k, 2, tuple(int(v) % 2 for v in np.array(a.cochain) + d), a.complex_id)


def test_coboundary_perturbations_leave_values_unchanged():
    rng = random.Random(7)
    K = cross_polytope_rp(3)
    x = powers(K, 3)
    for _ in range(50):
        a = _perturb(K, x[1], rng)
        assert coord(K, a) == (1,)
        assert coord(K, steenrod_sq(K, 1, a)) == (1,)
        assert coord(K, bockstein_higher(K, 1, a)) == (1,)
        b = _perturb(K, x[2], rng)
        assert coord(K, steenrod_sq(K, 1, b)) == (0,)
        assert coord(K, cup(K, a, b)) == (1,)
        assert coord(K, steenrod_sq(K, 2, cup(K, a, _perturb(K, x[1], rng)))) == ()


def test_cup_i_degree_and_zero_cases():
    K = rp2()
    _, (x,) = cohomology(K, 1, 2)
    assert len(cup_i(K, x, x, 0)) == len(K.simplices[2])
    assert len(cup_i(K, x, x, 1)) == len(K.simplices[1])
    with pytest.raises(ValueError):
        cup_i(K, x, x, -1)


def test_synthetic_input_rejected():
    C = moore_chain_complex(2, 1)
    _, (g,) = cohomology(C, 1, 2)
    with pytest.raises(SyntheticInputError):
        steenrod_sq(C, 1, g)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_bocksteins_on_moore(r):
    C = moore_chain_complex(2 ** r, 7)
    _, (g,) = cohomology(C, 7, 2)
    for s in range(1, r):
        assert coord(C, bockstein_higher(C, s, g)) == (0,)
    assert coord(C, bockstein_higher(C, r, g)) == (1,)
    if r == 1:
        assert bockstein_higher(C, 2, g) is Undefined


def test_d2_on_moore():
    C = moore_chain_complex(4, 7)
    _, (g,) = cohomology(C, 7, 4)
    assert coord(C, d2_connecting(C, g)) == (1,)
    assert brute_d2(C, g.cochain, 7) == {d2_connecting(C, g).cochain}
    # d2 kills reductions of Z/8 classes
    C8 = moore_chain_complex(8, 7)
    _, (h,) = cohomology(C8, 7, 8)
    assert coord(C8, d2_connecting(C8, reduce_class(h, 4))) == (0,)


def test_beta2_undefined_off_kernel_of_beta1():
    K = cross_polytope_rp(3)
    _, (x,) = cohomology(K, 1, 2)
    assert bockstein_higher(K, 2, x) is Undefined


def test_operation_matrix_compose():
    C = moore_chain_complex(4, 7)
    q = reduction_matrix(C, 7)
    b = beta_matrix(C, 2, 7)
    assert q.matrix == ((0,),) or q.matrix == ((1,),)
    assert compose(b, q, "b2q").source == (7, 4)
    with pytest.raises(ValueError):
        compose(q, b, "bad")
    assert not d2_matrix(C, 7).is_zero


def test_wu_classes():
    w = wu_and_sw(rp2())
    assert coord(rp2(), w.w1) == (1,)
    assert coord(rp2(), w.w2) == (1,)
    assert not w.is_spin(rp2())
    K = cross_polytope_rp(3)
    assert wu_and_sw(K).is_spin(K)
    S = sphere_boundary(4)
    assert wu_and_sw(S).is_spin(S)
    T = product_complex(sphere_boundary(2), sphere_boundary(2))
    assert wu_and_sw(T).is_spin(T)


def test_evaluate_top():
    K = rp2()
    x = powers(K, 2)
    assert evaluate_top(x[2]) == 1
