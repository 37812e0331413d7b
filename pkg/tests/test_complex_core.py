import random

import numpy as np
import pytest

from smoothings.complex_core import (
    FacetParseError,
    NotAPseudomanifold,
    SimplicialComplex,
    betti_numbers,
    build_complex,
    cohomology,
    cohomology_group,
    cross_polytope_rp,
    format_facets,
    homology_group,
    is_cocycle,
    moore_chain_complex,
    parse_facets,
    product_complex,
    rp2,
    simplex,
    sphere_boundary,
    top_structure,
    trivial_pi1_certificate,
)
from smoothings.exact_algebra import AbelianGroup
from smoothings.oracle import brute_cohomology

Z = AbelianGroup(1, ())


def test_build_boundary_tetrahedron():
    K = sphere_boundary(2)
    assert K.f_vector == (4, 6, 4)


def test_build_rp2():
    K = rp2()
    assert K.f_vector == (6, 15, 10)
    assert K.euler_characteristic() == 1


def test_point_and_interval():
    P = build_complex([(0,)])
    assert P.f_vector == (1,) and P.chains.top == 0
    I = simplex(1)
    assert I.chains.bd[1].toarray().tolist() == [[-1], [1]]


def test_duplicate_vertex_rejected():
    with pytest.raises(ValueError):
        build_complex([(0, 0, 1)])


def test_lexicographic_order_is_deterministic():
    a = build_complex([(3, 1, 2), (0, 1, 2)])
    b = build_complex([(0, 2, 1), (2, 3, 1)])
    assert a.simplices == b.simplices
    for S in a.simplices:
        assert S == sorted(S)


def test_facet_parsing():
    text = "# comment\n0 1 2\n\n1 2 3  # trailing\n"
    assert parse_facets(text) == [(0, 1, 2), (1, 2, 3)]
    assert parse_facets(format_facets([(0, 1), (1, 2)])) == [(0, 1), (1, 2)]
    with pytest.raises(FacetParseError):
        parse_facets("0 x 1\n")
    with pytest.raises(FacetParseError):
        parse_facets("# nothing\n")


def test_boundary_ranks_tetrahedron():
    C = sphere_boundary(2).chains
    assert np.linalg.matrix_rank(C.bd[2].toarray()) == 3
    assert np.linalg.matrix_rank(C.bd[1].toarray()) == 3


def test_cohomology_examples():
    assert cohomology_group(sphere_boundary(2), 2, 0) == Z
    assert cohomology_group(rp2(), 1, 2) == AbelianGroup.cyclic(2)
    assert cohomology_group(rp2(), 2, 0) == AbelianGroup.cyclic(2)
    G, basis = cohomology(rp2(), 1, 2)
    assert all(is_cocycle(rp2(), 1, b.cochain, 2) for b in basis)


def test_product_examples():
    T = product_complex(sphere_boundary(1), sphere_boundary(1))
    assert T.euler_characteristic() == 0
    assert cohomology_group(T, 1, 0) == AbelianGroup(2, ())
    sq = product_complex(simplex(1), simplex(1))
    assert len(sq.facets) == 2
    P = product_complex(build_complex([(0,)]), rp2())
    assert P.f_vector == rp2().f_vector
    K1, K2 = sphere_boundary(1), sphere_boundary(2)
    P = product_complex(K1, K2)
    assert len(P.facets) == len(K1.facets) * len(K2.facets) * 3
    assert P.euler_characteristic() == K1.euler_characteristic() * K2.euler_characteristic()


@pytest.mark.parametrize("m,k", [(4, 7), (2, 1), (3, 7)])
def test_moore_complexes(m, k):
    C = moore_chain_complex(m, k)
    assert homology_group(C, k) == AbelianGroup.cyclic(m)
    if m == 4:
        assert cohomology_group(C, 7, 4) == AbelianGroup.cyclic(4)
        assert cohomology_group(C, 8, 2) == AbelianGroup.cyclic(2)
    elif m == 2:
        assert cohomology_group(C, 1, 2) == AbelianGroup.cyclic(2)
        assert cohomology_group(C, 2, 2) == AbelianGroup.cyclic(2)
    else:
        assert cohomology_group(C, 8, 2).is_trivial


def test_top_structure_examples():
    t = top_structure(sphere_boundary(9))
    assert t.orientable and t.h1_zero
    t = top_structure(rp2())
    assert not t.orientable and not t.h1_zero
    t = top_structure(product_complex(sphere_boundary(1), sphere_boundary(6)))
    assert t.orientable and not t.h1_zero
    with pytest.raises(NotAPseudomanifold):
        top_structure(simplex(2))


def test_pi1_certificate():
    assert trivial_pi1_certificate(sphere_boundary(3))
    assert trivial_pi1_certificate(product_complex(sphere_boundary(2), sphere_boundary(2)))
    assert not trivial_pi1_certificate(rp2())
    assert not trivial_pi1_certificate(cross_polytope_rp(3))


def test_rp3_model():
    K = cross_polytope_rp(3)
    assert [cohomology_group(K, k, 2).ngens for k in range(4)] == [1, 1, 1, 1]
    assert top_structure(K).orientable


def test_poincare_duality_mod2():
    for K in (sphere_boundary(4), product_complex(sphere_boundary(2), sphere_boundary(2)), rp2(),
              cross_polytope_rp(3)):
        n = K.dim
        r = [cohomology_group(K, k, 2).ngens for k in range(n + 1)]
        assert r == r[::-1]


def test_euler_from_betti():
    for K in (sphere_boundary(3), rp2(), product_complex(sphere_boundary(1), sphere_boundary(2))):
        b = betti_numbers(K)
        assert sum((-1) ** k * x for k, x in enumerate(b)) == K.euler_characteristic()


def test_boundary_squared_zero_on_products():
    C = product_complex(sphere_boundary(2), sphere_boundary(2)).chains
    for k in range(2, C.top + 1):
        assert not (C.bd[k - 1] @ C.bd[k]).count_nonzero()


def _random_complex(rng):
    nv = rng.randint(4, 7)
    facets = [tuple(rng.sample(range(nv), rng.randint(2, 4))) for _ in range(rng.randint(2, 6))]
    return build_complex(facets)


def test_engine_matches_brute_force_on_random_complexes():
    rng = random.Random(20261019)
    checked = 0
    for _ in range(200):
        K = _random_complex(rng)
        C = K.chains
        for k in range(C.top + 1):
            for m in (2, 3, 4):
                if m ** C.ranks[k] > 2 ** 16:
                    continue
                assert brute_cohomology(C, k, m).group == cohomology_group(C, k, m), (K.facets, k, m)
                checked += 1
    assert checked > 300
