import json

import pytest

from smoothings.classifier import (
    CITATIONS,
    InertiaBounds,
    SubgroupDescriptor,
    classify,
    classify_concordance,
    concordance_inertia,
    homotopy_inertia,
    lens_inertia,
    theorem_c_rows,
    theta_constants,
)
from smoothings.exact_algebra import AbelianGroup
from smoothings.profile import (
    HypothesisError,
    profile_connected_sum,
    profile_lens9,
    profile_rp,
    profile_sphere,
    profile_sphere_product,
)

G = AbelianGroup.from_cyclic


def test_theta_constants():
    assert theta_constants(7)["theta"] == G([28])
    assert theta_constants(8)["theta"] == G([2])
    assert theta_constants(9)["theta"] == G([2, 2, 2])
    assert theta_constants(10)["theta"] == G([6])
    assert theta_constants(7)["bP"] == G([28]) and theta_constants(9)["bP"] == G([2])


@pytest.mark.parametrize("n", [7, 8, 9, 10])
def test_sphere_concordance_is_theta(n):
    assert classify_concordance(profile_sphere(n)).group == theta_constants(n)["theta"]


def test_subgroup_descriptor():
    a = SubgroupDescriptor(9, ("eta_epsilon",))
    b = SubgroupDescriptor(9, ("eta_epsilon", "bP"))
    assert a <= b and not b <= a
    assert b.structure == G([2, 2])
    assert str(b) == "Z/2<eta_epsilon> + bP_10"
    with pytest.raises(ValueError):
        SubgroupDescriptor(9, ("beta1",))


@pytest.mark.parametrize("m", range(2, 13))
def test_lens_inertia_orders(m):
    I = lens_inertia(m)
    if m % 2:
        assert I.generators == ()
    elif m % 4 == 2:
        assert I.generators == ("eta_epsilon",) and I.structure.order == 2
    else:
        assert I.generators == ("eta_epsilon", "bP") and I.structure.order == 4


def test_lens_inertia_rejects_bad_m():
    with pytest.raises(ValueError):
        lens_inertia(0)


def test_rp8():
    r = classify(profile_rp(8))
    assert r.concordance.group == G([2, 2])
    assert r.Ih.exact and r.Ih.lower.generators == ()
    assert r.inertia.generators == ()
    assert any("RP^8" in c for c in r.caveats)


def test_rp9():
    r = classify(profile_rp(9))
    assert r.case == "NonSpinIotaEta"
    assert r.concordance.group == G([2, 2, 4])
    assert r.Ic.generators == r.Ih.lower.generators == r.inertia.generators == ("eta_epsilon",)
    assert r.inertia.structure.order == 2


def test_rp10():
    r = classify(profile_rp(10))
    assert r.concordance is None and r.Ic is None
    assert r.Ih.exact and r.Ih.lower.generators == ("eta_mu", "beta1")
    assert r.Ih.lower.structure == G([6])
    assert r.inertia.generators == ("eta_mu", "beta1")
    assert any("unavailable" in c for c in r.caveats)


def test_lens_classification():
    for m in (4, 8):
        r = classify(profile_lens9(m))
        assert r.concordance.group == G([2, 2, 8])
        assert r.inertia == lens_inertia(m)
        assert r.Ih.exact and r.Ih.lower == r.inertia
    assert classify(profile_lens9(3)).inertia.generators == ()


def test_pending_branches():
    r = classify(profile_sphere_product(4, 6))
    assert r.pending == ("phi", "psi")
    assert [dict(a) for a, _ in r.conditional] == [{"phi": "nonzero"}, {"phi": "zero", "psi": "zero"}]
    assert r.conditional[0][1].concordance.group == G([3])
    assert r.conditional[1][1].concordance.group == G([3, 2])


def test_pending_branches_with_psi_shapes():
    r = classify(profile_connected_sum(profile_sphere_product(3, 7), profile_sphere_product(4, 6)))
    shapes = [a.get("psi_shape") for a, _ in r.conditional if a.get("psi") == "nonzero"]
    assert shapes == ["eta2"]


def test_products_concordance():
    assert classify(profile_sphere_product(3, 7)).concordance.group == G([2, 84])
    assert classify(profile_sphere_product(2, 7)).concordance.group == G([2, 2, 2, 28])


def test_dimension_seven_caveat():
    r = classify(profile_sphere(7))
    assert r.inertia is None
    assert any("dimension 7" in c for c in r.caveats)


def test_hypothesis_errors():
    with pytest.raises(HypothesisError):
        classify_concordance(profile_rp(10))
    with pytest.raises(HypothesisError):
        concordance_inertia(profile_rp(10))


def test_inertia_bounds_undetermined():
    lo = SubgroupDescriptor(10, ("eta_mu",))
    hi = SubgroupDescriptor(10, ("eta_mu", "beta1"))
    b = InertiaBounds(lo, hi, False)
    assert b.undetermined == ("beta1",)


def test_theorem_c_rows():
    rows = {r["row"]: r for r in theorem_c_rows()}
    assert set(rows) == {"(i)", "(ii)", "(iii)", "(iv)", "(v)"}
    assert all(r["pass"] for r in rows.values())


def test_every_trace_entry_is_cited():
    for p in (profile_sphere(8), profile_rp(8), profile_rp(9), profile_rp(10), profile_lens9(12),
              profile_sphere_product(3, 7)):
        r = classify(p)
        assert r.trace
        assert all(t in CITATIONS for t in r.trace)


def test_machine_output_is_stable():
    a = classify(profile_lens9(6)).dumps()
    b = classify(profile_lens9(6)).dumps()
    assert a == b
    assert json.loads(a)["version"] == "result/1"
