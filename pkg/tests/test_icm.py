"""Ideal class monoid enumeration: bounds, dedup, completeness flags,
local refinement."""

import pytest

from avcyclic import icm, orders, weil
from avcyclic.errors import InputError
from avcyclic.orders import IdealLattice


def pair_order(p, r, g, coeffs):
    return orders.frobenius_pair_order(weil.make_context(p, r, g, coeffs))


def test_minkowski_bound_values():
    assert icm.minkowski_index_bound(pair_order(2, 1, 1, [1, 1, 2])) == 2  # disc -7
    assert icm.minkowski_index_bound(pair_order(5, 1, 1, [1, -2, 5])) == 3  # disc -16
    assert icm.minkowski_index_bound(pair_order(2, 2, 1, [1, 1, 4])) == 3  # disc -15


def test_single_class_monoid():
    r = icm.enumerate_icm(pair_order(2, 1, 1, [1, 1, 2]))
    assert len(r.classes) == 1
    assert r.classes[0] == IdealLattice.standard(r.order.ctx)
    assert r.completeness == "certified"
    assert r.indeterminate_pairs == ()
    assert r.index_bound == 2


def test_two_class_monoid_with_distinct_rings():
    r = icm.enumerate_icm(pair_order(5, 1, 1, [1, -2, 5]))
    assert [(l.den, l.mat) for l in r.classes] == [
        (1, ((1, 0), (0, 1))),
        (1, ((1, 1), (0, 2))),
    ]
    assert [(l.den, l.mat) for l in r.multiplicator_rings] == [
        (1, ((1, 0), (0, 1))),
        (2, ((1, 1), (0, 2))),
    ]
    assert r.completeness == "certified"


def test_two_class_monoid_same_ring():
    # class number 2 at discriminant -15: a genuinely non-principal class
    r = icm.enumerate_icm(pair_order(2, 2, 1, [1, 1, 4]))
    assert len(r.classes) == 2
    std = IdealLattice.standard(r.order.ctx)
    assert r.multiplicator_rings == (std, std)
    assert orders.ideal_equivalent(r.classes[0], r.classes[1]).status == "not_equivalent"


def test_classes_are_pairwise_inequivalent_and_stable():
    r = icm.enumerate_icm(pair_order(5, 1, 1, [1, -2, 5]))
    ctx = r.order.ctx
    a = orders.alpha(ctx)
    v = orders.q_over_alpha(ctx)
    for lat in r.classes:
        for e in lat.elements:
            assert (a * e) in lat and (v * e) in lat
    for i in range(len(r.classes)):
        for j in range(i + 1, len(r.classes)):
            assert orders.ideal_equivalent(r.classes[i], r.classes[j]).status == "not_equivalent"


def test_bound_edge_cases():
    o = pair_order(5, 1, 1, [1, -2, 5])
    with pytest.raises(InputError) as e:
        icm.enumerate_icm(o, index_bound=0)
    assert e.value.code == "bad_bound"
    tiny = icm.enumerate_icm(o, index_bound=1)
    assert len(tiny.classes) == 1  # only the order itself at index 1
    assert tiny.completeness == "heuristic"  # bound below the certified one


def test_monotone_and_stabilizing():
    for p, r_, coeffs in ((2, 1, [1, 1, 2]), (5, 1, [1, -2, 5]), (2, 2, [1, 1, 4])):
        o = pair_order(p, r_, 1, coeffs)
        mink = icm.minkowski_index_bound(o)
        at_mink = icm.enumerate_icm(o, index_bound=mink)
        doubled = icm.enumerate_icm(o, index_bound=2 * mink)
        assert set(at_mink.classes) <= set(doubled.classes)
        assert len(at_mink.classes) == len(doubled.classes)


def test_requires_irreducible():
    ctx = weil.make_context(2, 2, 1, [1, -4, 4])
    o = orders.frobenius_pair_order(ctx)
    with pytest.raises(InputError) as e:
        icm.enumerate_icm(o)
    assert e.value.code == "not_irreducible"


def test_quartic_default_bound_is_capped():
    ctx = weil.make_context(2, 1, 2, [1, 1, 1, 2, 4])
    o = orders.frobenius_pair_order(ctx)
    r = icm.enumerate_icm(o)
    assert r.index_bound <= icm.QUARTIC_DEFAULT_INDEX_CAP
    assert len(r.classes) >= 1
    assert r.classes[0] == o.lattice


def test_quartic_indeterminate_pairs_are_reported():
    ctx = weil.make_context(2, 1, 2, [1, 0, 1, 0, 4])
    r = icm.enumerate_icm(orders.frobenius_pair_order(ctx))
    assert r.indeterminate_pairs  # frozen: this context exhausts one search
    assert r.completeness == "heuristic"
    for i, j, bound in r.indeterminate_pairs:
        assert 0 <= i < j < len(r.classes)
        assert bound >= 1
        eq = orders.ideal_equivalent(r.classes[i], r.classes[j])
        assert eq.status == "indeterminate"


def test_refine_by_sigma_values():
    r5 = icm.enumerate_icm(pair_order(5, 1, 1, [1, -2, 5]))
    kept = icm.refine_by_sigma(r5, 2)
    assert [(l.den, l.mat) for l in kept] == [(1, ((1, 1), (0, 2)))]
    r2 = icm.enumerate_icm(pair_order(2, 1, 1, [1, 1, 2]))
    assert icm.refine_by_sigma(r2, 2) == []
    with pytest.raises(InputError) as e:
        icm.refine_by_sigma(r5, 3)
    assert e.value.code == "ell_not_dividing"
