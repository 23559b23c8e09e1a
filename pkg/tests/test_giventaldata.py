import json

import pytest
from hypothesis import given, strategies as st

from ancestor.cutjoin import tau_alpha
from ancestor.giventaldata import (
    GiventalData,
    LocalCurveData,
    ValidationError,
    apply_Delta_product,
    apply_R,
    apply_T,
    direct_ancestor_potential,
    from_local_curve,
    inner_order,
    r_hat_operator,
    r_hat_poly,
    translate,
    validate,
)
from ancestor.modeops import WindowSpec
from ancestor.scalarseries import Q
from ancestor.tpoly import HbarSeries, TPolynomial, var

from .strategies import givental_data, nonzero_q, polynomials, r_jets


def data(**kw):
    base = dict(N=1, alpha=[1], sqrt_delta=[1])
    base.update(kw)
    return GiventalData(**base)


def test_validate_accepts_adjoint_jets():
    d = data(N=2, alpha=[1, 0], sqrt_delta=[1, 2], r_jets=[[[1, 2], [2, 3]], [[0, 1], [-1, 0]]])
    assert validate(d).ok


def test_validate_locates_symmetric_r2():
    d = data(N=2, alpha=[1, 1], sqrt_delta=[1, 1], r_jets=[[[0, 0], [0, 0]], [[0, 1], [1, 0]]])
    rep = validate(d)
    assert not rep.ok
    assert rep.violations[0].location == "r_2[1][2]"
    assert "antisymmetric" in rep.violations[0].message


def test_validate_rejects_zero_sqrt_delta_and_bad_support():
    rep = validate(data(sqrt_delta=[0], delta_T={(1, 1): 1}))
    locs = [v.location for v in rep.violations]
    assert "sector 1.sqrt_delta" in locs and "delta_T[1][1]" in locs
    with pytest.raises(ValidationError):
        direct_ancestor_potential(data(sqrt_delta=[0]))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), r_jets(n, 3))))
def test_generated_jets_are_adjoint(nj):
    N, jets = nj
    assert validate(GiventalData(N=N, alpha=[1] * N, sqrt_delta=[1] * N, r_jets=jets)).ok


def test_json_round_trip_and_strictness():
    d = data(N=2, alpha=[1, 0], sqrt_delta=[1, Q(3, 2)], delta_T={(1, 2): Q(1, 2)},
             r_jets=[[[Q(1, 2), 0], [0, 1]]], order_K=4)
    assert GiventalData.from_json(d.to_json()) == d
    doc = json.loads(d.to_json())
    doc["extra"] = 1
    with pytest.raises(ValueError, match="unknown config field"):
        GiventalData.from_json_dict(doc)
    doc = json.loads(d.to_json())
    doc["sectors"][0]["sqrt_delta"] = 0.5
    with pytest.raises(ValueError, match="p/q"):
        GiventalData.from_json_dict(doc)
    doc = json.loads(d.to_json())
    doc["sectors"][1]["typo"] = "1"
    with pytest.raises(ValueError, match="unknown field"):
        GiventalData.from_json_dict(doc)


def test_from_local_curve():
    airy = from_local_curve(LocalCurveData(alpha=(1,), y=({1: 1},)))
    assert airy.sqrt_delta == (1,) and not airy.delta_T
    bessel = from_local_curve(LocalCurveData(alpha=(0,), y=({-1: 1},)))
    assert bessel.sqrt_delta == (1,) and not bessel.delta_T
    c = Q(2, 7)
    d = from_local_curve(LocalCurveData(alpha=(1,), y=({1: 1, 3: c},)))
    assert d.delta_T == {(1, 2): -3 * c}
    with pytest.raises(ValueError):
        from_local_curve(LocalCurveData(alpha=(1,), y=({3: 1},)))


def test_delta_product():
    d = data(N=2, alpha=[0, 1], sqrt_delta=[Q(2, 3), 1])
    t0, t1 = tau_alpha(0, 2, sector=1), tau_alpha(1, 2, sector=2)
    prod = apply_Delta_product(d, [t0, t1])
    assert prod[1] == t0[1].scale(Q(2, 3)) + t1[1]


def test_translation_taylor_shift():
    s = HbarSeries([TPolynomial.constant(1), TPolynomial.variable(1, 2)])
    out = translate(s, {(1, 2): 5}, 0)
    assert out[0] == TPolynomial.constant(6)


def test_translation_keeps_leading_one_for_regular_seed():
    d = data(delta_T={(1, 2): Q(3, 4)}, order_K=3)
    out = apply_T(d, tau_alpha(1, inner_order(1, 3)), degree_slope=3)
    assert out[0] == TPolynomial.constant(1)


def test_translation_refuses_uncertified_order():
    with pytest.raises(ValueError, match="certify"):
        translate(tau_alpha(1, 3), {(1, 2): 1}, 3, degree_slope=3)


def test_inner_orders():
    assert [inner_order(1, K) for K in (1, 2, 3, 4)] == [3, 5, 8, 10]
    assert [inner_order(0, K) for K in (1, 2, 3, 4)] == [2, 3, 5, 6]


def test_r_hat_hand_value():
    rho = Q(3, 5)
    d = data(r_jets=[[[rho]]])
    p = TPolynomial({var(1, 0, 2): 1})
    assert r_hat_poly(d, p) == TPolynomial.constant(-rho)
    out = apply_R(d, HbarSeries([p]))
    assert out[0] == p - TPolynomial.constant(rho)
    assert apply_R(d, HbarSeries.one(2)) == HbarSeries.one(2)


@given(st.integers(1, 2).flatmap(lambda n: st.tuples(st.just(n), r_jets(n, 3))), polynomials(levels=3))
def test_r_hat_mode_form_matches_differential_form(nj, p):
    N, jets = nj
    d = GiventalData(N=N, alpha=[1] * N, sqrt_delta=[1] * N, r_jets=jets)
    p = TPolynomial({m: c for m, c in p.terms.items() if all(a <= N for a, _, _ in m)})
    op = r_hat_operator(d, WindowSpec(max_ann=30))
    assert op.apply_poly(p) == r_hat_poly(d, p)


@given(st.sampled_from([0, 1]), nonzero_q, nonzero_q, nonzero_q)
def test_translation_commutes_past_rescaling(alpha, sd, c1, c2):
    K = 3
    dT = {(1, 1 + alpha): c1, (1, 2 + alpha): c2}
    tau = tau_alpha(alpha, inner_order(alpha, K))
    slope = 2 * alpha + 1
    lhs = translate(tau.scale_hbar(sd), dT, K, degree_slope=slope)
    rhs = translate(tau, {k: sd * v for k, v in dT.items()}, K, degree_slope=slope).scale_hbar(sd)
    assert lhs == rhs


def test_trivial_and_rescaled_pipeline():
    assert direct_ancestor_potential(data(order_K=4)) == tau_alpha(1, 4)
    d = Q(5, 3)
    out = direct_ancestor_potential(data(alpha=[0], sqrt_delta=[d], order_K=4))
    assert out == tau_alpha(0, 4).scale_hbar(d)


@given(givental_data(max_K=3))
def test_pipeline_structure(d):
    Z = direct_ancestor_potential(d)
    assert Z.order_K == d.order_K
    assert Z[0] == TPolynomial.constant(1)
    for m, p in enumerate(Z.coeffs):
        if p:
            assert p.degree() <= d.degree_slope * m
