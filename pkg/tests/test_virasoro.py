import pytest
from hypothesis import given, settings, strategies as st

from ancestor.cutjoin import build_cut_and_join, run_recursion, tau_alpha
from ancestor.generators import make_constrained_virasoro, make_virasoro
from ancestor.giventaldata import GiventalData, direct_ancestor_potential
from ancestor.modeops import ModeOperator, WindowSpec, apply, commutator, conjugate_by_exponential
from ancestor.scalarseries import Q, dfact
from ancestor.tpoly import HbarSeries, TPolynomial, var
from ancestor.virasoro import (
    build_H,
    build_K_family,
    build_L_family,
    build_system,
    check_constraints,
    check_dimension,
    m_operator,
    solve_from_constraints,
    translated_constraint,
    translation_generator,
)

from .strategies import givental_data, nonzero_q

MIXED = GiventalData(N=2, alpha=[1, 0], sqrt_delta=[1, Q(3, 2)],
                     delta_T={(1, 2): Q(1, 2), (2, 1): Q(-1, 3)},
                     r_jets=[[[Q(1, 2), Q(1, 3)], [Q(1, 3), -1]], [[0, Q(2, 5)], [Q(-2, 5), 0]]], order_K=3)


def one_sector(alpha, sd=1, dT=None):
    return GiventalData(N=1, alpha=[alpha], sqrt_delta=[sd], delta_T={(1, k): c for k, c in (dT or {}).items()})


def test_trivial_family_is_seed_family():
    W = WindowSpec(max_ann=7)
    fam = build_L_family(one_sector(1), 3, W)
    for m in range(-1, 4):
        assert fam[(1, m)] == make_constrained_virasoro(1, 1, m, W)


def test_delta_only_divides_hbar_term():
    sd = Q(4, 3)
    W = WindowSpec(max_ann=9)
    fam = build_L_family(one_sector(0, sd), 3, W)
    for m in range(0, 4):
        k = m
        assert fam[(1, m)].coeff(((k + 1, 1),), hbar=-1) * dfact(2 * k + 1) == -Q(dfact(2 * k + 1), 2) / sd


def test_string_equation_cancellation():
    W = WindowSpec(max_ann=6)
    L = make_constrained_virasoro(1, 1, -1, W)
    out = apply(L, tau_alpha(1, 3))
    assert out[0] == TPolynomial()


@pytest.mark.parametrize("alpha", [0, 1])
def test_seed_constraints(alpha):
    K = 3
    fam = build_L_family(one_sector(alpha), 3, WindowSpec(max_ann=(2 * alpha + 1) * (K + 1)))
    assert check_constraints(fam, tau_alpha(alpha, K + 1), K) is None


def test_perturbed_coefficient_is_reported():
    K = 2
    fam = build_L_family(one_sector(1), 2, WindowSpec(max_ann=9))
    Z = tau_alpha(1, K + 1)
    bumped = HbarSeries([Z[0], Z[1] + TPolynomial({var(1, 1): Q(1, 100)}), Z[2], Z[3]])
    fail = check_constraints(fam, bumped, K)
    assert fail is not None and fail.order <= K
    assert fail.render().startswith(f"L[1][{fail.m}] . Z has coefficient")
    with pytest.raises(ValueError, match="needs Z through"):
        check_constraints(fam, Z, K + 1)


def test_translated_constraint_matches_conjugation():
    d = one_sector(1, Q(2, 3), {2: Q(1, 2), 3: Q(-1, 5)})
    W = WindowSpec(max_ann=8)
    big = WindowSpec(max_ann=20)
    sd = d.sqrt_delta[0]
    g = translation_generator(d, big)
    for m in range(-1, 4):
        seed = make_constrained_virasoro(1, 1, m, big).map_hbar(lambda h: sd ** h)
        # exp(g) X exp(-g) with g the translation generator
        want = conjugate_by_exponential(seed, g, W)
        assert translated_constraint(d, 1, m, W) == want


def test_K_elimination_leaves_single_hbar_term():
    d = one_sector(1, 1, {2: Q(1, 2)})
    fam = build_L_family(d, None, WindowSpec(max_ann=9))
    L1 = fam[(1, 0)]
    hinv = [k for k in L1.terms if k[0] == -1]
    assert len(hinv) > 1
    Khat, Ktilde = build_K_family(fam, d)
    for key, op in Khat.items():
        assert len([k for k in op.terms if k[0] == -1]) == 1
    for op in Ktilde.values():
        assert op.hbar_powers() <= {0}


def test_family_commutators():
    d = MIXED
    W = WindowSpec(max_ann=5)
    fam = build_L_family(d, 4, WindowSpec(max_ann=5 + 12))
    for (a, k) in fam.keys():
        for (b, m) in fam.keys():
            if k + m > 2 or (a, k) >= (b, m):
                continue
            c = commutator(fam[(a, k)], fam[(b, m)], W)
            want = fam[(a, k + m)].truncate(W).scale(k - m) if a == b and (a, k + m) in fam.ops else ModeOperator()
            assert c == want, (a, k, b, m)


def test_H_trivial_and_dimension():
    W = WindowSpec(max_ann=9)
    H = build_H(one_sector(1), W)
    assert H == make_virasoro(1, 0, W).scale(Q(1, 3))
    assert check_dimension(H, tau_alpha(1, 3)) is None
    bad = tau_alpha(1, 2)
    bad = HbarSeries([bad[0], bad[1], bad[2] + TPolynomial({var(1, 0): 1})])
    assert check_dimension(H, bad)[0] == 2


@pytest.mark.parametrize("alpha", [0, 1])
def test_solver_C_on_trivial_data(alpha):
    assert solve_from_constraints(one_sector(alpha), 4) == tau_alpha(alpha, 4)


def test_solver_C_mixed_with_constants():
    Z = direct_ancestor_potential(MIXED, 3)
    assert solve_from_constraints(MIXED, 3) == Z
    assert any(Z[m].constant_term() for m in range(1, 4))


def test_M_annihilates_Z():
    system = build_system(MIXED, 3)
    Z = direct_ancestor_potential(MIXED, 4)
    kt = system.Ktilde
    pairs = [(a, k, b, m) for (a, k) in kt for (b, m) in kt
             if (a, k) != (b, m) and (b, k) in kt and (a, m) in kt and max(k, m) <= 2]
    assert len(pairs) > 4
    for a, k, b, m in pairs:
        out = apply(m_operator(a, b, k, m, kt, system.window), Z.truncate(3))
        assert all(not p.terms for p in out.coeffs[:3]), (a, k, b, m)


@given(givental_data(max_K=3))
@settings(max_examples=10)
def test_solver_C_agrees_with_pipeline(d):
    assert solve_from_constraints(d) == direct_ancestor_potential(d)
