"""Translations rewritten as upper-triangular Virasoro group elements.

For each sector the translation ``dT`` gives an odd series ``v(z)``, a change
of coordinate ``f(z) = z + O(z^3)`` and coefficients ``chi_k`` with
``f = exp(sum chi_k l_k) z``, ``l_k = -z^(2k+1) d/dz``.  The operator
``V = exp(sum chi_k L_k)`` then reproduces the translation on ``tau_alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .generators import make_virasoro
from .modeops import ModeOperator, WindowSpec, exp_apply
from .scalarseries import ONE, ZERO, LaurentSeries, Q, binomial_power, dfact, series_reverse
from .tpoly import HbarSeries


def v_from_translation(d, a: int, order: int) -> LaurentSeries:
    """``v^a(z) = sqrt(Delta_a) sum_k dT[a][k] z^(2k+1) / (2k+1)!!`` through ``z**order``."""
    sd = d.sqrt_delta[a - 1]
    terms = {2 * k + 1: sd * c / dfact(2 * k + 1) for k, c in d.sector_translation(a).items()}
    return LaurentSeries.from_terms(terms, order, parity=1)


def f_from_v(alpha: int, v: LaurentSeries) -> LaurentSeries:
    """``f = z (1 - (2alpha+1) v / z^(2alpha+1))^(1/(2alpha+1))``."""
    if alpha not in (0, 1):
        raise ValueError(f"alpha must be 0 or 1, got {alpha!r}")
    r = 2 * alpha + 1
    for e in v.terms():
        if e % 2 == 0 or e < 3 + 2 * alpha:
            raise ValueError(f"v must be odd with lowest exponent >= {3 + 2 * alpha}; found z^{e}")
    u = v.shift(-r) * (-r)
    return binomial_power(u, r).shift(1)


def _l_action(chi: dict, g: LaurentSeries) -> LaurentSeries:
    """``sum_k chi_k l_k g = -sum_k chi_k z^(2k+1) g'``."""
    dg = g.derivative()
    out = LaurentSeries(g.order + 1, [], g.order)
    for k, c in chi.items():
        if c:
            out = out + dg.shift(2 * k + 1) * (-c)
    return out.truncate(g.order) if out.order > g.order else out


def f_from_chi(chi: dict, order: int) -> LaurentSeries:
    """``exp(sum chi_k l_k) z`` through ``z**order``; terminates since each ``l_k`` raises valuation."""
    for k in chi:
        if k < 1:
            raise ValueError(f"chi must be supported on k >= 1, got k={k}")
    acc = LaurentSeries.z(order)
    term = acc
    n = 0
    while term.coeffs:
        n += 1
        term = _l_action(chi, term) * Q(1, n)
        acc = acc + term
    return LaurentSeries.from_terms(acc.terms(), order, parity=1)


def chi_from_f(f: LaurentSeries, kmax: int | None = None) -> dict:
    """Solve ``f = exp(sum chi_k l_k) z`` lowest ``k`` first."""
    if f.val != 1 or f.leading() != 1:
        raise ValueError("f must start with z")
    for e in f.terms():
        if e % 2 == 0:
            raise ValueError(f"f must be odd; found z^{e}")
    if kmax is None:
        kmax = (f.order - 1) // 2
    chi: dict = {}
    for k in range(1, kmax + 1):
        e = 2 * k + 1
        cur = f_from_chi(chi, e)
        # chi_k l_k z = -chi_k z^(2k+1) is the only new contribution at z^(2k+1)
        c = cur.coeff(e) - f.coeff(e)
        if c:
            chi[k] = c
    return chi


@dataclass(frozen=True)
class VirGroupElement:
    sector: int
    chi: dict
    f: LaurentSeries
    h: LaurentSeries
    alpha: int = 1
    v: LaurentSeries | None = field(default=None, compare=False)

    def generator(self, window: WindowSpec) -> ModeOperator:
        """``sum_k chi_k L_k`` in this sector, truncated to ``window``."""
        W = window.max_ann
        out = ModeOperator()
        for k, c in sorted(self.chi.items()):
            if W is not None and 2 * k > W:
                break
            out = out + make_virasoro(self.sector, k, window).scale(c)
        return out


def vir_element(d, a: int, order: int) -> VirGroupElement:
    """Group element of sector ``a`` with series known through ``z**order``."""
    al = d.alpha[a - 1]
    v = v_from_translation(d, a, order + 2 * al)
    f = f_from_v(al, v)
    if f.order > order:
        f = f.truncate(order)
    chi = chi_from_f(f)
    h = series_reverse(f)
    return VirGroupElement(sector=a, chi=chi, f=f, h=h, alpha=al, v=v)


def vir_elements(d, order: int) -> list:
    return [vir_element(d, a, order) for a in range(1, d.N + 1)]


def vir_generator(elements, window: WindowSpec) -> ModeOperator:
    out = ModeOperator()
    for e in elements:
        out = out + e.generator(window)
    return out


def series_max_degree(s: HbarSeries) -> int:
    return max((p.degree() for p in s.coeffs if p.terms), default=0)


def apply_V(elements, s: HbarSeries, inverse: bool = False) -> HbarSeries:
    """``V . s`` (or ``V^-1 . s``) as a terminating exponential."""
    if isinstance(elements, VirGroupElement):
        elements = [elements]
    for e in elements:
        for k in e.chi:
            if k < 1:
                raise ValueError("V needs chi supported on k >= 1")
    window = WindowSpec(max_ann=series_max_degree(s))
    g = vir_generator(elements, window)
    return exp_apply(g, s, -1 if inverse else 1)


def check_virtos(d, a: int, K: int):
    """Compare translation and ``V`` on ``tau_alpha`` in sector ``a``.

    Returns ``None`` when both agree through ``hbar**K``, otherwise the first
    difference ``(order, monomial, translated, via_V)``.
    """
    from .cutjoin import tau_alpha
    from .giventaldata import inner_order, translate

    al = d.alpha[a - 1]
    sd = d.sqrt_delta[a - 1]
    shifts = {(a, k): sd * c for k, c in d.sector_translation(a).items()}
    if not shifts:
        return None
    lhs = translate(tau_alpha(al, inner_order(al, K), sector=a), shifts, K, degree_slope=2 * al + 1)
    tau = tau_alpha(al, K, sector=a)
    e = vir_element(d, a, 2 * series_max_degree(tau) + 3)
    rhs = apply_V([e], tau)
    return lhs.first_difference(rhs)


def check_vfunc(e: VirGroupElement):
    """``v = (z^(2alpha+1) - f^(2alpha+1)) / (2alpha+1)`` to the common order."""
    r = 2 * e.alpha + 1
    zr = LaurentSeries.from_terms({r: ONE}, e.f.order + 2 * e.alpha)
    rebuilt = (zr - e.f ** r) * Q(1, r)
    return rebuilt.agrees_with(e.v)
