"""Virasoro constraints of a generalized ancestor potential and solver C.

``L^a_m = R T Delta L^{alpha_a}_m Delta^-1 T^-1 R^-1`` annihilate ``Z``.  Triangular
elimination of the ``1/hbar`` parts gives ``dZ/dT[a][k] = hbar K~_{k;a} Z``;
together with ``hbar dZ/dhbar = H Z`` this determines ``Z`` order by order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .generators import make_constrained_virasoro, make_virasoro
from .modeops import (
    ModeOperator,
    WindowSpec,
    apply,
    conjugate_by_exponential,
    normal_order_product,
)
from .scalarseries import ONE, ZERO, Q, dfact
from .tpoly import HbarSeries, TPolynomial, mono_degree


@dataclass
class VirasoroFamily:
    """``ops[(a, m)]`` for ``m >= -alpha_a`` with ``2m <= window.max_ann``."""

    ops: dict
    window: WindowSpec
    alpha: tuple = ()

    def __getitem__(self, key) -> ModeOperator:
        return self.ops[key]

    def keys(self):
        return sorted(self.ops)


def translation_generator(d, window: WindowSpec) -> ModeOperator:
    """``hbar^-1 sum dT[a][k] d/dT[a][k]`` (the log of the translation)."""
    out = ModeOperator()
    for (a, k), c in d.delta_T.items():
        if window.max_ann is None or 2 * k + 1 <= window.max_ann:
            out = out + ModeOperator.d_dT(a, k, c, hbar=-1)
    return out


def translated_constraint(d, a: int, m: int, window: WindowSpec) -> ModeOperator:
    """Seed constraint of sector ``a`` after the rescaling and the translation.

    The rescaling divides the ``1/hbar`` term by ``sqrt(Delta_a)``; the
    translation adds ``(1/2hbar) sum_j (2j+2m+1)!!/(2j-1)!! dT_j d/dT_{j+m}``.
    """
    al = d.alpha[a - 1]
    sd = d.sqrt_delta[a - 1]
    op = make_constrained_virasoro(a, al, m, window).map_hbar(lambda h: sd ** h)
    for j, c in d.sector_translation(a).items():
        lvl = j + m
        if lvl < 0 or (window.max_ann is not None and 2 * lvl + 1 > window.max_ann):
            continue
        w = c * Q(dfact(2 * j + 2 * m + 1), 2 * dfact(2 * j - 1))
        op = op + ModeOperator.d_dT(a, lvl, w, hbar=-1)
    return op


def build_L_family(d, m_max: int | None, window: WindowSpec) -> VirasoroFamily:
    from .giventaldata import ensure_valid, r_hat_operator

    ensure_valid(d)
    W = window.max_ann
    if W is None:
        raise ValueError("the family needs a window with max_ann")
    if m_max is None:
        m_max = W // 2 + 1
    ops = {}
    g = None
    for a in range(1, d.N + 1):
        al = d.alpha[a - 1]
        for m in range(-al, m_max + 1):
            op = translated_constraint(d, a, m, window)
            if d.has_r():
                if g is None:
                    # the seed terms have creation degree <= W + 3
                    g = r_hat_operator(d, WindowSpec(max_ann=2 * W + 4))
                op = conjugate_by_exponential(op, g, window)
            ops[(a, m)] = op
    return VirasoroFamily(ops, window, d.alpha)


@dataclass
class ConstraintFailure:
    sector: int
    m: int
    order: int
    monomial: tuple
    value: object

    def render(self) -> str:
        from .tpoly import mono_text

        return f"L[{self.sector}][{self.m}] . Z has coefficient {self.value} at hbar^{self.order} on {mono_text(self.monomial)}"


def check_constraints(fam: VirasoroFamily, Z: HbarSeries, K: int, m_range=None):
    """``None`` when every family member annihilates ``Z`` through ``hbar**K``, else the first failure."""
    if Z.order_K < K + 1:
        raise ValueError(f"checking through hbar^{K} needs Z through hbar^{K + 1}, got {Z.order_K}")
    for (a, m) in fam.keys():
        if m_range is not None and m not in m_range:
            continue
        out = apply(fam[(a, m)], Z.truncate(K + 1))
        for n in range(K + 1):
            if out.coeffs[n].terms:
                mono, c = out.coeffs[n].sorted_terms()[0]
                return ConstraintFailure(a, m, n, mono, c)
    return None


def _hinv_part(op: ModeOperator) -> dict:
    """``1/hbar`` part as ``{(sector, level): coeff}`` of ``d/dT`` terms."""
    out = {}
    for (h, modes), c in op.terms.items():
        if h == 0:
            continue
        if h != -1 or len(modes) != 1 or modes[0][0] < 1:
            raise ValueError(f"unexpected term hbar^{h} {modes} in a constraint")
        k, a = modes[0]
        out[(a, k - 1)] = c * dfact(2 * k - 1)
    return out


def build_K_family(fam: VirasoroFamily, d) -> tuple[dict, dict]:
    """Return ``(Khat, Ktilde)``.

    ``Khat[(a, k)]`` has a single ``1/hbar`` term; ``Ktilde[(a, k)]`` is the
    hbar-free operator with ``dZ/dT[a][k] = hbar Ktilde Z``.
    """
    W = fam.window.max_ann
    top = (W - 1) // 2  # highest level a derivative can act on degree <= W
    Khat, Ktilde = {}, {}
    for (a, m), L in sorted(fam.ops.items()):
        al = d.alpha[a - 1]
        lead = (a, m + al)
        if lead[1] > top:
            continue
        K = L
        while True:
            part = _hinv_part(K)
            extra = sorted(((lvl, b) for (b, lvl), c in part.items() if (b, lvl) != lead and lvl <= top))
            if not extra:
                break
            lvl, b = extra[0]
            other = fam.ops.get((b, lvl - d.alpha[b - 1]))
            if other is None:
                raise ValueError(f"family lacks L[{b}][{lvl - d.alpha[b - 1]}] needed for elimination")
            c_other = _hinv_part(other)[(b, lvl)]
            K = K - other.scale(part[(b, lvl)] / c_other)
        # drop derivative terms beyond the window; they act as zero
        K = ModeOperator._raw({key: c for key, c in K.terms.items()
                               if not (key[0] == -1 and key[1][0][0] - 1 > top)})
        hp = _hinv_part(K)
        if set(hp) != {lead}:
            raise AssertionError(f"K[{a}][{m}] does not have a single 1/hbar term: {sorted(hp)}")
        Khat[(a, m)] = K
        k = m + al
        sd = d.sqrt_delta[a - 1]
        kt = K.scale(2 * sd / dfact(2 * k + 1)) + ModeOperator.d_dT(a, k, 1, hbar=-1)
        if kt.hbar_powers() - {0}:
            raise AssertionError(f"K~[{a}][{k}] is not hbar-free")
        Ktilde[(a, k)] = kt
    return Khat, Ktilde


def euler_operator(Ktilde: dict, window: WindowSpec) -> ModeOperator:
    """``O = sum (2k+1) T[a][k] K~_{k;a}``."""
    out = ModeOperator()
    for (a, k), kt in sorted(Ktilde.items()):
        if window.max_ann is not None and 2 * k + 1 > window.max_ann:
            continue
        out = out + normal_order_product(ModeOperator.T(a, k, 2 * k + 1), kt)
    return out


def build_H(d, window: WindowSpec) -> ModeOperator:
    """``H = R V (sum_a L_0^a / (2alpha_a+1)) V^-1 R^-1`` within ``window``."""
    from .giventaldata import r_hat_operator
    from .virgroup import vir_elements, vir_generator

    W = window.max_ann
    big = WindowSpec(max_ann=2 * W + 2)
    H = ModeOperator()
    for a in range(1, d.N + 1):
        H = H + make_virasoro(a, 0, big).scale(Q(1, 2 * d.alpha[a - 1] + 1))
    if d.delta_T:
        g = vir_generator(vir_elements(d, 2 * W + 7), big)
        H = conjugate_by_exponential(H, g, window)
    else:
        H = H.truncate(window)
    if d.has_r():
        g = r_hat_operator(d, WindowSpec(max_ann=W + H.max_cre_degree()))
        H = conjugate_by_exponential(H, g, window)
    return H


def m_operator(a: int, b: int, k: int, m: int, ktilde: dict, window: WindowSpec | None = None) -> ModeOperator:
    """``M^{a,b}_{k,m} = d/dT[a][m] K~_{k;b} - d/dT[b][k] K~_{m;a}``."""
    if (a, m) == (b, k):
        return ModeOperator()
    left = normal_order_product(ModeOperator.d_dT(a, m), ktilde[(b, k)], window)
    right = normal_order_product(ModeOperator.d_dT(b, k), ktilde[(a, m)], window)
    return left - right


@dataclass
class ConstraintSystem:
    family: VirasoroFamily
    Khat: dict
    Ktilde: dict
    euler: ModeOperator
    H: ModeOperator
    window: WindowSpec


def build_system(d, K: int, slack: int = 0) -> ConstraintSystem:
    W = d.degree_slope * max(K, 1) + slack
    window = WindowSpec(max_ann=W)
    fam = build_L_family(d, None, window)
    Khat, Ktilde = build_K_family(fam, d)
    return ConstraintSystem(fam, Khat, Ktilde, euler_operator(Ktilde, window), build_H(d, window), window)


def solve_from_constraints(d, K: int | None = None, system: ConstraintSystem | None = None,
                           slack: int = 0) -> HbarSeries:
    """Solver C: degree-by-degree solve of the Euler equation, constants from ``H``."""
    K = d.order_K if K is None else K
    system = system or build_system(d, K, slack)
    H = system.H
    for (h, modes) in H.terms:
        if not any(k > 0 for k, _ in modes):
            raise AssertionError("dimension operator has a term without annihilator")
    coeffs = [TPolynomial.constant(1)]
    for m in range(1, K + 1):
        rhs = system.euler.apply_poly(coeffs[-1])
        pos = {}
        for mono, c in rhs.terms.items():
            dg = mono_degree(mono)
            if dg > 0:
                pos[mono] = c / dg
        Zm = TPolynomial._raw(pos)
        const = H.apply_poly(Zm).constant_term() / m
        if const:
            Zm = Zm + TPolynomial.constant(const)
        coeffs.append(Zm)
    return HbarSeries(coeffs)


def check_dimension(H: ModeOperator, Z: HbarSeries):
    """First ``(m, monomial, H Z, m Z)`` violating ``(H Z)^(m) = m Z^(m)``, or ``None``."""
    for m, p in enumerate(Z.coeffs):
        lhs = H.apply_poly(p)
        rhs = p.scale(m)
        if lhs != rhs:
            diff = (lhs - rhs).sorted_terms()[0][0]
            return m, diff, lhs.coeff(diff), rhs.coeff(diff)
    return None
