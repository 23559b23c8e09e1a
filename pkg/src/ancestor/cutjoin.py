"""Cut-and-join description ``dZ/dhbar = W Z`` of a generalized ancestor potential.

Solver B: residues give ``W_V = V W_Delta V^-1`` sector by sector, conjugation
by ``exp(r)`` gives ``W``, and ``Z^(m) = W Z^(m-1) / m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .generators import make_virasoro, make_W_alpha
from .modeops import (
    ModeOperator,
    WindowSpec,
    conjugate_by_exponential,
    cre_degree,
    normal_order_product,
)
from .scalarseries import ONE, ZERO, LaurentSeries, Q, TruncationError, qstr, residue
from .tpoly import HbarSeries, TPolynomial


@dataclass(frozen=True)
class CutJoinOperator:
    """Cubic-plus-linear operator with constant coefficients.

    ``cubic`` maps sorted triples ``((i, a), (j, b), (k, c))`` (mode, sector)
    and ``linear`` maps ``(j, a)`` to the coefficient of the normal-ordered
    monomial in the modes.
    """

    cubic: dict
    linear: dict
    window: WindowSpec

    @classmethod
    def from_operator(cls, op: ModeOperator, window: WindowSpec) -> "CutJoinOperator":
        cubic, linear = {}, {}
        for (h, modes), c in op.terms.items():
            if h != 0:
                raise ValueError(f"cut-and-join operator has an hbar^{h} term")
            if len(modes) == 3:
                cubic[modes] = c
            elif len(modes) == 1:
                linear[modes[0]] = c
            else:
                raise ValueError(f"cut-and-join operator has a term of arity {len(modes)}")
        return cls(dict(sorted(cubic.items())), dict(sorted(linear.items())), window)

    def to_operator(self) -> ModeOperator:
        terms = {(0, m): c for m, c in self.cubic.items()}
        terms.update({(0, (m,)): c for m, c in self.linear.items()})
        return ModeOperator._raw(terms)

    def support_violations(self, all_irregular: bool = False) -> list:
        """Terms outside ``i+j+k >= 0`` / ``j >= -1`` (sharper bounds when every alpha is 0)."""
        lo3, lo1 = (1, 0) if all_irregular else (0, -1)
        bad = [m for m in self.cubic if sum(k for k, _ in m) < lo3]
        bad += [(m,) for m in self.linear if m[0] < lo1]
        return bad

    def export_lines(self) -> list[str]:
        lines = []
        for ((i, a), (j, b), (k, c)), v in self.cubic.items():
            lines.append(f"A {a} {b} {c} {i} {j} {k} {qstr(v)}")
        for (j, a), v in self.linear.items():
            lines.append(f"B {a} {j} {qstr(v)}")
        return lines

    def export_text(self) -> str:
        return "\n".join(self.export_lines()) + "\n"


# -- seed tau-functions --------------------------------------------------------

def run_recursion(w, K: int) -> HbarSeries:
    """``Z^(0) = 1``, ``Z^(m) = W Z^(m-1) / m`` through ``hbar**K``."""
    op = w.to_operator() if isinstance(w, CutJoinOperator) else w
    if any(h != 0 for h in op.hbar_powers()):
        raise ValueError("recursion operator must be hbar-free")
    coeffs = [TPolynomial.constant(1)]
    for m in range(1, K + 1):
        coeffs.append(op.apply_poly(coeffs[-1]).scale(Q(1, m)))
    return HbarSeries(coeffs)


def _relabel(s: HbarSeries, sector: int) -> HbarSeries:
    if sector == 1:
        return s
    out = []
    for p in s.coeffs:
        out.append(TPolynomial._raw({tuple((sector, k, e) for _, k, e in m): c for m, c in p.terms.items()}))
    return HbarSeries(out)


@lru_cache(maxsize=None)
def _tau_sector1(alpha: int, K: int, slack: int = 0) -> HbarSeries:
    if K <= 0:
        return HbarSeries.one(0)
    prev = _tau_sector1(alpha, K - 1, slack)
    W = (2 * alpha + 1) * (K - 1) + slack
    w = make_W_alpha(1, alpha, WindowSpec(max_ann=W))
    nxt = w.apply_poly(prev.coeffs[-1]).scale(Q(1, K))
    return HbarSeries(list(prev.coeffs) + [nxt])


def tau_alpha(alpha: int, K: int, sector: int = 1, slack: int = 0) -> HbarSeries:
    """Kontsevich-Witten (``alpha=1``) or Brezin-Gross-Witten (``alpha=0``) tau-function."""
    if alpha not in (0, 1):
        raise ValueError(f"alpha must be 0 or 1, got {alpha!r}")
    if K < 0:
        raise ValueError("K must be non-negative")
    return _relabel(_tau_sector1(alpha, K, slack), sector)


# -- residue coefficients -----------------------------------------------------

def index_ranges(alpha: int, W: int):
    """``(i, j)`` pairs of ``J_i L_j`` and modes ``j`` of ``J_j`` that can reach annihilation degree ``<= W``."""
    jmax = W // 2
    pairs = [(i, j) for j in range(-alpha, jmax + 1) for i in range(-j - alpha, jmax + 3)]
    linear = list(range(-alpha, (W + 1) // 2 + 1))
    return pairs, linear


def coefficients_AV_BV(d, a: int, window: WindowSpec, h: LaurentSeries | None = None, slack: int = 0):
    """Exact residues ``A^{i,j}`` and ``B^j`` of the conjugated seed operator in sector ``a``."""
    from .virgroup import vir_element

    if window.max_ann is None:
        raise ValueError("coefficients need a window with max_ann")
    al = d.alpha[a - 1]
    sd = d.sqrt_delta[a - 1]
    pairs, lin = index_ranges(al, window.max_ann)
    imax = max(i for i, _ in pairs)
    jmax = max(j for _, j in pairs)
    if h is None:
        order = 2 * (imax + jmax) + 2 * al + 5 + slack
        h = vir_element(d, a, order).h
    hp = h.derivative()
    hinv = h.inverse()
    hpow = {0: LaurentSeries.constant(ONE, h.order - 1)}

    def hp_pow(n: int) -> LaurentSeries:  # h^n
        if n not in hpow:
            hpow[n] = h ** n if n > 0 else hinv ** (-n)
        return hpow[n]

    r = 2 * al + 1
    A: dict = {}
    try:
        hp2 = hp * hp
        left_cache: dict = {}
        for i, j in pairs:
            if i not in left_cache:
                left_cache[i] = (hp * hp_pow(-2 * i)).positive_part()
            right = hp2 * hp_pow(-2 * j - 2)
            val = residue((left_cache[i] * right).shift(1 - 2 * al)) * sd / r
            if val:
                A[(i, j)] = val
        B: dict = {}
        c0 = sd * sd * d.delta_T.get((a, 2), ZERO) / 30 if al == 1 else ZERO
        for j in lin:
            base = hp * hp_pow(-2 * j)
            val = residue(base.shift(-1 - 2 * al)) * sd / 8
            if c0:
                val += residue(base.shift(-1)) * c0
            val /= r
            if val:
                B[j] = val
    except TruncationError as exc:
        raise TruncationError(f"sector {a}: series order of h insufficient for the residues ({exc})") from None
    return A, B


def assemble_W_V(d, window: WindowSpec, coefficients=None, slack: int = 0) -> ModeOperator:
    """``sum_a (sum A^{i,j} J_i L_j + sum B^j J_j)`` in normal order within ``window``."""
    out = ModeOperator()
    for a in range(1, d.N + 1):
        A, B = coefficients[a - 1] if coefficients is not None else coefficients_AV_BV(d, a, window, slack=slack)
        Ls: dict = {}
        for (i, j), c in A.items():
            if j not in Ls:
                Ls[j] = make_virasoro(a, j, window)
            out = out + normal_order_product(ModeOperator.J(a, i), Ls[j], window).scale(c)
        for j, c in B.items():
            out = out + ModeOperator.J(a, j, c)
    return out.truncate(window)


def conjugate_W(d, w_v: ModeOperator, window: WindowSpec) -> CutJoinOperator:
    """``W = exp(r) W_V exp(-r)`` packed as a :class:`CutJoinOperator`."""
    from .giventaldata import ensure_valid, r_hat_operator

    ensure_valid(d)
    w_v = w_v.truncate(window)
    if not d.has_r():
        return CutJoinOperator.from_operator(w_v, window)
    gwin = WindowSpec(max_ann=window.max_ann + w_v.max_cre_degree())
    g = r_hat_operator(d, gwin)
    w = conjugate_by_exponential(w_v, g, window)
    return CutJoinOperator.from_operator(w, window)


def recursion_window(d, K: int, slack: int = 0) -> WindowSpec:
    """Window on which ``W`` acts exactly on ``Z^(m)`` for ``m < K``."""
    return WindowSpec(max_ann=max(d.degree_slope * max(K - 1, 0), 1) + slack)


def build_cut_and_join(d, K: int | None = None, window: WindowSpec | None = None, slack: int = 0) -> CutJoinOperator:
    K = d.order_K if K is None else K
    window = window or recursion_window(d, K, slack)
    return conjugate_W(d, assemble_W_V(d, window, slack=slack), window)


def cutjoin_ancestor_potential(d, K: int | None = None, slack: int = 0) -> HbarSeries:
    """Solver B."""
    from .giventaldata import ensure_valid

    ensure_valid(d)
    K = d.order_K if K is None else K
    return run_recursion(build_cut_and_join(d, K, slack=slack), K)


def ambiguity_shift(w: CutJoinOperator, C: dict, ktilde: dict) -> CutJoinOperator:
    """``W + sum C[(a,k),(b,m)] M^{a,b}_{k,m}``; every ``M`` annihilates ``Z``.

    ``ktilde`` maps ``(sector, level)`` to the operator ``K~`` with
    ``dZ/dT[a][k] = hbar K~_{k;a} Z``.
    """
    from .virasoro import m_operator

    out = w.to_operator()
    for ((a, k), (b, m)), c in sorted(C.items()):
        if not c:
            continue
        for key in ((b, k), (a, m)):
            if key not in ktilde:
                raise ValueError(f"K~ for sector {key[0]} level {key[1]} is outside the built window")
        out = out + m_operator(a, b, k, m, ktilde, w.window).scale(c)
    return CutJoinOperator.from_operator(out.truncate(w.window), w.window)
