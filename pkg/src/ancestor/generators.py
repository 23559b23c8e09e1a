"""Named operators: Virasoro modes, constrained Virasoro, cut-and-join seeds, Euler field."""
from __future__ import annotations

from typing import Sequence

from .modeops import ModeOperator, WindowSpec, normal_order_product
from .scalarseries import Q, ZERO, dfact, to_q


def _ann(k: int) -> int:
    return 2 * k - 1 if k > 0 else 0


def _check_alpha(alpha: int) -> None:
    if alpha not in (0, 1):
        raise ValueError(f"alpha must be 0 or 1, got {alpha!r}")


def make_virasoro(sector: int, m: int, window: WindowSpec) -> ModeOperator:
    """``L_m = 1/2 sum_{j+k=m+1} :J_j J_k:`` in one sector, truncated to ``window``."""
    if window.max_ann is None:
        raise ValueError("L_m is an infinite sum; give a window with max_ann")
    W = window.max_ann
    terms: dict = {}
    half = Q(1, 2)
    # pairs j <= k with j + k = m + 1; the ordered sum counts j != k twice
    s = m + 1
    # the smaller index j ranges down to where the partner's annihilation exceeds W
    jmin = min(0, s) - (W + 1) // 2 - 1
    for j in range(jmin, s // 2 + 1):
        k = s - j
        if j > k:
            continue
        if _ann(j) + _ann(k) > W:
            continue
        c = half if j == k else Q(1)
        key = (0, tuple(sorted(((j, sector), (k, sector)))))
        terms[key] = terms.get(key, ZERO) + c
    return ModeOperator(terms).truncate(window)


def make_constrained_virasoro(sector: int, alpha: int, k: int, window: WindowSpec) -> ModeOperator:
    """``1/2 L_k - (2k+2alpha+1)!!/(2 hbar) d/dT_{k+alpha} + delta_{k,0}/16``."""
    _check_alpha(alpha)
    if k < -alpha:
        raise ValueError(f"constrained Virasoro needs k >= -alpha, got k={k}, alpha={alpha}")
    op = make_virasoro(sector, k, window).scale(Q(1, 2))
    op = op + ModeOperator.d_dT(sector, k + alpha, -Q(dfact(2 * k + 2 * alpha + 1), 2), hbar=-1)
    if k == 0:
        op = op + ModeOperator.scalar(Q(1, 16))
    return op.truncate(window)


def make_W_alpha(sector: int, alpha: int, window: WindowSpec) -> ModeOperator:
    """Cut-and-join operator ``(1/(2alpha+1)) sum_k J_{-k} (L_{k-alpha} + delta_{k,alpha}/8)``."""
    _check_alpha(alpha)
    if window.max_ann is None:
        raise ValueError("W_alpha is an infinite sum; give a window with max_ann")
    W = window.max_ann
    pref = Q(1, 2 * alpha + 1)
    out = ModeOperator()
    # J_{-k} L_{k-alpha}: terms of L_{k-alpha} have annihilation degree >= 2(k-alpha)
    kmax = W // 2 + alpha + 1
    if window.max_cre is not None:
        kmax = min(kmax, window.max_cre // 2)
    for k in range(0, kmax + 1):
        L = make_virasoro(sector, k - alpha, window)
        if not L:
            continue
        out = out + normal_order_product(ModeOperator.J(sector, -k), L).scale(pref)
    out = out + ModeOperator.J(sector, -alpha, pref * Q(1, 8))
    return out.truncate(window)


def make_W_Delta(sqrt_delta: Sequence, alpha: Sequence[int], window: WindowSpec) -> ModeOperator:
    """``sum_a sqrt(Delta_a) W_{alpha_a}`` acting in sector ``a`` (sectors 1-based)."""
    if len(sqrt_delta) != len(alpha):
        raise ValueError("sqrt_delta and alpha must have one entry per sector")
    out = ModeOperator()
    for a, (sd, al) in enumerate(zip(sqrt_delta, alpha), start=1):
        sd = to_q(sd)
        if sd == 0:
            raise ValueError(f"sqrt_delta of sector {a} is zero")
        out = out + make_W_alpha(a, al, window).scale(sd)
    return out


def make_euler(sectors: Sequence[int] | int, window: WindowSpec) -> ModeOperator:
    """``sum_{a,k} (2k+1) T[a][k] d/dT[a][k]`` = ``sum J_{-k} J_{k+1}`` per sector."""
    if isinstance(sectors, int):
        sectors = range(1, sectors + 1)
    if window.max_ann is None:
        raise ValueError("the Euler field is an infinite sum; give a window with max_ann")
    terms = {}
    for a in sectors:
        for k in range(0, (window.max_ann - 1) // 2 + 1):
            terms[(0, ((-k, a), (k + 1, a)))] = 1
    return ModeOperator(terms)


def make_W_tqft(sqrt_delta: Sequence, psi: Sequence[Sequence], window: WindowSpec) -> ModeOperator:
    """Cut-and-join operator of a semisimple TQFT written in the basis ``psi``.

    The canonical-basis operator ``sum_a sqrt(Delta_a) W_1^a`` is rewritten for
    the variables ``T^a = sum_b psi[a][b] Tc^b``.
    """
    from .tpoly import inverse_matrix

    n = len(sqrt_delta)
    W = make_W_Delta(sqrt_delta, [1] * n, window)
    return change_basis(W, psi, inverse_matrix(psi))


def change_basis(op: ModeOperator, psi, psi_inv) -> ModeOperator:
    """Rewrite ``op`` for new variables with ``T^a = sum_b psi[a][b] Tc^b``.

    Creation modes transform with ``psi``, annihilation modes with the
    transpose of ``psi^{-1}``; the Heisenberg relation is preserved, so normal
    ordering is too.
    """
    n = len(psi)
    psi = [[to_q(x) for x in row] for row in psi]
    out: dict = {}
    for (h, modes), c in op.terms.items():
        partial = {(): c}
        for k, a in modes:
            if k <= 0:
                images = [(b + 1, psi[a - 1][b]) for b in range(n) if psi[a - 1][b]]
            else:
                images = [(b + 1, psi_inv[b][a - 1]) for b in range(n) if psi_inv[b][a - 1]]
            nxt: dict = {}
            for ms, v in partial.items():
                for b, w in images:
                    key = ms + ((k, b),)
                    nxt[key] = nxt.get(key, ZERO) + v * w
            partial = nxt
        for ms, v in partial.items():
            key = (h, tuple(sorted(ms)))
            out[key] = out.get(key, ZERO) + v
    return ModeOperator(out)
