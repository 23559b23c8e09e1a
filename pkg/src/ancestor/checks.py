"""Verification suites run by ``ancestor check`` and the acceptance tests."""
from __future__ import annotations

from dataclasses import dataclass

from .generators import make_virasoro
from .modeops import ModeOperator, WindowSpec, commutator
from .scalarseries import Q


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


SUITES = ("commutators", "virasoro", "virtos", "dimension", "window-stability")


def commutator_suite(bound: int = 6, W: int = 12) -> list[CheckResult]:
    """Heisenberg-Virasoro relations for ``|k|, |m| <= bound``, compared within window ``W``."""
    win = WindowSpec(max_ann=W)
    big = WindowSpec(max_ann=2 * W + 4 * bound + 4)
    L = {k: make_virasoro(1, k, big) for k in range(-2 * bound, 2 * bound + 1)}
    J = {k: ModeOperator.J(1, k) for k in range(-2 * bound, 2 * bound + 2)}
    bad = []
    for k in range(-bound, bound + 1):
        for m in range(-bound, bound + 1):
            jj = commutator(J[k], J[m])
            want = ModeOperator.scalar(2 * k - 1) if k + m == 1 else ModeOperator()
            if jj != want:
                bad.append(f"[J{k},J{m}]")
            lj = commutator(L[k], J[m], win)
            if lj != J[k + m].scale(-(2 * m - 1)).truncate(win):
                bad.append(f"[L{k},J{m}]")
            ll = commutator(L[k], L[m], win)
            want = L[k + m].scale(2 * (k - m)).truncate(win)
            if k + m == 0:
                want = want + ModeOperator.scalar(Q(k * (2 * k * k + 1), 6))
            if ll != want:
                bad.append(f"[L{k},L{m}]")
    return [CheckResult(f"commutators |k|,|m|<={bound}", not bad, ", ".join(bad[:8]))]


def virasoro_suite(d, K: int, m_max: int = 3, Z=None) -> list[CheckResult]:
    from .giventaldata import direct_ancestor_potential
    from .virasoro import build_L_family, check_constraints

    Z = Z if Z is not None and Z.order_K >= K + 1 else direct_ancestor_potential(d, K + 1)
    W = d.degree_slope * (K + 1)
    fam = build_L_family(d, m_max, WindowSpec(max_ann=W))
    fail = check_constraints(fam, Z, K)
    return [CheckResult(f"constraints L[a][m], m<={m_max}, through hbar^{K}", fail is None,
                        "" if fail is None else fail.render())]


def virtos_suite(d, K: int) -> list[CheckResult]:
    from .tpoly import mono_text
    from .virgroup import check_virtos

    out = []
    for a in range(1, d.N + 1):
        if not d.sector_translation(a):
            continue
        diff = check_virtos(d, a, K)
        detail = "" if diff is None else f"hbar^{diff[0]} {mono_text(diff[1])}: {diff[2]} vs {diff[3]}"
        out.append(CheckResult(f"translation = V on tau, sector {a}, through hbar^{K}", diff is None, detail))
    if not out:
        out.append(CheckResult("translation = V on tau", True, "no translation in data"))
    return out


def dimension_suite(d, K: int, Z=None) -> list[CheckResult]:
    from .giventaldata import direct_ancestor_potential
    from .tpoly import mono_text
    from .virasoro import build_H, check_dimension

    Z = Z if Z is not None and Z.order_K >= K else direct_ancestor_potential(d, K)
    H = build_H(d, WindowSpec(max_ann=d.degree_slope * max(K, 1)))
    diff = check_dimension(H, Z.truncate(K))
    detail = "" if diff is None else f"hbar^{diff[0]} {mono_text(diff[1])}: {diff[2]} vs {diff[3]}"
    return [CheckResult(f"hbar dZ/dhbar = H Z through hbar^{K}", diff is None, detail)]


def window_stability_suite(d, K: int, slack: int = 2) -> list[CheckResult]:
    from .cutjoin import cutjoin_ancestor_potential
    from .giventaldata import direct_ancestor_potential
    from .tpoly import mono_text
    from .virasoro import solve_from_constraints

    out = []
    for name, fn in (("direct", direct_ancestor_potential), ("cutjoin", cutjoin_ancestor_potential),
                     ("virasoro", solve_from_constraints)):
        base = fn(d, K)
        wide = fn(d, K, slack=slack)
        diff = base.first_difference(wide)
        detail = "" if diff is None else f"hbar^{diff[0]} {mono_text(diff[1])}: {diff[2]} vs {diff[3]}"
        out.append(CheckResult(f"{name} stable under slack +{slack}", diff is None, detail))
    return out


def run_suite(name: str, d, K: int) -> list[CheckResult]:
    if name == "commutators":
        return commutator_suite()
    if name == "virasoro":
        return virasoro_suite(d, K)
    if name == "virtos":
        return virtos_suite(d, K)
    if name == "dimension":
        return dimension_suite(d, K)
    if name == "window-stability":
        return window_stability_suite(d, K)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
