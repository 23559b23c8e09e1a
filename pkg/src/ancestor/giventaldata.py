"""Givental data of a generalized ancestor potential and the direct pipeline.

``Z = R T Delta . prod_a tau_{alpha_a}(hbar, T^a)`` computed literally:
rescale each seed tau-function, translate, multiply the sectors, then act
with ``exp(r)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil
from typing import Mapping, Sequence

from .scalarseries import ONE, ZERO, Q, dfact, qstr, to_q
from .tpoly import HbarSeries, TPolynomial, mono_degree

CONFIG_FIELDS = {"N", "sectors", "r_jets", "order_K"}
SECTOR_FIELDS = {"alpha", "sqrt_delta", "delta_T"}


class ValidationError(ValueError):
    """Raised when Givental data violates its invariants."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(report.render())


@dataclass(frozen=True)
class Violation:
    location: str
    message: str

    def render(self) -> str:
        return f"{self.location}: {self.message}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def render(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(v.render() for v in self.violations)


@dataclass(frozen=True)
class GiventalData:
    """Input record for one generalized ancestor potential.

    Sectors are numbered ``1..N``.  ``delta_T`` maps ``(sector, level)`` to the
    translation coefficient; ``r_jets[k-1]`` is the ``N x N`` matrix ``r_k``
    with rows indexed by the first index of ``(r_k)[a][b]``.
    """

    N: int
    alpha: tuple
    sqrt_delta: tuple
    delta_T: Mapping = field(default_factory=dict)
    r_jets: tuple = ()
    order_K: int = 3

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(self, "sqrt_delta", tuple(to_q(x) for x in self.sqrt_delta))
        dt = {(int(a), int(k)): to_q(v) for (a, k), v in dict(self.delta_T).items()}
        object.__setattr__(self, "delta_T", {key: v for key, v in sorted(dt.items()) if v})
        jets = tuple(tuple(tuple(to_q(x) for x in row) for row in r) for r in self.r_jets)
        object.__setattr__(self, "r_jets", jets)

    # -- derived quantities -------------------------------------------------
    @property
    def any_regular(self) -> bool:
        return any(a == 1 for a in self.alpha)

    @property
    def degree_slope(self) -> int:
        """Top degree of ``Z^(m)`` per hbar order: 3 if any sector is regular, else 1."""
        return 3 if self.any_regular else 1

    def degree_bound(self, K: int | None = None) -> int:
        return self.degree_slope * (self.order_K if K is None else K)

    def has_r(self) -> bool:
        return any(x != 0 for r in self.r_jets for row in r for x in row)

    def r(self, k: int, a: int, b: int):
        """``(r_k)[a][b]`` with 1-based sectors; zero beyond the given jets."""
        if k < 1 or k > len(self.r_jets):
            return ZERO
        return self.r_jets[k - 1][a - 1][b - 1]

    def sector_translation(self, a: int) -> dict:
        return {k: v for (b, k), v in self.delta_T.items() if b == a}

    def replace(self, **kw) -> "GiventalData":
        args = dict(N=self.N, alpha=self.alpha, sqrt_delta=self.sqrt_delta, delta_T=self.delta_T,
                    r_jets=self.r_jets, order_K=self.order_K)
        args.update(kw)
        return GiventalData(**args)

    # -- serialization ------------------------------------------------------
    def to_json_dict(self) -> dict:
        sectors = []
        for a in range(1, self.N + 1):
            sectors.append({
                "alpha": self.alpha[a - 1],
                "sqrt_delta": qstr(self.sqrt_delta[a - 1]),
                "delta_T": {str(k): qstr(v) for k, v in sorted(self.sector_translation(a).items())},
            })
        return {
            "N": self.N,
            "sectors": sectors,
            "r_jets": [[[qstr(x) for x in row] for row in r] for r in self.r_jets],
            "order_K": self.order_K,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "GiventalData":
        if not isinstance(doc, Mapping):
            raise ValueError("config must be a JSON object")
        unknown = set(doc) - CONFIG_FIELDS
        if unknown:
            raise ValueError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        missing = {"N", "sectors"} - set(doc)
        if missing:
            raise ValueError(f"missing config field(s): {', '.join(sorted(missing))}")
        N = doc["N"]
        if not isinstance(N, int) or N < 1:
            raise ValueError("N must be a positive integer")
        sectors = doc["sectors"]
        if not isinstance(sectors, list) or len(sectors) != N:
            raise ValueError(f"sectors must be a list of length N={N}")
        alpha, sqd, dT = [], [], {}
        for a, sec in enumerate(sectors, start=1):
            if not isinstance(sec, Mapping):
                raise ValueError(f"sectors[{a - 1}] must be an object")
            unknown = set(sec) - SECTOR_FIELDS
            if unknown:
                raise ValueError(f"sectors[{a - 1}]: unknown field(s): {', '.join(sorted(unknown))}")
            if "alpha" not in sec or "sqrt_delta" not in sec:
                raise ValueError(f"sectors[{a - 1}]: alpha and sqrt_delta are required")
            alpha.append(sec["alpha"])
            sqd.append(_parse_q(sec["sqrt_delta"], f"sectors[{a - 1}].sqrt_delta"))
            for k, v in (sec.get("delta_T") or {}).items():
                try:
                    level = int(k)
                except (TypeError, ValueError):
                    raise ValueError(f"sectors[{a - 1}].delta_T: level {k!r} is not an integer") from None
                dT[(a, level)] = _parse_q(v, f"sectors[{a - 1}].delta_T[{k}]")
        jets = []
        for i, r in enumerate(doc.get("r_jets") or [], start=1):
            if not isinstance(r, list) or len(r) != N or any(not isinstance(row, list) or len(row) != N for row in r):
                raise ValueError(f"r_jets[{i - 1}] must be an {N}x{N} matrix")
            jets.append([[_parse_q(x, f"r_jets[{i - 1}]") for x in row] for row in r])
        order_K = doc.get("order_K", 3)
        if not isinstance(order_K, int) or order_K < 0:
            raise ValueError("order_K must be a non-negative integer")
        return cls(N=N, alpha=alpha, sqrt_delta=sqd, delta_T=dT, r_jets=jets, order_K=order_K)

    @classmethod
    def from_json(cls, text: str) -> "GiventalData":
        return cls.from_json_dict(json.loads(text))


def _parse_q(x, where: str):
    if isinstance(x, bool) or isinstance(x, float):
        raise ValueError(f"{where}: rationals must be integers or 'p/q' strings, got {x!r}")
    try:
        return to_q(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ValueError(f"{where}: cannot parse rational {x!r}") from None


def validate(d: GiventalData) -> ValidationReport:
    """Check alpha flags, sqrt_delta, translation support and jet adjointness."""
    rep = ValidationReport()
    v = rep.violations
    if d.N < 1:
        v.append(Violation("N", "must be positive"))
    if len(d.alpha) != d.N:
        v.append(Violation("alpha", f"expected {d.N} entries, got {len(d.alpha)}"))
    if len(d.sqrt_delta) != d.N:
        v.append(Violation("sqrt_delta", f"expected {d.N} entries, got {len(d.sqrt_delta)}"))
    for a, al in enumerate(d.alpha, start=1):
        if al not in (0, 1):
            v.append(Violation(f"sector {a}.alpha", f"must be 0 or 1, got {al}"))
    for a, sd in enumerate(d.sqrt_delta, start=1):
        if sd == 0:
            v.append(Violation(f"sector {a}.sqrt_delta", "must be nonzero"))
    for (a, k), val in d.delta_T.items():
        if not 1 <= a <= d.N:
            v.append(Violation(f"delta_T[{a}][{k}]", f"sector outside 1..{d.N}"))
            continue
        al = d.alpha[a - 1] if a - 1 < len(d.alpha) else 1
        if k < 1 + al:
            v.append(Violation(f"delta_T[{a}][{k}]", f"level must be >= 1+alpha = {1 + al}"))
    for k, r in enumerate(d.r_jets, start=1):
        if len(r) != d.N or any(len(row) != d.N for row in r):
            v.append(Violation(f"r_{k}", f"must be {d.N}x{d.N}"))
            continue
        sign = 1 if k % 2 else -1
        kind = "symmetric" if k % 2 else "antisymmetric"
        for a in range(d.N):
            for b in range(a, d.N):
                if r[b][a] != sign * r[a][b]:
                    v.append(Violation(
                        f"r_{k}[{a + 1}][{b + 1}]",
                        f"r_{k} must be {kind} (r_k^T = (-1)^(k+1) r_k); "
                        f"entries {qstr(r[a][b])} and {qstr(r[b][a])}",
                    ))
                    break
            else:
                continue
            break
    if d.order_K < 0:
        v.append(Violation("order_K", "must be non-negative"))
    return rep


def ensure_valid(d: GiventalData) -> None:
    rep = validate(d)
    if not rep.ok:
        raise ValidationError(rep)


@dataclass(frozen=True)
class LocalCurveData:
    """Local expansion ``y = sum_k y_k zeta^k`` at each ramification point."""

    alpha: tuple
    y: tuple  # per point: mapping k -> y_k


def from_local_curve(c: LocalCurveData, order_K: int = 3) -> GiventalData:
    """``sqrt_delta = 1/y_{2alpha-1}``; ``delta_T_k = -(2k-1)!! y_{2k-1}/y_{2alpha-1}``."""
    alphas, sqd, dT = [], [], {}
    for a, (al, ys) in enumerate(zip(c.alpha, c.y), start=1):
        ys = {int(k): to_q(v) for k, v in dict(ys).items()}
        lead = ys.get(2 * al - 1, ZERO)
        if lead == 0:
            raise ValueError(f"point {a}: leading coefficient y_{2 * al - 1} must be nonzero")
        alphas.append(al)
        sqd.append(ONE / lead)
        for k_odd, yk in ys.items():
            if k_odd % 2 == 0 or yk == 0:
                continue
            k = (k_odd + 1) // 2
            if k >= 1 + al:
                dT[(a, k)] = -dfact(2 * k - 1) * yk / lead
    return GiventalData(N=len(alphas), alpha=alphas, sqrt_delta=sqd, delta_T=dT, order_K=order_K)


# -- elementary operator actions ---------------------------------------------

def inner_order(alpha: int, K: int) -> int:
    """hbar order of the seed tau-function needed before translating to order K."""
    return ceil((2 * alpha + 3) * K / 2)


def apply_Delta_product(d: GiventalData, tau_per_sector: Sequence[HbarSeries]) -> HbarSeries:
    """Rescale ``hbar -> hbar sqrt(Delta_a)`` in each factor and multiply the sectors."""
    out = None
    for a, s in enumerate(tau_per_sector, start=1):
        s = s.scale_hbar(d.sqrt_delta[a - 1])
        out = s if out is None else out * s
    return out


def translate(s: HbarSeries, shifts: Mapping, K_out: int, degree_slope: int | None = None) -> HbarSeries:
    """``exp(hbar^-1 sum c_v d/dT_v) . s`` known through ``hbar**K_out``.

    Implemented as the Taylor shift ``T_v -> T_v + c_v / hbar``.  Terms with a
    net negative hbar power are dropped; they cancel in the full series.  When
    ``degree_slope`` is given (``deg s^(m) <= slope * m``) the truncation is
    certified: orders of ``s`` beyond ``s.order_K`` provably cannot reach
    ``hbar**K_out``.
    """
    shifts = {(int(a), int(k)): to_q(c) for (a, k), c in shifts.items() if to_q(c) != 0}
    if not shifts:
        return s.truncate(min(K_out, s.order_K))
    if degree_slope is not None:
        dmin = min(2 * k + 1 for _, k in shifts)
        m = s.order_K + 1
        # an unknown order m reaches hbar^n only through i >= m - n shifts, consuming degree >= i*dmin
        if dmin <= degree_slope or degree_slope * m >= (m - K_out) * dmin:
            raise ValueError(
                f"input known through hbar^{s.order_K} does not certify the translated series at hbar^{K_out}"
            )
    elif K_out > s.order_K:
        raise ValueError("cannot extend the order without a degree bound")
    from math import comb

    out = [dict() for _ in range(K_out + 1)]
    for m, p in enumerate(s.coeffs):
        for mono, c in p.terms.items():
            # expand prod_v (T_v + c_v/hbar)^e over the shifted variables
            fixed = []
            expansions = [((), c, 0)]
            for (a, k, e) in mono:
                cv = shifts.get((a, k))
                if cv is None:
                    fixed.append((a, k, e))
                    continue
                nxt = []
                for base, coef, drop in expansions:
                    for i in range(e + 1):
                        keep = e - i
                        nb = base + (((a, k, keep),) if keep else ())
                        nxt.append((nb, coef * comb(e, i) * cv ** i, drop + i))
                expansions = nxt
            for base, coef, drop in expansions:
                n = m - drop
                if 0 <= n <= K_out:
                    key = tuple(sorted(tuple(fixed) + base))
                    tgt = out[n]
                    v = tgt.get(key, ZERO) + coef
                    if v:
                        tgt[key] = v
                    else:
                        tgt.pop(key, None)
    return HbarSeries([TPolynomial._raw(t) for t in out])


def apply_T(d: GiventalData, s: HbarSeries, K_out: int | None = None, scaled: bool = False,
            degree_slope: int | None = None) -> HbarSeries:
    """Translation ``exp(hbar^-1 sum dT[a][k] d/dT[a][k])``.

    With ``scaled=True`` the shifts are ``sqrt(Delta_a) dT[a][k]``, the form
    obtained after commuting the translation past the rescaling.
    """
    shifts = {}
    for (a, k), v in d.delta_T.items():
        shifts[(a, k)] = v * d.sqrt_delta[a - 1] if scaled else v
    K_out = d.order_K if K_out is None else K_out
    return translate(s, shifts, K_out, degree_slope)


def r_hat_poly(d: GiventalData, p: TPolynomial) -> TPolynomial:
    """One application of the quantized ``r`` as a differential operator.

    ``sum_k sum_j (r_k)[a][b] T[a][j] d/dT[b][k+j]
      + 1/2 sum_k sum_{j<k} (-1)^(j+1) (r_k)[a][b] d^2/dT[a][j] dT[b][k-j-1]``
    """
    out = TPolynomial()
    if not p.terms:
        return out
    lmax = p.max_level()
    N = d.N
    for k in range(1, len(d.r_jets) + 1):
        for b in range(1, N + 1):
            for lvl in range(k, lmax + 1):
                dp = p.derivative(b, lvl)
                if not dp:
                    continue
                j = lvl - k
                for a in range(1, N + 1):
                    c = d.r(k, a, b)
                    if c:
                        out = out + dp.times_variable(a, j).scale(c)
        half = Q(1, 2)
        for j in range(0, k):
            jj = k - j - 1
            if j > lmax or jj > lmax:
                continue
            sign = -1 if j % 2 == 0 else 1  # (-1)^(j+1)
            for a in range(1, N + 1):
                da = p.derivative(a, j)
                if not da:
                    continue
                for b in range(1, N + 1):
                    c = d.r(k, a, b)
                    if c:
                        out = out + da.derivative(b, jj).scale(half * sign * c)
    return out


def apply_R(d: GiventalData, s: HbarSeries) -> HbarSeries:
    """``exp(r_hat) . s`` as a terminating sum (each application lowers degree by >= 2)."""
    if not d.has_r():
        return s
    out = []
    for p in s.coeffs:
        acc = p
        term = p
        n = 0
        while term:
            n += 1
            term = r_hat_poly(d, term).scale(Q(1, n))
            acc = acc + term
        out.append(acc)
    return HbarSeries(out)


def sector_potential(d: GiventalData, a: int, K: int | None = None, slack: int = 0) -> HbarSeries:
    """``exp(hbar^-1 sum_k dT[a][k] d/dT[a][k]) tau_{alpha_a}(sqrt(Delta_a) hbar, T^a)``.

    The rescaling acts first; the translation then uses the bare ``dT``.
    """
    from .cutjoin import tau_alpha

    K = d.order_K if K is None else K
    al = d.alpha[a - 1]
    sd = d.sqrt_delta[a - 1]
    shifts = {(a, k): v for k, v in d.sector_translation(a).items()}
    K_in = (inner_order(al, K) if shifts else K) + slack
    tau = tau_alpha(al, K_in, sector=a).scale_hbar(sd)
    return translate(tau, shifts, K, degree_slope=2 * al + 1)


def direct_ancestor_potential(d: GiventalData, K: int | None = None, slack: int = 0) -> HbarSeries:
    """Solver A: ``R T Delta . prod tau`` computed operator by operator."""
    ensure_valid(d)
    K = d.order_K if K is None else K
    Z = None
    for a in range(1, d.N + 1):
        za = sector_potential(d, a, K, slack)
        Z = za if Z is None else Z * za
    return apply_R(d, Z)


def r_hat_operator(d: GiventalData, window) -> "ModeOperator":
    """The quantized ``r`` (same expression as :func:`r_hat_poly`) written in modes."""
    from .modeops import ModeOperator

    if window.max_ann is None:
        raise ValueError("r_hat is an infinite sum; give a window with max_ann")
    W = window.max_ann
    terms: dict = {}

    def add(key, c):
        v = terms.get(key, ZERO) + c
        if v:
            terms[key] = v
        else:
            terms.pop(key, None)

    for k in range(1, len(d.r_jets) + 1):
        for a in range(1, d.N + 1):
            for b in range(1, d.N + 1):
                c = d.r(k, a, b)
                if not c:
                    continue
                j = 0
                while 2 * (k + j) + 1 <= W:
                    w = c * dfact(2 * j - 1) / dfact(2 * k + 2 * j + 1)
                    add((0, tuple(sorted(((-j, a), (k + j + 1, b))))), w)
                    j += 1
                for j in range(k):
                    jj = k - j - 1
                    if (2 * j + 1) + (2 * jj + 1) > W:
                        continue
                    sign = -1 if j % 2 == 0 else 1
                    w = Q(sign, 2) * c / (dfact(2 * j + 1) * dfact(2 * jj + 1))
                    add((0, tuple(sorted(((j + 1, a), (jj + 1, b))))), w)
    return ModeOperator._raw(terms)
