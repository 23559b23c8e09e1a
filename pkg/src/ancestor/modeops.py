"""Heisenberg mode algebra.

``J[a][k]`` acts on functions of the variables ``T[a][*]`` as::

    J[a][k] = (2k-1)!! d/dT[a][k-1]        for k > 0   (annihilation)
    J[a][k] = T[a][|k|] / (2|k|-1)!!       for k <= 0  (creation)

so that ``[J[a][k], J[b][m]] = (2k-1) delta_{ab} delta_{k+m,1}``.  A
:class:`ModeOperator` is a finite linear combination of normal-ordered mode
monomials, each carrying its own power of hbar.

Windows
-------
Operators such as ``L_m`` are infinite sums.  A :class:`WindowSpec` keeps the
terms whose total annihilation degree (``sum 2k - 1`` over annihilators) is at
most ``max_ann``.  Such an operator acts exactly on every polynomial of degree
``<= max_ann``.  Conjugation by a degree-lowering generator never decreases
the annihilation degree of a term, so truncation commutes with it; products
``A * B`` are exact within the window as long as ``A`` was built with enough
slack (its annihilators may contract with creators of ``B``).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Mapping

from .kernels import ann_degree, op_commutator, op_product, poly_apply
from .scalarseries import ONE, ZERO, Q, dfact, qstr, to_q
from .tpoly import HbarSeries, TPolynomial


@dataclass(frozen=True)
class WindowSpec:
    """Retention predicate for truncated operators.

    ``max_ann`` bounds the annihilation degree of kept terms (``None`` keeps
    everything); ``max_cre`` optionally bounds the creation degree.
    """

    max_ann: int | None = None
    max_cre: int | None = None

    def keeps(self, modes) -> bool:
        if self.max_ann is not None and ann_degree(modes) > self.max_ann:
            return False
        if self.max_cre is not None and cre_degree(modes) > self.max_cre:
            return False
        return True

    def widened(self, by: int) -> "WindowSpec":
        return WindowSpec(
            None if self.max_ann is None else self.max_ann + by,
            None if self.max_cre is None else self.max_cre + by,
        )


FULL = WindowSpec()


def cre_degree(modes) -> int:
    return sum(1 - 2 * k for k, _ in modes if k <= 0)


def term_degree(modes) -> int:
    return sum(1 - 2 * k for k, _ in modes)


class ModeOperator:
    """Normal-ordered polynomial in the modes with per-term hbar powers.

    Internally ``terms`` maps ``(hbar_power, modes)`` to a nonzero rational,
    where ``modes`` is a tuple of ``(mode, sector)`` sorted ascending.
    """

    __slots__ = ("terms", "_groups")

    def __init__(self, terms: Mapping | None = None):
        self.terms = {}
        self._groups = None
        if terms:
            for (h, modes), c in terms.items():
                c = to_q(c)
                if c:
                    key = (int(h), tuple(sorted((int(k), int(a)) for k, a in modes)))
                    self.terms[key] = self.terms.get(key, ZERO) + c
            self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def _raw(cls, terms: dict) -> "ModeOperator":
        op = cls.__new__(cls)
        op.terms = terms
        op._groups = None
        return op

    # -- constructors -----------------------------------------------------
    @classmethod
    def J(cls, sector: int, mode: int, coeff=1, hbar: int = 0) -> "ModeOperator":
        return cls({(hbar, ((mode, sector),)): coeff})

    @classmethod
    def scalar(cls, c, hbar: int = 0) -> "ModeOperator":
        return cls({(hbar, ()): c})

    @classmethod
    def d_dT(cls, sector: int, level: int, coeff=1, hbar: int = 0) -> "ModeOperator":
        """``coeff * d/dT[sector][level]`` as a mode operator."""
        return cls({(hbar, ((level + 1, sector),)): to_q(coeff) / dfact(2 * level + 1)})

    @classmethod
    def T(cls, sector: int, level: int, coeff=1, hbar: int = 0) -> "ModeOperator":
        """Multiplication by ``coeff * T[sector][level]``."""
        return cls({(hbar, ((-level, sector),)): to_q(coeff) * dfact(2 * level - 1)})

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, ModeOperator):
            return self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def coeff(self, modes, hbar: int = 0):
        key = (hbar, tuple(sorted(modes)))
        return self.terms.get(key, ZERO)

    def hbar_powers(self) -> set[int]:
        return {h for h, _ in self.terms}

    def degree(self) -> int:
        """Maximal term degree (``deg J_k = 1 - 2k``)."""
        if not self.terms:
            raise ValueError("zero operator has no degree")
        return max(term_degree(m) for _, m in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero operator has no degree")
        return min(term_degree(m) for _, m in self.terms)

    def max_ann_degree(self) -> int:
        return max((ann_degree(m) for _, m in self.terms), default=0)

    def max_cre_degree(self) -> int:
        return max((cre_degree(m) for _, m in self.terms), default=0)

    def sectors(self) -> set[int]:
        return {a for _, m in self.terms for _, a in m}

    def hbar_part(self, h: int) -> "ModeOperator":
        return ModeOperator._raw({k: c for k, c in self.terms.items() if k[0] == h})

    def arity_part(self, n: int) -> "ModeOperator":
        return ModeOperator._raw({k: c for k, c in self.terms.items() if len(k[1]) == n})

    # -- linear structure -------------------------------------------------
    def __add__(self, other: "ModeOperator") -> "ModeOperator":
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return ModeOperator._raw(out)

    def __sub__(self, other: "ModeOperator") -> "ModeOperator":
        return self + other.scale(-1)

    def __neg__(self) -> "ModeOperator":
        return self.scale(-1)

    def scale(self, c) -> "ModeOperator":
        c = to_q(c)
        if not c:
            return ModeOperator()
        return ModeOperator._raw({k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c) -> "ModeOperator":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, ModeOperator):
            return normal_order_product(self, other)
        return self.scale(other)

    def truncate(self, window: WindowSpec | None) -> "ModeOperator":
        if window is None or (window.max_ann is None and window.max_cre is None):
            return self
        return ModeOperator._raw({k: c for k, c in self.terms.items() if window.keeps(k[1])})

    def map_hbar(self, fn) -> "ModeOperator":
        """Multiply each term by ``fn(hbar_power)``."""
        out = {}
        for k, c in self.terms.items():
            v = c * to_q(fn(k[0]))
            if v:
                out[k] = v
        return ModeOperator._raw(out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], len(kv[0][1]), kv[0][1]))

    # -- text -------------------------------------------------------------
    def dump(self) -> str:
        """One term per line: ``coeff * hbar^s * J[a][k] ...`` with creations first."""
        lines = []
        for (h, modes), c in self.sorted_terms():
            parts = [qstr(c)]
            if h:
                parts.append(f"hbar^{h}")
            parts.extend(f"J[{a}][{k}]" for k, a in modes)
            lines.append(" * ".join(parts))
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"ModeOperator({len(self.terms)} terms)"

    # -- action -----------------------------------------------------------
    def _grouped(self):
        if self._groups is None:
            groups: dict = {}
            for (h, modes), c in self.terms.items():
                need: dict = {}
                cre: dict = {}
                w = c
                for k, a in modes:
                    if k > 0:
                        need[(a, k - 1)] = need.get((a, k - 1), 0) + 1
                        w *= dfact(2 * k - 1)
                    else:
                        cre[(a, -k)] = cre.get((a, -k), 0) + 1
                        w /= dfact(-2 * k - 1)
                need_m = tuple((a, l, e) for (a, l), e in sorted(need.items()))
                cre_m = tuple((a, l, e) for (a, l), e in sorted(cre.items()))
                bucket = groups.setdefault(h, {}).setdefault(need_m, {})
                bucket[cre_m] = bucket.get(cre_m, ZERO) + w
            self._groups = {
                h: [(need, [(m, c) for m, c in sorted(cres.items()) if c]) for need, cres in sorted(g.items())]
                for h, g in groups.items()
            }
        return self._groups

    def apply_poly(self, p: TPolynomial, hbar: int = 0) -> TPolynomial:
        """Action of the hbar-power-``hbar`` part on a single polynomial."""
        groups = self._grouped().get(hbar)
        if not groups or not p.terms:
            return TPolynomial()
        return TPolynomial._raw(poly_apply(groups, p.terms))


def apply(op: ModeOperator, s: HbarSeries) -> HbarSeries:
    """Concrete action on a truncated hbar series.

    A term with hbar power ``h`` sends ``s^(n-h)`` to order ``n``; negative
    ``h`` consumes higher input orders, so the result is known through
    ``s.order_K + min(0, min h)``.
    """
    groups = op._grouped()
    if not groups:
        return HbarSeries.zero(s.order_K)
    hmin = min(groups)
    K = s.order_K + min(0, hmin)
    if K < 0:
        raise ValueError(
            f"operator has hbar^{hmin} terms; input known only through hbar^{s.order_K}"
        )
    out = []
    for n in range(K + 1):
        acc: dict = {}
        for h, g in groups.items():
            src = n - h
            if 0 <= src <= s.order_K and s.coeffs[src].terms:
                part = poly_apply(g, s.coeffs[src].terms)
                for m, c in part.items():
                    v = acc.get(m, ZERO) + c
                    if v:
                        acc[m] = v
                    else:
                        acc.pop(m, None)
        out.append(TPolynomial._raw(acc))
    return HbarSeries(out)


def normal_order_product(a: ModeOperator, b: ModeOperator, window: WindowSpec | None = None) -> ModeOperator:
    """The composition ``a o b`` rewritten in normal order."""
    max_ann = window.max_ann if window is not None else None
    out = ModeOperator._raw(op_product(a.terms, b.terms, max_ann))
    if window is not None and window.max_cre is not None:
        out = out.truncate(window)
    return out


def commutator(a: ModeOperator, b: ModeOperator, window: WindowSpec | None = None) -> ModeOperator:
    max_ann = window.max_ann if window is not None else None
    out = ModeOperator._raw(op_commutator(a.terms, b.terms, max_ann))
    if window is not None and window.max_cre is not None:
        out = out.truncate(window)
    return out


def conjugate_by_exponential(x: ModeOperator, g: ModeOperator, window: WindowSpec | None = None) -> ModeOperator:
    """``exp(g) x exp(-g) = sum_n ad_g^n(x) / n!`` within ``window``.

    Every term of ``g`` must have strictly negative degree; the series then
    terminates because each commutator lowers the degree while the window
    bounds it from below.  ``g`` must itself contain every term able to
    contract into the window (build it with slack ``max_cre_degree(x)``).
    """
    for (_, modes) in g.terms:
        if term_degree(modes) >= 0:
            raise ValueError("conjugation generator must have only negative-degree terms")
    x = x.truncate(window)
    if not g.terms:
        return x
    if window is None or window.max_ann is None:
        raise ValueError("conjugation needs a window with an annihilation-degree bound")
    result = dict(x.terms)
    term = x
    n = 0
    while term.terms:
        n += 1
        term = commutator(g, term, window).scale(Q(1, n))
        for k, c in term.terms.items():
            v = result.get(k, ZERO) + c
            if v:
                result[k] = v
            else:
                result.pop(k, None)
        if n > 10_000:  # pragma: no cover - degree argument forbids this
            raise RuntimeError("adjoint series failed to terminate")
    return ModeOperator._raw(result)


def exp_apply(g: ModeOperator, s: HbarSeries, sign: int = 1) -> HbarSeries:
    """``exp(sign * g) . s`` for an hbar-free, degree-lowering ``g``.

    The exponential terminates on each polynomial coefficient because every
    application lowers the degree.
    """
    if any(h != 0 for h in g.hbar_powers()):
        raise ValueError("exp_apply needs an hbar-free generator")
    if g.terms and g.degree() >= 0:
        raise ValueError("exp_apply needs a degree-lowering generator")
    out = []
    for p in s.coeffs:
        acc = TPolynomial._raw(dict(p.terms))
        term = p
        n = 0
        while term.terms:
            n += 1
            term = g.apply_poly(term).scale(Q(sign, n))
            acc = acc + term
        out.append(acc)
    return HbarSeries(out)
