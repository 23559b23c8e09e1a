"""Exact rational scalars and truncated one-variable Laurent series.

Every coefficient in the package is an exact rational.  ``Q`` is
``gmpy2.mpq`` when gmpy2 is importable and ``fractions.Fraction`` otherwise;
both keep values in lowest terms with a positive denominator.

A :class:`LaurentSeries` stores the coefficients of ``z**e`` for
``val <= e <= order``.  Coefficients above ``order`` are *unknown*, never
assumed to be zero, and every operation propagates the tightest order it can
certify.  Asking for a coefficient beyond the known range raises
:class:`TruncationError`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)


class TruncationError(ValueError):
    """A requested coefficient lies beyond the certified truncation order."""


def to_q(x) -> "Q":
    """Convert ints, Fractions, mpq values and ``"p/q"`` strings to ``Q``."""
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        return Q(Fraction(s))
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    return Q(x)


def qstr(x) -> str:
    """Render a rational as ``"p/q"`` (``"p"`` when the denominator is 1)."""
    x = to_q(x)
    n, d = int(x.numerator), int(x.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


@lru_cache(maxsize=None)
def dfact(n: int) -> int:
    """Double factorial of an odd integer ``n >= -1``, with ``(-1)!! = 1``."""
    if n < -1 or n % 2 == 0:
        raise ValueError(f"double factorial defined here for odd n >= -1, got {n}")
    if n <= 1:
        return 1
    return n * dfact(n - 2)


class LaurentSeries:
    """Truncated Laurent series ``sum_{e=val}^{order} c_e z**e + O(z**(order+1))``.

    Leading zeros are stripped on construction, so ``val`` is the true
    valuation of the known part (``order + 1`` for a series known to vanish
    through ``order``).  ``parity`` (0 even, 1 odd, ``None`` unchecked) is
    verified when given.
    """

    __slots__ = ("val", "coeffs", "order", "parity")

    def __init__(self, val: int, coeffs: Iterable, order: int, parity: int | None = None):
        cs = [to_q(c) for c in coeffs]
        if val + len(cs) - 1 > order:
            cs = cs[: max(0, order - val + 1)]
        while cs and cs[0] == 0:
            cs.pop(0)
            val += 1
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            val = order + 1
        self.val = val
        self.coeffs = cs
        self.order = order
        if parity is not None:
            for i, c in enumerate(cs):
                if c != 0 and (val + i - parity) % 2:
                    raise ValueError(
                        f"series declared {'odd' if parity else 'even'} has a nonzero z^{val + i} term"
                    )
        self.parity = parity

    # -- construction -----------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Mapping[int, object], order: int, parity: int | None = None):
        terms = {e: to_q(c) for e, c in terms.items() if e <= order}
        if not terms:
            return cls(order + 1, [], order, parity)
        lo = min(terms)
        cs = [terms.get(e, ZERO) for e in range(lo, max(terms) + 1)]
        return cls(lo, cs, order, parity)

    @classmethod
    def z(cls, order: int) -> "LaurentSeries":
        return cls(1, [ONE], order, parity=1)

    @classmethod
    def constant(cls, c, order: int) -> "LaurentSeries":
        return cls(0, [c], order)

    # -- access -----------------------------------------------------------
    def coeff(self, e: int):
        if e > self.order:
            raise TruncationError(f"coefficient of z^{e} requested but series is only known through z^{self.order}")
        i = e - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ZERO

    def terms(self) -> dict[int, object]:
        return {self.val + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            raise TruncationError("series vanishes to its truncation order; no leading term")
        return self.coeffs[0]

    def to_pairs(self) -> list[tuple[int, str]]:
        return [(e, qstr(c)) for e, c in sorted(self.terms().items())]

    def __repr__(self) -> str:
        body = " + ".join(f"({qstr(c)})*z^{e}" for e, c in sorted(self.terms().items())) or "0"
        return f"LaurentSeries({body} + O(z^{self.order + 1}))"

    def truncate(self, order: int) -> "LaurentSeries":
        if order > self.order:
            raise TruncationError(f"cannot raise truncation order from {self.order} to {order}")
        return LaurentSeries(self.val, self.coeffs, order)

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality of all coefficients both series know."""
        top = min(self.order, other.order)
        lo = min(self.val, other.val)
        return all(self.coeff(e) == other.coeff(e) for e in range(lo, top + 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.order == other.order and self.terms() == other.terms()

    __hash__ = None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other, self.order)
        order = min(self.order, other.order)
        terms = dict(self.terms())
        for e, c in other.terms().items():
            terms[e] = terms.get(e, ZERO) + c
        return LaurentSeries.from_terms(terms, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.val, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            c = to_q(other)
            return LaurentSeries(self.val, [c * x for x in self.coeffs], self.order)
        order = min(self.val + other.order, other.val + self.order)
        if not self.coeffs or not other.coeffs:
            return LaurentSeries(order + 1, [], order)
        val = self.val + other.val
        n = order - val + 1
        out = [ZERO] * max(n, 0)
        a, b = self.coeffs, other.coeffs
        for i, x in enumerate(a):
            if i >= n:
                break
            if x == 0:
                continue
            lim = min(len(b), n - i)
            for j in range(lim):
                out[i + j] += x * b[j]
        return LaurentSeries(val, out, order)

    __rmul__ = __mul__

    def shift(self, n: int) -> "LaurentSeries":
        """Multiply by ``z**n``."""
        return LaurentSeries(self.val + n, self.coeffs, self.order + n)

    def derivative(self) -> "LaurentSeries":
        terms = {e - 1: e * c for e, c in self.terms().items() if e != 0}
        return LaurentSeries.from_terms(terms, self.order - 1)

    def inverse(self) -> "LaurentSeries":
        """Multiplicative inverse; the series must have a known nonzero leading term."""
        c0 = self.leading()
        v = self.val
        rel = self.order - v  # relative precision
        a = [x / c0 for x in self.coeffs] + [ZERO] * max(0, rel + 1 - len(self.coeffs))
        inv = [ZERO] * (rel + 1)
        inv[0] = ONE
        for n in range(1, rel + 1):
            s = ZERO
            for k in range(1, n + 1):
                if a[k] != 0:
                    s += a[k] * inv[n - k]
            inv[n] = -s
        return LaurentSeries(-v, [x / c0 for x in inv], -v + rel)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self * (ONE / to_q(other))

    def __pow__(self, n: int) -> "LaurentSeries":
        if not isinstance(n, int):
            raise TypeError("only integer powers; use binomial_power for roots")
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries(0, [ONE], self.order - self.val if self.coeffs else self.order)
        if n == 0:
            return result
        base, first = self, True
        while n:
            if n & 1:
                result = base if first else result * base
                first = False
            n >>= 1
            if n:
                base = base * base
        return result

    def positive_part(self) -> "LaurentSeries":
        """``g(z)_+``: the terms with non-negative exponent."""
        return LaurentSeries.from_terms({e: c for e, c in self.terms().items() if e >= 0}, self.order)

    def __call__(self, inner: "LaurentSeries") -> "LaurentSeries":
        return series_compose(self, inner)


def series_compose(outer: LaurentSeries, inner: LaurentSeries) -> LaurentSeries:
    """``outer(inner(z))`` for an ``inner`` of positive valuation."""
    if not inner.coeffs or inner.val < 1:
        raise ValueError("inner series must have positive valuation and a known leading term")
    vi = inner.val
    order = (outer.order + 1) * vi - 1
    terms = outer.terms()
    if not terms:
        return LaurentSeries(order + 1, [], order)
    lo, hi = min(terms), max(terms)
    powers: dict[int, LaurentSeries] = {}
    if hi >= 0:
        p = inner ** max(lo, 0)
        for n in range(max(lo, 0), hi + 1):
            powers[n] = p
            if n < hi:
                p = p * inner
    if lo < 0:
        inv = inner.inverse()
        p = inv
        for n in range(-1, lo - 1, -1):
            powers[n] = p
            if n > lo:
                p = p * inv
    acc = None
    for n, c in sorted(terms.items()):
        piece = powers[n] * c
        acc = piece if acc is None else acc + piece
    order = min(order, acc.order)
    return acc.truncate(order) if acc.order > order else acc


def series_reverse(f: LaurentSeries) -> LaurentSeries:
    """Compositional inverse of ``f = z + z**3 * (even series)``.

    Solved order by order: at each odd exponent the coefficient of the
    current ``f(h)`` that is still unmatched fixes the next coefficient of
    ``h``.
    """
    if f.val != 1 or f.leading() != 1:
        raise ValueError("series_reverse needs f = z + ... with unit leading coefficient")
    for e, c in f.terms().items():
        if e % 2 == 0:
            raise ValueError(f"series_reverse needs an odd series; found z^{e}")
    N = f.order
    h_terms = {1: ONE}
    for e in range(3, N + 1, 2):
        h = LaurentSeries.from_terms(h_terms, N)
        fh = series_compose(f, h)
        c = fh.coeff(e)
        if c != 0:
            h_terms[e] = -c
    return LaurentSeries.from_terms(h_terms, N, parity=1)


def binomial_power(u: LaurentSeries, root: int) -> LaurentSeries:
    """``(1 + u)**(1/root)`` for ``u`` of positive valuation and odd ``root > 0``."""
    if not isinstance(root, int) or root <= 0 or root % 2 == 0:
        raise ValueError(f"root must be a positive odd integer, got {root!r}")
    if u.coeffs and u.val < 1:
        raise ValueError("binomial_power needs u with positive valuation")
    N = u.order
    beta = Q(1, root)
    a = [ONE] + [u.coeff(e) for e in range(1, N + 1)]
    y = [ONE] + [ZERO] * N
    # n y_n = sum_k ((beta + 1) k - n) a_k y_{n-k}
    for n in range(1, N + 1):
        s = ZERO
        for k in range(1, n + 1):
            if a[k] != 0:
                s += ((beta + 1) * k - n) * a[k] * y[n - k]
        y[n] = s / n
    return LaurentSeries(0, y, N)


def residue(s: LaurentSeries):
    """Coefficient of ``z**-1``."""
    if s.order < -1:
        raise TruncationError(f"residue needs the z^-1 coefficient; series known only through z^{s.order}")
    return s.coeff(-1)
