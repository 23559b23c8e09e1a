"""Sparse polynomials in the variables ``T[a][k]`` and hbar-graded series over them.

Grading: ``deg T[a][k] = 2k + 1``, ``deg hbar = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Iterable, Mapping, Sequence

from .kernels import mono_derive, mono_mul, poly_add_into, poly_mul
from .scalarseries import ONE, ZERO, Q, qstr, to_q

Monomial = tuple  # sorted tuple of (sector, level, exponent)


class ZeroPolynomialDegree(ValueError):
    """Raised when asking for the degree of the zero polynomial."""


def mono_degree(m: Monomial) -> int:
    return sum((2 * k + 1) * e for _, k, e in m)


def mono_text(m: Monomial) -> str:
    if not m:
        return "1"
    return " * ".join(f"T[{a}][{k}]" + (f"^{e}" if e != 1 else "") for a, k, e in m)


def var(a: int, k: int, e: int = 1) -> Monomial:
    return ((a, k, e),) if e else ()


def level_max(K: int, any_regular: bool) -> int:
    """Largest level whose variable degree fits the degree bound at hbar^K."""
    if any_regular:
        return max(0, ceil((3 * K - 1) / 2))
    return max(0, ceil((K - 1) / 2))


class TPolynomial:
    """Polynomial with exact coefficients; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                c = to_q(c)
                if c:
                    self.terms[tuple(m)] = c

    @classmethod
    def _raw(cls, terms: dict) -> "TPolynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c) -> "TPolynomial":
        return cls({(): c})

    @classmethod
    def variable(cls, a: int, k: int) -> "TPolynomial":
        return cls({var(a, k): ONE})

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, m: Monomial):
        return self.terms.get(tuple(m), ZERO)

    def constant_term(self):
        return self.terms.get((), ZERO)

    def degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomialDegree("the zero polynomial has no degree")
        return max(mono_degree(m) for m in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomialDegree("the zero polynomial has no degree")
        return min(mono_degree(m) for m in self.terms)

    def max_level(self) -> int:
        return max((k for m in self.terms for _, k, _ in m), default=-1)

    def graded_parts(self) -> dict[int, "TPolynomial"]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(mono_degree(m), {})[m] = c
        return {d: TPolynomial._raw(t) for d, t in sorted(parts.items())}

    def homogeneous_part(self, d: int) -> "TPolynomial":
        return TPolynomial._raw({m: c for m, c in self.terms.items() if mono_degree(m) == d})

    def truncate_degree(self, dmax: int) -> "TPolynomial":
        return TPolynomial._raw({m: c for m, c in self.terms.items() if mono_degree(m) <= dmax})

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items())

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, TPolynomial):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other: "TPolynomial") -> "TPolynomial":
        return TPolynomial._raw(poly_add_into(dict(self.terms), other.terms))

    def __sub__(self, other: "TPolynomial") -> "TPolynomial":
        return TPolynomial._raw(poly_add_into(dict(self.terms), other.terms, -1))

    def __neg__(self) -> "TPolynomial":
        return TPolynomial._raw({m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "TPolynomial":
        c = to_q(c)
        if not c:
            return TPolynomial()
        return TPolynomial._raw({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TPolynomial):
            return TPolynomial._raw(poly_mul(self.terms, other.terms))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "TPolynomial":
        out = TPolynomial.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self, a: int, k: int, n: int = 1) -> "TPolynomial":
        need = ((a, k, n),)
        out: dict = {}
        for m, c in self.terms.items():
            r = mono_derive(m, need)
            if r is not None:
                f, rest = r
                out[rest] = out.get(rest, ZERO) + c * f
        return TPolynomial({m: c for m, c in out.items() if c})

    def times_variable(self, a: int, k: int) -> "TPolynomial":
        v = var(a, k)
        return TPolynomial._raw({mono_mul(m, v): c for m, c in self.terms.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({qstr(c)})*{mono_text(m)}" for m, c in self.sorted_terms())


def degree(p: TPolynomial) -> int:
    return p.degree()


def graded_parts(p: TPolynomial) -> dict[int, TPolynomial]:
    return p.graded_parts()


@dataclass
class HbarSeries:
    """Element of Q[T][[hbar]] known through ``hbar**order_K``."""

    coeffs: list

    def __post_init__(self):
        self.coeffs = [c if isinstance(c, TPolynomial) else TPolynomial(c) for c in self.coeffs]
        if not self.coeffs:
            raise ValueError("HbarSeries needs at least the hbar^0 coefficient")

    @property
    def order_K(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, K: int) -> "HbarSeries":
        return cls([TPolynomial.constant(1)] + [TPolynomial() for _ in range(K)])

    @classmethod
    def zero(cls, K: int) -> "HbarSeries":
        return cls([TPolynomial() for _ in range(K + 1)])

    def __getitem__(self, m: int) -> TPolynomial:
        return self.coeffs[m]

    def __eq__(self, other) -> bool:
        if not isinstance(other, HbarSeries):
            return NotImplemented
        return self.order_K == other.order_K and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def truncate(self, K: int) -> "HbarSeries":
        if K > self.order_K:
            raise ValueError(f"series known through hbar^{self.order_K}, cannot truncate at {K}")
        return HbarSeries(list(self.coeffs[: K + 1]))

    def __add__(self, other: "HbarSeries") -> "HbarSeries":
        K = min(self.order_K, other.order_K)
        return HbarSeries([self.coeffs[m] + other.coeffs[m] for m in range(K + 1)])

    def __sub__(self, other: "HbarSeries") -> "HbarSeries":
        K = min(self.order_K, other.order_K)
        return HbarSeries([self.coeffs[m] - other.coeffs[m] for m in range(K + 1)])

    def __mul__(self, other):
        if not isinstance(other, HbarSeries):
            return HbarSeries([c.scale(other) for c in self.coeffs])
        K = min(self.order_K, other.order_K)
        out = []
        for m in range(K + 1):
            acc: dict = {}
            for i in range(m + 1):
                a, b = self.coeffs[i], other.coeffs[m - i]
                if a.terms and b.terms:
                    poly_add_into(acc, poly_mul(a.terms, b.terms))
            out.append(TPolynomial._raw(acc))
        return HbarSeries(out)

    def scale_hbar(self, c) -> "HbarSeries":
        """Substitute ``hbar -> c * hbar``."""
        c = to_q(c)
        out, w = [], ONE
        for p in self.coeffs:
            out.append(p.scale(w))
            w *= c
        return HbarSeries(out)

    def coefficient(self, m: int, monomial: Monomial):
        return self.coeffs[m].coeff(monomial)

    def first_difference(self, other: "HbarSeries"):
        """First ``(order, monomial, mine, theirs)`` where the two series differ, or None."""
        K = min(self.order_K, other.order_K)
        for m in range(K + 1):
            a, b = self.coeffs[m].terms, other.coeffs[m].terms
            if a != b:
                for mono in sorted(set(a) | set(b)):
                    x, y = a.get(mono, ZERO), b.get(mono, ZERO)
                    if x != y:
                        return m, mono, x, y
        return None

    def rows(self) -> Iterable[tuple[int, Monomial, object]]:
        """Deterministic ``(order, monomial, coeff)`` rows."""
        for m, p in enumerate(self.coeffs):
            for mono, c in p.sorted_terms():
                yield m, mono, c


def substitute_basis(s: HbarSeries, psi: Sequence[Sequence]) -> HbarSeries:
    """Replace every ``T[a][k]`` by ``sum_b psi[a][b] T[b][k]`` (sectors 1-based)."""
    n = len(psi)
    mat = [[to_q(x) for x in row] for row in psi]
    if len(mat) != n or any(len(r) != n for r in mat):
        raise ValueError("psi must be square")
    _inverse_matrix(mat)  # raises when singular
    cache: dict = {}

    def image(a: int, k: int, e: int) -> dict:
        key = (a, k, e)
        if key not in cache:
            lin = {var(b + 1, k): mat[a - 1][b] for b in range(n) if mat[a - 1][b]}
            out = {(): ONE}
            for _ in range(e):
                out = poly_mul(out, lin)
            cache[key] = out
        return cache[key]

    out = []
    for p in s.coeffs:
        acc: dict = {}
        for m, c in p.terms.items():
            prod = {(): c}
            for a, k, e in m:
                if a > n:
                    raise ValueError(f"variable sector {a} outside psi of size {n}")
                prod = poly_mul(prod, image(a, k, e))
            poly_add_into(acc, prod)
        out.append(TPolynomial._raw(acc))
    return HbarSeries(out)


def _inverse_matrix(mat: Sequence[Sequence]) -> list[list]:
    """Exact Gauss-Jordan inverse; raises ``ValueError`` on a singular matrix."""
    n = len(mat)
    aug = [[to_q(x) for x in row] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


inverse_matrix = _inverse_matrix
