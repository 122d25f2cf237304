"""Sparse homogeneous polynomials over a finite field.

Terms are stored as ``{exponent tuple: coefficient code}`` with no zero
coefficients, so two polynomials are equal exactly when their term
dictionaries are.  Variables are ``t0, t1, ...``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

from .gf import FieldElement, FieldSpec

__all__ = [
    "MPoly",
    "BiComponent",
    "poly_parse",
    "poly_eval",
    "poly_partial",
    "poly_bihom",
    "poly_restrict_line",
    "binomial_row",
]


def binomial_row(e: int, p: int) -> list[int]:
    return [comb(e, a) % p for a in range(e + 1)]


class MPoly:
    """Homogeneous polynomial in ``nvars`` variables over ``field``."""

    __slots__ = ("nvars", "field", "terms", "degree", "_compiled")

    def __init__(self, nvars: int, field: FieldSpec, terms: Mapping[tuple, int] = (), degree: int | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean = {}
        for exp, c in dict(terms).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or min(exp) < 0:
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = field.code_of(c)
            if c:
                clean[exp] = c
        degs = {sum(e) for e in clean}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous polynomial (degrees {sorted(degs)})")
        if degs:
            (d,) = degs
            if degree is not None and degree != d:
                raise ValueError(f"declared degree {degree} but terms have degree {d}")
            degree = d
        self.nvars = nvars
        self.field = field
        self.terms = dict(sorted(clean.items(), reverse=True))
        self.degree = 0 if degree is None else degree
        self._compiled = None

    # -- basic protocol ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self.nvars, self.field, self.terms) == (other.nvars, other.field, other.terms) and (
            self.degree == other.degree or not self.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.field, tuple(self.terms.items())))

    def __repr__(self):
        return f"MPoly({self.render()!r}, nvars={self.nvars}, F_{self.field.q})"

    def __getstate__(self):
        return (self.nvars, self.field, self.terms, self.degree)

    def __setstate__(self, state):
        self.nvars, self.field, self.terms, self.degree = state
        self._compiled = None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, exp: Sequence[int]) -> FieldElement:
        return self.field.element(self.terms.get(tuple(exp), 0))

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.nvars != other.nvars or self.field != other.field:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return MPoly(self.nvars, F, out, self.degree if self.terms else other.degree)

    def __neg__(self) -> "MPoly":
        F = self.field
        return MPoly(self.nvars, F, {e: F.neg(c) for e, c in self.terms.items()}, self.degree)

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def scale(self, c) -> "MPoly":
        F = self.field
        c = F.from_int(c) if isinstance(c, int) else F.code_of(c)
        return MPoly(self.nvars, F, {e: F.mul(c, v) for e, v in self.terms.items()}, self.degree)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        self._check(other)
        F = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return MPoly(self.nvars, F, out, self.degree + other.degree)

    __rmul__ = __mul__

    @classmethod
    def monomial(cls, nvars: int, field: FieldSpec, exp: Sequence[int], coeff: int = 1) -> "MPoly":
        return cls(nvars, field, {tuple(exp): field.from_int(coeff)})

    @classmethod
    def zero(cls, nvars: int, field: FieldSpec, degree: int = 0) -> "MPoly":
        return cls(nvars, field, {}, degree)

    def embed(self, big: FieldSpec) -> "MPoly":
        """The same polynomial with coefficients pushed into an extension field."""
        if big == self.field:
            return self
        table = self.field.embedding_into(big)
        return MPoly(self.nvars, big, {e: table[c] for e, c in self.terms.items()}, self.degree)

    # -- evaluation ---------------------------------------------------------------

    def _compile(self):
        if self._compiled is None:
            self._compiled = [
                (c, tuple((i, e) for i, e in enumerate(exp) if e)) for exp, c in self.terms.items()
            ]
        return self._compiled

    def evaluate(self, point: Sequence[int]) -> int:
        """Value at a point given as codes; returns a code."""
        F = self.field
        if F.k == 1:
            p = F.p
            acc = 0
            for c, factors in self._compile():
                v = c
                for i, e in factors:
                    v = v * pow(point[i], e, p)
                acc += v
            return acc % p
        acc = 0
        for c, factors in self._compile():
            v = c
            for i, e in factors:
                v = F.mul(v, F.pow(point[i], e))
                if not v:
                    break
            acc = F.add(acc, v)
        return acc

    def partial(self, i: int) -> "MPoly":
        if not 0 <= i < self.nvars:
            raise ValueError(f"variable index {i} out of range")
        F = self.field
        out = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e == 0:
                continue
            cc = F.mul(c, F.from_int(e))
            if cc:
                new = list(exp)
                new[i] -= 1
                out[tuple(new)] = cc
        return MPoly(self.nvars, F, out, max(self.degree - 1, 0))

    def restrict_to_line(self, A: Sequence[int], B: Sequence[int]) -> list[int]:
        """Coefficients of g(uA + vB); entry m multiplies u^(d-m) v^m.  Codes in, codes out."""
        F = self.field
        d = self.degree
        out = [0] * (d + 1)
        if not self.terms:
            return out
        powers: dict = {}

        def power(i: int, e: int) -> list[int]:
            key = (i, e)
            if key not in powers:
                if e == 0:
                    powers[key] = [1]
                else:
                    prev = power(i, e - 1)
                    a, b = A[i], B[i]
                    nxt = [0] * (e + 1)
                    for m, c in enumerate(prev):
                        if c:
                            nxt[m] = F.add(nxt[m], F.mul(c, a))
                            nxt[m + 1] = F.add(nxt[m + 1], F.mul(c, b))
                    powers[key] = nxt
            return powers[key]

        for c, factors in self._compile():
            acc = [c]
            for i, e in factors:
                pw = power(i, e)
                new = [0] * (len(acc) + e)
                for x, cx in enumerate(acc):
                    if cx:
                        for y, cy in enumerate(pw):
                            if cy:
                                new[x + y] = F.add(new[x + y], F.mul(cx, cy))
                acc = new
            for m, c2 in enumerate(acc):
                if c2:
                    out[m] = F.add(out[m], c2)
        return out

    # -- text -------------------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.terms.items():
            if not self.field.in_prime_field(c):
                raise ValueError("coefficients outside the prime field have no text form")
            factors = [f"t{i}" if e == 1 else f"t{i}^{e}" for i, e in enumerate(exp) if e]
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class BiComponent:
    """Part of g(s + t) with s-degree d - ell and t-degree ell.

    ``poly`` lives in 2(n+1) variables ordered s_0..s_n, t_0..t_n.
    """

    ell: int
    poly: MPoly

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero()


_TOKEN = re.compile(r"\s*(?:(\d+)|(t)(\d+)|(\^)|(\*)|([+-]))")


def poly_parse(text: str, nvars: int, F: FieldSpec) -> MPoly:
    """Parse ``"t0^3 + 2*t0*t1^2 - t2^3"`` into an MPoly over F."""
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"syntax error at position {pos} in {text!r}")
        pos = m.end()
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2):
            tokens.append(("var", int(m.group(3))))
        elif m.group(4):
            tokens.append(("^", None))
        elif m.group(5):
            tokens.append(("*", None))
        else:
            tokens.append(("sign", m.group(6)))
    if not tokens:
        raise ValueError("empty polynomial")

    terms: dict = {}
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        if tokens[i][0] == "sign":
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ValueError(f"expected '+' or '-' between terms in {text!r}")
        first = False
        coeff = 1
        exp = [0] * nvars
        need_var = True
        if i < len(tokens) and tokens[i][0] == "int":
            coeff = tokens[i][1]
            i += 1
            need_var = i < len(tokens) and tokens[i][0] == "*"
            if need_var:
                i += 1
        while need_var:
            if i >= len(tokens) or tokens[i][0] != "var":
                raise ValueError(f"syntax error: expected a variable in {text!r}")
            idx = tokens[i][1]
            if idx >= nvars:
                raise ValueError(f"variable t{idx} out of range for {nvars} variables")
            i += 1
            e = 1
            if i < len(tokens) and tokens[i][0] == "^":
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "int":
                    raise ValueError(f"syntax error: dangling '^' in {text!r}")
                e = tokens[i + 1][1]
                i += 2
            exp[idx] += e
            need_var = i < len(tokens) and tokens[i][0] == "*"
            if need_var:
                i += 1
        key = tuple(exp)
        terms[key] = F.add(terms.get(key, 0), F.from_int(sign * coeff))
    return MPoly(nvars, F, terms)


def _codes(F: FieldSpec, point) -> list[int]:
    # plain ints are codes; in a prime field they may be any integer residue
    return [F.from_int(x) if F.k == 1 and isinstance(x, int) else F.code_of(x) for x in point]


def poly_eval(g: MPoly, point: Sequence) -> FieldElement:
    if len(point) != g.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {g.nvars} variables")
    return g.field.element(g.evaluate(_codes(g.field, point)))


def poly_partial(g: MPoly, i: int) -> MPoly:
    return g.partial(i)


def poly_bihom(g: MPoly) -> list[BiComponent]:
    """Split g(s_0 + t_0, ..., s_n + t_n) by t-degree, zero components included."""
    if g.is_zero():
        raise ValueError("zero polynomial has no bihomogeneous decomposition")
    F = g.field
    p = F.p
    nv = g.nvars
    d = g.degree
    rows: dict = {}
    buckets: list[dict] = [dict() for _ in range(d + 1)]
    for exp, c in g.terms.items():
        # partial expansions: list of (s-exponents, t-exponents, coefficient code)
        partial = [((), (), c)]
        for e in exp:
            row = rows.get(e)
            if row is None:
                row = rows[e] = binomial_row(e, p)
            nxt = []
            for s_exp, t_exp, cc in partial:
                for a, b in enumerate(row):
                    if b:
                        nxt.append((s_exp + (e - a,), t_exp + (a,), F.mul(cc, b)))
            partial = nxt
        for s_exp, t_exp, cc in partial:
            bucket = buckets[sum(t_exp)]
            key = s_exp + t_exp
            bucket[key] = F.add(bucket.get(key, 0), cc)
    return [BiComponent(ell, MPoly(2 * nv, F, buckets[ell], d)) for ell in range(d + 1)]


def _independent(A: Sequence[int], B: Sequence[int], F: FieldSpec) -> bool:
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            if F.sub(F.mul(A[i], B[j]), F.mul(A[j], B[i])):
                return True
    return False


def poly_restrict_line(g: MPoly, A: Sequence, B: Sequence) -> list[FieldElement]:
    F = g.field
    if len(A) != g.nvars or len(B) != g.nvars:
        raise ValueError("point length does not match the number of variables")
    a, b = _codes(F, A), _codes(F, B)
    if not _independent(a, b, F):
        raise ValueError("points are projectively dependent")
    return [F.element(c) for c in g.restrict_to_line(a, b)]


def sum_polys(polys: Iterable[MPoly], nvars: int, F: FieldSpec, degree: int = 0) -> MPoly:
    acc = MPoly.zero(nvars, F, degree)
    for g in polys:
        acc = acc + g
    return acc
