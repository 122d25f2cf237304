"""Exact arithmetic in finite fields F_p and F_{p^k}.

Elements are addressed by an integer *code* in ``range(q)``: the code of
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` is ``sum(c_i * p**i)``.  Codes
``0..p-1`` are the prime subfield, so for k = 1 a code is just the residue.
The hot loops elsewhere in the package work on codes through the
``FieldSpec`` methods; :class:`FieldElement` is the user-facing value type.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sympy import isprime

__all__ = [
    "FieldSpec",
    "FieldElement",
    "field_make",
    "parse_field",
    "gf_inv",
    "gf_enumerate",
    "matrix_rank",
    "determinant",
]

_ADD_TABLE_LIMIT = 1024


def _polymod(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of num by the monic polynomial den, coefficients low-to-high."""
    num = list(num)
    dk = len(den) - 1
    for top in range(len(num) - 1, dk - 1, -1):
        c = num[top] % p
        if c:
            shift = top - dk
            for i, dc in enumerate(den):
                num[shift + i] = (num[shift + i] - c * dc) % p
    rem = [c % p for c in num[:dk]]
    return rem + [0] * (dk - len(rem))


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    k = len(modulus) - 1
    if k == 1:
        return True
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if any(_polymod(list(modulus), list(low) + [1], p)):
                continue
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^k} = F_p[x] / (modulus).

    ``modulus`` lists coefficients low-to-high and is monic of degree k.
    Use :func:`field_make` rather than calling this directly.
    """

    p: int
    k: int
    modulus: tuple[int, ...]
    _tables: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1:
            raise ValueError("extension degree must be >= 1")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.k + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.k}")
        if not _is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)
        if self.k > 1:
            object.__setattr__(self, "_tables", self._build_tables())

    # -- construction helpers -------------------------------------------------

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.q

    def __str__(self):
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    def digits(self, code: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.k):
            code, r = divmod(code, p)
            out.append(r)
        return tuple(out)

    def undigits(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + (int(c) % self.p)
        return code

    def _poly_mul_code(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self.undigits(_polymod(prod, self.modulus, self.p))

    def _build_tables(self) -> dict:
        q, p = self.q, self.p
        # find a primitive element for exp/log multiplication tables
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._poly_mul_code(x, g)
            if len(exp) == q - 1:
                break
        else:  # pragma: no cover - F_{p^k}^* is always cyclic
            raise AssertionError("no primitive element")
        log = [0] * q
        for i, x in enumerate(exp):
            log[x] = i
        digits = [self.digits(c) for c in range(q)]
        weights = [p**i for i in range(self.k)]
        neg = [sum(((-d) % p) * w for d, w in zip(ds, weights)) for ds in digits]
        add = None
        if q <= _ADD_TABLE_LIMIT:
            add = [
                [sum(((x + y) % p) * w for x, y, w in zip(da, db, weights)) for db in digits]
                for da in digits
            ]
        return {"exp": exp + exp, "log": log, "neg": neg, "add": add, "digits": digits, "weights": weights}

    # -- arithmetic on codes ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        t = self._tables
        if t["add"] is not None:
            return t["add"][a][b]
        p = self.p
        return sum(((x + y) % p) * w for x, y, w in zip(t["digits"][a], t["digits"][b], t["weights"]))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self._tables["neg"][a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        return t["exp"][t["log"][a] + t["log"][b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_%s" % self)
        if self.k == 1:
            return pow(a, -1, self.p)
        t = self._tables
        return t["exp"][(-t["log"][a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        t = self._tables
        return t["exp"][(t["log"][a] * e) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Code of the image of the integer n (lands in the prime subfield)."""
        return n % self.p

    def in_prime_field(self, code: int) -> bool:
        return 0 <= code < self.p

    def codes(self) -> range:
        return range(self.q)

    # -- element views ------------------------------------------------------------

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for F_{self.q}")
        return FieldElement(self, code)

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients")
        return FieldElement(self, self.undigits(coeffs))

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def code_of(self, x) -> int:
        """Accept a FieldElement of this field or a raw code."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise ValueError(f"element of F_{x.field.q} used in F_{self.q}")
            return x.code
        code = int(x)
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for F_{self.q}")
        return code

    # -- subfields ------------------------------------------------------------------

    def embedding_into(self, big: "FieldSpec") -> list[int]:
        """Map codes of this field to codes of ``big``, a finite extension of it.

        The image of the generator is the smallest-code root of our modulus
        in ``big``, so the embedding is deterministic.
        """
        if big.p != self.p or big.k % self.k:
            raise ValueError(f"F_{self.q} does not embed in F_{big.q}")
        if self.k == 1:
            return list(range(self.p))
        for root in range(big.q):
            acc = 0
            for c in reversed(self.modulus):
                acc = big.add(big.mul(acc, root), c)
            if acc == 0:
                break
        else:  # pragma: no cover
            raise AssertionError("modulus has no root in extension")
        powers = [1]
        for _ in range(self.k - 1):
            powers.append(big.mul(powers[-1], root))
        table = []
        for code in range(self.q):
            acc = 0
            for c, pw in zip(self.digits(code), powers):
                acc = big.add(acc, big.mul(c, pw))
            table.append(acc)
        return table


@dataclass(frozen=True)
class FieldElement:
    """An element of a finite field, stored in canonical reduced form."""

    field: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            return self.field.code_of(other)
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.code, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def __bool__(self):
        return self.code != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.code} (mod {self.field.p})"
        return f"{list(self.coeffs)} in F_{self.field.q}"


def field_make(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build F_{p^k}.

    Without a modulus, the first monic irreducible polynomial of degree k
    is used, ordering candidates lexicographically by their coefficients
    read from x^(k-1) down to the constant; for k = 1 that is x.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if modulus is None:
        if k == 1:
            modulus = (0, 1)
        else:
            for low in itertools.product(range(p), repeat=k):
                cand = tuple(reversed(low)) + (1,)
                if cand[0] and _is_irreducible(cand, p):
                    modulus = cand
                    break
    return FieldSpec(p, k, tuple(modulus))


def parse_field(text: str) -> FieldSpec:
    """Parse a field designation: ``"3"``, ``"9"`` or ``"2^3"``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"bad field designation {text!r}")
    base, exp = int(m.group(1)), int(m.group(2) or 1)
    if exp < 1:
        raise ValueError(f"bad field designation {text!r}")
    if isprime(base):
        return field_make(base, exp)
    if base < 2:
        raise ValueError(f"{text!r} is not a prime power")
    # plain prime power such as "9"
    for p in range(2, base + 1):
        if base % p == 0:
            break
    k = 0
    rest = base
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1 or exp != 1:
        raise ValueError(f"{text!r} is not a prime power")
    return field_make(p, k)


def gf_inv(a: FieldElement, F: FieldSpec | None = None) -> FieldElement:
    F = F or a.field
    return FieldElement(F, F.inv(F.code_of(a)))


def gf_enumerate(F: FieldSpec) -> list[FieldElement]:
    """All q elements in code order (0 first, then 1)."""
    return [FieldElement(F, c) for c in range(F.q)]


def matrix_rank(rows: Iterable[Sequence[int]], F: FieldSpec) -> int:
    """Rank of a matrix of codes by Gaussian elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    if F.k == 1:
        p = F.p
        for col in range(ncols):
            piv = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            prow = m[rank]
            inv = pow(prow[col], -1, p)
            prow = [x * inv % p for x in prow]
            m[rank] = prow
            for i in range(rank + 1, len(m)):
                f = m[i][col] % p
                if f:
                    row = m[i]
                    m[i] = [(x - f * y) % p for x, y in zip(row, prow)]
            rank += 1
            if rank == len(m):
                break
        return rank
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = F.inv(m[rank][col])
        prow = [F.mul(x, inv) for x in m[rank]]
        m[rank] = prow
        for i in range(rank + 1, len(m)):
            f = m[i][col]
            if f:
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], prow)]
        rank += 1
        if rank == len(m):
            break
    return rank


def determinant(rows: Sequence[Sequence[int]], F: FieldSpec) -> int:
    """Determinant by cofactor expansion; only for the small minors used in checks."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = 0
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = F.mul(rows[0][j], determinant(minor, F))
        acc = F.sub(acc, term) if j % 2 else F.add(acc, term)
    return acc
