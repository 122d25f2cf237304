"""Integer invariants of complete intersections and the primes they single out."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, prod

from sympy import factorint, isprime

__all__ = [
    "CIProfile",
    "SpecialityVerdict",
    "p_adic_valuation",
    "classify_special",
    "classify_tuple",
    "fano_index",
    "line_degree_D",
    "lines_through_point_type",
    "catalan",
    "conic_degree",
    "bad_primes_index1",
    "hypothesis_check",
    "THEOREM_APPLIES",
    "WITNESS_EXISTS",
    "INCONCLUSIVE",
]

THEOREM_APPLIES = "THEOREM_APPLIES"
WITNESS_EXISTS = "WITNESS_EXISTS"
INCONCLUSIVE = "INCONCLUSIVE"


def _require_prime(p: int):
    if not isprime(p):
        raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class CIProfile:
    """Complete intersection of the given degrees in P^n, characteristic p (0 allowed)."""

    n: int
    degrees: tuple
    p: int = 0

    def __post_init__(self):
        degs = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degs)
        if not degs:
            raise ValueError("need at least one degree")
        if min(degs) < 1:
            raise ValueError("degrees must be >= 1")
        if self.n < len(degs):
            raise ValueError(f"codimension {len(degs)} exceeds n = {self.n}")
        if self.p and not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def c(self) -> int:
        return len(self.degrees)

    @property
    def index(self) -> int:
        return fano_index(self)

    @property
    def degree_sum(self) -> int:
        return sum(self.degrees)

    @property
    def expected_fiber_dim(self) -> int:
        """Expected dimension of the space of lines through a point, n - 1 - sum(d)."""
        return self.n - 1 - self.degree_sum

    @property
    def D(self) -> int:
        return line_degree_D(self.degrees)


@dataclass(frozen=True)
class SpecialityVerdict:
    d: int
    v: int
    e: int
    label: str  # "special", "nonspecial" or "undefined"


def p_adic_valuation(d: int, p: int) -> tuple[int, int]:
    """Return (v, e) with d = p**v * e and p not dividing e."""
    if d < 1:
        raise ValueError("d must be >= 1")
    _require_prime(p)
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    return v, d


def classify_special(d: int, p: int) -> SpecialityVerdict:
    _require_prime(p)
    if d <= 1:
        v, e = p_adic_valuation(d, p) if d == 1 else (0, d)
        return SpecialityVerdict(d, v, e, "undefined")
    v, e = p_adic_valuation(d, p)
    # e == p cannot happen since p does not divide e
    return SpecialityVerdict(d, v, e, "special" if e < p else "nonspecial")


def _tuple_branches(degrees, p: int) -> list[dict]:
    out = []
    for d in degrees:
        if d < p:
            continue
        if d % p == 0:
            verdict = classify_special(d, p)
            out.append({"d": d, "branch": "p-divisible", "tested": d, "label": verdict.label})
        else:
            verdict = classify_special(d + 1, p)
            out.append({"d": d, "branch": "p-prime", "tested": d + 1, "label": verdict.label})
    return out


def classify_tuple(degrees, p: int) -> str:
    """'special' iff every d_i >= p passes its branch test; vacuous when all d_i < p."""
    _require_prime(p)
    if min(degrees) < 1:
        raise ValueError("degrees must be >= 1")
    branches = _tuple_branches(degrees, p)
    return "special" if all(b["label"] == "special" for b in branches) else "nonspecial"


def fano_index(profile: CIProfile) -> int:
    return (profile.n + 1) - sum(profile.degrees)


def line_degree_D(degrees) -> int:
    """prod(d_i!), the degree of the pointed-line evaluation map at n = 1 + sum(d_i)."""
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be >= 1")
    return prod(factorial(d) for d in degrees)


def lines_through_point_type(degrees) -> tuple:
    """Degrees (2..d_1, 2..d_2, ...) cutting out tangent directions of lines through a point."""
    return tuple(k for d in degrees for k in range(2, d + 1))


def catalan(d: int) -> int:
    if d < 0:
        raise ValueError("d must be >= 0")
    central = comb(2 * d, d)
    q, r = divmod(central, d + 1)
    assert r == 0, "binom(2d, d) not divisible by d+1"
    return q


def _conic_factor(d: int) -> int:
    return (d + 1) * catalan(d) - 2**d


def conic_degree(d: int) -> int:
    """Degree of the pointed-conic evaluation map on a generic index-1 hypersurface of degree d."""
    if d < 4:
        raise ValueError("d must be >= 4")
    num = factorial(d) ** 2 * _conic_factor(d)
    q, r = divmod(num, 2 ** (d + 1))
    if r:
        raise ArithmeticError(f"conic degree for d={d} is not an integer")
    return q


def bad_primes_index1(d: int) -> list[int]:
    """Primes p <= d together with the prime divisors of (d+1) C_d - 2^d."""
    if d < 4:
        raise ValueError("d must be >= 4")
    small = {p for p in range(2, d + 1) if isprime(p)}
    return sorted(small | set(factorint(_conic_factor(d))))


def hypothesis_check(profile: CIProfile) -> dict:
    p = profile.p
    _require_prime(p)
    index = fano_index(profile)
    dmax = max(profile.degrees)
    tuple_label = classify_tuple(profile.degrees, p)
    flags = {
        "index_at_least_2": index >= 2,
        "p_exceeds_max_degree": p > dmax,
        "tuple_p_special": tuple_label == "special",
        "max_degree_at_least_p": dmax >= p,
    }
    if flags["index_at_least_2"] and flags["p_exceeds_max_degree"]:
        conclusion = THEOREM_APPLIES
    elif flags["index_at_least_2"] and flags["max_degree_at_least_p"] and not flags["tuple_p_special"]:
        conclusion = WITNESS_EXISTS
    else:
        conclusion = INCONCLUSIVE
    return {
        "n": profile.n,
        "degrees": list(profile.degrees),
        "p": p,
        "fano_index": index,
        "expected_fiber_dim": profile.expected_fiber_dim,
        "tuple_label": tuple_label,
        "branches": _tuple_branches(profile.degrees, p),
        "flags": flags,
        "conclusion": conclusion,
    }
