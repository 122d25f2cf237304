"""Witness hypersurfaces without free lines and their certificates.

Two families are built here: Fermat hypersurfaces ``sum t_j^d`` and the
cyclic chains ``sum t_j^(d-1) t_(j+1)`` (indices mod n+1), the latter with
an extra ``t_0^d`` when p divides n+1.  For each we can

* expand ``g(s + t)`` and list the bihomogeneous pieces that vanish
  identically; any such piece forces every fiber of the pointed-line
  evaluation map to be too big, so no line on X is free;
* predict those pieces from base-p digit arithmetic;
* scan projective space over small extensions for singular points, and
  check the exact polynomial identities behind the smoothness proof of
  the cyclic family.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from sympy import isprime

from . import _parallel
from .gf import FieldSpec, field_make, matrix_rank
from .mpoly import MPoly, poly_bihom
from .numerology import CIProfile, classify_special, p_adic_valuation

__all__ = [
    "FERMAT",
    "CYCLIC",
    "SINGULAR_FOUND",
    "NO_SINGULAR_UP_TO",
    "CERTIFIED_SMOOTH",
    "NO_FREE_LINES_CERTIFIED",
    "SmoothnessVerdict",
    "VanishingReport",
    "fermat",
    "cyclic_witness",
    "detect_family",
    "lucas_binomial",
    "vanishing_components",
    "jacobian_singular_scan",
    "jacobian_minors",
    "cyclic_identities",
    "cyclic_identities_check",
    "random_ci",
    "witness_hypotheses",
]

FERMAT = "FERMAT"
CYCLIC = "CYCLIC"

SINGULAR_FOUND = "SINGULAR_FOUND"
NO_SINGULAR_UP_TO = "NO_SINGULAR_UP_TO"
CERTIFIED_SMOOTH = "CERTIFIED_SMOOTH"

NO_FREE_LINES_CERTIFIED = "NO_FREE_LINES_CERTIFIED"


@dataclass(frozen=True)
class SmoothnessVerdict:
    status: str
    witness_point: tuple | None = None
    witness_field: str | None = None
    scanned_extensions: tuple = ()
    certificate: str | None = None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness_point": list(self.witness_point) if self.witness_point is not None else None,
            "witness_field": self.witness_field,
            "scanned_extensions": list(self.scanned_extensions),
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class VanishingReport:
    d: int
    p: int
    family: str | None
    computed_zero_set: tuple
    predicted_zero_set: tuple | None
    agree: bool | None
    verdict: str | None
    prediction: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "p": self.p,
            "family": self.family,
            "computed_zero_set": list(self.computed_zero_set),
            "predicted_zero_set": None if self.predicted_zero_set is None else list(self.predicted_zero_set),
            "agree": self.agree,
            "verdict": self.verdict,
            "prediction": dict(self.prediction),
        }


# -- constructions --------------------------------------------------------------


def fermat(n: int, d: int, F: FieldSpec) -> MPoly:
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    terms = {}
    for j in range(n + 1):
        exp = [0] * (n + 1)
        exp[j] = d
        terms[tuple(exp)] = 1
    return MPoly(n + 1, F, terms)


def _chain_monomial(n: int, d: int, j: int) -> tuple:
    exp = [0] * (n + 1)
    exp[j] += d - 1
    exp[(j + 1) % (n + 1)] += 1
    return tuple(exp)


def cyclic_witness(n: int, d: int, F: FieldSpec, tilde: bool | None = None) -> MPoly:
    """sum_j t_j^(d-1) t_(j+1) with cyclic indices, plus t_0^d when p | (n+1).

    ``tilde`` overrides the automatic choice of the t_0^d term.
    """
    p = F.p
    if d % p:
        raise ValueError(f"p does not divide d (p={p}, d={d})")
    if n < 2:
        raise ValueError("cyclic witness needs n >= 2")
    terms: dict = {}
    for j in range(n + 1):
        e = _chain_monomial(n, d, j)
        terms[e] = F.add(terms.get(e, 0), 1)
    if tilde is None:
        tilde = (n + 1) % p == 0
    if tilde:
        e = tuple([d] + [0] * n)
        terms[e] = F.add(terms.get(e, 0), 1)
    return MPoly(n + 1, F, terms)


def detect_family(g: MPoly) -> str | None:
    """FERMAT or CYCLIC when g is literally one of the witness polynomials."""
    n, d, F = g.nvars - 1, g.degree, g.field
    if g.is_zero() or n < 1:
        return None
    if g == fermat(n, d, F):
        return FERMAT
    if d % F.p == 0 and n >= 2 and g == cyclic_witness(n, d, F):
        return CYCLIC
    return None


# -- component analysis -----------------------------------------------------------


def lucas_binomial(d: int, ell: int, p: int) -> int:
    """binom(d, ell) mod p as the product of digit binomials in base p."""
    if not 0 <= ell <= d:
        raise ValueError(f"ell={ell} outside [0, {d}]")
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    acc = 1
    while d or ell:
        d, dd = divmod(d, p)
        ell, de = divmod(ell, p)
        if de > dd:
            return 0
        acc = acc * comb(dd, de) % p
    return acc


def _cyclic_prediction(d: int, p: int, tilde: bool) -> tuple[tuple, dict]:
    val, _ = p_adic_valuation(d, p)
    v = val + 1  # d = p^(v-1) e with p prime to e
    modulus = p**v
    a, r = divmod(d, modulus)
    zero = {ell for ell in range(d + 1) if ell % modulus > r}
    info = {"v": v, "modulus": modulus, "a": a, "r": r, "allowed_classes": list(range(r + 1)), "tilde": tilde}
    if tilde:
        step = p ** (v - 1)
        zero = {ell for ell in zero if ell % step}
        info["tilde_step"] = step
    return tuple(sorted(zero)), info


def vanishing_components(g: MPoly, family_hint: str | None = None) -> VanishingReport:
    """Which pieces of g(s + t) vanish, found by expansion and (optionally) predicted.

    For FERMAT the prediction is exact (Lucas), so ``agree`` means equality.
    For CYCLIC the digit argument only proves that classes outside
    0..r mod p^v vanish, so ``agree`` means predicted is a subset of computed.
    """
    d = g.degree
    if d < 2 or g.is_zero():
        raise ValueError("need a nonzero polynomial of degree >= 2")
    p = g.field.p
    comps = poly_bihom(g)
    computed = tuple(c.ell for c in comps if c.is_zero)
    predicted = agree = None
    info: dict = {}
    if family_hint == FERMAT:
        predicted = tuple(ell for ell in range(d + 1) if lucas_binomial(d, ell, p) == 0)
        info = {"method": "lucas", "base_p_digits_of_d": _digits(d, p)}
        agree = set(predicted) == set(computed)
    elif family_hint == CYCLIC:
        if d % p:
            raise ValueError(f"CYCLIC hint needs p | d (p={p}, d={d})")
        tilde = tuple([d] + [0] * (g.nvars - 1)) in g.terms
        predicted, info = _cyclic_prediction(d, p, tilde)
        info["method"] = "congruence_classes"
        agree = set(predicted) <= set(computed)
    elif family_hint is not None:
        raise ValueError(f"unknown family hint {family_hint!r}")
    return VanishingReport(
        d=d,
        p=p,
        family=family_hint,
        computed_zero_set=computed,
        predicted_zero_set=predicted,
        agree=agree,
        verdict=NO_FREE_LINES_CERTIFIED if computed else None,
        prediction=info,
    )


def _digits(d: int, p: int) -> list[int]:
    out = []
    while d:
        d, r = divmod(d, p)
        out.append(r)
    return out or [0]


# -- smoothness -------------------------------------------------------------------


def _point_chunks(n: int, q: int):
    """Chunks of P^n(F_q) in scan order: normalized points, lexicographic on codes."""
    for pivot in range(n, -1, -1):
        tail = n - pivot
        if tail == 0:
            yield (pivot, None)
        else:
            for head in range(q):
                yield (pivot, head)


def _chunk_points(n: int, q: int, pivot: int, head):
    prefix = (0,) * pivot + (1,)
    if head is None:
        yield prefix
        return
    for rest in itertools.product(range(q), repeat=n - pivot - 1):
        yield prefix + (head,) + rest


def _scan_chunk(task):
    polys, jac, n, E, pivot, head = task
    c = len(polys)
    for pt in _chunk_points(n, E.q, pivot, head):
        if any(g.evaluate(pt) for g in polys):
            continue
        matrix = [[h.evaluate(pt) for h in row] for row in jac]
        if matrix_rank(matrix, E) < c:
            return pt
    return None


def projective_points(n: int, F: FieldSpec):
    """All points of P^n(F) as code tuples, in scan order."""
    for pivot, head in _point_chunks(n, F.q):
        yield from _chunk_points(n, F.q, pivot, head)


def jacobian_minors(polys: Sequence[MPoly], point: Sequence[int]) -> list[int]:
    """All c x c minors of the Jacobian at a point (codes); used to re-verify witnesses."""
    from .gf import determinant

    F = polys[0].field
    nv = polys[0].nvars
    jac = [[g.partial(i).evaluate(point) for i in range(nv)] for g in polys]
    c = len(polys)
    return [
        determinant([[row[j] for j in cols] for row in jac], F)
        for cols in itertools.combinations(range(nv), c)
    ]


def jacobian_singular_scan(
    polys: Sequence[MPoly],
    n: int,
    F: FieldSpec,
    k_max: int = 1,
    workers: int = 1,
) -> SmoothnessVerdict:
    """Search P^n over F_(q^k), k = 1..k_max, for a singular point of Zero(polys)."""
    polys = list(polys)
    if not polys:
        raise ValueError("empty polynomial list")
    if any(g.nvars != n + 1 for g in polys):
        raise ValueError(f"polynomials must have {n + 1} variables")
    if not 1 <= len(polys) <= n:
        raise ValueError("need 1 <= c <= n equations")
    if any(g.field != F for g in polys):
        raise ValueError("polynomials must be defined over the given field")
    scanned = []
    for k in range(1, k_max + 1):
        E = F if k == 1 else field_make(F.p, F.k * k)
        gs = [g.embed(E) for g in polys]
        jac = [[g.partial(i) for i in range(n + 1)] for g in gs]
        tasks = [(gs, jac, n, E, pivot, head) for pivot, head in _point_chunks(n, E.q)]
        hit = _parallel.first_hit(_scan_chunk, tasks, workers)
        scanned.append(k)
        if hit is not None:
            return SmoothnessVerdict(SINGULAR_FOUND, tuple(hit), str(E), tuple(scanned), None)
    certificate = None
    status = NO_SINGULAR_UP_TO
    if len(polys) == 1:
        family = detect_family(polys[0])
        g = polys[0]
        if family == FERMAT and g.degree % F.p:
            status, certificate = CERTIFIED_SMOOTH, "fermat_p_prime_to_d"
        elif family == CYCLIC and cyclic_identities_check(n, g.degree, F.p):
            certificate = "cyclic_identities"
    return SmoothnessVerdict(status, None, None, tuple(scanned), certificate)


def cyclic_identities(n: int, d: int, p: int) -> dict:
    """Verify the exact identities behind smoothness of the cyclic witness over F_p."""
    if d % p:
        raise ValueError(f"p does not divide d (p={p}, d={d})")
    F = field_make(p)
    nv = n + 1
    g = cyclic_witness(n, d, F)
    tilde = (n + 1) % p == 0
    mono = [MPoly(nv, F, {_chain_monomial(n, d, j): 1}) for j in range(nv)]

    def t(i, e):
        exp = [0] * nv
        exp[i % nv] += e
        return exp

    partials_ok = True
    euler_ok = True
    products = []
    for i in range(nv):
        di = g.partial(i)
        # t_{i-1}^{d-1} - t_i^{d-2} t_{i+1}
        a = t(i - 1, d - 1)
        b = t(i, d - 2)
        b[(i + 1) % nv] += 1
        expected = MPoly(nv, F, {tuple(a): 1}) - MPoly(nv, F, {tuple(b): 1})
        partials_ok &= di == expected
        ti_di = MPoly.monomial(nv, F, t(i, 1)) * di
        products.append(ti_di)
        euler_ok &= ti_di == mono[(i - 1) % nv] - mono[i]

    # m_i - m_0 = -(E_1 + ... + E_i) where E_j = t_j d_j g, so
    # g - (n+1) m_0 = -sum_{j>=1} (n+1-j) E_j
    combo = MPoly.zero(nv, F, d)
    for j in range(1, nv):
        combo = combo + products[j].scale(-(nv - j))
    lhs = g - mono[0].scale(nv)
    if tilde:
        lhs = lhs - MPoly.monomial(nv, F, t(0, d))
    telescope_ok = lhs == combo
    return {"partials": bool(partials_ok), "euler_chain": bool(euler_ok), "telescoping": telescope_ok, "tilde": tilde}


def cyclic_identities_check(n: int, d: int, p: int) -> bool:
    r = cyclic_identities(n, d, p)
    return r["partials"] and r["euler_chain"] and r["telescoping"]


# -- complete intersections ----------------------------------------------------------


def _witness_slot(profile: CIProfile) -> int:
    p = profile.p
    for i, d in enumerate(profile.degrees):
        if d >= p and classify_special(d + 1 if d % p else d, p).label == "nonspecial":
            return i
    for i, d in enumerate(profile.degrees):
        if d >= p:
            return i
    return 0


def random_ci(profile: CIProfile, F: FieldSpec, seed: int, witness_slot: int | None = None) -> list[MPoly]:
    """One witness equation plus seeded dense random equations of the other degrees.

    The witness is Fermat when p does not divide its degree and the cyclic
    chain otherwise.  Random coefficients are drawn from the prime field.
    """
    if profile.p and profile.p != F.p:
        raise ValueError("profile characteristic does not match the field")
    n = profile.n
    slot = _witness_slot(profile) if witness_slot is None else witness_slot
    rng = random.Random(seed)
    out = []
    for i, d in enumerate(profile.degrees):
        if i == slot:
            out.append(fermat(n, d, F) if d % F.p else cyclic_witness(n, d, F))
            continue
        monos = []
        for combo in itertools.combinations_with_replacement(range(n + 1), d):
            exp = [0] * (n + 1)
            for v in combo:
                exp[v] += 1
            monos.append(tuple(exp))
        while True:
            g = MPoly(n + 1, F, {e: rng.randrange(F.p) for e in monos})
            if not g.is_zero():
                break
        out.append(g)
    return out


def witness_hypotheses(family: str, n: int, d: int, p: int) -> dict:
    """Which hypotheses of the no-free-lines lemmas hold, and which branch applies."""
    out = {"n_at_least_d": n >= d, "p_divides_d": d % p == 0}
    if family == FERMAT:
        out["p_prime_to_d"] = d % p != 0
        out["d_plus_1_label"] = classify_special(d + 1, p).label
        out["d_label"] = classify_special(d, p).label
        out["branch"] = "fermat: d+1 nonspecial" if out["d_plus_1_label"] == "nonspecial" else "fermat: d+1 special"
    elif family == CYCLIC:
        out["n_plus_1_p_divisible"] = (n + 1) % p == 0
        out["d_label"] = classify_special(d, p).label
        out["branch"] = "cyclic tilde (p | n+1)" if out["n_plus_1_p_divisible"] else "cyclic plain (p prime to n+1)"
    else:
        raise ValueError(f"unknown family {family!r}")
    return out
