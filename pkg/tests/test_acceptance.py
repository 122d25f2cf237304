"""Acceptance gate: one PASS/FAIL line per criterion, printed in the session summary.

Timing limits are wall-clock, single process unless stated.
"""

import io
import random
import time
from math import comb, factorial, prod

from conftest import ACCEPTANCE_LINES
from freelines.cli import run
from freelines.gf import field_make
from freelines.linespace import enumerate_lines, freeness_census, line_count, lines_on_variety, splitting_type
from freelines.mpoly import poly_parse
from freelines.numerology import bad_primes_index1, catalan, conic_degree, line_degree_D
from freelines.witness import (
    CYCLIC,
    FERMAT,
    NO_FREE_LINES_CERTIFIED,
    SINGULAR_FOUND,
    cyclic_identities_check,
    cyclic_witness,
    fermat,
    jacobian_singular_scan,
    lucas_binomial,
    vanishing_components,
)


def record(num: int, title: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.dt = time.perf_counter() - self.t0


def test_01_lucas():
    bad = 0
    cases = 0
    with Timer() as t:
        for p in (2, 3, 5, 7, 11):
            for d in range(41):
                for ell in range(d + 1):
                    cases += 1
                    bad += lucas_binomial(d, ell, p) != comb(d, ell) % p
    ok = bad == 0 and cases == 5 * 861 and t.dt < 1.0
    record(1, "Lucas vs exact binomials", ok, f"{cases} cases, {bad} mismatches, {t.dt:.3f}s (limit 1s)")


def test_02_fermat_quartic_components():
    F3 = field_make(3)
    with Timer() as t:
        r = vanishing_components(fermat(5, 4, F3), FERMAT)
    ok = r.computed_zero_set == (2,) and r.predicted_zero_set == (2,) and r.agree
    ok = ok and r.verdict == NO_FREE_LINES_CERTIFIED and t.dt < 1.0
    record(2, "Fermat quartic bihomogeneous zero set, p=3", ok,
           f"computed {set(r.computed_zero_set)}, predicted {set(r.predicted_zero_set)}, {r.verdict}, {t.dt:.3f}s (limit 1s)")


def test_03_quartic_census():
    F3 = field_make(3)
    with Timer() as t:
        (rep,) = freeness_census([fermat(5, 4, F3)], 5, [F3], workers=1)
    types_ok = all(len(a) == 3 and sum(a) == 0 and min(a) < 0 for a in rep.splitting_histogram)
    ok = rep.ambient_lines == 11011 and rep.free_lines == 0 and rep.total_lines_on_X > 0 and types_ok and t.dt < 60
    hist = ", ".join(f"{a}x{c}" for a, c in rep.splitting_histogram.items())
    record(3, "Fermat quartic in P^5 over F_3 has no free lines", ok,
           f"{rep.ambient_lines} ambient, {rep.total_lines_on_X} on X, {rep.free_lines} free, types {hist}, {t.dt:.2f}s (limit 60s)")


def test_04_cyclic_witness():
    F2 = field_make(2)
    with Timer() as t:
        ids = cyclic_identities_check(7, 6, 2) and cyclic_identities_check(6, 6, 2)
        g = cyclic_witness(7, 6, F2)
        r = vanishing_components(g, CYCLIC)
        hit = [ell for ell in r.computed_zero_set if ell % 4 == 3]
        v = jacobian_singular_scan([g], 7, F2, k_max=2)
    ok = ids and bool(hit) and r.verdict == NO_FREE_LINES_CERTIFIED
    ok = ok and v.status != SINGULAR_FOUND and v.scanned_extensions == (1, 2) and t.dt < 120
    ok = ok and line_count(7, 2) == 10795
    record(4, "cyclic witness (7,6) over F_2", ok,
           f"identities {ids}, zero components {set(r.computed_zero_set)} (3 mod 4: {hit}), "
           f"scan F_2,F_4 -> {v.status}, {t.dt:.2f}s (limit 120s)")


def test_05_cubic_27():
    F7 = field_make(7)
    with Timer() as t:
        (rep,) = freeness_census([fermat(3, 3, F7)], 3, [F7], with_points=True)
    inc = sum(rep.per_point_line_counts.values())
    ok = rep.total_lines_on_X == 27 and rep.splitting_histogram == {(-1,): 27}
    ok = ok and rep.free_lines == 0 and inc == 216 and t.dt < 30
    record(5, "27 lines on the Fermat cubic over F_7", ok,
           f"{rep.total_lines_on_X} lines, types {dict(rep.splitting_histogram)}, {rep.free_lines} free, "
           f"incidences {inc}, {t.dt:.2f}s (limit 30s)")


def test_06_gaussian_binomial():
    got = {}
    for n, q in [(2, 2), (2, 3), (3, 2), (3, 3), (3, 7), (5, 3)]:
        F = field_make(q)
        count = sum(1 for _ in enumerate_lines(n, F))
        formula = (q ** (n + 1) - 1) * (q ** (n + 1) - q) // ((q * q - 1) * (q * q - q))
        got[(n, q)] = (count, formula)
    ok = all(a == b for a, b in got.values()) and got[(3, 3)][0] == 130 and got[(5, 3)][0] == 11011
    record(6, "line counts equal the Gaussian binomial", ok,
           ", ".join(f"P^{n}(F_{q})={c}" for (n, q), (c, _) in got.items()))


def test_07_index_one_numerology():
    ok = conic_degree(4) == 972 and bad_primes_index1(4) == [2, 3]
    ok = ok and conic_degree(5) == 49500 and bad_primes_index1(5) == [2, 3, 5, 11]
    integral = True
    for d in range(4, 31):
        # (d+1) C_d is the central binomial coefficient
        num = factorial(d) ** 2 * (comb(2 * d, d) - 2**d)
        integral &= num % 2 ** (d + 1) == 0 and conic_degree(d) == num // 2 ** (d + 1)
        integral &= catalan(d) == comb(2 * d, d) // (d + 1)
    ok = ok and integral
    record(7, "conic degree and bad primes, index 1", ok,
           f"e(4)={conic_degree(4)} {bad_primes_index1(4)}, e(5)={conic_degree(5)} {bad_primes_index1(5)}, "
           f"integral 4..30: {integral}")


def test_08_line_degree_D():
    rng = random.Random(20260101)
    mult = True
    for _ in range(100):
        a = tuple(rng.randint(1, 9) for _ in range(rng.randint(1, 4)))
        b = tuple(rng.randint(1, 9) for _ in range(rng.randint(1, 4)))
        mult &= line_degree_D(a + b) == line_degree_D(a) * line_degree_D(b)
        mult &= line_degree_D(a) == prod(factorial(x) for x in a)
    ok = line_degree_D((2, 3)) == 12 and mult
    record(8, "D = prod d_i! and multiplicativity", ok, f"D(2,3)={line_degree_D((2, 3))}, 100 random tuples: {mult}")


def test_09_degree_conservation():
    F3, F7 = field_make(3), field_make(7)
    F9, F49 = field_make(3, 2), field_make(7, 2)
    cases = [
        ("quadric", [poly_parse("t0*t3 - t1*t2", 4, F3)], 3, F3, F9),
        ("cubic", [fermat(3, 3, F7)], 3, F7, F49),
        ("quartic", [fermat(5, 4, F3)], 5, F3, F9),
    ]
    rng = random.Random(9)
    checked = 0
    failures = []
    for name, polys, n, F, big in cases:
        c = len(polys)
        target = (n - 1) - sum(g.degree for g in polys)
        for L in lines_on_variety(polys, n, F):
            st = splitting_type(L, polys)
            a, b = rng.sample(L.points(), 2)
            s = rng.randrange(1, F.q)
            a = tuple(F.mul(s, x) for x in a)
            re = splitting_type(L, polys, basis=(a, b))
            ext = splitting_type(L.embed(big), polys)
            if st.rank != n - 1 - c or st.degree != target or re.is_free != st.is_free or ext.is_free != st.is_free:
                failures.append((name, L.rows))
            checked += 1
    record(9, "degree conservation, respanning and base extension", not failures,
           f"{checked} lines checked, {len(failures)} failures")


CLI_RUNS = {
    2: ["witness", "--family", "fermat", "--n", "5", "--d", "4", "--field", "3"],
    3: ["lines", "--poly-file", "{quartic}", "--n", "5", "--field", "3", "--census"],
    4: ["witness", "--family", "cyclic", "--n", "7", "--d", "6", "--field", "2", "--scan-kmax", "2"],
    5: ["lines", "--poly-file", "{cubic}", "--n", "3", "--field", "7", "--census"],
}


def test_10_determinism(tmp_path):
    files = {
        "quartic": tmp_path / "quartic.txt",
        "cubic": tmp_path / "cubic.txt",
    }
    files["quartic"].write_text("t0^4 + t1^4 + t2^4 + t3^4 + t4^4 + t5^4\n")
    files["cubic"].write_text("t0^3 + t1^3 + t2^3 + t3^3\n")
    same = {}
    for crit, argv in CLI_RUNS.items():
        argv = [a.format(**{k: str(v) for k, v in files.items()}) for a in argv]
        outs = []
        for threads in ("1", "4", "1"):
            buf = io.StringIO()
            status = run(argv + ["--threads", threads], stdout=buf)
            outs.append((status, buf.getvalue()))
        same[crit] = outs[0][0] == 0 and len(set(outs)) == 1
    record(10, "byte-identical reports for --threads 1 and 4", all(same.values()),
           ", ".join(f"criterion {k}: {'identical' if v else 'DIFFERS'}" for k, v in same.items()))
