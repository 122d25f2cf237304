"""Lines in P^n(F_q), their containment in X = Zero(g_1..g_c), and normal bundles.

A line is stored as the reduced row-echelon basis of its 2-dimensional
subspace, so equal lines have equal representatives.  For a line L on X
the normal bundle is the kernel of

    O_L(1)^(n-1) --(dg_j restricted to L)--> sum_j O_L(d_j)

where the O_L(1) summands are the coordinate directions off the two pivot
columns.  Global sections of the twists are kernels of explicit matrices
on binary forms in (u, v), and the splitting type is read off from how
their dimensions grow with the twist.  Matrix ranks do not change under
field extension, so the type computed over F_q is the type over the
algebraic closure.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _parallel
from .gf import FieldElement, FieldSpec, matrix_rank
from .mpoly import MPoly

__all__ = [
    "Line",
    "SplittingType",
    "FreenessReport",
    "NotOnVarietyError",
    "SingularAlongLineError",
    "line_canonical",
    "line_count",
    "enumerate_lines",
    "line_on_variety",
    "lines_on_variety",
    "splitting_type",
    "is_free",
    "point_fiber_census",
    "freeness_census",
    "lines_to_csv",
    "LINE_LIMIT",
]

# ambient line counts above this need extended=True
LINE_LIMIT = 10**7
_NCHUNKS = 64


class NotOnVarietyError(ValueError):
    pass


class SingularAlongLineError(ValueError):
    pass


@dataclass(frozen=True)
class Line:
    field: FieldSpec
    rows: tuple

    @property
    def n(self) -> int:
        return len(self.rows[0]) - 1

    @property
    def pivots(self) -> tuple[int, int]:
        r0, r1 = self.rows
        return next(i for i, x in enumerate(r0) if x), next(i for i, x in enumerate(r1) if x)

    def points(self) -> list[tuple]:
        """The q+1 normalized points: row0 + v*row1 for each v, then row1."""
        F = self.field
        r0, r1 = self.rows
        pts = [tuple(F.add(a, F.mul(v, b)) for a, b in zip(r0, r1)) for v in range(F.q)]
        pts.append(tuple(r1))
        return pts

    def embed(self, big: FieldSpec) -> "Line":
        table = self.field.embedding_into(big)
        return Line(big, tuple(tuple(table[x] for x in r) for r in self.rows))

    def as_elements(self) -> list[list[FieldElement]]:
        return [[self.field.element(x) for x in r] for r in self.rows]


@dataclass(frozen=True)
class SplittingType:
    summands: tuple

    @property
    def rank(self) -> int:
        return len(self.summands)

    @property
    def degree(self) -> int:
        return sum(self.summands)

    @property
    def is_free(self) -> bool:
        return all(a >= 0 for a in self.summands)

    def __str__(self):
        return "(" + ",".join(str(a) for a in self.summands) + ")"


@dataclass
class FreenessReport:
    field: FieldSpec
    ambient_lines: int
    total_lines_on_X: int
    free_lines: int
    splitting_histogram: dict
    per_point_line_counts: dict | None = None
    lines: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        out = {
            "field": str(self.field),
            "q": self.field.q,
            "ambient_lines": self.ambient_lines,
            "total_lines_on_X": self.total_lines_on_X,
            "free_lines": self.free_lines,
            "splitting_histogram": [
                {"type": list(t), "count": c, "free": all(a >= 0 for a in t)}
                for t, c in self.splitting_histogram.items()
            ],
        }
        out["point_census"] = None
        if self.per_point_line_counts is not None:
            counts = self.per_point_line_counts
            # lines-through-a-point count -> number of points with that count
            out["point_census"] = {
                "points_on_X": len(counts),
                "incidences": sum(counts.values()),
                "histogram": {str(k): v for k, v in sorted(_value_histogram(counts).items())},
            }
        return out


def _value_histogram(counts: dict) -> dict:
    h: dict = {}
    for v in counts.values():
        h[v] = h.get(v, 0) + 1
    return h


# -- canonical form and enumeration -----------------------------------------------


def _as_codes(F: FieldSpec, pt) -> tuple:
    return tuple(F.from_int(x) if F.k == 1 and isinstance(x, int) else F.code_of(x) for x in pt)


def _infer_field(*pts) -> FieldSpec | None:
    for pt in pts:
        for x in pt:
            if isinstance(x, FieldElement):
                return x.field
    return None


def line_canonical(A: Sequence, B: Sequence, F: FieldSpec | None = None) -> Line:
    F = F or _infer_field(A, B)
    if F is None:
        raise ValueError("cannot infer the field; pass F")
    if len(A) != len(B):
        raise ValueError("points have different lengths")
    r0, r1 = list(_as_codes(F, A)), list(_as_codes(F, B))
    rows = [r0, r1]
    # reduced row echelon form of a 2 x (n+1) matrix
    pivots = []
    rank = 0
    for col in range(len(r0)):
        piv = next((i for i in range(rank, 2) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(x, inv) for x in rows[rank]]
        for i in range(2):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == 2:
            break
    if rank < 2:
        raise ValueError("points are projectively dependent")
    return Line(F, (tuple(rows[0]), tuple(rows[1])))


def line_count(n: int, q: int) -> int:
    """Number of lines in P^n(F_q), the Gaussian binomial [n+1 choose 2]_q."""
    return (q ** (n + 1) - 1) * (q ** (n + 1) - q) // ((q * q - 1) * (q * q - q))


def _blocks(n: int, q: int):
    """(i, j, free0, free1, size) for pivot columns i < j in lexicographic order."""
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            free0 = [c for c in range(i + 1, n + 1) if c != j]
            free1 = list(range(j + 1, n + 1))
            yield i, j, free0, free1, q ** (len(free0) + len(free1))


def enumerate_lines(n: int, F: FieldSpec, start: int = 0, stop: int | None = None):
    """Yield every line of P^n(F) exactly once, optionally only indices [start, stop)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = F.q
    total = line_count(n, q)
    stop = total if stop is None else min(stop, total)
    offset = 0
    for i, j, free0, free1, size in _blocks(n, q):
        lo, hi = max(start, offset), min(stop, offset + size)
        offset += size
        if lo >= hi:
            continue
        slots = free0 + [None] + free1  # None separates the two rows
        nfree = len(free0) + len(free1)
        # decode the first local index into base-q digits, most significant first
        local = lo - (offset - size)
        digits = [0] * nfree
        for pos in range(nfree - 1, -1, -1):
            local, digits[pos] = divmod(local, q)
        for _ in range(hi - lo):
            r0 = [0] * (n + 1)
            r1 = [0] * (n + 1)
            r0[i] = 1
            r1[j] = 1
            row, pos = r0, 0
            for s in slots:
                if s is None:
                    row = r1
                    continue
                row[s] = digits[pos]
                pos += 1
            yield Line(F, (tuple(r0), tuple(r1)))
            for pos in range(nfree - 1, -1, -1):
                digits[pos] += 1
                if digits[pos] < q:
                    break
                digits[pos] = 0


# -- containment -------------------------------------------------------------------


def _check_polys(polys: Sequence[MPoly], F: FieldSpec, nvars: int) -> list[MPoly]:
    out = []
    for g in polys:
        if g.nvars != nvars:
            raise ValueError(f"polynomial has {g.nvars} variables, expected {nvars}")
        out.append(g if g.field == F else g.embed(F))
    return out


def _contains(L: Line, polys: Sequence[MPoly]) -> bool:
    r0, r1 = L.rows
    for g in polys:
        if g.evaluate(r0) or g.evaluate(r1):
            return False
    return all(not any(g.restrict_to_line(r0, r1)) for g in polys)


def line_on_variety(L: Line, polys: Sequence[MPoly]) -> bool:
    polys = _check_polys(polys, L.field, L.n + 1)
    return _contains(L, polys)


def _lines_chunk(task):
    polys, n, F, start, stop, with_types = task
    out = []
    for L in enumerate_lines(n, F, start, stop):
        if _contains(L, polys):
            out.append((L, _splitting(L, polys) if with_types else None))
    return out


def _scan_lines(polys, n, F, workers, with_types):
    total = line_count(n, F.q)
    tasks = [(polys, n, F, a, b, with_types) for a, b in _parallel.chunk_ranges(total, _NCHUNKS)]
    merged = []
    for chunk in _parallel.ordered_map(_lines_chunk, tasks, workers):
        merged.extend(chunk)
    return merged


def lines_on_variety(polys: Sequence[MPoly], n: int, F: FieldSpec, workers: int = 1) -> list[Line]:
    polys = _check_polys(polys, F, n + 1)
    return [L for L, _ in _scan_lines(polys, n, F, workers, False)]


# -- normal bundle ------------------------------------------------------------------


def _h0_kernel(h, m: int, nsrc: int, degrees, F: FieldSpec) -> tuple[int, int, int]:
    """(kernel dim, rank, target dim) of the restricted Jacobian on twist m."""
    src_len = m + 2  # binary forms of degree m+1
    ncols = nsrc * src_len
    if src_len <= 0:
        return 0, 0, sum(max(0, m + d + 1) for d in degrees)
    rows = []
    for j, d in enumerate(degrees):
        tgt_len = m + d + 1
        block = [[0] * ncols for _ in range(tgt_len)]
        for k in range(nsrc):
            coeffs = h[j][k]
            for a in range(src_len):
                col = k * src_len + a
                for b, c in enumerate(coeffs):
                    if c:
                        block[a + b][col] = c
        rows.extend(block)
    rank = matrix_rank(rows, F) if rows else 0
    return ncols - rank, rank, len(rows)


def _splitting(L: Line, polys: Sequence[MPoly], basis=None) -> SplittingType:
    F = L.field
    n = L.n
    c = len(polys)
    r = n - 1 - c
    A, B = basis if basis is not None else L.rows
    pivots = set(L.pivots)
    off = [col for col in range(n + 1) if col not in pivots]
    degrees = [g.degree for g in polys]
    h = [[g.partial(col).restrict_to_line(A, B) for col in off] for g in polys]
    nsrc = len(off)

    deltas = {}
    prev = 0  # h0(K(-2)) = 0
    m = -1
    m_cap = sum(degrees) - c + 1
    while True:
        h0, rank, tgt = _h0_kernel(h, m, nsrc, degrees, F)
        delta = h0 - prev
        if delta < (deltas.get(m - 1, 0)):
            raise AssertionError("h0 differences decreased")
        deltas[m] = delta
        prev = h0
        if delta > r:
            raise SingularAlongLineError("restricted Jacobian drops rank generically along L")
        if delta == r:
            break
        m += 1
        if m > m_cap:
            raise SingularAlongLineError("twist window exhausted; X is singular along L")
    if rank != tgt:
        raise SingularAlongLineError("restricted Jacobian is not surjective; X is singular on L")
    h0_next, _, _ = _h0_kernel(h, m + 1, nsrc, degrees, F)
    assert h0_next - h0 == r, "h0 differences did not stabilize"

    summands = []
    for mm in range(m, -2, -1):
        count = deltas[mm] - deltas.get(mm - 1, 0)
        summands.extend([-mm] * count)
    return SplittingType(tuple(sorted(summands, reverse=True)))


def splitting_type(L: Line, polys: Sequence[MPoly], basis: tuple | None = None) -> SplittingType:
    """Splitting type of N_{L/X}.

    ``basis`` optionally gives two other spanning points of L (codes or
    field elements) used to parameterize it; the answer does not depend on it.
    """
    polys = _check_polys(polys, L.field, L.n + 1)
    if not _contains(L, polys):
        raise NotOnVarietyError("line does not lie on X")
    if basis is not None:
        A, B = (_as_codes(L.field, pt) for pt in basis)
        if line_canonical(A, B, L.field) != L:
            raise ValueError("basis does not span L")
        basis = (A, B)
    return _splitting(L, polys, basis)


def is_free(L: Line, polys: Sequence[MPoly]) -> bool:
    return splitting_type(L, polys).is_free


# -- censuses -----------------------------------------------------------------------


def _points_on(polys, n, F):
    from .witness import projective_points

    for pt in projective_points(n, F):
        if not any(g.evaluate(pt) for g in polys):
            yield pt


def point_fiber_census(polys: Sequence[MPoly], n: int, F: FieldSpec, lines: Iterable[Line] | None = None, workers: int = 1) -> dict:
    """For every F-point of X, the number of F-lines on X through it."""
    polys = _check_polys(polys, F, n + 1)
    counts = {pt: 0 for pt in _points_on(polys, n, F)}
    if lines is None:
        lines = lines_on_variety(polys, n, F, workers)
    for L in lines:
        for pt in L.points():
            counts[pt] += 1
    return counts


def freeness_census(
    polys: Sequence[MPoly],
    n: int,
    fields: Sequence[FieldSpec],
    workers: int = 1,
    with_points: bool = False,
    extended: bool = False,
) -> list[FreenessReport]:
    reports = []
    for F in fields:
        ambient = line_count(n, F.q)
        if ambient > LINE_LIMIT and not extended:
            raise ValueError(f"{ambient} lines in P^{n}(F_{F.q}) exceeds {LINE_LIMIT}; pass extended")
        gs = _check_polys(polys, F, n + 1)
        found = _scan_lines(gs, n, F, workers, True)
        hist: dict = {}
        for _, st in found:
            hist[st.summands] = hist.get(st.summands, 0) + 1
        hist = dict(sorted(hist.items(), reverse=True))
        lines = [L for L, _ in found]
        per_point = point_fiber_census(gs, n, F, lines) if with_points else None
        reports.append(
            FreenessReport(
                field=F,
                ambient_lines=ambient,
                total_lines_on_X=len(found),
                free_lines=sum(1 for _, st in found if st.is_free),
                splitting_histogram=hist,
                per_point_line_counts=per_point,
                lines=lines,
            )
        )
    return reports


def lines_to_csv(lines: Iterable[Line]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for L in lines:
        w.writerow(list(L.rows[0]) + list(L.rows[1]))
    return buf.getvalue()
