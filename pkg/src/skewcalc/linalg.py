"""Exact sparse linear algebra over a :class:`ParamRing`.

Vectors are dicts column -> scalar.  Elimination works over the field of
fractions and picks the simplest available pivot; every non-constant pivot
is recorded because dividing by it is only valid where it does not vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .scalars import ParamRing, complexity, fmt, is_constant


class NeedsAssumption(ArithmeticError):
    """A pivot is not known to be nonzero under the current assumptions."""

    def __init__(self, scalar):
        super().__init__(f"pivot {fmt(scalar)} needs a nonzero assumption")
        self.scalar = scalar


class SingularMatrix(ArithmeticError):
    """The matrix has no inverse over the scalar field."""


@dataclass
class Pivots:
    """Collects non-constant pivots used by eliminations."""

    ring: ParamRing
    strict: bool = False
    used: list = field(default_factory=list)

    def note(self, c):
        if is_constant(c):
            return
        if self.strict and not self.ring.assumed_nonzero(c):
            raise NeedsAssumption(c)
        if not any(c == x for x in self.used):
            self.used.append(c)

    def describe(self) -> list:
        return [f"{fmt(c)} != 0" for c in self.used]


def _clean(v: dict) -> dict:
    return {k: x for k, x in v.items() if x}


def rref(rows: Iterable[dict], ring: ParamRing, pivots: Pivots | None = None,
         order: Callable | None = None) -> dict:
    """Reduced row echelon form: returns {pivot column: row with pivot 1}.

    With ``order`` the pivot of a row is its largest column under that key
    (canonical form); otherwise the simplest coefficient is chosen.
    """
    zero = ring.zero
    piv: dict = {}
    for r in rows:
        v = _clean(dict(r))
        for col in [c for c in v if c in piv]:
            c = v.get(col)
            if c:
                for k, e in piv[col].items():
                    v[k] = v.get(k, zero) - c * e
        v = _clean(v)
        if not v:
            continue
        if order is not None:
            col = max(v, key=order)
        else:
            col = min(v, key=lambda k: (complexity(v[k]), repr(k)))
        lc = v[col]
        if pivots is not None:
            pivots.note(lc)
        inv = ring.one / lc
        v = {k: x * inv for k, x in v.items()}
        for pc, row in piv.items():
            c = row.get(col)
            if c:
                for k, e in v.items():
                    row[k] = row.get(k, zero) - c * e
                piv[pc] = _clean(row)
        piv[col] = v
    return piv


def nullspace(rows: Iterable[dict], columns: Sequence, ring: ParamRing,
              pivots: Pivots | None = None) -> list:
    """Basis of {x : sum_k row[k] x[k] = 0 for every row} over ``columns``.

    The basis is returned in canonical (reduced, largest-column pivot) form,
    so it does not depend on the pivots chosen during elimination.
    """
    piv = rref(rows, ring, pivots)
    free = [c for c in columns if c not in piv]
    basis = []
    for f in free:
        v = {f: ring.one}
        for pc, row in piv.items():
            c = row.get(f)
            if c:
                v[pc] = -c
        basis.append(v)
    return canonical(basis, ring, columns)


def canonical(vectors: Iterable[dict], ring: ParamRing, columns: Sequence) -> list:
    """Canonical basis of the span: RREF with pivots on the earliest columns."""
    pos = {c: i for i, c in enumerate(columns)}
    piv = rref(vectors, ring, order=lambda c: -pos[c])
    return [piv[c] for c in sorted(piv, key=lambda c: pos[c])]


def rank(rows: Iterable[dict], ring: ParamRing) -> int:
    return len(rref(rows, ring))


def in_span(v: dict, basis: Sequence[dict], ring: ParamRing) -> bool:
    return rank(list(basis) + [v], ring) == rank(basis, ring)


# ------------------------------------------------------------ dense matrices
def identity(n: int, ring: ParamRing) -> list:
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence], ring: ParamRing) -> list:
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = ring.zero
            for k in range(m):
                a = A[i][k]
                if a:
                    b = B[k][j]
                    if b:
                        s = s + a * b
            row.append(s)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in r] for r in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def mat_eq(A, B) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def mat_inv(A: Sequence[Sequence], ring: ParamRing, pivots: Pivots | None = None) -> list:
    """Gauss-Jordan inverse; SingularMatrix if no pivot exists."""
    n = len(A)
    M = [list(A[i]) + [ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    for c in range(n):
        cands = [r for r in range(c, n) if M[r][c]]
        if not cands:
            raise SingularMatrix(f"column {c + 1} has no pivot")
        r = min(cands, key=lambda r: complexity(M[r][c]))
        M[c], M[r] = M[r], M[c]
        lc = M[c][c]
        if pivots is not None:
            pivots.note(lc)
        inv = ring.one / lc
        M[c] = [x * inv for x in M[c]]
        for r2 in range(n):
            if r2 != c and M[r2][c]:
                f = M[r2][c]
                M[r2] = [x - f * y for x, y in zip(M[r2], M[c])]
    return [row[n:] for row in M]


def det(A: Sequence[Sequence], ring: ParamRing):
    """Determinant by cofactor expansion along the sparsest row (small n)."""
    n = len(A)
    if n == 0:
        return ring.one
    if n == 1:
        return A[0][0]
    i = min(range(n), key=lambda r: sum(1 for x in A[r] if x))
    total = ring.zero
    for j in range(n):
        a = A[i][j]
        if not a:
            continue
        minor = [[A[r][k] for k in range(n) if k != j] for r in range(n) if r != i]
        term = a * det(minor, ring)
        total = total + term if (i + j) % 2 == 0 else total - term
    return total


def is_lower_triangular(A) -> bool:
    return all(not A[i][j] for i in range(len(A)) for j in range(i + 1, len(A)))


def is_upper_triangular(A) -> bool:
    return all(not A[i][j] for i in range(len(A)) for j in range(i))
