"""Conjugation maps on coaction coefficients and the vanishing patterns they force.

For a degree-one matrix M with inverse W the conjugation map sends the
formal symbol y_ij to sum_{s,t} m_si y_st w_jt.  Its powers have closed
forms sum_r r^n p_r(n) built from the generalized eigenspaces of the map;
a finite-order (or identity) hypothesis then forces linear relations among
the y's, which :func:`derive_pattern` propagates to a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

from .linalg import Pivots, SingularMatrix, is_lower_triangular, is_upper_triangular, mat_inv, nullspace, rref
from .scalars import ParamRing, eq, fmt, is_constant, is_zero, root_of_unity_status

FINITE_ORDER, IDENTITY = "finite-order", "identity"


class NotTriangular(ValueError):
    """The matrix is not triangular in the given basis."""


class UndecidedEigenvalueEquality(ValueError):
    """Two eigenvalue ratios can be neither proven equal nor proven distinct."""

    def __init__(self, r1, r2):
        super().__init__(f"cannot decide whether {fmt(r1)} and {fmt(r2)} are equal")
        self.pair = (r1, r2)


class UndecidedStatus(ValueError):
    """Some entries stay undetermined for lack of assumptions."""

    def __init__(self, entries, pattern=None):
        names = ", ".join(ysym(i, j) for i, j in entries)
        super().__init__(f"undetermined entries: {names}")
        self.entries = list(entries)
        self.pattern = pattern


def ysym(i: int, j: int) -> str:
    return f"y{i + 1}{j + 1}"


def fmt_yvec(v: dict) -> str:
    """Print a combination of y symbols, e.g. ``y11 + n*b/a*y21``."""
    items = [(k, c) for k, c in sorted(v.items()) if not is_zero(c)]
    if not items:
        return "0"
    parts = []
    for k, c in items:
        s = fmt(c)
        sym = ysym(*k)
        neg = s.startswith("-")
        body = s[1:] if neg else s
        if body == "1":
            term = sym
        else:
            term = f"({body})*{sym}" if (" + " in body or " - " in body) else f"{body}*{sym}"
        parts.append((neg, term))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, term in parts[1:]:
        out += (" - " if neg else " + ") + term
    return out


# ------------------------------------------------------------------ the map
@dataclass
class ConjugationMap:
    """y_ij -> sum_{s,t} m_si y_st w_jt with W = M^-1."""

    M: list
    ring: ParamRing
    W: list = field(default_factory=list)
    images: dict = field(default_factory=dict)
    pivots: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.M)

    def apply(self, v: dict) -> dict:
        zero = self.ring.zero
        out: dict = {}
        for k, c in v.items():
            if is_zero(c):
                continue
            for u, e in self.images[k].items():
                out[u] = out.get(u, zero) + c * e
        return {u: x for u, x in out.items() if not is_zero(x)}

    def __call__(self, i: int, j: int) -> dict:
        return dict(self.images[(i, j)])

    def compose(self, other: "ConjugationMap") -> "ConjugationMap":
        """self o other as substitution: y -> self(other(y))."""
        images = {k: self.apply(other.images[k]) for k in other.images}
        return ConjugationMap(self.M, self.ring, [], images)

    def same(self, other: "ConjugationMap") -> bool:
        keys = set(self.images) | set(other.images)
        for k in keys:
            a, b = self.images.get(k, {}), other.images.get(k, {})
            zero = self.ring.zero
            if any(not eq(a.get(u, zero), b.get(u, zero)) for u in set(a) | set(b)):
                return False
        return True

    def ratio(self, s: int, t: int):
        """Diagonal coefficient of y_st (for triangular M): m_ss / m_tt."""
        return self.M[s][s] / self.M[t][t]

    def describe(self) -> list:
        return [f"{ysym(*k)} -> {fmt_yvec(self.images[k])}" for k in sorted(self.images)]


def conjugation_map(M, ring: ParamRing, pivots: Pivots | None = None) -> ConjugationMap:
    """The conjugation map of a degree-one matrix (SingularMatrix if M is not invertible)."""
    n = len(M)
    M = [[ring.coerce(x) for x in row] for row in M]
    piv = pivots or Pivots(ring)
    W = mat_inv(M, ring, piv)
    zero = ring.zero
    images = {}
    for i in range(n):
        for j in range(n):
            v = {}
            for s in range(n):
                if is_zero(M[s][i]):
                    continue
                for t in range(n):
                    c = M[s][i] * W[j][t]
                    if not is_zero(c):
                        v[(s, t)] = v.get((s, t), zero) + c
            images[(i, j)] = {k: x for k, x in v.items() if not is_zero(x)}
    return ConjugationMap(M, ring, W, images, piv.describe())


def _require_triangular(C: ConjugationMap):
    if not (is_lower_triangular(C.M) or is_upper_triangular(C.M)):
        raise NotTriangular("the matrix must be triangular in the given basis")


# ------------------------------------------------------------ decisions
def ratios_equal(r1, r2) -> bool:
    """Decide r1 == r2 exactly; UndecidedEigenvalueEquality when it depends on the parameters."""
    if eq(r1, r2):
        return True
    q = r1 / r2
    if is_constant(q):
        return False
    if root_of_unity_status(q).kind == "no":
        return False
    ring = q.ring
    if ring.assumed_nonzero(r1 - r2):
        return False
    for a in ring.assumptions:
        if a.kind == "not-equal-one" and (eq(a.subject, q) or eq(a.subject, 1 / q)):
            return False
    raise UndecidedEigenvalueEquality(r1, r2)


def _differs_from_one(r) -> str:
    """'yes', 'no' or 'unknown' for r != 1 (used by identity mode)."""
    if eq(r, 1):
        return "no"
    if is_constant(r):
        return "yes"
    if root_of_unity_status(r).kind == "no":
        return "yes"
    ring = r.ring
    if ring.assumed_nonzero(r - 1):
        return "yes"
    for a in ring.assumptions:
        if a.kind == "not-equal-one" and (eq(a.subject, r) or eq(a.subject, 1 / r)):
            return "yes"
    return "unknown"


# ---------------------------------------------------------- closed forms
@dataclass
class ClosedForm:
    """eta^n(y_ij) = sum over groups of ratio^n * (sum_k C(n,k) * vectors[k])."""

    entry: tuple
    ring: ParamRing
    nring: ParamRing
    groups: list  # (ratio, [v_0, v_1, ...]) with v_k the coefficient of C(n, k)

    def group_poly(self, idx: int) -> dict:
        """Vector with coefficients polynomial in n for one group."""
        nr = self.nring
        n = nr.param("n")
        out: dict = {}
        for k, v in enumerate(self.groups[idx][1]):
            binom = nr.one
            for t in range(k):
                binom = binom * (n - t)
            binom = binom / factorial(k)
            for u, c in v.items():
                out[u] = out.get(u, nr.zero) + nr.embed(c) * binom
        return {u: x for u, x in out.items() if not is_zero(x)}

    def unbounded(self) -> list:
        """Vectors multiplying a positive-degree polynomial in n."""
        return [v for _, vs in self.groups for v in vs[1:] if v]

    def __str__(self):
        parts = []
        for idx, (r, _) in enumerate(self.groups):
            body = fmt_yvec(self.group_poly(idx))
            if body == "0":
                continue
            if eq(r, 1):
                parts.append(body)
            else:
                parts.append(f"({fmt(r)})^n*({body})")
        return " + ".join(parts) or "0"

    def evaluate(self, n: int) -> dict:
        """Numeric exponent n >= 0: the vector eta^n(y_ij)."""
        zero = self.ring.zero
        out: dict = {}
        for r, vs in self.groups:
            rn = r ** n
            for k, v in enumerate(vs):
                b = comb(n, k)
                if not b:
                    continue
                for u, c in v.items():
                    out[u] = out.get(u, zero) + rn * b * c
        return {u: x for u, x in out.items() if not is_zero(x)}


def _reachable(C: ConjugationMap, start) -> list:
    seen = {start}
    todo = [start]
    while todo:
        k = todo.pop()
        for u in C.images[k]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return sorted(seen)


def _group_ratios(C: ConjugationMap, coords) -> list:
    groups: list = []  # (ratio, [coords])
    for k in coords:
        r = C.ratio(*k)
        for g in groups:
            if ratios_equal(g[0], r):
                g[1].append(k)
                break
        else:
            groups.append((r, [k]))
    return groups


def power_closed_form(C: ConjugationMap, entry: tuple, verify: bool = True) -> ClosedForm:
    """Closed form of eta^n(y_ij) with n formal, checked by induction on n."""
    _require_triangular(C)
    ring = C.ring
    i, j = entry
    coords = _reachable(C, (i, j))
    groups = _group_ratios(C, coords)
    # generalized eigenspaces on the invariant span of the reachable coordinates
    bases = []
    for r, members in groups:
        m = len(members)
        rows = _power_minus(C, coords, r, m)
        bases.append(nullspace(rows, coords, ring))
    cols = [(g, k) for g, b in enumerate(bases) for k in range(len(b))]
    if len(cols) != len(coords):
        raise UndecidedEigenvalueEquality(groups[0][0], groups[-1][0])
    # solve y_ij = sum_g sum_k x_gk * basis_gk
    eqs = []
    for u in coords:
        row = {c: bases[c[0]][c[1]].get(u, ring.zero) for c in cols}
        row["rhs"] = -(ring.one if u == (i, j) else ring.zero)
        eqs.append(row)
    sol = nullspace(eqs, cols + ["rhs"], ring)
    sol = [s for s in sol if not is_zero(s.get("rhs", ring.zero))]
    if not sol:
        raise SingularMatrix("generalized eigenvectors do not span")
    s = sol[0]
    scale = ring.one / s["rhs"]
    out_groups = []
    for g, (r, members) in enumerate(groups):
        v: dict = {}
        for k, b in enumerate(bases[g]):
            x = s.get((g, k), ring.zero) * scale
            if is_zero(x):
                continue
            for u, c in b.items():
                v[u] = v.get(u, ring.zero) + x * c
        v = {u: x for u, x in v.items() if not is_zero(x)}
        # N = eta/r - id is nilpotent on the group: coefficient of C(n, k) is N^k v
        seq = [v]
        cur = v
        for _ in range(len(members)):
            nxt = _sub(_scale(C.apply(cur), ring.one / r), cur)
            if not nxt:
                break
            seq.append(nxt)
            cur = nxt
        out_groups.append((r, seq))
    cf = ClosedForm((i, j), ring, ring.extend(["n"]), out_groups)
    if verify and not verify_closed_form(C, cf):
        raise ArithmeticError("closed form failed its inductive check")
    return cf


def verify_closed_form(C: ConjugationMap, cf: ClosedForm) -> bool:
    """eta(expr(n)) = expr(n+1) with n a fresh parameter, and expr(0) = y_ij."""
    nr = cf.nring
    n = nr.param("n")
    # eta with coefficients moved to the ring containing n
    for idx, (r, _) in enumerate(cf.groups):
        p = cf.group_poly(idx)
        lhs: dict = {}
        for k, c in p.items():
            for u, e in C.images[k].items():
                lhs[u] = lhs.get(u, nr.zero) + c * nr.embed(e)
        shifted = {u: nr.specialize(c, {"n": n + 1}, nr) * nr.embed(r) for u, c in p.items()}
        for u in set(lhs) | set(shifted):
            if not eq(lhs.get(u, nr.zero), shifted.get(u, nr.zero)):
                return False
    start = cf.evaluate(0)
    target = {cf.entry: cf.ring.one}
    return all(eq(start.get(u, cf.ring.zero), target.get(u, cf.ring.zero)) for u in set(start) | set(target))


def _scale(v: dict, c) -> dict:
    return {k: x * c for k, x in v.items() if not is_zero(x * c)}


def _sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, x in b.items():
        out[k] = out.get(k, 0) - x if k in out else -x
    return {k: x for k, x in out.items() if not is_zero(x)}


def _power_minus(C: ConjugationMap, coords, r, m) -> list:
    """Rows of (eta - r)^m restricted to the span of ``coords`` (as equations on coefficients)."""
    ring = C.ring
    cols = {}
    for k in coords:
        v = {k: ring.one}
        for _ in range(m):
            v = _sub(C.apply(v), _scale(v, r))
        cols[k] = v
    rows: dict = {}
    for k, v in cols.items():
        for u, c in v.items():
            rows.setdefault(u, {})[k] = c
    return list(rows.values())


# ------------------------------------------------------------------ patterns
ZERO, GROUPLIKE, FREE = "zero", "grouplike", "free"


@dataclass
class CoactionPattern:
    """Entry states of the coaction matrix: zero, grouplike(class) on the diagonal, or free."""

    n: int
    state: dict
    classes: dict
    relations: list
    undecided: list = field(default_factory=list)
    log: list = field(default_factory=list)

    def grid(self) -> list:
        rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                st = self.state[(i, j)]
                if st == ZERO:
                    row.append("0")
                elif st == GROUPLIKE:
                    row.append(f"g{self.classes[i]}")
                else:
                    row.append("?")
            rows.append(row)
        return rows

    def is_zero(self, i, j) -> bool:
        return self.state[(i, j)] == ZERO

    def off_diagonal_zero(self) -> bool:
        return all(self.state[(i, j)] == ZERO for i in range(self.n) for j in range(self.n) if i != j)

    def same_class(self, i, j) -> bool:
        return (self.state[(i, i)] == GROUPLIKE and self.state[(j, j)] == GROUPLIKE
                and self.classes[i] == self.classes[j])

    def equalities(self) -> list:
        groups: dict = {}
        for i, c in sorted(self.classes.items()):
            groups.setdefault(c, []).append(i)
        return [[ysym(i, i) for i in g] for g in groups.values()]

    def summary(self) -> str:
        if self.off_diagonal_zero() and all(self.state[(i, i)] == GROUPLIKE for i in range(self.n)):
            return "diagonal and grouplike: the generated coalgebra is spanned by grouplikes"
        return "partial pattern"

    def to_dict(self) -> dict:
        return {"grid": self.grid(), "classes": self.equalities(),
                "undecided": [ysym(*k) for k in self.undecided], "summary": self.summary()}

    def text(self) -> str:
        w = max(len(x) for r in self.grid() for x in r)
        lines = ["  ".join(x.rjust(w) for x in r) for r in self.grid()]
        eqs = [" = ".join(g) for g in self.equalities() if len(g) > 1]
        if eqs:
            lines.append("equal: " + "; ".join(eqs))
        if self.undecided:
            lines.append("undetermined: " + ", ".join(ysym(*k) for k in self.undecided))
        return "\n".join(lines)


class _Span:
    """Subspace of the y-symbol space known to vanish (kept in RREF)."""

    def __init__(self, ring, n):
        self.ring = ring
        self.cols = [(i, j) for i in range(n) for j in range(n)]
        self.pos = {c: k for k, c in enumerate(self.cols)}
        self.rows: dict = {}

    def add(self, v: dict) -> bool:
        v = {k: x for k, x in v.items() if not is_zero(x)}
        if not v or self.contains(v):
            return False
        self.rows = rref(list(self.rows.values()) + [v], self.ring, order=lambda c: -self.pos[c])
        return True

    def contains(self, v: dict) -> bool:
        v = dict(v)
        zero = self.ring.zero
        for col, row in self.rows.items():
            c = v.get(col)
            if c is not None and not is_zero(c):
                for k, e in row.items():
                    v[k] = v.get(k, zero) - c * e
        return all(is_zero(x) for x in v.values())

    def basis(self) -> list:
        return list(self.rows.values())


def derive_pattern(C: ConjugationMap, mode: str = FINITE_ORDER, strict: bool = False) -> CoactionPattern:
    """Propagate the vanishing forced by a finite-order (or identity) conjugation map.

    Rules, iterated to a fixpoint: polynomial growth in n forces its vectors
    to vanish; ratios that are not roots of unity (finite order) or differ
    from 1 (identity) force their components to vanish; a skew-primitive
    y_ij between equal grouplikes vanishes; the vanishing space is closed
    under the map.
    """
    if mode not in (FINITE_ORDER, IDENTITY):
        raise ValueError(f"mode must be {FINITE_ORDER!r} or {IDENTITY!r}")
    _require_triangular(C)
    n = C.n
    ring = C.ring
    Z = _Span(ring, n)
    log: list = []
    pending: set = set()
    for i in range(n):
        for j in range(n):
            try:
                cf = power_closed_form(C, (i, j), verify=False)
            except UndecidedEigenvalueEquality as e:
                pending.add((i, j))
                log.append(f"{ysym(i, j)}: {e}")
                continue
            for v in cf.unbounded():
                if Z.add(v):
                    log.append(f"R1 {ysym(i, j)}: {fmt_yvec(v)} = 0")
            for r, vs in cf.groups:
                if not vs[0]:
                    continue
                if mode == FINITE_ORDER:
                    st = root_of_unity_status(r).kind
                    kill, unknown = st == "no", st == "unknown"
                else:
                    d = _differs_from_one(r)
                    kill, unknown = d == "yes", d == "unknown"
                if kill:
                    for v in vs:
                        if Z.add(v):
                            log.append(f"R2 {ysym(i, j)}: ratio {fmt(r)}: {fmt_yvec(v)} = 0")
                elif unknown:
                    pending.add((i, j))
    changed = True
    state: dict = {}
    classes: dict = {}
    while changed:
        changed = False
        # closure under the map
        for v in Z.basis():
            if Z.add(C.apply(v)):
                changed = True
        zero = {k: Z.contains({k: ring.one}) for k in Z.cols}
        grouplike = [all(zero[(i, k)] or zero[(k, i)] for k in range(n) if k != i) for i in range(n)]
        # classes: union grouplike diagonals with y_ii - y_jj in Z
        classes = {}
        next_id = 1
        for i in range(n):
            if not grouplike[i]:
                continue
            for j in range(i):
                if grouplike[j] and Z.contains({(i, i): ring.one, (j, j): -ring.one}):
                    classes[i] = classes[j]
                    break
            else:
                classes[i] = next_id
                next_id += 1
        for i in range(n):
            for j in range(n):
                if i == j or zero[(i, j)]:
                    continue
                if not (grouplike[i] and grouplike[j] and classes[i] == classes[j]):
                    continue
                if all(zero[(i, k)] or zero[(k, j)] for k in range(n) if k not in (i, j)):
                    if Z.add({(i, j): ring.one}):
                        log.append(f"R3 {ysym(i, j)} is skew-primitive between equal grouplikes")
                        changed = True
        state = {}
        for i in range(n):
            for j in range(n):
                if zero[(i, j)]:
                    state[(i, j)] = ZERO
                elif i == j and grouplike[i]:
                    state[(i, j)] = GROUPLIKE
                else:
                    state[(i, j)] = FREE
    undecided = sorted(k for k in pending if state[k] == FREE)
    pat = CoactionPattern(n, state, classes, [fmt_yvec(v) for v in Z.basis()], undecided, log)
    if strict and undecided:
        raise UndecidedStatus(undecided, pat)
    return pat


def nakayama_matrix(mu) -> list:
    """Degree-one matrix m_ij (mu(t_i) = sum_j m_ij t_j) of a GradedMap."""
    return mu.matrix()
