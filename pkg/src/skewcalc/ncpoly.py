"""Free-algebra polynomials and degree-bounded rewriting systems.

Letters are integer ids ordered by generator precedence (letter 0 is the
smallest generator).  Words compare by total degree first, then
lexicographically by letter id.  A :class:`RewriteSystem` is built degree by
degree with the diamond lemma: at degree ``d`` the input relations and all
overlap ambiguities of that degree are reduced by the rules of lower degree
and row-reduced, which yields inter-reduced monic rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import kernels
from .scalars import ParamRing, ParamScalar, complexity, fmt, is_constant


class DegreeBudgetExceeded(Exception):
    """A computation needs words beyond the completed degree."""

    def __init__(self, needed, available):
        super().__init__(f"degree {needed} exceeds the completed degree {available}")
        self.needed = needed
        self.available = available


class CompletionAborted(DegreeBudgetExceeded):
    """Completion produced more new rules than the configured cap."""

    def __init__(self, cap, degree, rules):
        Exception.__init__(self, f"completion added more than {cap} rules (at degree {degree}, {rules} rules so far)")
        self.needed = degree
        self.available = degree - 1
        self.cap = cap


class NonInvertibleLeadingCoefficient(Exception):
    """A leading coefficient is not known to be invertible."""

    def __init__(self, scalar):
        super().__init__(f"leading coefficient {fmt(scalar)} needs a nonzero assumption")
        self.scalar = scalar


class NonHomogeneous(ValueError):
    """A relation mixes multidegrees."""


@dataclass(frozen=True)
class Alphabet:
    """Generators with multidegrees over a scalar ring.

    ``names`` and ``degrees`` are indexed by letter id, i.e. in increasing
    precedence.  ``declared`` keeps the user's declaration order.
    """

    names: tuple
    degrees: tuple
    ring: ParamRing
    declared: tuple = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        if len(self.degrees) != len(self.names):
            raise ValueError("one multidegree per generator")
        ranks = {len(d) for d in self.degrees}
        if len(ranks) > 1:
            raise ValueError("all multidegrees need the same rank")
        if any(sum(d) < 1 for d in self.degrees):
            raise ValueError("generators need positive total degree")
        if not self.declared:
            object.__setattr__(self, "declared", tuple(self.names))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})
        object.__setattr__(self, "_tdeg", tuple(sum(d) for d in self.degrees))

    @classmethod
    def build(cls, ring: ParamRing, declared: Sequence[str], precedence: Sequence[str] | None = None,
              degrees: Mapping[str, tuple] | None = None) -> "Alphabet":
        """Alphabet from declaration order and a precedence list (highest first)."""
        declared = tuple(declared)
        precedence = tuple(precedence) if precedence else tuple(reversed(declared))
        if sorted(precedence) != sorted(declared):
            raise ValueError("precedence must list every generator once")
        names = tuple(reversed(precedence))
        degs = tuple(tuple(degrees[n]) if degrees else (1,) for n in names)
        return cls(names, degs, ring, declared)

    @property
    def rank(self) -> int:
        return len(self.degrees[0])

    @property
    def precedence(self) -> tuple:
        return tuple(reversed(self.names))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def gen(self, name) -> "NcPoly":
        i = name if isinstance(name, int) else self._index[name]
        return NcPoly({(i,): self.ring.one}, self)

    def gens(self) -> list:
        """Generators in declaration order."""
        return [self.gen(n) for n in self.declared]

    def scalar(self, c) -> "NcPoly":
        c = self.ring.coerce(c)
        return NcPoly({(): c} if c else {}, self)

    def word(self, names: Iterable[str]) -> tuple:
        return tuple(self._index[n] for n in names)

    def total_degree(self, w) -> int:
        t = self._tdeg
        return sum(t[i] for i in w)

    def multidegree(self, w) -> tuple:
        r = self.rank
        out = [0] * r
        for i in w:
            for k, e in enumerate(self.degrees[i]):
                out[k] += e
        return tuple(out)

    def key(self, w):
        return (self.total_degree(w), w)

    def fmt_word(self, w) -> str:
        if not w:
            return "1"
        parts = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = self.names[w[i]]
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)

    def words(self, degree: int) -> list:
        """All words of the given total degree, increasing."""
        out: list = []
        tdeg = self._tdeg

        def rec(prefix, left):
            if left == 0:
                out.append(prefix)
                return
            for i in range(len(tdeg)):
                if tdeg[i] <= left:
                    rec(prefix + (i,), left - tdeg[i])

        rec((), degree)
        out.sort(key=self.key)
        return out

    def same(self, other: "Alphabet") -> bool:
        return self.names == other.names and self.degrees == other.degrees and self.ring == other.ring


def _fmt_coef(c) -> tuple:
    """(negative, text) for a coefficient in front of a word; text '' means 1."""
    if is_constant(c):
        v = c.constant_value() if isinstance(c, ParamScalar) else c
        neg = v < 0
        a = -v if neg else v
        return neg, ("" if a == 1 else fmt(a))
    if len(c.num) == 1:
        (_, lc), = c.num.terms()
        return (True, fmt(-c)) if lc < 0 else (False, fmt(c))
    return False, f"({fmt(c)})"


class NcPoly:
    """Element of the free algebra: a map word -> nonzero scalar."""

    __slots__ = ("terms", "alg")

    def __init__(self, terms: Mapping, alg: Alphabet):
        self.terms = {tuple(w): c for w, c in terms.items() if c}
        self.alg = alg

    @classmethod
    def _wrap(cls, terms: dict, alg: Alphabet) -> "NcPoly":
        obj = object.__new__(cls)
        obj.terms = terms
        obj.alg = alg
        return obj

    # ------------------------------------------------------------ arithmetic
    def _coerce(self, o):
        if isinstance(o, NcPoly):
            return o
        try:
            return self.alg.scalar(o)
        except TypeError:
            return None

    def __add__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        zero = self.alg.ring.zero
        t = dict(self.terms)
        for w, c in o.terms.items():
            t[w] = t.get(w, zero) + c
        return NcPoly._wrap({w: c for w, c in t.items() if c}, self.alg)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly._wrap({w: -c for w, c in self.terms.items()}, self.alg)

    def __sub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        if isinstance(o, NcPoly):
            return NcPoly._wrap(kernels.free_mul(self.terms, o.terms, self.alg.ring.zero), self.alg)
        try:
            c = self.alg.ring.coerce(o)
        except TypeError:
            return NotImplemented
        return NcPoly({w: c * d for w, d in self.terms.items()}, self.alg)

    def __rmul__(self, o):
        if isinstance(o, NcPoly):
            return o.__mul__(self)
        try:
            c = self.alg.ring.coerce(o)
        except TypeError:
            return NotImplemented
        return NcPoly({w: c * d for w, d in self.terms.items()}, self.alg)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = self.alg.scalar(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        if self.terms.keys() != o.terms.keys():
            return False
        return all(self.terms[w] == o.terms[w] for w in self.terms)

    def __bool__(self):
        return bool(self.terms)

    __hash__ = None

    # -------------------------------------------------------------- queries
    def words(self) -> list:
        """Support words, decreasing."""
        return sorted(self.terms, key=self.alg.key, reverse=True)

    def leading_word(self):
        if not self.terms:
            return None
        return max(self.terms, key=self.alg.key)

    def leading_coefficient(self):
        return self.terms[self.leading_word()]

    def degree(self) -> int:
        return max((self.alg.total_degree(w) for w in self.terms), default=0)

    def multidegrees(self) -> set:
        return {self.alg.multidegree(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.multidegrees()) <= 1

    def multidegree(self):
        degs = self.multidegrees()
        if len(degs) != 1:
            raise NonHomogeneous(f"{self} is not homogeneous")
        return next(iter(degs))

    def coefficient(self, word) -> object:
        return self.terms.get(tuple(word), self.alg.ring.zero)

    def map_coefficients(self, f) -> "NcPoly":
        return NcPoly({w: f(c) for w, c in self.terms.items()}, self.alg)

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for i, w in enumerate(self.words()):
            neg, coef = _fmt_coef(self.terms[w])
            body = self.alg.fmt_word(w)
            if coef:
                body = coef if not w else f"{coef}*{body}"
            if i == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"NcPoly({self})"


# --------------------------------------------------------------- completion
@dataclass
class Rule:
    lead: tuple
    tail: dict
    degree: int
    provenance: str


class RewriteSystem:
    """Rules ``leading word -> tail`` complete up to ``completed_to``.

    Built by :func:`complete`; :meth:`extend` continues the completion.
    Rules are never removed, so the system only grows with the degree.
    """

    def __init__(self, alg: Alphabet, relations: Sequence[NcPoly], cap: int = 64, strict: bool = False):
        self.alg = alg
        self.relations = [r for r in relations]
        self.cap = cap
        self.strict = strict
        self.rules: dict = {}
        self.order: list = []
        self.completed_to = 0
        self.required_nonzero: list = []
        self.new_rule_count = 0
        self._pending: dict = {}
        ring = alg.ring
        self.reducer = kernels.WordReducer({}, ring.one, ring.zero)
        for r in self.relations:
            if r.alg is not alg and not r.alg.same(alg):
                raise ValueError("relation over a different alphabet")
            if not r.is_homogeneous():
                raise NonHomogeneous(f"relation {r} is not homogeneous")

    # -------------------------------------------------------------- building
    def extend(self, degree: int) -> "RewriteSystem":
        """Complete all ambiguities up to total degree ``degree``."""
        alg = self.alg
        for d in range(self.completed_to + 1, degree + 1):
            rows: list = []
            for k, r in enumerate(self.relations):
                if r.terms and r.degree() == d:
                    rows.append((self.reducer.nf(r.terms), f"relation {k + 1}"))
            for l1, l2, k in sorted(self._pending.pop(d, []), key=lambda t: (alg.key(t[0]), alg.key(t[1]), t[2])):
                s = self._spoly(l1, l2, k)
                if s:
                    rows.append((s, f"overlap {alg.fmt_word(l1)}|{alg.fmt_word(l2)} at {k}"))
            new = self._row_reduce(rows, d)
            if new:
                self.reducer.add_rules({r.lead: r.tail for r in new})
                for r in new:
                    self.rules[r.lead] = r
                    self.order.append(r.lead)
                    if r.provenance.startswith("overlap"):
                        self.new_rule_count += 1
                if self.new_rule_count > self.cap:
                    raise CompletionAborted(self.cap, d, len(self.rules))
                for r in new:
                    self._queue_overlaps(r.lead)
            self.completed_to = d
        return self

    def _queue_overlaps(self, lw):
        alg = self.alg
        for other in list(self.rules):
            pairs = [(lw, other)] if other == lw else [(lw, other), (other, lw)]
            for a, b in pairs:
                for k in range(1, min(len(a), len(b))):
                    if a[len(a) - k:] == b[:k]:
                        w = a + b[k:]
                        self._pending.setdefault(alg.total_degree(w), []).append((a, b, k))

    def _spoly(self, l1, l2, k):
        """Reduced difference of the two rewritings of l1 + l2[k:]."""
        red = self.reducer
        zero = self.alg.ring.zero
        c = l2[k:]
        a = l1[:len(l1) - k]
        left = {}
        for u, d in self.rules[l1].tail.items():
            for w, e in red.word_times_word(u, c).items():
                left[w] = left.get(w, zero) + d * e
        for u, d in self.rules[l2].tail.items():
            for w, e in red.word_times_word(a, u).items():
                left[w] = left.get(w, zero) - d * e
        return {w: x for w, x in left.items() if x}

    def _row_reduce(self, rows, d):
        """Reduced row echelon form with leading words as pivots."""
        alg = self.alg
        ring = alg.ring
        zero = ring.zero
        pivots: dict = {}
        prov: dict = {}
        for vec, why in rows:
            v = dict(vec)
            while True:
                hits = [w for w in v if w in pivots]
                if not hits:
                    break
                for w in hits:
                    c = v.get(w)
                    if not c:
                        continue
                    for u, e in pivots[w].items():
                        v[u] = v.get(u, zero) - c * e
                v = {w: x for w, x in v.items() if x}
            if not v:
                continue
            lead = max(v, key=alg.key)
            lc = v[lead]
            if not is_constant(lc):
                if self.strict and not ring.assumed_nonzero(lc):
                    raise NonInvertibleLeadingCoefficient(lc)
                if not any(lc == x for x in self.required_nonzero):
                    self.required_nonzero.append(lc)
            inv = ring.one / lc
            v = {w: x * inv for w, x in v.items()}
            for w, row in pivots.items():
                c = row.get(lead)
                if c:
                    for u, e in v.items():
                        row[u] = row.get(u, zero) - c * e
                    pivots[w] = {u: x for u, x in row.items() if x}
            pivots[lead] = v
            prov[lead] = why
        out = []
        for lead in sorted(pivots, key=alg.key):
            tail = {w: -x for w, x in pivots[lead].items() if w != lead}
            out.append(Rule(lead, tail, d, prov[lead]))
        return out

    # -------------------------------------------------------------- queries
    def _check(self, degree):
        if degree > self.completed_to:
            raise DegreeBudgetExceeded(degree, self.completed_to)

    def nf_terms(self, terms: dict) -> dict:
        if terms:
            self._check(max(self.alg.total_degree(w) for w in terms))
        return self.reducer.nf(terms)

    def normal_form(self, f: NcPoly) -> NcPoly:
        """Normal form of ``f``; DegreeBudgetExceeded past ``completed_to``."""
        return NcPoly._wrap(self.nf_terms(f.terms), self.alg)

    def multiply(self, f: NcPoly, g: NcPoly) -> NcPoly:
        """Normal form of ``f * g`` for ``f`` and ``g`` in normal form."""
        if f.terms and g.terms:
            self._check(f.degree() + g.degree())
        return NcPoly._wrap(self.reducer.mul(f.terms, g.terms), self.alg)

    def substitute(self, f: NcPoly, images: Sequence[NcPoly]) -> NcPoly:
        """Normal form of ``f`` with letter i replaced by ``images[i]`` (normal)."""
        if f.terms:
            deg = max(sum(images[i].degree() for i in w) for w in f.terms)
            self._check(deg)
        ring = self.alg.ring
        return NcPoly._wrap(
            kernels.substitute(f.terms, [g.terms for g in images], self.reducer, ring.one, ring.zero),
            self.alg,
        )

    def is_normal_word(self, w) -> bool:
        return self.reducer.is_normal(tuple(w))

    def normal_words(self, degree: int, multidegree: tuple | None = None) -> list:
        """Irreducible words of a total degree (optionally a multidegree), increasing."""
        self._check(degree)
        alg = self.alg
        tdeg = alg._tdeg
        red = self.reducer
        out: list = []

        def rec(prefix, left):
            if left == 0:
                out.append(prefix)
                return
            for i in range(len(tdeg)):
                if tdeg[i] <= left:
                    w = prefix + (i,)
                    if not red.match_suffix(w):
                        rec(w, left - tdeg[i])

        rec((), degree)
        if multidegree is not None:
            out = [w for w in out if alg.multidegree(w) == tuple(multidegree)]
        out.sort(key=alg.key)
        return out

    def hilbert_coeffs(self, degree: int) -> list:
        """Number of normal words in each total degree 0..degree."""
        self._check(degree)
        return [len(self.normal_words(d)) for d in range(degree + 1)]

    def rule_list(self, degree: int | None = None) -> list:
        """Rules as (lead, tail NcPoly) pairs, increasing; optionally up to a degree."""
        out = []
        for lw in sorted(self.rules, key=self.alg.key):
            r = self.rules[lw]
            if degree is None or r.degree <= degree:
                out.append((lw, NcPoly(r.tail, self.alg)))
        return out

    def same_rules(self, other: "RewriteSystem", degree: int) -> bool:
        """True if both systems have identical rules up to ``degree``."""
        a, b = self.rule_list(degree), other.rule_list(degree)
        if [lw for lw, _ in a] != [lw for lw, _ in b]:
            return False
        return all(t1 == t2 for (_, t1), (_, t2) in zip(a, b))

    def fmt_rules(self, degree: int | None = None) -> list:
        return [f"{self.alg.fmt_word(lw)} -> {t}" for lw, t in self.rule_list(degree)]


def complete(relations: Sequence[NcPoly], degree: int, alg: Alphabet | None = None, cap: int = 64,
             strict: bool = False) -> RewriteSystem:
    """Complete homogeneous relations up to total degree ``degree``."""
    if alg is None:
        if not relations:
            raise ValueError("need an alphabet when there are no relations")
        alg = relations[0].alg
    return RewriteSystem(alg, relations, cap=cap, strict=strict).extend(degree)
