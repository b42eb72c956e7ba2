"""Exact parametric scalars.

A :class:`ParamRing` is the field of rational functions over QQ in a list of
named parameters, optionally modulo a prime constraint ideal.  Elements of a
ring with parameters are :class:`ParamScalar` values.  A ring without
parameters hands out plain ``gmpy2.mpq`` rationals, which keeps the common
rational case fast; every helper on the ring accepts both kinds.

Polynomial arithmetic and the commutative Groebner basis of the constraint
ideal come from sympy's low-level ``PolyRing``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq
from sympy.polys.domains import QQ
from sympy.polys.groebnertools import groebner
from sympy.polys.orderings import monomial_key
from sympy.polys.rings import PolyRing


class ScalarError(ArithmeticError):
    """Base class for scalar-field errors."""


class ZeroDenominator(ScalarError, ZeroDivisionError):
    """Raised when a denominator vanishes modulo the constraint ideal."""


class MixedRings(ScalarError, TypeError):
    """Raised when scalars from different parameter rings are combined."""


class ZeroScalar(ScalarError, ValueError):
    """Raised when an operation needs a nonzero scalar and got zero."""


_MPQ = type(mpq(0))
_ORDERS = ("grlex", "lex", "grevlex")


def _as_mpq(x) -> mpq:
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x))
    if type(x).__name__ == "mpz":
        return mpq(x)
    raise TypeError(f"cannot read {x!r} as a rational number")


@dataclass(frozen=True)
class Assumption:
    """A hypothesis about parameters.

    ``kind`` is one of ``nonzero``, ``not-root-of-unity``, ``not-equal-one`` or
    ``multiplicatively-independent``.  For the first three ``subject`` is a
    scalar; for the last it is a tuple of parameter names.
    """

    kind: str
    subject: object

    KINDS = ("nonzero", "not-root-of-unity", "not-equal-one", "multiplicatively-independent")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown assumption kind {self.kind!r}")
        if self.kind == "multiplicatively-independent":
            if not isinstance(self.subject, tuple) or not self.subject:
                raise ValueError("independence needs a nonempty tuple of parameter names")
        elif is_zero(self.subject):
            raise ZeroScalar(f"cannot assume {self.kind} of the zero scalar")

    def describe(self, ring: "ParamRing" | None = None) -> str:
        if self.kind == "multiplicatively-independent":
            return "{" + ",".join(self.subject) + "} multiplicatively independent"
        s = fmt(self.subject)
        return {
            "nonzero": f"{s} != 0",
            "not-root-of-unity": f"{s} not a root of unity",
            "not-equal-one": f"{s} != 1",
        }[self.kind]


@dataclass(frozen=True)
class RootStatus:
    """Outcome of :func:`root_of_unity_status`: ``yes`` (with order), ``no`` or ``unknown``."""

    kind: str
    order: int | None = None

    def __str__(self):
        return f"Yes({self.order})" if self.kind == "yes" else self.kind.capitalize()


class ParamRing:
    """Rational function field in named parameters, optionally modulo an ideal.

    ``precedence`` fixes the variable order used by the monomial order of the
    constraint basis; it defaults to the declaration order.  ``order`` is one
    of ``grlex`` (default), ``lex`` or ``grevlex``.  Constraints may be sympy
    polynomials of the internal ring or strings in the parameter names.
    """

    def __init__(
        self,
        params: Sequence[str] = (),
        constraints: Iterable = (),
        order: str = "grlex",
        precedence: Sequence[str] | None = None,
        assumptions: Iterable[Assumption] = (),
    ):
        params = tuple(params)
        if len(set(params)) != len(params):
            raise ValueError(f"duplicate parameter names in {params}")
        if order not in _ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        precedence = tuple(precedence) if precedence is not None else params
        if sorted(precedence) != sorted(params):
            raise ValueError("precedence must list exactly the parameters")
        self.params = params
        self.precedence = precedence
        self.order = order
        self._poly = PolyRing(precedence, QQ, order) if params else None
        # position of each declared parameter inside the internal ring
        self._slot = {name: precedence.index(name) for name in params}
        gens = []
        for c in constraints:
            poly = self._to_poly(c)
            if not poly:
                raise ValueError("the zero polynomial is not a constraint")
            gens.append(poly)
        self._basis: list = []
        if gens:
            self._basis = [g.monic() for g in groebner(gens, self._poly)]
            if any(g.is_ground for g in self._basis):
                raise ValueError("constraints generate the unit ideal")
        self.constraints = tuple(gens)
        self.assumptions: tuple[Assumption, ...] = ()
        self._key = (params, precedence, order, tuple(str(g) for g in self._basis))
        self._hash = hash(self._key)
        self.zero = self.coerce(0)
        self.one = self.coerce(1)
        for a in assumptions:
            self.assume(a.kind, a.subject)

    # ------------------------------------------------------------------ basics
    def __eq__(self, other):
        return isinstance(other, ParamRing) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        cons = ", ".join(self.format_poly(g) + " = 0" for g in self._basis)
        return f"ParamRing({', '.join(self.params) or 'QQ'}{'; ' + cons if cons else ''})"

    @property
    def is_constrained(self) -> bool:
        return bool(self._basis)

    @property
    def basis(self) -> list:
        """Reduced Groebner basis of the constraint ideal (monic)."""
        return list(self._basis)

    @property
    def poly_ring(self):
        return self._poly

    def _to_poly(self, c):
        if self._poly is None:
            raise ValueError("a ring without parameters takes no constraints")
        if isinstance(c, str):
            from sympy import Symbol
            from sympy.parsing.sympy_parser import parse_expr

            local = {n: Symbol(n) for n in self.params}
            return self._poly.from_expr(parse_expr(c.replace("^", "**"), local_dict=local))
        if isinstance(c, ParamScalar):
            if c.den != self._poly.one:
                raise ValueError("constraint must be a polynomial")
            return c.num
        return self._poly(c)

    def reduce_poly(self, f):
        """Normal form of a polynomial modulo the constraint basis."""
        return f.rem(self._basis) if self._basis else f

    # -------------------------------------------------------------- elements
    def coerce(self, x):
        """Bring ``x`` (int, Fraction, mpq, str rational or scalar) into the ring."""
        if self._poly is None:
            if isinstance(x, ParamScalar):
                raise MixedRings("parametric scalar in a parameter-free ring")
            return _as_mpq(x)
        if isinstance(x, ParamScalar):
            if x.ring is not self and x.ring != self:
                raise MixedRings(f"{x.ring!r} vs {self!r}")
            return x
        return ParamScalar._raw(self._poly(_as_mpq(x)), self._poly.one, self)

    __call__ = coerce

    def param(self, name: str):
        """The parameter ``name`` as a scalar."""
        if name not in self._slot:
            raise KeyError(name)
        g = self._poly.gens[self._slot[name]]
        return ParamScalar._raw(self.reduce_poly(g), self._poly.one, self)

    def gens(self):
        return [self.param(n) for n in self.params]

    def fraction(self, num, den=None):
        """Scalar num/den from internal polynomials (den defaults to 1)."""
        R = self._poly
        num = R(num)
        den = R.one if den is None else R(den)
        return ParamScalar._make(num, den, self)

    def from_poly_dict(self, terms: Mapping[tuple, object]):
        """Scalar from a ``{exponent tuple in declaration order: coefficient}`` map."""
        if self._poly is None:
            return _as_mpq(terms.get((), 0))
        n = len(self.params)
        out = {}
        for exps, c in terms.items():
            exps = tuple(exps) + (0,) * (n - len(exps))
            mono = [0] * n
            for name, e in zip(self.params, exps):
                mono[self._slot[name]] = e
            out[tuple(mono)] = _as_mpq(c)
        return self.fraction(self._poly.from_dict(out))

    # -------------------------------------------------------------- derived
    def extend(self, names: Sequence[str], constraints: Iterable[str] = (), order: str | None = None,
               precedence: Sequence[str] | None = None) -> "ParamRing":
        """A larger ring with extra parameters (and constraints) adjoined.

        Existing assumptions are carried over.  Use :meth:`embed` to move
        scalars across.
        """
        params = self.params + tuple(n for n in names if n not in self.params)
        if precedence is None:
            precedence = self.precedence + tuple(n for n in names if n not in self.params)
        cons = [self.format_poly(g) for g in self._basis] + list(constraints)
        ring = ParamRing(params, cons, order or self.order, precedence)
        for a in self.assumptions:
            if a.kind == "multiplicatively-independent":
                ring.assume(a.kind, a.subject)
            else:
                ring.assume(a.kind, ring.embed(a.subject))
        return ring

    def embed(self, x):
        """Move a scalar of a sub-ring (by parameter names) into this ring."""
        if isinstance(x, ParamScalar):
            if x.ring == self:
                return x
            src = x.ring
            mapping = {n: self.param(n) for n in src.params}
            return src.specialize(x, mapping, self)
        return self.coerce(x)

    def specialize(self, x, values: Mapping[str, object], target: "ParamRing") -> object:
        """Substitute parameters of ``x`` by scalars of ``target``.

        Parameters missing from ``values`` are mapped to the same-named
        parameter of ``target``.  Raises ZeroDenominator if the image of the
        denominator vanishes.
        """
        if not isinstance(x, ParamScalar):
            return target.coerce(x)
        images = []
        for name in self.precedence:
            v = values.get(name)
            images.append(target.param(name) if v is None else target.coerce(v))
        num = _eval_poly(x.num, images, target)
        den = _eval_poly(x.den, images, target)
        if is_zero(den):
            raise ZeroDenominator(f"denominator {fmt(x.den_scalar())} vanishes after substitution")
        return num / den

    # ---------------------------------------------------------- assumptions
    def assume(self, kind: str, subject) -> Assumption:
        """Register an assumption; returns it.  Subjects may be names or scalars."""
        if kind == "multiplicatively-independent":
            names = tuple(subject)
            for n in names:
                if n not in self.params:
                    raise KeyError(n)
            a = Assumption(kind, names)
        else:
            if isinstance(subject, str):
                if subject in self.params:
                    subject = self.param(subject)
                else:
                    from .parser import parse_scalar

                    subject = parse_scalar(self, subject)
            a = Assumption(kind, self.coerce(subject))
        if a not in self.assumptions:
            self.assumptions = self.assumptions + (a,)
        return a

    def assumed_nonzero(self, x) -> bool:
        """True if ``x`` is covered by a registry entry implying it is nonzero."""
        if is_zero(x):
            return False
        if not isinstance(x, ParamScalar):
            return True
        mono = x.laurent()
        if mono is not None and all(self._param_nonzero(n) for n in mono[1]):
            return True
        for a in self.assumptions:
            if a.kind in ("nonzero", "not-root-of-unity") and eq(a.subject, x):
                return True
            if a.kind == "not-equal-one" and eq(a.subject - 1, x):
                return True
        return False

    def _param_nonzero(self, name: str) -> bool:
        p = self.param(name)
        for a in self.assumptions:
            if a.kind == "multiplicatively-independent" and name in a.subject:
                return True
            if a.kind in ("nonzero", "not-root-of-unity") and eq(a.subject, p):
                return True
        return False

    # --------------------------------------------------------------- output
    def format_poly(self, f) -> str:
        """Print an internal polynomial with ``^`` powers, declaration order."""
        if not f:
            return "0"
        n = len(self.params)
        items = []
        for mono, c in f.terms():
            decl = tuple(mono[self._slot[name]] for name in self.params)
            items.append((decl, c))
        items.sort(key=lambda t: monomial_key("grlex")(t[0]), reverse=True)
        parts = []
        for decl, c in items:
            vars_ = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.params, decl) if e
            )
            parts.append((c, vars_))
        out = ""
        for i, (c, vars_) in enumerate(parts):
            neg = c < 0
            a = -c if neg else c
            if vars_:
                body = vars_ if a == 1 else f"{_fmt_q(a)}*{vars_}"
            else:
                body = _fmt_q(a)
            if i == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out

    def to_sympy(self, x):
        """Convert a scalar to a sympy expression (used by tests as an oracle bridge)."""
        import sympy

        if not isinstance(x, ParamScalar):
            return sympy.Rational(int(x.numerator), int(x.denominator))
        syms = {n: sympy.Symbol(n) for n in self.params}
        def conv(f):
            expr = sympy.Integer(0)
            for mono, c in f.terms():
                t = sympy.Rational(int(c.numerator), int(c.denominator))
                for name, e in zip(self.precedence, mono):
                    t *= syms[name] ** e
                expr += t
            return expr
        return conv(x.num) / conv(x.den)


def _fmt_q(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _eval_poly(f, images, target):
    total = target.zero
    cache: dict = {}
    for mono, c in f.terms():
        t = target.coerce(c)
        for i, e in enumerate(mono):
            if e:
                key = (i, e)
                if key not in cache:
                    cache[key] = images[i] ** e
                t = t * cache[key]
        total = total + t
    return total


def _mono_gcd(mono_poly, other):
    """gcd of a single-term polynomial with another polynomial (over QQ)."""
    (m, _), = mono_poly.terms()
    exps = list(m)
    for mono, _c in other.terms():
        exps = [min(a, b) for a, b in zip(exps, mono)]
        if not any(exps):
            break
    R = mono_poly.ring
    return R.from_dict({tuple(exps): QQ.one})


def _gcd(a, b):
    if a.is_ground or b.is_ground:
        return a.ring.one
    if len(b) == 1:
        return _mono_gcd(b, a)
    if len(a) == 1:
        return _mono_gcd(a, b)
    return a.gcd(b)


class ParamScalar:
    """Element num/den of a :class:`ParamRing` with parameters.

    Without constraints the fraction is kept in lowest terms with a monic
    denominator, so equal scalars have equal representations.  With
    constraints both parts are reduced modulo the ideal and equality uses
    cross-multiplication.
    """

    __slots__ = ("num", "den", "ring")

    def __init__(self, num, den, ring: ParamRing):
        s = ParamScalar._make(ring.poly_ring(num), ring.poly_ring(den), ring)
        self.num, self.den, self.ring = s.num, s.den, s.ring

    @staticmethod
    def _raw(num, den, ring):
        obj = object.__new__(ParamScalar)
        obj.num = num
        obj.den = den
        obj.ring = ring
        return obj

    @staticmethod
    def _make(num, den, ring):
        """Canonicalize num/den (cancel, reduce modulo the ideal, monic den)."""
        if ring._basis:
            den = den.rem(ring._basis)
            if not den:
                raise ZeroDenominator("denominator vanishes modulo the constraint ideal")
            num = num.rem(ring._basis)
        elif not den:
            raise ZeroDenominator("zero denominator")
        if not num:
            return ParamScalar._raw(num, ring._poly.one, ring)
        if not den.is_ground:
            g = _gcd(num, den)
            if not g.is_ground:
                num = num.exquo(g)
                den = den.exquo(g)
                if ring._basis:
                    num = num.rem(ring._basis)
                    den = den.rem(ring._basis)
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        return ParamScalar._raw(num, den, ring)

    # ------------------------------------------------------------ arithmetic
    def _other(self, o):
        if isinstance(o, ParamScalar):
            if o.ring is not self.ring and o.ring != self.ring:
                raise MixedRings(f"{o.ring!r} vs {self.ring!r}")
            return o
        try:
            c = _as_mpq(o)
        except TypeError:
            return None
        R = self.ring._poly
        return ParamScalar._raw(R(c), R.one, self.ring)

    def __add__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        ring = self.ring
        if ring._basis:
            if b == d:
                return ParamScalar._make(a + c, b, ring)
            return ParamScalar._make(a * d + c * b, b * d, ring)
        if not a:
            return o
        if not c:
            return self
        one = b.ring.one
        if b == d:
            n = a + c
            if b == one or not n:
                return ParamScalar._raw(n, one, ring)
            return ParamScalar._make(n, b, ring)
        if d == one:
            return ParamScalar._raw(a + c * b, b, ring)
        if b == one:
            return ParamScalar._raw(a * d + c, d, ring)
        g = _gcd(b, d)
        if g.is_ground:
            return ParamScalar._raw(a * d + c * b, b * d, ring)
        bg, dg = b.exquo(g), d.exquo(g)
        return ParamScalar._make(a * dg + c * bg, b * dg, ring)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar._raw(-self.num, self.den, self.ring)

    def __pos__(self):
        return self

    def __sub__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        ring = self.ring
        if not a or not c:
            return ring.zero
        if ring._basis:
            if b.is_ground and d.is_ground:
                return ParamScalar._raw((a * c).rem(ring._basis), b * d, ring)
            return ParamScalar._make(a * c, b * d, ring)
        one = b.ring.one
        if b == one and d == one:
            return ParamScalar._raw(a * c, one, ring)
        g1 = _gcd(a, d) if d != one else one
        g2 = _gcd(c, b) if b != one else one
        if g1 != one:
            a, d = a.exquo(g1), d.exquo(g1)
        if g2 != one:
            c, b = c.exquo(g2), b.exquo(g2)
        num, den = a * c, b * d
        lc = den.LC
        if lc != 1:
            num, den = num.quo_ground(lc), den.quo_ground(lc)
        return ParamScalar._raw(num, den, ring)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDenominator("inverse of zero")
        return ParamScalar._make(self.den, self.num, self.ring)

    def __truediv__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self.ring.one
        ring = self.ring
        if not ring._basis:
            # powers of a reduced fraction stay reduced
            den = self.den ** e
            return ParamScalar._raw(self.num ** e, den, ring)
        result, base = ring.one, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # ------------------------------------------------------------ comparison
    def __bool__(self):
        return bool(self.num)

    def __eq__(self, o):
        o = self._other(o)
        if o is None:
            return NotImplemented
        if self.ring._basis:
            return not (self.num * o.den - o.num * self.den).rem(self.ring._basis)
        return self.num == o.num and self.den == o.den

    def __ne__(self, o):
        r = self.__eq__(o)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.ring._basis:
            return self.ring._hash
        if self.den.is_ground and self.num.is_ground:
            return hash(mpq(self.num.LC))
        return hash((self.num, self.den))

    # -------------------------------------------------------------- queries
    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def constant_value(self):
        """The rational value if constant, else None."""
        if self.is_constant():
            return mpq(self.num.LC if self.num else 0) / mpq(self.den.LC)
        return None

    def den_scalar(self):
        return ParamScalar._raw(self.den, self.ring._poly.one, self.ring)

    def laurent(self):
        """(c, exponent dict) if this is c times a Laurent monomial, else None."""
        if len(self.num) != 1 or len(self.den) != 1:
            return None
        (mn, cn), = self.num.terms()
        (md, cd), = self.den.terms()
        exps = {}
        for name in self.ring.params:
            i = self.ring._slot[name]
            e = mn[i] - md[i]
            if e:
                exps[name] = e
        return mpq(cn) / mpq(cd), exps

    def __repr__(self):
        return f"ParamScalar({fmt(self)})"

    def __str__(self):
        return fmt(self)


# ---------------------------------------------------------------- helpers
def is_zero(x) -> bool:
    return not x


def ring_of(x) -> ParamRing | None:
    return x.ring if isinstance(x, ParamScalar) else None


def normalize(x, ring: ParamRing | None = None):
    """Canonical representative of ``x`` (idempotent)."""
    if isinstance(x, ParamScalar):
        if ring is not None and x.ring != ring:
            raise MixedRings(f"{x.ring!r} vs {ring!r}")
        return ParamScalar._make(x.num, x.den, x.ring)
    if ring is not None:
        return ring.coerce(x)
    return _as_mpq(x)


def eq(x, y) -> bool:
    """Exact equality; MixedRings if the scalars live in different rings."""
    if isinstance(x, ParamScalar) and isinstance(y, ParamScalar) and x.ring != y.ring:
        raise MixedRings(f"{x.ring!r} vs {y.ring!r}")
    return x == y


def is_one(x) -> bool:
    return x == 1


def is_constant(x) -> bool:
    return not isinstance(x, ParamScalar) or x.is_constant()


def fmt(x) -> str:
    """Print a scalar as a reduced fraction, parameters in declaration order."""
    if not isinstance(x, ParamScalar):
        return _fmt_q(x)
    ring = x.ring
    num = ring.format_poly(x.num)
    if x.den == ring._poly.one:
        return num
    den = ring.format_poly(x.den)
    if len(x.num) > 1:
        num = f"({num})"
    if len(x.den) > 1 or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"


def complexity(x) -> int:
    """Rough size measure, used to pick simple pivots."""
    if not isinstance(x, ParamScalar):
        return 0 if x == 1 or x == -1 else 1
    if x.is_constant():
        return 0 if x.num.LC in (1, -1) else 1
    return 2 + len(x.num) + len(x.den) + x.num.degree() + x.den.degree()


def root_of_unity_status(x, registry: Iterable[Assumption] | None = None) -> RootStatus:
    """Decide whether ``x`` is a root of unity, using only sound arguments.

    Rational constants: ``Yes(1)`` for 1, ``Yes(2)`` for -1 and ``No`` for any
    other rational (no rational other than +-1 has finite multiplicative
    order).  A scalar of the form +-1 times a Laurent monomial is ``No`` when
    all parameters carrying a nonzero exponent belong to one assumed
    multiplicatively independent set, or when there is exactly one such
    parameter and it is assumed not to be a root of unity.  Assumptions whose
    subject is itself a Laurent monomial are used through proportional
    exponent vectors.  Everything else is ``Unknown``.
    """
    if is_zero(x):
        raise ZeroScalar("root-of-unity status of zero")
    ring = ring_of(x)
    if registry is None:
        registry = ring.assumptions if ring is not None else ()
    registry = tuple(registry)
    if is_constant(x):
        c = x.constant_value() if ring is not None else mpq(x)
        if c == 1:
            return RootStatus("yes", 1)
        if c == -1:
            return RootStatus("yes", 2)
        return RootStatus("no")
    lau = x.laurent()
    if lau is None:
        for a in registry:
            if a.kind == "not-root-of-unity" and _power_related(x, a.subject):
                return RootStatus("no")
        return RootStatus("unknown")
    c, exps = lau
    if c not in (1, -1):
        return RootStatus("unknown")
    support = set(exps)
    for a in registry:
        if a.kind == "multiplicatively-independent" and support <= set(a.subject):
            return RootStatus("no")
        if a.kind == "not-root-of-unity":
            sub = a.subject
            if isinstance(sub, ParamScalar):
                slau = sub.laurent()
                if slau is not None and _proportional(exps, slau[1]):
                    return RootStatus("no")
    return RootStatus("unknown")


def _proportional(e1: dict, e2: dict) -> bool:
    """True if e1 = k*e2 for a nonzero rational k (both nonzero vectors)."""
    if not e1 or not e2 or set(e1) != set(e2):
        return False
    name = next(iter(e2))
    k = Fraction(e1[name], e2[name])
    return all(Fraction(e1[n]) == k * e2[n] for n in e2)


def _power_related(x, s) -> bool:
    """x equals s**k for some small nonzero integer k."""
    if not isinstance(s, ParamScalar) or s.ring != ring_of(x):
        return False
    for k in (1, -1, 2, -2, 3, -3):
        if eq(x, s ** k):
            return True
    return False


def scalar_sum(items, ring: ParamRing):
    return reduce(lambda a, b: a + b, items, ring.zero)
