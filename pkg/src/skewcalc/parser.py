"""Infix expressions and the presentation file format.

Expressions use ``+ - * /``, integer powers ``^`` and parentheses over
generator names, parameter names and rational numbers.  Products must be
written with an explicit ``*``; division and negative powers are allowed
only for scalars.

A presentation file is UTF-8 text split into bracketed sections::

    [params]
    p, q
    assume p nonzero
    assume p not-root-of-unity
    assume {p, q} independent
    constraint 2*p^4 - p^2*q + q^2 = 0
    order lex q > p

    [grading]
    rank 1

    [generators]
    t1 : 1
    t2 : 1

    [precedence]
    t2 > t1

    [relations]
    t2*t1 - p*t1*t2

    [twists]
    convention left
    sigma t1 -> t1, t2 -> p*t2
    index 2
    hdet p

    [nakayama]
    t1 -> p*t1, t2 -> 1/p*t2

    [budget]
    degree 8
    cap 64

Lines starting with ``#`` are comments.  Only ``[generators]`` is required.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .ncpoly import Alphabet, NcPoly
from .scalars import Assumption, ParamRing, ParamScalar, fmt, is_constant


class ParseError(ValueError):
    """Base class for parse failures; carries a 1-based line and column."""

    def __init__(self, message, line=1, col=1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class SyntaxError(ParseError):  # noqa: A001 - the error name is part of the interface
    """Malformed input; ``expected`` says what the parser wanted."""

    def __init__(self, line, col, expected, found=""):
        msg = f"expected {expected}" + (f", found {found!r}" if found else "")
        super().__init__(msg, line, col)
        self.expected = expected
        self.found = found


class UnknownSymbol(ParseError):
    def __init__(self, name, line=1, col=1):
        super().__init__(f"unknown symbol {name!r}", line, col)
        self.name = name


class NonHomogeneousRelation(ParseError):
    def __init__(self, text, line=1, col=1):
        super().__init__(f"relation is not homogeneous: {text}", line, col)
        self.text = text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|->|[-+*/^()=,:>{}]))")


@dataclass
class Token:
    kind: str  # num, name, op, end
    text: str
    col: int


def tokenize(text: str, line: int = 1, col0: int = 1) -> list:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SyntaxError(line, col0 + pos, "a number, name or operator", text[pos])
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(Token("num", m.group(1), col0 + start))
        elif m.group(2):
            out.append(Token("name", m.group(2), col0 + start))
        else:
            op = m.group(3)
            out.append(Token("op", "^" if op == "**" else op, col0 + start))
        pos = m.end()
    out.append(Token("end", "", col0 + n))
    return out


class _Val:
    """Parser value: either a scalar or a free-algebra polynomial."""

    __slots__ = ("poly", "scalar")

    def __init__(self, poly=None, scalar=None):
        self.poly = poly
        self.scalar = scalar


class ExprParser:
    """Recursive-descent parser producing NcPoly values over an alphabet."""

    def __init__(self, alg: Alphabet, text: str, line: int = 1, col0: int = 1,
                 extra: dict | None = None):
        self.alg = alg
        self.ring = alg.ring
        self.toks = tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.extra = extra or {}

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _err(self, expected):
        t = self.tok
        raise SyntaxError(self.line, t.col, expected, t.text if t.kind != "end" else "end of input")

    def _eat(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self, allow_eq: bool = False) -> NcPoly:
        lhs = self.expr()
        if allow_eq and self._eat("="):
            rhs = self.expr()
            val = self._sub(lhs, rhs)
        else:
            val = lhs
        if self.tok.kind != "end":
            self._err("an operator or end of input")
        return self._poly(val)

    def _poly(self, v: _Val) -> NcPoly:
        if v.poly is not None:
            return v.poly
        return self.alg.scalar(v.scalar)

    # grammar ---------------------------------------------------------------
    def expr(self) -> _Val:
        v = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            w = self.term()
            v = self._add(v, w) if op == "+" else self._sub(v, w)
        return v

    def term(self) -> _Val:
        v = self.unary()
        while True:
            if self._eat("*"):
                v = self._mul(v, self.unary())
            elif self.tok.kind == "op" and self.tok.text == "/":
                col = self.tok.col
                self.i += 1
                w = self.unary()
                if w.poly is not None:
                    raise SyntaxError(self.line, col, "a scalar divisor")
                if not w.scalar:
                    raise ParseError("division by zero", self.line, col)
                v = self._mul(v, _Val(scalar=self.ring.one / w.scalar))
            elif self.tok.kind in ("name", "num") or (self.tok.kind == "op" and self.tok.text == "("):
                self._err("'*' between factors")
            else:
                return v

    def unary(self) -> _Val:
        if self._eat("-"):
            return self._neg(self.unary())
        if self._eat("+"):
            return self.unary()
        return self.power()

    def power(self) -> _Val:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            col = self.tok.col
            self.i += 1
            sign = 1
            if self._eat("-"):
                sign = -1
            elif self._eat("+"):
                pass
            if self.tok.kind != "num":
                self._err("an integer exponent")
            e = sign * int(self.tok.text)
            self.i += 1
            if base.poly is not None:
                if e < 0:
                    raise SyntaxError(self.line, col, "a nonnegative exponent on a generator expression")
                return _Val(poly=base.poly ** e)
            if e < 0 and not base.scalar:
                raise ParseError("zero to a negative power", self.line, col)
            return _Val(scalar=base.scalar ** e)
        return base

    def atom(self) -> _Val:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return _Val(scalar=self.ring.coerce(int(t.text)))
        if t.kind == "name":
            self.i += 1
            if t.text in self.extra:
                v = self.extra[t.text]
                return _Val(poly=v) if isinstance(v, NcPoly) else _Val(scalar=v)
            if t.text in self.alg._index:
                return _Val(poly=self.alg.gen(t.text))
            if t.text in self.ring.params:
                return _Val(scalar=self.ring.param(t.text))
            raise UnknownSymbol(t.text, self.line, t.col)
        if self._eat("("):
            v = self.expr()
            if not self._eat(")"):
                self._err("')'")
            return v
        self._err("a number, name or '('")

    # value arithmetic ------------------------------------------------------
    def _add(self, a, b):
        if a.poly is None and b.poly is None:
            return _Val(scalar=a.scalar + b.scalar)
        return _Val(poly=self._poly(a) + self._poly(b))

    def _neg(self, a):
        return _Val(scalar=-a.scalar) if a.poly is None else _Val(poly=-a.poly)

    def _sub(self, a, b):
        return self._add(a, self._neg(b))

    def _mul(self, a, b):
        if a.poly is None and b.poly is None:
            return _Val(scalar=a.scalar * b.scalar)
        if a.poly is None:
            return _Val(poly=b.poly * a.scalar)
        if b.poly is None:
            return _Val(poly=a.poly * b.scalar)
        return _Val(poly=a.poly * b.poly)


def parse_expr(alg: Alphabet, text: str, line: int = 1, col0: int = 1, extra: dict | None = None) -> NcPoly:
    """Parse an expression over the generators and parameters of ``alg``."""
    return ExprParser(alg, text, line, col0, extra).parse(allow_eq=False)


def parse_relation(alg: Alphabet, text: str, line: int = 1, col0: int = 1) -> NcPoly:
    """Parse ``lhs = rhs`` (or a bare expression meaning ``= 0``) and check homogeneity."""
    f = ExprParser(alg, text, line, col0).parse(allow_eq=True)
    if not f.is_homogeneous():
        raise NonHomogeneousRelation(text.strip(), line, col0)
    return f


def parse_scalar(ring: ParamRing, text: str, line: int = 1, col0: int = 1):
    """Parse a scalar expression in the parameters of ``ring``."""
    f = ExprParser(_empty_alphabet(ring), text, line, col0).parse()
    if not f.terms:
        return ring.zero
    return f.terms[()]


def _empty_alphabet(ring):
    # a one-letter alphabet with an unreachable name, used for scalar parsing
    return Alphabet(("\x00",), ((1,),), ring)


def parse_images(alg: Alphabet, text: str, line: int = 1, col0: int = 1, target: Alphabet | None = None) -> dict:
    """Parse ``a -> expr, b -> expr`` into {generator name: NcPoly over target}."""
    target = target or alg
    out: dict = {}
    for piece, start in _split_top(text, ","):
        if "->" not in piece:
            raise SyntaxError(line, col0 + start, "'name -> expression'", piece.strip())
        name, rhs = piece.split("->", 1)
        name = name.strip()
        if name not in alg._index:
            raise UnknownSymbol(name, line, col0 + start)
        out[name] = parse_expr(target, rhs, line, col0 + start + piece.index("->") + 2)
    return out


def _split_top(text: str, sep: str):
    """Split on ``sep`` outside parentheses, yielding (piece, start offset)."""
    depth, start = 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            yield text[start:i], start
            start = i + 1
    yield text[start:], start


# ---------------------------------------------------------- presentation file
@dataclass
class TwistSpec:
    """Twist declaration: one automorphism per grading coordinate."""

    convention: str = "left"
    sigmas: list = field(default_factory=list)  # list of {name: NcPoly}
    index: tuple | None = None
    hdet: list | None = None


@dataclass
class PresentationFile:
    """Abstract content of a presentation file."""

    params: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)  # (kind, subject text)
    constraints: list = field(default_factory=list)  # polynomial text, '= 0' implied
    order: str = "grlex"
    param_precedence: list | None = None
    rank: int = 1
    generators: list = field(default_factory=list)  # (name, multidegree)
    precedence: list | None = None
    relations: list = field(default_factory=list)  # NcPoly
    twist: TwistSpec | None = None
    nakayama: dict | None = None
    budget: int | None = None
    cap: int | None = None
    label: str = "custom"
    ring: ParamRing | None = None
    alphabet: Alphabet | None = None

    def same(self, other: "PresentationFile") -> bool:
        """Equality of the abstract form (used by the round-trip property)."""
        if (self.params, self.order, self.rank, self.generators, self.budget, self.cap) != (
            other.params, other.order, other.rank, other.generators, other.budget, other.cap
        ):
            return False
        if self.alphabet.precedence != other.alphabet.precedence:
            return False
        if sorted(self.assumptions) != sorted(other.assumptions):
            return False
        if [str(g) for g in self.ring.basis] != [str(g) for g in other.ring.basis]:
            return False
        if len(self.relations) != len(other.relations):
            return False
        if any(str(a) != str(b) for a, b in zip(self.relations, other.relations)):
            return False
        if (self.twist is None) != (other.twist is None):
            return False
        if self.twist is not None:
            a, b = self.twist, other.twist
            if (a.convention, a.index) != (b.convention, b.index) or len(a.sigmas) != len(b.sigmas):
                return False
            for s1, s2 in zip(a.sigmas, b.sigmas):
                if {k: str(v) for k, v in s1.items()} != {k: str(v) for k, v in s2.items()}:
                    return False
            if (a.hdet is None) != (b.hdet is None):
                return False
            if a.hdet is not None and any(x != y for x, y in zip(a.hdet, b.hdet)):
                return False
        if (self.nakayama is None) != (other.nakayama is None):
            return False
        if self.nakayama is not None:
            if {k: str(v) for k, v in self.nakayama.items()} != {k: str(v) for k, v in other.nakayama.items()}:
                return False
        return True


_SECTIONS = ("params", "grading", "generators", "precedence", "relations", "twists", "nakayama", "budget")
_ASSUME_KINDS = {
    "nonzero": "nonzero",
    "not-root-of-unity": "not-root-of-unity",
    "not-equal-one": "not-equal-one",
    "independent": "multiplicatively-independent",
    "multiplicatively-independent": "multiplicatively-independent",
}


def parse_presentation_file(text: str) -> PresentationFile:
    """Parse presentation-file text; errors carry line and column."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        s = line.strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise SyntaxError(lineno, len(line) + 1, "']'")
            name = s[1:-1].strip().lower()
            if name not in _SECTIONS:
                raise SyntaxError(lineno, raw.index("[") + 2, "one of " + ", ".join(_SECTIONS), name)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", lineno, 1)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise SyntaxError(lineno, 1, "a section header such as [generators]", s)
        indent = len(line) - len(line.lstrip())
        sections[current].append((lineno, indent + 1, line.strip()))
    if "generators" not in sections:
        raise SyntaxError(1, 1, "a [generators] section")

    pf = PresentationFile()
    # params
    for lineno, col, s in sections.get("params", []):
        word, _, rest = s.partition(" ")
        if word == "assume":
            pf.assumptions.append(_parse_assumption(rest.strip(), lineno, col + 7))
        elif word == "constraint":
            body = rest.strip()
            if "=" in body:
                lhs, rhs = body.split("=", 1)
                if rhs.strip() != "0":
                    body = f"{lhs.strip()} - ({rhs.strip()})"
                else:
                    body = lhs.strip()
            pf.constraints.append((lineno, col + 11, body))
        elif word == "order":
            toks = rest.split()
            if not toks or toks[0] not in ("grlex", "lex", "grevlex"):
                raise SyntaxError(lineno, col + 6, "grlex, lex or grevlex", rest)
            pf.order = toks[0]
            prec = " ".join(toks[1:])
            if prec:
                pf.param_precedence = [n.strip() for n in prec.split(">")]
        else:
            for k, name in enumerate(n.strip() for n in s.split(",")):
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                    raise SyntaxError(lineno, col, "a parameter name", name)
                pf.params.append(name)
    # grading
    for lineno, col, s in sections.get("grading", []):
        m = re.fullmatch(r"rank\s+(\d+)", s)
        if not m:
            raise SyntaxError(lineno, col, "'rank N'", s)
        pf.rank = int(m.group(1))
    # generators
    for lineno, col, s in sections["generators"]:
        name, sep, deg = s.partition(":")
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise SyntaxError(lineno, col, "a generator name", name)
        if not sep:
            md = (1,) + (0,) * (pf.rank - 1)
        else:
            nums = deg.replace("(", " ").replace(")", " ").replace(",", " ").split()
            try:
                md = tuple(int(x) for x in nums)
            except ValueError:
                raise SyntaxError(lineno, col + s.index(":") + 1, "integer multidegree", deg.strip()) from None
            if len(md) != pf.rank:
                raise SyntaxError(lineno, col + s.index(":") + 1, f"a multidegree with {pf.rank} entries", deg.strip())
        pf.generators.append((name, md))
    names = [g for g, _ in pf.generators]
    if len(set(names)) != len(names):
        raise ParseError("duplicate generator name", sections["generators"][0][0], 1)
    clash = set(names) & set(pf.params)
    if clash:
        raise ParseError(f"name used as both generator and parameter: {sorted(clash)[0]}", 1, 1)
    for lineno, col, s in sections.get("precedence", []):
        order = [n.strip() for n in s.split(">")]
        for n in order:
            if n not in names:
                raise UnknownSymbol(n, lineno, col + s.index(n))
        if sorted(order) != sorted(names):
            raise SyntaxError(lineno, col, "every generator exactly once", s)
        pf.precedence = order

    ring = ParamRing(pf.params, [], pf.order, pf.param_precedence)
    cons = []
    for lineno, col, body in pf.constraints:
        c = parse_scalar(ring, body, lineno, col)
        cons.append(c)
    if cons:
        ring = ParamRing(pf.params, cons, pf.order, pf.param_precedence)
    for kind, subject in pf.assumptions:
        if kind == "multiplicatively-independent":
            ring.assume(kind, subject)
        else:
            ring.assume(kind, parse_scalar(ring, subject))
    pf.constraints = [ring.format_poly(g) for g in ring.basis]
    pf.ring = ring
    alg = Alphabet.build(ring, names, pf.precedence, dict(pf.generators))
    pf.alphabet = alg

    for lineno, col, s in sections.get("relations", []):
        pf.relations.append(parse_relation(alg, s, lineno, col))

    if "twists" in sections:
        tw = TwistSpec()
        for lineno, col, s in sections["twists"]:
            word, _, rest = s.partition(" ")
            rest = rest.strip()
            if word == "convention":
                if rest not in ("left", "right"):
                    raise SyntaxError(lineno, col + 11, "left or right", rest)
                tw.convention = rest
            elif word == "sigma":
                tw.sigmas.append(parse_images(alg, rest, lineno, col + 6))
            elif word == "index":
                try:
                    tw.index = tuple(int(x) for x in rest.replace(",", " ").split())
                except ValueError:
                    raise SyntaxError(lineno, col + 6, "integer index", rest) from None
            elif word == "hdet":
                tw.hdet = [parse_scalar(ring, x, lineno, col + 5) for x, _ in _split_top(rest, ",")]
            else:
                raise SyntaxError(lineno, col, "convention, sigma, index or hdet", word)
        pf.twist = tw
    if "nakayama" in sections:
        text_ = " ".join(s for _, _, s in sections["nakayama"])
        lineno, col, _ = sections["nakayama"][0]
        pf.nakayama = parse_images(alg, text_, lineno, col)
    for lineno, col, s in sections.get("budget", []):
        m = re.fullmatch(r"(degree|cap)\s+(\d+)", s)
        if not m:
            raise SyntaxError(lineno, col, "'degree N' or 'cap N'", s)
        if m.group(1) == "degree":
            pf.budget = int(m.group(2))
        else:
            pf.cap = int(m.group(2))
    return pf


def _parse_assumption(rest: str, lineno: int, col: int):
    if rest.startswith("{"):
        close = rest.find("}")
        if close < 0:
            raise SyntaxError(lineno, col + len(rest), "'}'")
        names = tuple(n.strip() for n in rest[1:close].split(",") if n.strip())
        kind = rest[close + 1:].strip()
        if _ASSUME_KINDS.get(kind) != "multiplicatively-independent":
            raise SyntaxError(lineno, col + close + 1, "'independent'", kind)
        return ("multiplicatively-independent", names)
    for word, kind in _ASSUME_KINDS.items():
        if rest.endswith(" " + word):
            subject = rest[: -len(word)].strip()
            if kind == "multiplicatively-independent":
                raise SyntaxError(lineno, col, "a braced parameter set", subject)
            return (kind, subject)
    raise SyntaxError(lineno, col, "'<scalar> nonzero|not-root-of-unity|not-equal-one'", rest)


def format_presentation_file(pf: PresentationFile) -> str:
    """Print a presentation file; parsing the output gives the same abstract form."""
    out = []
    ring = pf.ring
    if pf.params:
        out.append("[params]")
        out.append(", ".join(pf.params))
        for kind, subject in pf.assumptions:
            if kind == "multiplicatively-independent":
                out.append("assume {" + ", ".join(subject) + "} independent")
            else:
                out.append(f"assume {subject} {kind}")
        for c in pf.constraints:
            out.append(f"constraint {c} = 0")
        if pf.order != "grlex" or (pf.param_precedence and list(pf.param_precedence) != list(pf.params)):
            prec = " > ".join(pf.param_precedence or pf.params)
            out.append(f"order {pf.order} {prec}")
        out.append("")
    out.append("[grading]")
    out.append(f"rank {pf.rank}")
    out.append("")
    out.append("[generators]")
    for name, md in pf.generators:
        out.append(f"{name} : {', '.join(str(x) for x in md)}")
    out.append("")
    out.append("[precedence]")
    out.append(" > ".join(pf.alphabet.precedence))
    out.append("")
    out.append("[relations]")
    for r in pf.relations:
        out.append(f"{r} = 0")
    out.append("")
    if pf.twist is not None:
        tw = pf.twist
        out.append("[twists]")
        out.append(f"convention {tw.convention}")
        for s in tw.sigmas:
            out.append("sigma " + ", ".join(f"{k} -> {v}" for k, v in s.items()))
        if tw.index is not None:
            out.append("index " + " ".join(str(x) for x in tw.index))
        if tw.hdet is not None:
            out.append("hdet " + ", ".join(fmt(x) for x in tw.hdet))
        out.append("")
    if pf.nakayama is not None:
        out.append("[nakayama]")
        out.append(", ".join(f"{k} -> {v}" for k, v in pf.nakayama.items()))
        out.append("")
    if pf.budget is not None or pf.cap is not None:
        out.append("[budget]")
        if pf.budget is not None:
            out.append(f"degree {pf.budget}")
        if pf.cap is not None:
            out.append(f"cap {pf.cap}")
        out.append("")
    return "\n".join(out)
