"""Paths and noncommutative polynomials in a path algebra.

A path is keyed by a tuple of letter ids (read left to right, so ``(a, a*)``
is the path ``a a*``).  The lazy path ``e_i`` is keyed by the negative int
``~i`` where ``i`` is the vertex *index* in the alphabet.  Keeping the two key
shapes apart lets the hot loops of the Groebner engine deal with tuples only.
"""

from __future__ import annotations

import re
from fractions import Fraction
from dataclasses import dataclass

from gmpy2 import mpq

from .domains import QQ, DomainError, ScalarDomain

__all__ = [
    "Path",
    "NCPoly",
    "ParseError",
    "order_key",
    "key_source",
    "key_target",
    "key_degree",
    "concat",
    "mul_dicts",
    "add_into",
    "parse",
    "format_poly",
    "geometric_inverse",
    "peirce",
]


class ParseError(ValueError):
    def __init__(self, msg, pos=None, text=None):
        self.pos = pos
        if pos is not None and text is not None:
            msg = f"{msg} at position {pos}: {text[:pos]}<<HERE>>{text[pos:]}"
        super().__init__(msg)


def order_key(k):
    """Degree-lexicographic sort key; lazy paths sort below everything."""
    if type(k) is int:
        return (0, (), ~k)
    return (len(k), k)


def key_degree(k):
    return 0 if type(k) is int else len(k)


def key_source(space, k):
    return ~k if type(k) is int else space.src[k[0]]


def key_target(space, k):
    return ~k if type(k) is int else space.tgt[k[-1]]


def concat(space, k1, k2):
    """Key of the product path, or None when the paths do not compose."""
    if type(k1) is int:
        if type(k2) is int:
            return k1 if k1 == k2 else None
        return k2 if ~k1 == space.src[k2[0]] else None
    if type(k2) is int:
        return k1 if space.tgt[k1[-1]] == ~k2 else None
    if space.tgt[k1[-1]] != space.src[k2[0]]:
        return None
    return k1 + k2


def add_into(acc, key, c, mod):
    """acc[key] += c, dropping the entry when it becomes zero."""
    v = acc.get(key)
    if v is None:
        if mod:
            c %= mod
        if c:
            acc[key] = c
        return
    v += c
    if mod:
        v %= mod
    if v:
        acc[key] = v
    else:
        del acc[key]


def mul_dicts(space, t1, t2, mod=0, maxdeg=None):
    out = {}
    src, tgt = space.src, space.tgt
    for k1, c1 in t1.items():
        for k2, c2 in t2.items():
            if type(k1) is tuple and type(k2) is tuple:
                if tgt[k1[-1]] != src[k2[0]]:
                    continue
                if maxdeg is not None and len(k1) + len(k2) > maxdeg:
                    continue
                k = k1 + k2
            else:
                k = concat(space, k1, k2)
                if k is None:
                    continue
                if maxdeg is not None and key_degree(k) > maxdeg:
                    continue
            add_into(out, k, c1 * c2, mod)
    return out


@dataclass(frozen=True)
class Path:
    """A path in an alphabet: base vertex plus a composable word of letter ids."""

    space: object
    base: int
    word: tuple = ()

    @classmethod
    def from_key(cls, space, k):
        if type(k) is int:
            return cls(space, space.vertices[~k], ())
        return cls(space, space.vertices[space.src[k[0]]], k)

    @property
    def key(self):
        return ~self.space.vindex[self.base] if not self.word else self.word

    @property
    def source(self):
        return self.base

    @property
    def target(self):
        if not self.word:
            return self.base
        return self.space.vertices[self.space.tgt[self.word[-1]]]

    @property
    def degree(self):
        return len(self.word)

    def is_cycle(self):
        return self.source == self.target

    def __str__(self):
        return format_key(self.space, self.key)


class NCPoly:
    """A finite linear combination of paths with exact coefficients.

    Instances are treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("space", "domain", "terms")

    def __init__(self, space, domain: ScalarDomain = QQ, terms=None, *, clean=True):
        self.space = space
        self.domain = domain
        if terms is None:
            terms = {}
        elif clean:
            mod = domain.modulus
            out = {}
            for k, c in terms.items():
                add_into(out, k, c, mod)
            terms = out
        self.terms = terms

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, space, domain=QQ):
        return cls(space, domain, {}, clean=False)

    @classmethod
    def one(cls, space, domain=QQ):
        return cls(space, domain, {~i: 1 for i in range(space.nvertices)}, clean=False)

    @classmethod
    def idempotent(cls, space, vertex, domain=QQ):
        return cls(space, domain, {~space.vindex[vertex]: 1}, clean=False)

    @classmethod
    def word(cls, space, word, domain=QQ, coeff=1):
        word = tuple(word)
        if not word:
            raise ValueError("use NCPoly.idempotent for lazy paths")
        if not space.is_path(word):
            raise ValueError("word is not a path")
        return cls(space, domain, {word: domain.coerce(coeff)})

    @classmethod
    def letter(cls, space, name, domain=QQ):
        return cls(space, domain, {(space.by_name[name],): 1}, clean=False)

    @classmethod
    def scalar(cls, space, c, domain=QQ):
        c = domain.coerce(c)
        if not c:
            return cls.zero(space, domain)
        return cls(space, domain, {~i: c for i in range(space.nvertices)}, clean=False)

    # -- basic protocol ----------------------------------------------------
    def _check(self, other):
        if self.space != other.space:
            raise ValueError("polynomials live over different quivers")
        if self.domain != other.domain:
            raise DomainError(f"domain mismatch: {self.domain} vs {other.domain}")

    def _lift(self, other):
        if isinstance(other, NCPoly):
            self._check(other)
            return other
        return NCPoly.scalar(self.space, other, self.domain)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        mod = self.domain.modulus
        for k, c in other.terms.items():
            add_into(out, k, c, mod)
        return NCPoly(self.space, self.domain, out, clean=False)

    __radd__ = __add__

    def __neg__(self):
        mod = self.domain.modulus
        return NCPoly(
            self.space, self.domain, {k: (-c) % mod if mod else -c for k, c in self.terms.items()}, clean=False
        )

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = self.domain.coerce(c)
        mod = self.domain.modulus
        out = {}
        for k, v in self.terms.items():
            add_into(out, k, v * c, mod)
        return NCPoly(self.space, self.domain, out, clean=False)

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        self._check(other)
        return NCPoly(
            self.space, self.domain, mul_dicts(self.space, self.terms, other.terms, self.domain.modulus), clean=False
        )

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = NCPoly.one(self.space, self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.space == other.space and self.domain == other.domain and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        for k in self.sorted_keys():
            yield Path.from_key(self.space, k), self.terms[k]

    def __repr__(self):
        return f"NCPoly({format_poly(self)!s})"

    __str__ = lambda self: format_poly(self)

    # -- inspection --------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def sorted_keys(self, reverse=True):
        return sorted(self.terms, key=order_key, reverse=reverse)

    def degree(self):
        return max((key_degree(k) for k in self.terms), default=-1)

    def min_degree(self):
        return min((key_degree(k) for k in self.terms), default=-1)

    def leading_key(self):
        return max(self.terms, key=order_key) if self.terms else None

    def coeff(self, path):
        if isinstance(path, Path):
            path = path.key
        return self.terms.get(path, 0)

    def homogeneous(self, d):
        return NCPoly(self.space, self.domain, {k: c for k, c in self.terms.items() if key_degree(k) == d}, clean=False)

    def truncate(self, d):
        """Drop every term of degree above ``d``."""
        return NCPoly(self.space, self.domain, {k: c for k, c in self.terms.items() if key_degree(k) <= d}, clean=False)

    def above(self, d):
        return NCPoly(self.space, self.domain, {k: c for k, c in self.terms.items() if key_degree(k) > d}, clean=False)

    def is_homogeneous(self):
        return len({key_degree(k) for k in self.terms}) <= 1

    def endpoints(self):
        sp = self.space
        return {(key_source(sp, k), key_target(sp, k)) for k in self.terms}

    def is_cycle_combination(self):
        return all(s == t for s, t in self.endpoints())

    def peirce(self, i, j):
        return peirce(self, i, j)

    def change_domain(self, domain):
        """Coerce every coefficient into ``domain`` (e.g. Q -> F_p)."""
        out = {}
        for k, c in self.terms.items():
            add_into(out, k, domain.coerce(c), domain.modulus)
        return NCPoly(self.space, domain, out, clean=False)

    def denominators(self):
        return {int(mpq(c).denominator) for c in self.terms.values()}


def peirce(p: NCPoly, i, j) -> NCPoly:
    """e_i * p * e_j for vertex labels i, j."""
    sp = p.space
    ii, jj = sp.vindex[i], sp.vindex[j]
    return NCPoly(
        sp,
        p.domain,
        {k: c for k, c in p.terms.items() if key_source(sp, k) == ii and key_target(sp, k) == jj},
        clean=False,
    )


def geometric_inverse(x: NCPoly, bound: int) -> NCPoly:
    """Sum of (-x)^k for k = 0..bound: the inverse of 1 + x once x^(bound+1) = 0."""
    if any(type(k) is int for k in x.terms):
        raise ValueError("geometric_inverse needs a zero constant term")
    if not x.is_cycle_combination():
        raise ValueError("geometric_inverse needs a combination of cycles")
    one = NCPoly.one(x.space, x.domain)
    result = one
    power = one
    for _ in range(bound):
        power = power * (-x)
        result = result + power
    return result


# ---------------------------------------------------------------------------
# formatting


def format_key(space, k):
    if type(k) is int:
        return f"e_{space.vertices[~k]}"
    return " * ".join(space.letters[i].name for i in k)


def format_poly(p: NCPoly) -> str:
    if not p.terms:
        return "0"
    dom = p.domain
    mod = dom.modulus
    parts = []
    for k in p.sorted_keys():
        c = p.terms[k]
        if mod:
            neg, mag = False, c % mod
        else:
            neg, mag = c < 0, abs(c)
        body = format_key(p.space, k)
        if mag == 1:
            s = body
        else:
            s = f"{dom.fmt(mag)} * {body}"
        parts.append(("- " if neg else "+ ") + s)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[1:]


# ---------------------------------------------------------------------------
# parsing

_FACTOR_START = re.compile(r"[A-Za-z0-9(]")


class _Parser:
    def __init__(self, text, space, domain, macros, strict=True):
        self.strict = strict
        self.text = text
        self.space = space
        self.domain = domain
        self.macros = macros or {}
        self.pos = 0
        self.last_letter = None

    def error(self, msg, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        if not self.text.strip():
            self.error("empty expression")
        p = self.expr()
        self.skip()
        if self.pos != len(self.text):
            self.error("unexpected input")
        return p

    def expr(self):
        sign = 1
        ch = self.peek()
        if ch in "+-":
            sign = -1 if ch == "-" else 1
            self.pos += 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            ch = self.peek()
            if ch in ("+", "-") and ch:
                self.pos += 1
                t = self.term()
                acc = acc + t if ch == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.factor()
        last = self.last_letter
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                at = self.pos
                nxt = self.factor()
                cur = self.last_letter
                if self.strict and last is not None and cur is not None:
                    if self.space.tgt[last] != self.space.src[cur]:
                        self.error("non-composable explicit path", at)
                acc = acc * nxt
                last = cur
            else:
                return acc

    def factor(self):
        self.last_letter = None
        base = self.atom()
        while self.peek() == "^":
            self.last_letter = None
            self.pos += 1
            self.skip()
            m = re.match(r"\d+", self.text[self.pos:])
            if not m:
                self.error("expected a nonnegative integer exponent")
            self.pos += m.end()
            base = base ** int(m.group())
        return base

    def atom(self):
        self.skip()
        start = self.pos
        text = self.text
        if start >= len(text):
            self.error("unexpected end of expression")
        ch = text[start]
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch.isdigit():
            m = re.match(r"\d+", text[start:])
            self.pos += m.end()
            num = int(m.group())
            den = 1
            if self.peek() == "/":
                self.pos += 1
                self.skip()
                m2 = re.match(r"\d+", text[self.pos:])
                if not m2:
                    self.error("expected an integer denominator")
                self.pos += m2.end()
                den = int(m2.group())
                if den == 0:
                    self.error("zero denominator")
            try:
                c = self.domain.coerce(Fraction(num, den))
            except DomainError as exc:
                self.error(str(exc), start)
            return NCPoly.scalar(self.space, c, self.domain)
        m = re.match(r"[A-Za-z][A-Za-z0-9_]*", text[start:])
        if not m:
            self.error(f"unexpected character {ch!r}")
        name = m.group()
        self.pos += m.end()
        dual = False
        # a '*' glued to a name is a dual marker unless a factor follows it at once
        if self.pos < len(text) and text[self.pos] == "*":
            nxt = text[self.pos + 1] if self.pos + 1 < len(text) else ""
            if not _FACTOR_START.match(nxt or " "):
                dual = True
                self.pos += 1
        return self._resolve(name, dual, start)

    def _resolve(self, name, dual, start):
        sp = self.space
        if not dual and name in self.macros:
            return self.macros[name]
        full = name + "*" if dual else name
        if full in sp.by_name:
            self.last_letter = sp.by_name[full]
            return NCPoly(sp, self.domain, {(sp.by_name[full],): 1}, clean=False)
        m = re.fullmatch(r"e_?(-?\d+)", name)
        if m and not dual:
            v = int(m.group(1))
            if v not in sp.vindex:
                self.error(f"unknown vertex {v}", start)
            return NCPoly.idempotent(sp, v, self.domain)
        # 'da' is accepted for a*
        if not dual and name.startswith("d") and len(name) > 1 and name[1:] + "*" in sp.by_name:
            self.last_letter = sp.by_name[name[1:] + "*"]
            return NCPoly(sp, self.domain, {(sp.by_name[name[1:] + "*"],): 1}, clean=False)
        self.error(f"unknown arrow {full!r}", start)


def parse(text: str, space, domain: ScalarDomain = QQ, macros=None, *, strict=True) -> NCPoly:
    """Parse an expression such as ``1/2*a*a* - e_3``.

    With ``strict`` (the default) two adjacent explicit letters that do not
    compose are an error rather than a silent zero.
    """
    return _Parser(text, space, domain, macros, strict).parse()
