"""Noncommutative Groebner bases for quotients of path algebras.

Polynomials inside the engine are plain dicts ``{key: coeff}`` with the keys
of :mod:`preprojective.algebra`.  Every basis element is monic (leading
coefficient 1; over Z a leading coefficient of -1 is flipped) and Peirce
homogeneous, i.e. all of its paths share one source and one target, which is
what makes ``u * tail * v`` a sum of paths again.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import sys
from operator import neg
from dataclasses import dataclass, field

from .algebra import NCPoly, add_into, key_degree, key_source, key_target, order_key
from .domains import DomainError

__all__ = [
    "MonomialOrder",
    "GroebnerBasis",
    "GroebnerError",
    "InfiniteDimensional",
    "NormalWordBasis",
    "buchberger",
    "groebner_basis",
    "normal_form",
    "is_member",
    "enumerate_basis",
    "corrected_space_dims",
    "nakayama_permutation",
]

log = logging.getLogger(__name__)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class GroebnerError(ArithmeticError):
    pass


class InfiniteDimensional(GroebnerError):
    pass


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-lexicographic order on paths.

    The letter order is the order of the alphabet; lazy paths come first,
    ordered by vertex.  To compare under a different letter order, build the
    doubled quiver with that order.
    """

    space: object
    kind: str = "deglex"

    def key(self, path_key):
        return order_key(path_key)

    def letters(self):
        return tuple(l.name for l in self.space.letters)

    def compare(self, k1, k2):
        a, b = order_key(k1), order_key(k2)
        return (a > b) - (a < b)


def _hkey(w):
    # heap key: heapq pops the smallest, we want the deg-lex largest first
    return (-len(w), tuple(map(neg, w)), w)


class _Trie:
    """Leading paths indexed for subword and suffix queries."""

    def __init__(self):
        self.fwd = {}
        self.rev = {}

    @staticmethod
    def _insert(root, word, idx):
        node = root
        for x in word:
            node = node.setdefault(x, {})
        node[-1] = idx

    @staticmethod
    def _delete(root, word):
        path = []
        node = root
        for x in word:
            path.append((node, x))
            node = node[x]
        node.pop(-1, None)
        for parent, x in reversed(path):
            if parent[x]:
                break
            del parent[x]

    def add(self, word, idx):
        self._insert(self.fwd, word, idx)
        self._insert(self.rev, word[::-1], idx)

    def remove(self, word):
        self._delete(self.fwd, word)
        self._delete(self.rev, word[::-1])

    def find(self, w):
        """(start, index) of some leading path occurring in w, or None."""
        root = self.fwd
        n = len(w)
        for i in range(n):
            node = root.get(w[i])
            j = i + 1
            while node is not None:
                idx = node.get(-1)
                if idx is not None:
                    return i, idx
                if j == n:
                    break
                node = node.get(w[j])
                j += 1
        return None

    def suffix(self, w):
        """Index of a leading path that is a suffix of w, or None."""
        node = self.rev
        for x in reversed(w):
            node = node.get(x)
            if node is None:
                return None
            idx = node.get(-1)
            if idx is not None:
                return idx
        return None


def _sandwich(u, t, v):
    if type(t) is int:
        w = u + v
        return w if w else t
    return u + t + v


class _Engine:
    """Mutable state of a completion; also the reducer of finished bases."""

    def __init__(self, space, domain):
        self.space = space
        self.domain = domain
        self.mod = domain.modulus
        self.lts = []  # leading word per element (None once removed)
        self.tails = []  # tail dict per element
        self.trie = _Trie()
        self._found = {}

    def find(self, w):
        hit = self._found.get(w, 0)
        if hit == 0:
            hit = self._found[w] = self.trie.find(w)
        return hit

    def active(self):
        return [i for i, lt in enumerate(self.lts) if lt is not None]

    # -- reduction ---------------------------------------------------------
    def reduce(self, f, tails_only_from=None):
        """Full reduction of dict f (not modified).  Returns a new dict."""
        mod = self.mod
        f = dict(f)
        result = {}
        heap = []
        for k in list(f):
            if type(k) is int:
                result[k] = f.pop(k)
            else:
                heap.append(_hkey(k))
        heapq.heapify(heap)
        find = self.find
        lts, tails = self.lts, self.tails
        while heap:
            w = heapq.heappop(heap)[2]
            c = f.pop(w, None)
            if c is None:
                continue
            hit = find(w)
            if hit is None:
                result[w] = c
                continue
            i, idx = hit
            u = w[:i]
            v = w[i + len(lts[idx]):]
            for t, ct in tails[idx].items():
                nw = _sandwich(u, t, v)
                if type(nw) is int:
                    add_into(result, nw, -c * ct, mod)
                    continue
                had = nw in f
                add_into(f, nw, -c * ct, mod)
                if not had and nw in f:
                    heapq.heappush(heap, _hkey(nw))
        return result

    def make_monic(self, f):
        lead = max(f, key=order_key)
        c = f[lead]
        dom = self.domain
        if c != 1:
            if dom.is_field:
                inv = dom.inv(c)
                mod = self.mod
                f = {k: (v * inv) % mod if mod else v * inv for k, v in f.items()}
            elif c == -1:
                f = {k: -v for k, v in f.items()}
            else:
                raise GroebnerError(
                    f"leading coefficient {c} is not a unit in {dom}; "
                    "use a field or the multi-prime HH0 path"
                )
        tail = dict(f)
        del tail[lead]
        return lead, tail

    def add(self, lead, tail):
        if type(lead) is int:
            raise GroebnerError("the ideal contains a lazy path; quotient collapses at a vertex")
        idx = len(self.lts)
        self.lts.append(lead)
        self.tails.append(tail)
        self.trie.add(lead, idx)
        self._found.clear()
        return idx

    def remove(self, idx):
        self.trie.remove(self.lts[idx])
        self._found.clear()
        self.lts[idx] = None
        self.tails[idx] = None


def _peirce_split(space, terms):
    parts = {}
    for k, c in terms.items():
        st = (key_source(space, k), key_target(space, k))
        parts.setdefault(st, {})[k] = c
    return list(parts.values())


def _overlaps(a, b):
    """Lengths k such that the last k letters of a are the first k of b."""
    n = min(len(a), len(b))
    return [k for k in range(1, n) if a[-k:] == b[:k]]


@dataclass
class NormalWordBasis:
    """Normal words graded by length; degree 0 holds the lazy paths."""

    words: dict  # degree -> list of keys (deg-lex ascending)
    space: object = None

    @property
    def graded_dims(self):
        return {d: len(ws) for d, ws in sorted(self.words.items())}

    @property
    def dimension(self):
        return sum(len(ws) for ws in self.words.values())

    @property
    def top_degree(self):
        return max((d for d, ws in self.words.items() if ws), default=-1)

    def all_words(self):
        for d in sorted(self.words):
            yield from self.words[d]

    def between(self, i, j, min_degree=0):
        """Normal words from vertex i to vertex j of length >= min_degree."""
        sp = self.space
        ii, jj = sp.vindex[i], sp.vindex[j]
        return [
            w
            for d in sorted(self.words)
            if d >= min_degree
            for w in self.words[d]
            if key_source(sp, w) == ii and key_target(sp, w) == jj
        ]

    def __len__(self):
        return self.dimension


class GroebnerBasis:
    """A (possibly capped) Groebner basis of a two-sided ideal.

    ``complete`` certifies that every overlap resolved; then normal forms
    are unique and ``is_member`` decides membership both ways.
    """

    def __init__(self, engine, order, cap, complete, stats=None):
        self._engine = engine
        self.space = engine.space
        self.domain = engine.domain
        self.order = order
        self.cap = cap
        self.complete = complete
        self.stats = stats or {}
        self.leading_coeff_units = True
        self._letter_cache = {}
        self._basis = None
        self._homogeneous = None

    # -- elements ----------------------------------------------------------
    @property
    def leading_words(self):
        e = self._engine
        return sorted((lt for lt in e.lts if lt is not None), key=order_key)

    def elements(self):
        e = self._engine
        out = []
        for i in sorted(e.active(), key=lambda i: order_key(e.lts[i])):
            terms = dict(e.tails[i])
            terms[e.lts[i]] = 1
            out.append(NCPoly(self.space, self.domain, terms, clean=False))
        return out

    def __len__(self):
        return len(self._engine.active())

    def is_homogeneous(self):
        if self._homogeneous is None:
            e = self._engine
            self._homogeneous = all(
                all(key_degree(t) == len(e.lts[i]) for t in e.tails[i]) for i in e.active()
            )
        return self._homogeneous

    # -- reduction ---------------------------------------------------------
    def reduce_terms(self, terms):
        """Normal form of a term dict, through the memoized letter products."""
        out = {}
        mod = self.domain.modulus
        for k, c in terms.items():
            for m, cm in self.word_nf(k).items():
                add_into(out, m, c * cm, mod)
        return out

    def word_nf(self, k):
        if type(k) is int:
            return {k: 1}
        cur = {~self.space.src[k[0]]: 1}
        for l in k:
            cur = self.times_letter(cur, l)
            if not cur:
                break
        return cur

    def times_letter(self, terms, l):
        """NF(p * l) for a dict p of normal words."""
        mod = self.domain.modulus
        out = {}
        for m, c in terms.items():
            for m2, c2 in self._mul_letter(m, l).items():
                add_into(out, m2, c * c2, mod)
        return out

    def _mul_letter(self, m, l):
        key = (m, l)
        cache = self._letter_cache
        hit = cache.get(key)
        if hit is not None:
            return hit
        sp = self.space
        e = self._engine
        if type(m) is int:
            w = (l,) if sp.src[l] == ~m else None
        else:
            w = m + (l,) if sp.tgt[m[-1]] == sp.src[l] else None
        if w is None:
            res = {}
        else:
            idx = e.trie.suffix(w)
            if idx is None:
                res = {w: 1}
            else:
                u = w[: len(w) - len(e.lts[idx])]
                start = {u: 1} if u else {~sp.src[w[0]]: 1}
                res = {}
                mod = self.domain.modulus
                for t, ct in e.tails[idx].items():
                    if type(t) is int:
                        part = start
                    else:
                        part = start
                        for x in t:
                            part = self.times_letter(part, x)
                            if not part:
                                break
                    for m2, c2 in part.items():
                        add_into(res, m2, -ct * c2, mod)
        cache[key] = res
        return res

    def mul_nf(self, a, b, maxdeg=None):
        """NF(a * b) for term dicts a, b already in normal form."""
        mod = self.domain.modulus
        out = {}
        for k, c in b.items():
            if type(k) is int:
                part = {m: cm for m, cm in a.items() if key_target(self.space, m) == ~k}
            else:
                part = a
                for x in k:
                    part = self.times_letter(part, x)
                    if maxdeg is not None:
                        part = {m: v for m, v in part.items() if key_degree(m) <= maxdeg}
                    if not part:
                        break
            for m, cm in part.items():
                add_into(out, m, c * cm, mod)
        return out

    def normal_form(self, p: NCPoly) -> NCPoly:
        self._check(p)
        return NCPoly(self.space, self.domain, self.reduce_terms(p.terms), clean=False)

    def normal_form_heap(self, p: NCPoly) -> NCPoly:
        """Reduction by repeatedly rewriting the largest reducible path."""
        self._check(p)
        return NCPoly(self.space, self.domain, self._engine.reduce(p.terms), clean=False)

    def _check(self, p):
        if p.space != self.space:
            raise ValueError("polynomial lives over a different quiver")
        if p.domain != self.domain:
            raise DomainError(f"domain mismatch: {p.domain} vs {self.domain}")

    def is_member(self, p: NCPoly):
        """True/False; False is only a proof of non-membership for complete bases."""
        return not self.normal_form(p)

    def is_normal(self, k):
        return type(k) is int or self._engine.trie.find(k) is None

    # -- basis -------------------------------------------------------------
    def basis(self, max_degree=None) -> NormalWordBasis:
        if self._basis is None or max_degree is not None:
            b = enumerate_basis(self, max_degree)
            if max_degree is None:
                self._basis = b
            return b
        return self._basis


def _count_normal(space, trie, upto, limit=200000):
    """Normal word counts by degree up to ``upto`` (stops early at a zero)."""
    layer = [(l,) for l in range(len(space.letters)) if trie.suffix((l,)) is None]
    counts = {1: len(layer)}
    d = 1
    while d < upto and layer:
        nxt = []
        for m in layer:
            t = space.tgt[m[-1]]
            for l in range(len(space.letters)):
                if space.src[l] != t:
                    continue
                w = m + (l,)
                if trie.suffix(w) is None:
                    nxt.append(w)
            if len(nxt) > limit:
                return counts
        d += 1
        layer = nxt
        counts[d] = len(layer)
    return counts


def buchberger(
    pres, order=None, cap=None, *, adaptive=True, max_elements=200000, chain=True
) -> GroebnerBasis:
    """Complete the relations of ``pres`` to a Groebner basis.

    Overlaps are processed by increasing degree.  With ``chain`` an overlap
    word with some leading word strictly inside it is skipped: its
    S-polynomial is a sum of multiples of two shorter overlaps, all of which
    have been resolved by the time it is popped.  Overlaps of degree above
    ``cap`` are postponed; if by then some degree d0 <= cap admits no normal
    word, every leading word is shorter than d0 and the cap is raised to
    2*d0, after which an empty queue certifies completeness.
    """
    space = pres.doubled
    domain = pres.domain
    order = order or MonomialOrder(space)
    eng = _Engine(space, domain)
    counter = itertools.count()
    queue = []
    for r in pres.relations:
        for part in _peirce_split(space, r.terms):
            lead = max(part, key=order_key)
            heapq.heappush(queue, (key_degree(lead), next(counter), "poly", part))
    postponed = []
    stats = {"spolys": 0, "zero": 0, "added": 0, "chain": 0}
    cur_cap = cap

    def push_overlaps(idx):
        a = eng.lts[idx]
        for j in eng.active():
            b = eng.lts[j]
            for k in _overlaps(a, b):
                heapq.heappush(queue, (len(a) + len(b) - k, next(counter), "pair", (idx, j, k)))
            if j != idx:
                for k in _overlaps(b, a):
                    heapq.heappush(queue, (len(a) + len(b) - k, next(counter), "pair", (j, idx, k)))

    def process(f):
        f = eng.reduce(f)
        if not f:
            stats["zero"] += 1
            return
        for part in _peirce_split(space, f):
            lead, tail = eng.make_monic(part)
            # elements whose leading word contains the new one are re-queued
            doomed = []
            for j in eng.active():
                lj = eng.lts[j]
                if len(lj) >= len(lead) and _contains(lj, lead):
                    doomed.append(j)
            idx = eng.add(lead, tail)
            stats["added"] += 1
            for j in doomed:
                terms = dict(eng.tails[j])
                terms[eng.lts[j]] = 1
                eng.remove(j)
                heapq.heappush(queue, (len(lead), next(counter), "poly", terms))
            push_overlaps(idx)
            if stats["added"] > max_elements:
                raise GroebnerError("too many basis elements")

    while True:
        while queue:
            deg, _, kind, data = heapq.heappop(queue)
            if cur_cap is not None and deg > cur_cap:
                postponed.append((deg, next(counter), kind, data))
                continue
            if kind == "poly":
                process(data)
                continue
            i, j, k = data
            a, b = eng.lts[i], eng.lts[j]
            if a is None or b is None:
                continue
            u = a[: len(a) - k]
            v = b[k:]
            if chain and eng.find((a + v)[1:-1]) is not None:
                stats["chain"] += 1
                continue
            stats["spolys"] += 1
            s = {}
            mod = eng.mod
            for t, c in eng.tails[i].items():
                add_into(s, _sandwich((), t, v), c, mod)
            for t, c in eng.tails[j].items():
                add_into(s, _sandwich(u, t, ()), -c, mod)
            process(s)
        pending = [p for p in postponed if p[2] == "poly" or (eng.lts[p[3][0]] is not None and eng.lts[p[3][1]] is not None)]
        if not pending:
            complete = True
            break
        if not adaptive or cur_cap is None:
            complete = False
            break
        counts = _count_normal(space, eng.trie, cur_cap)
        zero = [d for d, n in counts.items() if n == 0]
        if not zero or 2 * zero[0] <= cur_cap:
            complete = False
            break
        log.info("no normal words in degree %d; raising cap to %d", zero[0], 2 * zero[0])
        cur_cap = 2 * zero[0]
        for p in pending:
            heapq.heappush(queue, p)
        postponed = []

    _interreduce_tails(eng)
    stats["elements"] = len(eng.active())
    gb = GroebnerBasis(eng, order, cur_cap, complete, stats)
    return gb


def _contains(big, small):
    n = len(small)
    return any(big[i : i + n] == small for i in range(len(big) - n + 1))


def _interreduce_tails(eng):
    for i in eng.active():
        eng.tails[i] = eng.reduce(eng.tails[i])


groebner_basis = buchberger


def normal_form(p: NCPoly, gb: GroebnerBasis) -> NCPoly:
    return gb.normal_form(p)


def is_member(p: NCPoly, gb: GroebnerBasis):
    return gb.is_member(p)


def enumerate_basis(gb: GroebnerBasis, max_degree=None) -> NormalWordBasis:
    """All normal words, degree by degree, until a degree is empty."""
    sp = gb.space
    trie = gb._engine.trie
    limit = max_degree if max_degree is not None else (gb.cap if gb.cap is not None else 10_000)
    words = {0: [~i for i in range(sp.nvertices)]}
    layer = [(l,) for l in range(len(sp.letters)) if trie.suffix((l,)) is None]
    d = 1
    by_src = {}
    for l in range(len(sp.letters)):
        by_src.setdefault(sp.src[l], []).append(l)
    while layer:
        words[d] = sorted(layer)
        if d >= limit:
            if max_degree is not None:
                return NormalWordBasis(words, sp)
            raise InfiniteDimensional(f"normal words still present in degree {d}")
        nxt = []
        for m in layer:
            for l in by_src.get(sp.tgt[m[-1]], ()):
                w = m + (l,)
                if trie.suffix(w) is None:
                    nxt.append(w)
        layer = nxt
        d += 1
    return NormalWordBasis(words, sp)


def nakayama_permutation(gb: GroebnerBasis):
    """Vertex i -> the target of the top-degree normal words starting at i.

    Only meaningful for a graded self-injective quotient, where each vertex
    has exactly one such word.
    """
    b = gb.basis()
    sp = gb.space
    out = {}
    for w in b.words.get(b.top_degree, ()):
        s = sp.vertices[key_source(sp, w)]
        t = sp.vertices[key_target(sp, w)]
        if out.setdefault(s, t) != t:
            raise GroebnerError(f"vertex {s} has top-degree words ending at two vertices")
    if sorted(out) != sorted(sp.vertices) or sorted(out.values()) != sorted(sp.vertices):
        raise GroebnerError("top-degree words do not define a permutation of the vertices")
    return out


def corrected_space_dims(gb: GroebnerBasis, twisted=False):
    """(N, M): paths of length >= 3 parallel to some letter, and cycles of length >= 4.

    N counts, with multiplicity over letters, normal words from s(a) to t(a)
    of length at least 3; M counts normal cycles of length at least 4.
    With ``twisted`` the target vertex of each letter is moved by the
    Nakayama permutation first.
    """
    b = gb.basis()
    sp = gb.space
    nu = nakayama_permutation(gb) if twisted else None
    pair_count = {}
    cyc = 0
    for d, ws in b.words.items():
        for w in ws:
            s, t = key_source(sp, w), key_target(sp, w)
            if d >= 3:
                pair_count[(s, t)] = pair_count.get((s, t), 0) + 1
            if d >= 4 and s == t:
                cyc += 1
    n = 0
    for l in range(len(sp.letters)):
        t = sp.tgt[l]
        if nu is not None:
            t = sp.vindex[nu[sp.vertices[t]]]
        n += pair_count.get((sp.src[l], t), 0)
    return n, cyc
