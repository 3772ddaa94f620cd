"""Zeroth Hochschild homology A/[A,A] of a finite-dimensional path-algebra quotient.

Non-cycle paths are commutators (p = [e_s, p]), so A/[A,A] is the span of
normal cycles modulo the normal forms of [m, l] = m l - l m, where l is a
letter and m a normal word with t(m) = s(l), s(m) = t(l).  The identity
[x, yz] = [xy, z] + [zx, y] shows these commutators span.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import NCPoly, key_degree, key_source, key_target, order_key
from .domains import QQ, ZZ, DomainError, PrimeField
from .groebner import GroebnerBasis, GroebnerError, buchberger

__all__ = [
    "CyclicClass",
    "HH0Report",
    "Echelon",
    "minimal_rotation",
    "hh0_field",
    "hh0_integers",
    "class_in_hh0",
    "frobenius_obstruction",
    "smith_normal_form",
    "smith_invariants",
    "IntegerLattice",
    "commutator_space",
]


# ---------------------------------------------------------------------------
# cyclic words


def minimal_rotation(word):
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    s = list(word) * 2
    n = len(word)
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n if n else 0


@dataclass(frozen=True)
class CyclicClass:
    """A cycle up to rotation, keyed by its least rotation."""

    canonical: tuple

    @classmethod
    def of(cls, word):
        word = tuple(word)
        if not word:
            return cls(())
        k = minimal_rotation(word)
        return cls(word[k:] + word[:k])

    def rotations(self):
        w = self.canonical
        return {w[i:] + w[:i] for i in range(len(w))} if w else {w}

    def __len__(self):
        return len(self.canonical)


# ---------------------------------------------------------------------------
# exact linear algebra over a field


class Echelon:
    """Incremental row echelon form over Q (mpq) or F_p (ints mod p).

    Rows are dicts {column index: value}; the pivot of a row is its largest
    column, so reducing a vector proceeds from the top of the order down.
    """

    def __init__(self, modulus=0):
        self.mod = modulus
        self.rows = {}  # pivot column -> row with pivot entry 1

    def _inv(self, c):
        return pow(int(c), -1, self.mod) if self.mod else 1 / mpq(c)

    def reduce(self, row):
        row = dict(row)
        mod = self.mod
        rows = self.rows
        out = {}
        while row:
            col = max(row)
            c = row.pop(col)
            piv = rows.get(col)
            if piv is None:
                out[col] = c
                # columns below col may still be reducible
                continue
            for k, v in piv.items():
                if k == col:
                    continue
                nv = row.get(k, 0) - c * v
                if mod:
                    nv %= mod
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return out

    def add(self, row):
        """Insert row; returns True if the rank went up."""
        row = self.reduce(row)
        if not row:
            return False
        col = max(row)
        inv = self._inv(row[col])
        mod = self.mod
        self.rows[col] = {k: (v * inv) % mod if mod else v * inv for k, v in row.items()}
        return True

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return set(self.rows)


# ---------------------------------------------------------------------------
# integer linear algebra


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def smith_normal_form(matrix):
    """Diagonal entries d_1 | d_2 | ... (nonzero only) of an integer matrix.

    The matrix is a list of rows; it is copied, not modified.
    """
    A = [list(map(int, r)) for r in matrix if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    diag = []
    t = 0
    while t < min(m, n):
        # find a nonzero entry of least absolute value in the trailing block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            p = A[t][t]
            # clear column t
            for i in range(t + 1, m):
                v = A[i][t]
                if v == 0:
                    continue
                if v % p == 0:
                    q = v // p
                    ri, rt = A[i], A[t]
                    for k in range(t, n):
                        ri[k] -= q * rt[k]
                else:
                    g, x, y = _xgcd(p, v)
                    a, b = p // g, v // g
                    rt, ri = A[t], A[i]
                    A[t] = [x * rt[k] + y * ri[k] if k >= t else rt[k] for k in range(n)]
                    A[i] = [-b * rt[k] + a * ri[k] if k >= t else ri[k] for k in range(n)]
                    p = A[t][t]
                    done = False
            # clear row t
            rt = A[t]
            for j in range(t + 1, n):
                v = rt[j]
                if v == 0:
                    continue
                if v % p == 0:
                    q = v // p
                    for row in A:
                        row[j] -= q * row[t]
                else:
                    g, x, y = _xgcd(p, v)
                    a, b = p // g, v // g
                    for row in A:
                        ct, cj = row[t], row[j]
                        row[t] = x * ct + y * cj
                        row[j] = -b * ct + a * cj
                    p = A[t][t]
                    done = False
            if done and all(A[i][t] == 0 for i in range(t + 1, m)):
                # divisibility: p must divide the whole trailing block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                A[t] = [A[t][k] + A[bad][k] for k in range(n)]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def smith_invariants(matrix):
    """Nonzero invariant factors, in increasing divisibility order."""
    return [d for d in smith_normal_form(matrix) if d]


class IntegerLattice:
    """Row lattice in Z^n kept in Hermite-style echelon form for membership tests."""

    def __init__(self):
        self.rows = {}  # pivot column -> row dict with positive pivot

    def add(self, row):
        row = {k: int(v) for k, v in row.items() if v}
        while row:
            col = max(row)
            piv = self.rows.get(col)
            if piv is None:
                if row[col] < 0:
                    row = {k: -v for k, v in row.items()}
                self.rows[col] = row
                return True
            a, b = piv[col], row[col]
            if b % a == 0:
                q = b // a
                row = _axpy(row, piv, -q)
                continue
            g, x, y = _xgcd(a, b)
            new_piv = _lin(piv, x, row, y)
            other = _lin(piv, -b // g, row, a // g)
            if new_piv[col] < 0:
                new_piv = {k: -v for k, v in new_piv.items()}
            self.rows[col] = new_piv
            row = other
        return False

    def contains(self, vec):
        row = {k: int(v) for k, v in vec.items() if v}
        while row:
            col = max(row)
            piv = self.rows.get(col)
            if piv is None or row[col] % piv[col]:
                return False
            row = _axpy(row, piv, -(row[col] // piv[col]))
        return True

    @property
    def rank(self):
        return len(self.rows)


def _axpy(row, piv, q):
    out = dict(row)
    for k, v in piv.items():
        nv = out.get(k, 0) + q * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def _lin(r1, a, r2, b):
    out = {}
    for k in set(r1) | set(r2):
        v = a * r1.get(k, 0) + b * r2.get(k, 0)
        if v:
            out[k] = v
    return out


# ---------------------------------------------------------------------------
# the commutator space


@dataclass
class _Space:
    gb: GroebnerBasis
    columns: list  # normal cycle words in deg-lex order
    index: dict  # word -> column index
    graded: bool

    def vector(self, terms):
        sp = self.gb.space
        out = {}
        for k, c in terms.items():
            if key_source(sp, k) != key_target(sp, k):
                continue  # non-cycles are commutators
            out[self.index[k]] = c
        return out


def commutator_space(gb: GroebnerBasis):
    """Columns (normal cycles) and the generator list of commutator vectors."""
    b = gb.basis()
    sp = gb.space
    cols = [w for w in b.all_words() if key_source(sp, w) == key_target(sp, w)]
    cols.sort(key=order_key)
    space = _Space(gb, cols, {w: i for i, w in enumerate(cols)}, gb.is_homogeneous())
    rows = []
    for w in b.all_words():
        s, t = key_source(sp, w), key_target(sp, w)
        for l in range(len(sp.letters)):
            if sp.src[l] != t or sp.tgt[l] != s:
                continue
            ml = gb.times_letter({w: 1}, l)
            lm = gb.word_nf((l,) + (w if type(w) is tuple else ()))
            diff = dict(ml)
            mod = gb.domain.modulus
            for k, c in lm.items():
                v = diff.get(k, 0) - c
                if mod:
                    v %= mod
                if v:
                    diff[k] = v
                else:
                    diff.pop(k, None)
            vec = space.vector(diff)
            if vec:
                rows.append((key_degree(w) + 1, vec))
    return space, rows


@dataclass
class HH0Report:
    domain: object
    graded_dims: dict  # degree -> dim (fields) or degree -> (rank, {p: count})
    method: str
    total: int = 0
    filtered: bool = False  # True when degrees are a non-canonical length filtration
    torsion_exponents: dict = field(default_factory=dict)  # degree -> [invariant factors > 1]
    extra: dict = field(default_factory=dict)

    def positive_part_vanishes(self):
        for d, v in self.graded_dims.items():
            if d == 0:
                continue
            if isinstance(v, tuple):
                if v[0] or any(v[1].values()):
                    return False
            elif v:
                return False
        return True

    def table(self):
        lines = ["degree | dim/rank | torsion"]
        for d in sorted(self.graded_dims):
            v = self.graded_dims[d]
            if isinstance(v, tuple):
                rank, tors = v
                ex = self.torsion_exponents.get(d)
                if ex:
                    tstr = " + ".join(f"Z/{e}" for e in ex)
                else:
                    tstr = " + ".join(f"(Z/{p}^>=1)^{c}" for p, c in sorted(tors.items()) if c) or "-"
                lines.append(f"{d} | {rank} | {tstr}")
            else:
                lines.append(f"{d} | {v} | -")
        label = "total (filtration is non-canonical)" if self.filtered else "total"
        lines.append(f"{label} | {self.total} |")
        return "\n".join(lines)


class _FieldHH0:
    """Echelon form of the commutator space of a complete basis over a field."""

    def __init__(self, gb):
        if not gb.complete:
            raise GroebnerError("HH0 needs a complete Groebner basis")
        if not gb.domain.is_field:
            raise DomainError("use hh0_integers over Z")
        self.gb = gb
        self.space, rows = commutator_space(gb)
        self.echelon = Echelon(gb.domain.modulus)
        for _, vec in rows:
            self.echelon.add(vec)

    def report(self):
        cols = self.space.columns
        piv = self.echelon.pivots()
        dims = {}
        for i, w in enumerate(cols):
            d = key_degree(w)
            dims.setdefault(d, 0)
            if i not in piv:
                dims[d] += 1
        total = len(cols) - self.echelon.rank
        return HH0Report(
            self.gb.domain,
            dims,
            "field-linear-algebra",
            total,
            filtered=not self.space.graded,
        )

    def is_zero(self, p: NCPoly):
        nf = self.gb.reduce_terms(p.terms)
        return not self.echelon.reduce(self.space.vector(nf))


def _gb_for(pres, domain=None):
    if isinstance(pres, GroebnerBasis):
        return pres
    if domain is not None and domain != pres.domain:
        pres = pres.with_domain(domain)
    return buchberger(pres)


def hh0_field(pres, domain=None) -> HH0Report:
    """Dimensions of HH0 by degree (by length filtration for inhomogeneous relations)."""
    return _FieldHH0(_gb_for(pres, domain)).report()


def _integral_gb(pres):
    if isinstance(pres, GroebnerBasis):
        if pres.domain != ZZ:
            raise DomainError("expected a Groebner basis over Z")
        return pres
    return buchberger(pres.with_domain(ZZ) if pres.domain != ZZ else pres)


def hh0_integers(pres, primes=None, method=None) -> HH0Report:
    """HH0 over Z: free rank and torsion by degree.

    ``method`` is ``"snf"`` (Smith normal form of the integral commutator
    matrix; needs a Groebner basis over Z with unit leading coefficients),
    ``"multi-prime"`` (dim over F_p minus dim over Q; needs ``primes``) or
    None to try the first and fall back to the second.
    """
    if method in (None, "snf"):
        try:
            gb = _integral_gb(pres)
            return _hh0_snf(gb)
        except GroebnerError:
            if method == "snf" or not primes:
                raise
    if not primes:
        raise ValueError("the multi-prime path needs a nonempty prime list")
    base = pres if not isinstance(pres, GroebnerBasis) else None
    if base is None:
        raise ValueError("the multi-prime path needs a presentation")
    q = hh0_field(base.with_domain(QQ))
    per_p = {p: hh0_field(base.with_domain(PrimeField(p))) for p in primes}
    dims = {}
    for d in sorted(set(q.graded_dims) | {d for r in per_p.values() for d in r.graded_dims}):
        rank = q.graded_dims.get(d, 0)
        tors = {p: r.graded_dims.get(d, 0) - rank for p, r in per_p.items()}
        dims[d] = (rank, {p: c for p, c in tors.items() if c})
    return HH0Report(ZZ, dims, "multi-prime", q.total, filtered=q.filtered, extra={"primes": tuple(primes)})


class _IntegerHH0:
    def __init__(self, gb):
        if not gb.complete:
            raise GroebnerError("HH0 needs a complete Groebner basis")
        self.gb = gb
        self.space, self.rows = commutator_space(gb)
        self.lattice = IntegerLattice()
        for _, vec in self.rows:
            self.lattice.add(vec)

    def is_zero(self, p: NCPoly):
        nf = self.gb.reduce_terms(p.terms)
        return self.lattice.contains(self.space.vector(nf))


def _hh0_snf(gb) -> HH0Report:
    h = _IntegerHH0(gb)
    cols = h.space.columns
    graded = h.space.graded
    blocks = {}
    if graded:
        for d, vec in h.rows:
            blocks.setdefault(d, []).append(vec)
        col_deg = {}
        for i, w in enumerate(cols):
            col_deg.setdefault(key_degree(w), []).append(i)
    else:
        blocks = {None: [vec for _, vec in h.rows]}
        col_deg = {None: list(range(len(cols)))}
    dims, exps = {}, {}
    total = 0
    for d, idxs in sorted(col_deg.items(), key=lambda t: (t[0] is not None, t[0] or 0)):
        pos = {c: j for j, c in enumerate(idxs)}
        mat = [[0] * len(idxs) for _ in blocks.get(d, [])]
        for r, vec in zip(mat, blocks.get(d, [])):
            for c, v in vec.items():
                r[pos[c]] = int(v)
        inv = smith_invariants(mat)
        rank = len(idxs) - len(inv)
        tors = [x for x in inv if x > 1]
        counts = {}
        for x in tors:
            for p in _primes_of(x):
                counts[p] = counts.get(p, 0) + 1
        key = d if d is not None else "all"
        dims[key] = (rank, counts)
        if tors:
            exps[key] = tors
        total += rank
    return HH0Report(ZZ, dims, "integral-SNF", total, filtered=not graded, torsion_exponents=exps)


def _primes_of(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def class_in_hh0(p: NCPoly, pres, domain=None):
    """'zero' if p lies in [A,A] + (relations), else 'nonzero'.

    Over Z membership is decided in the integral commutator lattice.
    """
    if p.terms and not p.is_cycle_combination():
        raise ValueError("class_in_hh0 expects a combination of cycles")
    domain = domain or (pres.domain if not isinstance(pres, GroebnerBasis) else pres.domain)
    if domain == ZZ:
        gb = _integral_gb(pres)
        h = _IntegerHH0(gb)
        return "zero" if h.is_zero(p.change_domain(ZZ)) else "nonzero"
    gb = _gb_for(pres, domain)
    h = _FieldHH0(gb)
    return "zero" if h.is_zero(p.change_domain(domain)) else "nonzero"


def frobenius_obstruction(pres, domain=None, report=None) -> bool:
    """True when positive-length HH0 vanishes while the algebra has positive-length elements.

    In that case [A,A] contains the whole positive-length ideal, so no
    nondegenerate trace form can exist.
    """
    gb = _gb_for(pres, domain)
    if report is None:
        report = _FieldHH0(gb).report() if gb.domain.is_field else _hh0_snf(gb)
    has_positive = gb.basis().top_degree >= 1
    return has_positive and report.positive_part_vanishes()
