"""Quivers, doubled quivers, star decompositions and the built-in Dynkin quivers.

Vertices are small integers (the labels of the standard Dynkin pictures) and
arrows are named.  A :class:`DoubledQuiver` carries the total order on its
letters; letter ids are positions in that order, so the degree-lexicographic
comparison of two words is plain tuple comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "Arrow",
    "Quiver",
    "Letter",
    "Alphabet",
    "DoubledQuiver",
    "Arm",
    "StarDecomposition",
    "QuiverError",
    "NotStarShaped",
    "builtin_dynkin",
    "double",
    "star_decompose",
    "dynkin_type",
    "bad_primes",
    "parse_quiver",
    "load_quiver",
    "free_alphabet",
]


class QuiverError(ValueError):
    pass


class NotStarShaped(QuiverError):
    pass


def natural_key(name):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("arrow names must be unique")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise QuiverError(f"arrow {a.name} has an undeclared endpoint")
            if a.name.endswith("*"):
                raise QuiverError(f"arrow name {a.name!r} may not end with '*'")

    def arrow(self, name):
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def has_loops(self):
        return any(a.source == a.target for a in self.arrows)

    def has_multiple_edges(self):
        pairs = [(a.source, a.target) for a in self.arrows]
        return len(set(pairs)) != len(pairs)

    def check_simple(self):
        """Raise unless the quiver has no loops and no double arrows."""
        if self.has_loops():
            raise QuiverError("quiver has a loop")
        if self.has_multiple_edges():
            raise QuiverError("quiver has a double arrow")

    def neighbours(self):
        adj = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        return adj

    def is_connected(self):
        if not self.vertices:
            return True
        adj = self.neighbours()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def __str__(self):
        return self.name or f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


@dataclass(frozen=True)
class Letter:
    """One generator of a path algebra: an arrow of Q or the dual of one."""

    name: str
    source: int
    target: int
    base: int = -1  # index of the underlying arrow in the base quiver
    dual: bool = False


class Alphabet:
    """Vertices plus an ordered list of letters; the ambient space of paths.

    Subclassed by :class:`DoubledQuiver`.  A bare alphabet (see
    :func:`free_alphabet`) is enough for free algebras, where every letter is
    a loop at a single vertex.
    """

    def __init__(self, vertices, letters, name=""):
        self.vertices = tuple(vertices)
        self.letters = tuple(letters)
        self.name = name
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.src = tuple(self.vindex[l.source] for l in self.letters)
        self.tgt = tuple(self.vindex[l.target] for l in self.letters)
        self.by_name = {l.name: i for i, l in enumerate(self.letters)}
        if len(self.by_name) != len(self.letters):
            raise QuiverError("letter names must be unique")

    @property
    def nvertices(self):
        return len(self.vertices)

    def letter_id(self, name):
        return self.by_name[name]

    def is_path(self, word):
        src, tgt = self.src, self.tgt
        return all(tgt[word[k]] == src[word[k + 1]] for k in range(len(word) - 1))

    def word(self, *names):
        """Letter ids for a sequence of letter names, checked to compose."""
        w = tuple(self.by_name[n] for n in names)
        if not self.is_path(w):
            raise QuiverError("letters do not compose: " + " ".join(names))
        return w

    def dual_id(self, i):
        raise QuiverError("this alphabet has no duals")

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Alphabet)
            and type(self) is type(other)
            and self.vertices == other.vertices
            and self.letters == other.letters
        )

    def __hash__(self):
        return hash((self.vertices, self.letters))

    def __repr__(self):
        return f"{type(self).__name__}({self.name or len(self.letters)})"


def free_alphabet(names):
    """One vertex with a loop for each name: paths are words of a free monoid."""
    return Alphabet([0], [Letter(n, 0, 0) for n in names], name="free<" + ",".join(names) + ">")


class DoubledQuiver(Alphabet):
    """Q together with a dual a* for each arrow a, in a fixed total order."""

    def __init__(self, base: Quiver, order=None):
        self.base = base
        primal = [Letter(a.name, a.source, a.target, i, False) for i, a in enumerate(base.arrows)]
        duals = [Letter(a.name + "*", a.target, a.source, i, True) for i, a in enumerate(base.arrows)]
        default = sorted(primal, key=lambda l: natural_key(l.name)) + sorted(
            duals, key=lambda l: natural_key(l.name[:-1])
        )
        letters = _apply_order(default, order)
        super().__init__(base.vertices, letters, name=base.name)
        self.duals = tuple(
            self.by_name[l.name[:-1] if l.dual else l.name + "*"] for l in self.letters
        )

    def dual_id(self, i):
        return self.duals[i]

    def arrow_letter(self, name):
        """Letter id of the primal arrow ``name``."""
        return self.by_name[name]

    @property
    def order(self):
        return tuple(l.name for l in self.letters)

    def __eq__(self, other):
        return isinstance(other, DoubledQuiver) and self.base == other.base and self.order == other.order

    def __hash__(self):
        return hash((self.base, self.order))


def _apply_order(default, order):
    """Reorder letters so that those named in ``order`` appear in that order.

    The named letters keep the slots they occupy in the default order; only
    their relative order changes.  Unnamed letters stay where they are.
    """
    if not order:
        return default
    names = [l.name for l in default]
    order = list(order)
    unknown = [n for n in order if n not in names]
    if unknown:
        raise QuiverError("unknown letters in order: " + ", ".join(unknown))
    if len(set(order)) != len(order):
        raise QuiverError("letter repeated in order")
    if len(order) == len(default):
        return [default[names.index(n)] for n in order]
    slots = sorted(names.index(n) for n in order)
    out = list(default)
    for slot, n in zip(slots, order):
        out[slot] = default[names.index(n)]
    return out


def double(q: Quiver, order=None) -> DoubledQuiver:
    return DoubledQuiver(q, order)


# ---------------------------------------------------------------------------
# built-in Dynkin quivers, labelled as in the standard picture: every arrow of
# D and E points towards vertex 3.

_E_ARROWS = [
    ("a", 4, 3),
    ("b", 2, 3),
    ("c", 5, 3),
    ("d", 1, 2),
    ("e", 6, 5),
    ("f", 7, 6),
    ("g", 8, 7),
]


def builtin_dynkin(family: str, n: int) -> Quiver:
    family = family.upper()
    if family == "A":
        if n < 1:
            raise QuiverError("A_n needs n >= 1")
        arrows = [Arrow(f"a_{i}", i, i + 1) for i in range(1, n)]
        return Quiver(range(1, n + 1), arrows, name=f"A{n}")
    if family == "D":
        if n < 4:
            raise QuiverError("D_n needs n >= 4")
        arrows = [Arrow("a", 1, 3), Arrow("b", 2, 3)]
        arrows += [Arrow(f"c_{i}", i + 3, i + 2) for i in range(1, n - 2)]
        return Quiver(range(1, n + 1), arrows, name=f"D{n}")
    if family == "E":
        if n not in (6, 7, 8):
            raise QuiverError("E_n needs n in {6, 7, 8}")
        arrows = [Arrow(*t) for t in _E_ARROWS[: n - 1]]
        return Quiver(range(1, n + 1), arrows, name=f"E{n}")
    raise QuiverError(f"unknown Dynkin family {family!r}")


def parse_builtin(spec: str) -> Quiver:
    m = re.fullmatch(r"\s*(?:builtin:)?([ADEade])_?(\d+)\s*", spec)
    if not m:
        raise QuiverError(f"bad built-in quiver name {spec!r}")
    return builtin_dynkin(m.group(1), int(m.group(2)))


# ---------------------------------------------------------------------------
# star decomposition


@dataclass(frozen=True)
class Arm:
    """A type-A chain hanging off the centre.

    ``vertices`` runs from the vertex next to the centre outwards; ``arrows``
    are the base-quiver arrow names in the same order, so ``arrows[0]`` is the
    arrow touching the centre.
    """

    vertices: tuple
    arrows: tuple
    inward: bool

    @property
    def length(self):
        return len(self.arrows)


@dataclass(frozen=True)
class StarDecomposition:
    quiver: Quiver
    central: int
    arms: tuple = field(default_factory=tuple)

    @property
    def arm_lengths(self):
        return tuple(a.length for a in self.arms)

    @property
    def inward(self):
        return all(a.inward for a in self.arms)

    def arm_of(self, arrow_name):
        for arm in self.arms:
            if arrow_name in arm.arrows:
                return arm
        raise KeyError(arrow_name)


def star_decompose(q: Quiver, center=None) -> StarDecomposition:
    """Split a connected tree-shaped quiver into arms around one vertex.

    Arms are listed in the natural order of their central arrows' names.
    Raises :class:`NotStarShaped` for cycles, two branch points, loops or
    disconnected input.
    """
    if q.has_loops() or q.has_multiple_edges():
        raise NotStarShaped("quiver has loops or multiple edges")
    if not q.is_connected():
        raise NotStarShaped("quiver is not connected")
    if len(q.arrows) != len(q.vertices) - 1:
        raise NotStarShaped("underlying graph contains a cycle")
    adj = q.neighbours()
    branch = [v for v in q.vertices if len(adj[v]) >= 3]
    if len(branch) > 1:
        raise NotStarShaped(f"more than one branch vertex: {branch}")
    if center is None:
        if branch:
            center = branch[0]
        elif len(q.vertices) == 1:
            center = q.vertices[0]
        else:
            ends = [v for v in q.vertices if len(adj[v]) == 1]
            # prefer the end every arrow points towards (vertex n of A_n)
            sinks = [v for v in ends if all(a.source != v for a in q.arrows)]
            cand = [v for v in sinks if _all_inward(q, v)]
            center = max(cand) if cand else max(ends)
    elif branch and center != branch[0]:
        raise NotStarShaped(f"vertex {center} is not the branch vertex {branch[0]}")
    elif not branch and len(adj[center]) > 1 and len(q.vertices) > 1:
        # a chain may be split at an interior vertex into two arms; allowed
        pass

    by_pair = {}
    for a in q.arrows:
        by_pair[frozenset((a.source, a.target))] = a
    arms = []
    for nb in sorted(adj[center]):
        verts, names, inward = [], [], True
        prev, cur = center, nb
        while True:
            a = by_pair[frozenset((prev, cur))]
            verts.append(cur)
            names.append(a.name)
            inward = inward and a.target == prev
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
        arms.append(Arm(tuple(verts), tuple(names), inward))
    arms.sort(key=lambda arm: natural_key(arm.arrows[0]))
    return StarDecomposition(q, center, tuple(arms))


def _all_inward(q, v):
    try:
        sd = star_decompose(q, center=v)
    except NotStarShaped:
        return False
    return sd.inward


def dynkin_type(q: Quiver):
    """('A', n), ('D', n) or ('E', n) from the underlying graph, else raise."""
    try:
        sd = star_decompose(q)
    except NotStarShaped as exc:
        raise QuiverError(f"{q} is not a Dynkin quiver") from exc
    n = len(q.vertices)
    lengths = sorted(sd.arm_lengths)
    if len(lengths) <= 2:
        return ("A", n)
    if len(lengths) == 3:
        if lengths[:2] == [1, 1]:
            return ("D", n)
        if lengths[0] == 1 and lengths[1] == 2 and lengths[2] in (2, 3, 4):
            return ("E", n)
    raise QuiverError(f"{q} is not a Dynkin quiver (arm lengths {lengths})")


def bad_primes(q: Quiver) -> frozenset:
    family, n = dynkin_type(q)
    if family == "A":
        return frozenset()
    if family == "D":
        return frozenset({2})
    if n in (6, 7):
        return frozenset({2, 3})
    return frozenset({2, 3, 5})


# ---------------------------------------------------------------------------
# text format


def parse_quiver(text: str, name=""):
    """Parse the line format; returns ``(quiver, order)``.

    ``order`` is the list of letter names given on ``order`` lines (joined), or
    ``None`` when no order line is present.
    """
    vertices, arrows, order = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        try:
            if kw == "vertex":
                vertices.extend(int(p) for p in parts[1:])
            elif kw == "arrow":
                if len(parts) != 4:
                    raise QuiverError("expected: arrow <name> <source> <target>")
                arrows.append(Arrow(parts[1], int(parts[2]), int(parts[3])))
            elif kw == "order":
                toks = [t for t in re.split(r"\s*<\s*", line[len("order"):].strip()) if t]
                order.extend(toks)
            elif kw == "builtin":
                q = parse_builtin(parts[1])
                vertices.extend(q.vertices)
                arrows.extend(q.arrows)
                name = name or q.name
            else:
                raise QuiverError(f"unknown keyword {kw!r}")
        except ValueError as exc:
            raise QuiverError(f"line {lineno}: {exc}") from exc
    return Quiver(vertices, arrows, name=name), (order or None)


def load_quiver(spec: str):
    """``builtin:D4`` or a path to a quiver file; returns ``(quiver, order)``."""
    if spec.startswith("builtin:"):
        return parse_builtin(spec), None
    with open(spec) as fh:
        return parse_quiver(fh.read(), name=spec)


def format_quiver(q: Quiver, order=None):
    lines = [f"vertex {v}" for v in q.vertices]
    lines += [f"arrow {a.name} {a.source} {a.target}" for a in q.arrows]
    if order:
        lines.append("order " + " < ".join(order))
    return "\n".join(lines) + "\n"
