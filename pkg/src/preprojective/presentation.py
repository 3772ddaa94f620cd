"""Defining relations of additive and multiplicative preprojective algebras.

Relations are kept split by vertex: the relation attached to vertex ``i`` is
``e_i r e_i``.  For a star-shaped quiver the inverses in the multiplicative
relation are expanded as finite geometric series, which is exact because
each arm cycle is nilpotent once the arm relations hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import NCPoly, geometric_inverse, parse
from .domains import QQ
from .quiver import DoubledQuiver, NotStarShaped, double, star_decompose

__all__ = [
    "Presentation",
    "additive_relations",
    "multiplicative_relations",
    "partial_relations",
    "nilpotency_bound",
    "arm_cycles",
    "greek_macros",
    "build_presentation",
    "format_presentation",
    "parse_presentation",
]

_GREEK = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta")


@dataclass(frozen=True)
class Presentation:
    doubled: DoubledQuiver
    relations: tuple
    vertices: tuple  # vertex carrying each relation
    domain: object = QQ
    kind: str = "custom"
    partial: object = None  # the vertex whose relation was dropped, if any
    macros: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.relations) != len(self.vertices):
            raise ValueError("one vertex label per relation")

    def relation_at(self, v):
        for w, r in zip(self.vertices, self.relations):
            if w == v:
                return r
        return None

    def with_domain(self, domain):
        rels = [r.change_domain(domain) for r in self.relations]
        keep = [(v, r) for v, r in zip(self.vertices, rels) if r]
        macros = {k: m.change_domain(domain) for k, m in self.macros.items()}
        return Presentation(
            self.doubled,
            [r for _, r in keep],
            [v for v, _ in keep],
            domain,
            self.kind,
            self.partial,
            macros,
        )

    def __len__(self):
        return len(self.relations)

    def __str__(self):
        return format_presentation(self)


def _split(dq, domain, r, kind, macros=None):
    verts, rels = [], []
    for v in dq.vertices:
        piece = r.peirce(v, v)
        if piece:
            verts.append(v)
            rels.append(piece)
    return Presentation(dq, rels, verts, domain, kind, None, macros or {})


def _r_add(dq, domain):
    r = NCPoly.zero(dq, domain)
    for l, letter in enumerate(dq.letters):
        if letter.dual:
            continue
        d = dq.dual_id(l)
        r = r + NCPoly(dq, domain, {(l, d): 1, (d, l): -1})
    return r


def additive_relations(dq: DoubledQuiver, domain=QQ) -> Presentation:
    """e_i (sum_a a a* - a* a) e_i for every vertex i where it is nonzero."""
    macros = {}
    try:
        macros = greek_macros(star_decompose(dq.base), dq, domain)
    except NotStarShaped:
        pass
    return _split(dq, domain, _r_add(dq, domain), "additive", macros)


def arm_cycles(star, dq, domain=QQ):
    """Per arm: (cycle at the centre through the arm's first arrow, inward flag)."""
    out = []
    for arm in star.arms:
        name = arm.arrows[0]
        a = dq.by_name[name]
        d = dq.dual_id(a)
        arrow = dq.base.arrow(name)
        inward = arrow.target == star.central
        word = (d, a) if inward else (a, d)
        out.append((NCPoly(dq, domain, {word: 1}, clean=False), inward))
    return out


def greek_macros(star, dq, domain=QQ):
    """alpha, beta, gamma, ... for the central cycles, in arm order."""
    return {g: c for g, (c, _) in zip(_GREEK, arm_cycles(star, dq, domain))}


def nilpotency_bound(star, arrow) -> int:
    """Length L of the arm whose central arrow is ``arrow``.

    In the partial algebra at the centre the central cycle x through that
    arrow satisfies x^(L+1) = 0, so the geometric series for (1+x)^-1 may be
    cut after x^L.
    """
    for arm in star.arms:
        if arm.arrows[0] == arrow:
            return arm.length
    raise ValueError(f"arrow {arrow!r} does not touch the central vertex {star.central}")


def multiplicative_relations(star, dq: DoubledQuiver = None, domain=QQ) -> Presentation:
    """Relations of Lambda(Q) for a star-shaped Q, localization expanded away.

    Off the centre the relation is the additive one.  At the centre the
    relation prod_k F_k = 1 (F_k = (1+x_k)^-1 for an inward arm, 1+x_k for an
    outward one) is rewritten as G_m ... G_2 - F_1 with G_k = F_k^-1.  For the
    D and E quivers this is alpha + beta + gamma + gamma*beta.
    """
    if dq is None:
        dq = double(star.quiver)
    elif star is None:
        star = star_decompose(dq.base)
    if star is None:
        raise NotStarShaped("a star decomposition is required")
    macros = greek_macros(star, dq, domain)
    add = additive_relations(dq, domain)
    if len(star.arms) < 2:
        # (1+x)^-1 - 1 = -x (1+x)^-1 generates the same ideal as x
        return Presentation(dq, add.relations, add.vertices, domain, "multiplicative", None, macros)
    cycles = arm_cycles(star, dq, domain)
    bounds = [arm.length for arm in star.arms]
    one = NCPoly.one(dq, domain)
    c = dq.vindex[star.central]
    e_c = NCPoly(dq, domain, {~c: 1}, clean=False)

    def factor(k):
        x, inward = cycles[k]
        return geometric_inverse(x, bounds[k]) if inward else one + x

    def inverse_factor(k):
        x, inward = cycles[k]
        return one + x if inward else geometric_inverse(x, bounds[k])

    lhs = e_c
    for k in range(len(cycles) - 1, 0, -1):
        lhs = lhs * inverse_factor(k)
    central = lhs - e_c * factor(0)
    rels, verts = [], []
    for v, r in zip(add.vertices, add.relations):
        if v != star.central:
            rels.append(r)
            verts.append(v)
    if central:
        verts.append(star.central)
        rels.append(central)
    order = {v: i for i, v in enumerate(dq.vertices)}
    pairs = sorted(zip(verts, rels), key=lambda t: order[t[0]])
    return Presentation(
        dq, [r for _, r in pairs], [v for v, _ in pairs], domain, "multiplicative", None, macros
    )


def partial_relations(base: Presentation, w) -> Presentation:
    """The same presentation with the relation at vertex ``w`` dropped."""
    if w not in base.doubled.vindex:
        raise ValueError(f"unknown vertex {w}")
    keep = [(v, r) for v, r in zip(base.vertices, base.relations) if v != w]
    return Presentation(
        base.doubled,
        [r for _, r in keep],
        [v for v, _ in keep],
        base.domain,
        f"partial({base.kind},{w})",
        w,
        base.macros,
    )


def build_presentation(quiver, kind="add", domain=QQ, order=None) -> Presentation:
    """Selector used by the command line: ``add``, ``mult`` or ``partial:<v>``.

    ``partial:<v>`` drops vertex v's relation from the additive presentation;
    ``partial-mult:<v>`` does the same for the multiplicative one.
    """
    dq = quiver if isinstance(quiver, DoubledQuiver) else double(quiver, order)
    if kind in ("add", "additive"):
        return additive_relations(dq, domain)
    if kind in ("mult", "multiplicative"):
        return multiplicative_relations(star_decompose(dq.base), dq, domain)
    if kind.startswith("partial-mult:"):
        v = int(kind.split(":", 1)[1])
        return partial_relations(multiplicative_relations(star_decompose(dq.base), dq, domain), v)
    if kind.startswith("partial:"):
        v = int(kind.split(":", 1)[1])
        return partial_relations(additive_relations(dq, domain), v)
    raise ValueError(f"unknown relation kind {kind!r}")


def format_presentation(pres: Presentation) -> str:
    lines = []
    for v, r in zip(pres.vertices, pres.relations):
        lines.append(f"@vertex {v}")
        lines.append(str(r))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_presentation(text: str, dq: DoubledQuiver, domain=QQ, macros=None) -> Presentation:
    """Inverse of :func:`format_presentation`.

    A relation without a preceding ``@vertex`` line is split by vertex.
    """
    rels, verts = [], []
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@vertex"):
            current = int(line.split()[1])
            continue
        r = parse(line, dq, domain, macros)
        if current is None:
            for v in dq.vertices:
                piece = r.peirce(v, v)
                if piece:
                    verts.append(v)
                    rels.append(piece)
        else:
            verts.append(current)
            rels.append(r)
            current = None
    return Presentation(dq, rels, verts, domain, "custom", None, dict(macros or {}))
