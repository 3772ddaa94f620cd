"""Algebra maps given on generators, their structural predicates, and descent checks."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from gmpy2 import mpq

from .algebra import NCPoly, ParseError, add_into, format_poly, key_degree, mul_dicts, parse
from .domains import QQ, DomainError, prime_factors
from .groebner import GroebnerBasis
from .presentation import Presentation, greek_macros, multiplicative_relations
from .quiver import DoubledQuiver, NotStarShaped, bad_primes, builtin_dynkin, double, star_decompose

__all__ = [
    "GeneratorImages",
    "PaperIsoTable",
    "DescentCertificate",
    "MorphismError",
    "apply",
    "apply_reduced",
    "is_vertex_preserving",
    "is_decomposition_preserving",
    "is_triangular",
    "is_unitriangular",
    "leading_coefficients",
    "rescale_to_unitriangular",
    "verify_descends",
    "paper_iso",
    "paper_iso_names",
    "denominator_primes",
    "parse_map",
    "format_map",
    "d_series_table",
]


class MorphismError(ValueError):
    pass


@dataclass
class GeneratorImages:
    """An algebra map on a path algebra, fixed by vertex and letter images.

    ``images`` maps letter names of the source to polynomials over the
    target; letters without an entry go to themselves (which requires the
    target to have a letter of that name).
    """

    source: DoubledQuiver
    target: DoubledQuiver
    vertex_map: dict
    images: dict
    domain: object = QQ
    name: str = ""

    def __post_init__(self):
        vm = {v: self.vertex_map.get(v, v) for v in self.source.vertices}
        if sorted(vm.values()) != sorted(self.target.vertices):
            raise MorphismError("vertex images do not form a bijection")
        self.vertex_map = vm
        for name in self.images:
            if name not in self.source.by_name:
                raise MorphismError(f"unknown letter {name!r}")

    @classmethod
    def identity(cls, dq, domain=QQ, name="identity"):
        return cls(dq, dq, {}, {}, domain, name)

    def image(self, letter_id) -> NCPoly:
        name = self.source.letters[letter_id].name
        img = self.images.get(name)
        if img is not None:
            return img
        if name not in self.target.by_name:
            raise MorphismError(f"letter {name!r} has no image")
        return NCPoly.letter(self.target, name, self.domain)

    def letter_images(self):
        return {l.name: self.image(i) for i, l in enumerate(self.source.letters)}

    def with_domain(self, domain):
        return GeneratorImages(
            self.source,
            self.target,
            dict(self.vertex_map),
            {k: v.change_domain(domain) for k, v in self.images.items()},
            domain,
            self.name,
        )


def apply(m: GeneratorImages, p: NCPoly, truncation=None) -> NCPoly:
    """The algebra-map extension of ``m`` applied to ``p`` in the free path algebra.

    With ``truncation`` every intermediate product drops paths longer than
    that, which is only meaningful when the target vanishes there.
    """
    tgt = m.target
    out = NCPoly.zero(tgt, m.domain)
    cache = {}
    for k, c in p.terms.items():
        if type(k) is int:
            v = m.vertex_map[p.space.vertices[~k]]
            term = NCPoly.idempotent(tgt, v, m.domain)
        else:
            term = None
            for l in k:
                img = cache.get(l)
                if img is None:
                    img = cache[l] = m.image(l)
                if term is None:
                    term = img
                else:
                    term = NCPoly(tgt, m.domain, mul_dicts(tgt, term.terms, img.terms, m.domain.modulus, truncation), clean=False)
                if truncation is not None:
                    term = term.truncate(truncation)
        out = out + term.scale(c)
    return out


def apply_reduced(m: GeneratorImages, p: NCPoly, gb: GroebnerBasis, truncation=None) -> NCPoly:
    """Normal form of apply(m, p), computed inside the quotient by ``gb``."""
    if gb.space != m.target:
        raise MorphismError("Groebner basis lives over a different quiver")
    dom = gb.domain
    imgs = {}
    out = {}
    mod = dom.modulus
    for k, c in p.terms.items():
        c = dom.coerce(c) if mod else c
        if type(k) is int:
            v = m.vertex_map[p.space.vertices[~k]]
            part = {~m.target.vindex[v]: 1}
        else:
            part = None
            for l in k:
                img = imgs.get(l)
                if img is None:
                    img = imgs[l] = gb.reduce_terms(m.image(l).change_domain(dom).terms)
                part = dict(img) if part is None else gb.mul_nf(part, img, truncation)
                if not part:
                    break
        for w, cw in (part or {}).items():
            add_into(out, w, c * cw, mod)
    return NCPoly(m.target, dom, out, clean=False)


# ---------------------------------------------------------------------------
# predicates


def is_vertex_preserving(m: GeneratorImages) -> bool:
    return all(m.vertex_map[v] == v for v in m.source.vertices)


def _reduced_image(m, l, gb):
    img = m.image(l)
    if gb is not None:
        img = gb.normal_form(img.change_domain(gb.domain))
    return img


def is_decomposition_preserving(m: GeneratorImages, gb=None) -> bool:
    src = m.source
    for l, letter in enumerate(src.letters):
        s = m.vertex_map[letter.source]
        t = m.vertex_map[letter.target]
        img = _reduced_image(m, l, gb)
        if img and img.endpoints() != {(m.target.vindex[s], m.target.vindex[t])}:
            return False
    return True


def leading_coefficients(m: GeneratorImages, gb=None):
    """c_a per letter if every image is c_a * a modulo paths of length >= 2, else None."""
    out = {}
    for l, letter in enumerate(m.source.letters):
        img = _reduced_image(m, l, gb)
        if letter.name not in m.target.by_name:
            return None
        own = (m.target.by_name[letter.name],)
        low = {k: c for k, c in img.terms.items() if key_degree(k) <= 1}
        if set(low) != {own}:
            return None
        out[letter.name] = low[own]
    return out


def is_triangular(m: GeneratorImages, gb=None) -> bool:
    """Each letter goes to c_a a plus longer paths, with c_a a unit."""
    lc = leading_coefficients(m, gb)
    if lc is None or not is_vertex_preserving(m):
        return False
    dom = gb.domain if gb is not None else m.domain
    return all(dom.is_unit(c) for c in lc.values())


def is_unitriangular(m: GeneratorImages, gb=None) -> bool:
    lc = leading_coefficients(m, gb)
    return lc is not None and is_vertex_preserving(m) and all(c == 1 for c in lc.values())


def rescale_to_unitriangular(m: GeneratorImages, gb=None) -> GeneratorImages:
    """Postcompose with the automorphism x -> x / c_x of the target.

    Needs c_a c_a* to take one value over the arrows at each vertex, which
    is forced for maps that descend; a violation is reported as an error.
    """
    lc = leading_coefficients(m, gb)
    if lc is None or not is_vertex_preserving(m):
        raise MorphismError("map is not triangular")
    dom = m.domain
    for name, c in lc.items():
        if not dom.is_unit(c):
            raise MorphismError(f"leading coefficient {c} of {name} is not invertible")
    src = m.source
    at_vertex = {}
    for l, letter in enumerate(src.letters):
        if letter.dual:
            continue
        prod = lc[letter.name] * lc[src.letters[src.dual_id(l)].name]
        for v in (letter.source, letter.target):
            at_vertex.setdefault(v, []).append((letter.name, prod))
    for v, vals in at_vertex.items():
        first = vals[0][1]
        for name, val in vals[1:]:
            if val != first:
                raise MorphismError(
                    f"c_a c_a* differs at vertex {v}: {vals[0][0]} gives {first}, {name} gives {val}"
                )
    scale = GeneratorImages(
        m.target,
        m.target,
        {},
        {
            l.name: NCPoly.letter(m.target, l.name, dom).scale(dom.inv(lc[l.name]))
            for l in m.target.letters
            if l.name in lc
        },
        dom,
    )
    images = {l.name: apply(scale, m.image(i)) for i, l in enumerate(src.letters)}
    return GeneratorImages(m.source, m.target, dict(m.vertex_map), images, dom, m.name + "+rescaled")


# ---------------------------------------------------------------------------
# descent


@dataclass
class DescentCertificate:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)  # (vertex, relation text, remainder text)
    truncation: object = None
    sound: bool = True  # False when a truncation below the top degree was forced

    def __bool__(self):
        return self.ok and self.sound

    def summary(self):
        if self:
            return f"descends: {self.checked} relations reduce to zero"
        if not self.sound:
            return "inconclusive: truncation below the top degree of the target"
        lines = [f"does not descend: {len(self.failures)} of {self.checked} relations survive"]
        for v, r, rem in self.failures:
            lines.append(f"  @vertex {v}: {r}  ->  {rem}")
        return "\n".join(lines)


def verify_descends(m: GeneratorImages, source: Presentation, target_gb: GroebnerBasis, truncation="auto"):
    """Check NF(m(r)) = 0 for every relation r of ``source``.

    ``truncation="auto"`` uses the top degree of the target's normal words
    when the target relations are homogeneous (paths beyond it are zero, so
    dropping them early changes nothing); ``None`` disables truncation.
    """
    if not target_gb.complete:
        raise MorphismError("target Groebner basis is not complete")
    top = target_gb.basis().top_degree
    sound = True
    if truncation == "auto":
        truncation = top if target_gb.is_homogeneous() else None
    elif truncation is not None:
        sound = target_gb.is_homogeneous() and truncation >= top
    failures = []
    for v, r in zip(source.vertices, source.relations):
        rem = apply_reduced(m, r.change_domain(target_gb.domain), target_gb, truncation)
        if rem:
            failures.append((v, str(r), str(rem)))
    return DescentCertificate(not failures, len(source.relations), failures, truncation, sound)


def denominator_primes(m: GeneratorImages) -> frozenset:
    out = set()
    for img in m.images.values():
        for c in img.terms.values():
            if m.domain.modulus:
                continue
            out |= prime_factors(mpq(c).denominator)
    return frozenset(out)


# ---------------------------------------------------------------------------
# map files


def _letter_name(dq, name):
    if name in dq.by_name:
        return name
    if name.startswith("d") and name[1:] + "*" in dq.by_name:
        return name[1:] + "*"
    raise MorphismError(f"unknown letter {name!r}")


def parse_map(text, source: DoubledQuiver, target: DoubledQuiver = None, domain=QQ, name=""):
    """Read ``vertex i -> j``, ``define NAME = expr`` and ``arrow x -> expr`` lines.

    Expressions may use alpha, beta, gamma (the central cycles of the target
    when it is star-shaped) and any earlier ``define``.
    """
    target = target or source
    macros = {}
    try:
        macros.update(greek_macros(star_decompose(target.base), target, domain))
    except (NotStarShaped, AttributeError):
        pass
    vmap, images = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("vertex"):
                m = re.fullmatch(r"vertex\s+(-?\d+)\s*->\s*(-?\d+)", line)
                if not m:
                    raise MorphismError("expected: vertex <i> -> <j>")
                vmap[int(m.group(1))] = int(m.group(2))
            elif line.startswith("define"):
                m = re.fullmatch(r"define\s+([A-Za-z][A-Za-z0-9_]*)\s*=\s*(.+)", line)
                if not m:
                    raise MorphismError("expected: define <name> = <expr>")
                macros[m.group(1)] = parse(m.group(2), target, domain, macros)
            elif line.startswith("arrow"):
                m = re.fullmatch(r"arrow\s+([A-Za-z][A-Za-z0-9_]*\*?)\s*->\s*(.+)", line)
                if not m:
                    raise MorphismError("expected: arrow <name> -> <expr>")
                images[_letter_name(source, m.group(1))] = parse(m.group(2), target, domain, macros)
            else:
                raise MorphismError(f"unknown keyword in {line!r}")
        except (ParseError, MorphismError, DomainError) as exc:
            raise MorphismError(f"line {lineno}: {exc}") from exc
    return GeneratorImages(source, target, vmap, images, domain, name)


def format_map(m: GeneratorImages) -> str:
    lines = [f"vertex {v} -> {w}" for v, w in m.vertex_map.items() if v != w]
    for l in m.source.letters:
        if l.name in m.images:
            lines.append(f"arrow {l.name} -> {format_poly(m.images[l.name])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the explicit isomorphisms


@dataclass
class PaperIsoTable:
    name: str
    quiver: object
    images: GeneratorImages
    bad_primes: frozenset

    @property
    def doubled(self):
        return self.images.source


def d_series_table(n, domain=QQ) -> GeneratorImages:
    """a -> a p(gamma), a* -> q(gamma) a*, c_i -> c_i p(-gamma_i); others fixed.

    p(x) = sum_{i=0}^{n-3} (-x/2)^i and q(x) = 1 + x/2.
    """
    dq = double(builtin_dynkin("D", n))
    one = NCPoly.one(dq, domain)
    half = domain.coerce(mpq(1, 2))

    def cyc(name):
        return NCPoly.word(dq, dq.word(name + "*", name), domain)

    def p_of(x):
        total, power = one, one
        for _ in range(n - 3):
            power = power * x.scale(-half)
            total = total + power
        return total

    gamma = cyc("c_1")
    a, a_ = NCPoly.letter(dq, "a", domain), NCPoly.letter(dq, "a*", domain)
    images = {"a": a * p_of(gamma), "a*": (one + gamma.scale(half)) * a_}
    for i in range(1, n - 2):
        ci = f"c_{i}"
        images[ci] = NCPoly.letter(dq, ci, domain) * p_of(-cyc(ci))
    return GeneratorImages(dq, dq, {}, images, domain, f"D{n}")


_FILES = {
    "D4-shaw": "d4_shaw.map",
    "E6": "e6.map",
    "E7": "e7.map",
    "E8": "e8.map",
}


def paper_iso_names():
    return ["D(n)", *_FILES]


def _normalise_name(name):
    s = name.strip()
    m = re.fullmatch(r"D\(?(\d+)\)?", s)
    if m:
        return "D", int(m.group(1))
    if s.upper() in ("E6", "E7", "E8"):
        return s.upper(), None
    if s.lower() in ("d4-shaw", "shaw"):
        return "D4-shaw", None
    raise MorphismError(f"unknown isomorphism table {name!r}")


def load_map_resource(filename, dq, domain=QQ, name=""):
    text = resources.files("preprojective.data").joinpath(filename).read_text()
    return parse_map(text, dq, dq, domain, name)


def paper_iso(name, spelling="display", domain=QQ) -> PaperIsoTable:
    """The explicit generator tables: ``D(n)``/``Dn`` for n >= 4, ``D4-shaw``, ``E6``, ``E7``, ``E8``.

    For E6-E8 ``spelling="dprefix"`` loads a second transcription written
    with ``da``-style duals and named intermediate factors; both must define
    the same map.
    """
    key, n = _normalise_name(name)
    if key == "D":
        if n < 4:
            raise MorphismError("D(n) needs n >= 4")
        m = d_series_table(n, domain)
        q = m.source.base
        return PaperIsoTable(f"D{n}", q, m, bad_primes(q))
    if key == "D4-shaw":
        q = builtin_dynkin("D", 4)
        m = load_map_resource(_FILES[key], double(q), domain, key)
        return PaperIsoTable(key, q, m, bad_primes(q))
    q = builtin_dynkin("E", int(key[1]))
    fname = _FILES[key]
    if spelling == "dprefix":
        fname = fname.replace(".map", "_dprefix.map")
    elif spelling != "display":
        raise MorphismError(f"unknown spelling {spelling!r}")
    m = load_map_resource(fname, double(q), domain, key)
    return PaperIsoTable(key, q, m, bad_primes(q))
