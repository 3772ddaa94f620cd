"""Hypothesis properties; about 1.2e4 generated cases in total."""

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import invariant_factors

from preprojective.algebra import NCPoly, format_poly, geometric_inverse, parse, peirce
from preprojective.domains import GF, QQ
from preprojective.groebner import buchberger
from preprojective.hh0 import CyclicClass, minimal_rotation, smith_normal_form
from preprojective.morphism import apply, paper_iso
from preprojective.presentation import build_presentation
from preprojective.quiver import builtin_dynkin, double

D4 = double(builtin_dynkin("D", 4))
E6 = double(builtin_dynkin("E", 6))
GB_D4 = buchberger(build_presentation(builtin_dynkin("D", 4), "add"))
GB_E6_F7 = buchberger(build_presentation(builtin_dynkin("E", 6), "add", GF(7)))
LAMBDA_D5 = buchberger(build_presentation(builtin_dynkin("D", 5), "mult"))
E6_MAP = paper_iso("E6").images
F7 = GF(7)


def _by_src(space):
    out = {}
    for l in range(len(space.letters)):
        out.setdefault(space.src[l], []).append(l)
    return out


def paths(space, max_len=5, start=None):
    by_src = _by_src(space)

    def build(args):
        v, steps = args
        if start is not None:
            v = space.vindex[start]
        v0 = v
        w = []
        for s in steps:
            nxt = by_src.get(v)
            if not nxt:
                break
            l = nxt[s % len(nxt)]
            w.append(l)
            v = space.tgt[l]
        return tuple(w) if w else ~v0

    return st.tuples(st.integers(0, space.nvertices - 1), st.lists(st.integers(0, 5), max_size=max_len)).map(build)


def coeffs(domain):
    if domain is QQ:
        return st.fractions(min_value=-4, max_value=4, max_denominator=4).map(lambda f: domain.coerce(f"{f.numerator}/{f.denominator}"))
    return st.integers(-10, 10).map(domain.coerce)


def polys(space, domain=QQ, max_terms=4, max_len=5, start=None):
    term = st.tuples(paths(space, max_len, start), coeffs(domain))
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((NCPoly(space, domain, {k: c}) for k, c in ts), NCPoly.zero(space, domain))
    )


@settings(max_examples=1000)
@given(polys(D4), polys(D4), polys(D4))
def test_associativity(p, q, r):
    assert (p * q) * r == p * (q * r)


@settings(max_examples=1000)
@given(polys(D4), polys(D4), polys(D4))
def test_distributivity(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (q + r) * p == q * p + r * p


@settings(max_examples=1000)
@given(polys(E6, F7))
def test_peirce_decomposition(p):
    total = NCPoly.zero(E6, F7)
    for i in E6.vertices:
        for j in E6.vertices:
            piece = peirce(p, i, j)
            assert NCPoly.idempotent(E6, i, F7) * piece * NCPoly.idempotent(E6, j, F7) == piece
            total = total + piece
    assert total == p


@settings(max_examples=1000)
@given(polys(E6, F7, max_len=8), polys(E6, F7, max_len=8), coeffs(F7))
def test_normal_form_linear(p, q, c):
    nf = GB_E6_F7.normal_form
    assert nf(p.scale(c) + q) == nf(p).scale(c) + nf(q)


@settings(max_examples=1000)
@given(polys(D4, max_len=7))
def test_normal_form_idempotent_and_normal(p):
    r = GB_D4.normal_form(p)
    assert GB_D4.normal_form(r) == r
    assert all(GB_D4.is_normal(k) for k in r.terms)


@settings(max_examples=800)
@given(polys(D4, max_len=4), polys(D4, max_len=4))
def test_normal_form_multiplicative(p, q):
    nf = GB_D4.normal_form
    assert nf(p * q) == nf(nf(p) * nf(q))


@settings(max_examples=1000)
@given(polys(LAMBDA_D5.space, max_len=10))
def test_heap_and_trie_reduction_agree(p):
    assert LAMBDA_D5.normal_form_heap(p) == LAMBDA_D5.normal_form(p)


@settings(max_examples=300)
@given(polys(E6, max_terms=3, max_len=3), polys(E6, max_terms=3, max_len=3))
def test_apply_is_multiplicative(p, q):
    assert apply(E6_MAP, p * q) == apply(E6_MAP, p) * apply(E6_MAP, q)
    assert apply(E6_MAP, p + q) == apply(E6_MAP, p) + apply(E6_MAP, q)


@settings(max_examples=500)
@given(st.lists(st.tuples(st.sampled_from(["a", "b", "c_1"]), coeffs(QQ)), min_size=1, max_size=3), st.integers(0, 4))
def test_geometric_inverse_defect(parts, bound):
    x = NCPoly.zero(D4, QQ)
    for name, c in parts:
        x = x + parse(f"{name}* * {name}", D4, QQ).scale(c)
    one = NCPoly.one(D4, QQ)
    g = geometric_inverse(x, bound)
    for defect in (g * (one + x) - one, (one + x) * g - one):
        assert not defect or defect.min_degree() > 2 * bound


@settings(max_examples=1000)
@given(polys(D4))
def test_format_parse_round_trip(p):
    assert parse(format_poly(p) or "0", D4, QQ) == p


@settings(max_examples=1500)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=12))
def test_minimal_rotation_is_least(w):
    w = tuple(w)
    k = minimal_rotation(w)
    assert w[k:] + w[:k] == min(w[i:] + w[:i] for i in range(len(w)))


@settings(max_examples=1000)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=10), st.integers(0, 20))
def test_cyclic_class_rotation_invariant(w, shift):
    w = tuple(w)
    s = shift % len(w)
    assert CyclicClass.of(w) == CyclicClass.of(w[s:] + w[:s])
    assert w in CyclicClass.of(w).rotations()


@settings(max_examples=300)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-8, 8), min_size=n, max_size=n), min_size=1, max_size=4)))
def test_smith_matches_sympy(rows):
    ours = [d for d in smith_normal_form(rows) if d]
    theirs = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=SZZ) if d]
    assert ours == theirs


@settings(max_examples=1000)
@given(paths(E6, max_len=14))
def test_normal_words_are_subword_closed(w):
    gb = GB_E6_F7
    if type(w) is int or not gb.is_normal(w):
        return
    for i in range(len(w)):
        for j in range(i + 1, len(w) + 1):
            assert gb.is_normal(w[i:j])
