import itertools
from fractions import Fraction

import pytest

from preprojective.acceptance import xy_presentation
from preprojective.algebra import NCPoly, parse
from preprojective.domains import GF, QQ
from preprojective.groebner import (
    GroebnerError,
    InfiniteDimensional,
    buchberger,
    corrected_space_dims,
    enumerate_basis,
    is_member,
    nakayama_permutation,
    normal_form,
)
from preprojective.presentation import Presentation, additive_relations, build_presentation
from preprojective.quiver import builtin_dynkin, double, free_alphabet


def dq_of(fam, n, order=None):
    return double(builtin_dynkin(fam, n), order)


# -- brute-force oracle: graded ideal by linear algebra over Q -----------------


def paths(space, d):
    if d == 0:
        return [~i for i in range(space.nvertices)]
    out = [(l,) for l in range(len(space.letters))]
    for _ in range(d - 1):
        out = [w + (l,) for w in out for l in range(len(space.letters)) if space.src[l] == space.tgt[w[-1]]]
    return out


def rank(rows):
    rows = [dict(r) for r in rows if r]
    r = 0
    pivots = {}
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        while row:
            p = max(row)
            if p not in pivots:
                pivots[p] = row
                r += 1
                break
            base = pivots[p]
            f = row[p] / base[p]
            for k, v in base.items():
                row[k] = row.get(k, 0) - f * v
                if not row[k]:
                    del row[k]
    return r, pivots


def ideal_rows(pres, d):
    sp = pres.doubled
    rows = []
    for r in pres.relations:
        rd = r.min_degree()
        for i in range(0, d - rd + 1):
            for u in paths(sp, i):
                for v in paths(sp, d - rd - i):
                    pu = NCPoly(sp, QQ, {u: 1})
                    pv = NCPoly(sp, QQ, {v: 1})
                    prod = pu * r * pv
                    if prod:
                        rows.append({k: Fraction(int(c.numerator), int(c.denominator)) for k, c in prod.terms.items()})
    return rows


def brute_graded_dim(pres, d):
    return len(paths(pres.doubled, d)) - rank(ideal_rows(pres, d))[0]


def in_span(rows, vec):
    r0 = rank(rows)[0]
    return rank(rows + [vec])[0] == r0


# -- tests ------------------------------------------------------------------------


def test_free_square():
    alph = free_alphabet(["x"])
    x = NCPoly.letter(alph, "x", QQ)
    gb = buchberger(Presentation(alph, [x * x], [0], QQ))
    assert gb.complete
    assert gb.elements() == [x * x]
    b = gb.basis()
    assert b.dimension == 2 and b.graded_dims == {0: 1, 1: 1}


def test_free_algebra_is_infinite():
    alph = free_alphabet(["x", "y"])
    x = NCPoly.letter(alph, "x", QQ)
    gb = buchberger(Presentation(alph, [x * x], [0], QQ), cap=6)
    with pytest.raises(InfiniteDimensional):
        enumerate_basis(gb)


def test_xy_example():
    gb = buchberger(xy_presentation())
    assert gb.complete
    sp = gb.space
    spell = lambda w: "".join(sp.letters[l].name for l in w)
    assert {spell(w) for w in gb.leading_words} == {
        "xx", "yyy", "yxyxyx", "yyxyyx", "yyxyxyyxyy", "yxyxyyxyxy", "yxyyxyxyyxyx",
    }
    assert gb.basis().dimension == 60


def test_a2_normal_words_match_oracle():
    pres = additive_relations(dq_of("A", 2))
    gb = buchberger(pres)
    words = list(gb.basis().all_words())
    assert len(words) == 4
    assert sum(brute_graded_dim(pres, d) for d in range(5)) == 4


def test_d4_graded_dims_match_oracle():
    pres = additive_relations(dq_of("D", 4))
    dims = buchberger(pres).basis().graded_dims
    for d in range(6):
        assert dims.get(d, 0) == brute_graded_dim(pres, d)


def test_e1_not_member():
    dq = dq_of("D", 4)
    gb = buchberger(additive_relations(dq))
    e1 = NCPoly.idempotent(dq, 1)
    assert normal_form(e1, gb) == e1
    assert not is_member(e1, gb)


def test_alpha_beta_not_in_additive_ideal():
    dq = dq_of("D", 4)
    pres = additive_relations(dq)
    gb = buchberger(pres)
    ab = parse("a* * a * b* * b", dq, QQ)
    assert not is_member(ab, gb)
    vec = {k: Fraction(int(c.numerator), int(c.denominator)) for k, c in ab.terms.items()}
    assert not in_span(ideal_rows(pres, 4), vec)


def test_relations_are_members():
    for fam, n in [("D", 5), ("E", 6)]:
        for kind in ("add", "mult"):
            pres = build_presentation(builtin_dynkin(fam, n), kind)
            gb = buchberger(pres)
            assert all(gb.is_member(r) for r in pres.relations)


def test_normal_form_idempotent_and_linear():
    dq = dq_of("D", 5)
    gb = buchberger(additive_relations(dq))
    p = parse("a* * a * c_1* * c_1 + 3*b* * b * a* * a - c_1* * c_1 * c_1* * c_1", dq, QQ)
    q = parse("2*c_1* * c_1 * b* * b + a* * a", dq, QQ)
    nf = gb.normal_form
    assert nf(nf(p)) == nf(p)
    assert nf(p.scale(3) - q) == nf(p).scale(3) - nf(q)
    assert nf(p * q) == nf(nf(p) * nf(q))
    assert gb.normal_form_heap(p) == nf(p)


def test_domain_mismatch():
    dq = dq_of("A", 3)
    gb = buchberger(additive_relations(dq))
    with pytest.raises(Exception):
        gb.normal_form(parse("a_1", dq, GF(3)))


@pytest.mark.parametrize("order_seed", range(8))
def test_dimension_independent_of_letter_order(order_seed):
    names = ["a", "b", "c_1", "a*", "b*", "c_1*"]
    perms = list(itertools.permutations(names))
    order = list(perms[(order_seed * 89) % len(perms)])
    gb = buchberger(additive_relations(dq_of("D", 4, order)))
    assert gb.basis().dimension == 28


@pytest.mark.parametrize("fam,n,dim", [("A", 3, 10), ("A", 5, 35), ("D", 4, 28), ("D", 5, 60), ("E", 6, 156), ("E", 7, 399), ("E", 8, 1240)])
def test_dimensions(fam, n, dim):
    gb = buchberger(additive_relations(dq_of(fam, n)))
    assert gb.complete
    assert gb.basis().dimension == dim


@pytest.mark.parametrize("fam,n,dim", [("D", 4, 28), ("E", 6, 156), ("E", 7, 399)])
def test_mult_same_dimension(fam, n, dim):
    gb = buchberger(build_presentation(builtin_dynkin(fam, n), "mult"))
    assert gb.basis().dimension == dim


def test_base_change_good_prime():
    for fam, n, p in [("D", 5, 3), ("E", 6, 7), ("A", 4, 2)]:
        q = builtin_dynkin(fam, n)
        d0 = buchberger(build_presentation(q, "add")).basis().graded_dims
        dp = buchberger(build_presentation(q, "add", GF(p))).basis().graded_dims
        assert d0 == dp


def test_cap_flags_incomplete():
    gb = buchberger(additive_relations(dq_of("D", 4)), cap=3, adaptive=False)
    assert not gb.complete


def test_basis_subword_closed():
    gb = buchberger(additive_relations(dq_of("E", 6)))
    words = {w for w in gb.basis().all_words() if type(w) is tuple}
    for w in words:
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                assert w[i:j] in words


def test_graded_dims_stop_after_first_zero():
    dims = buchberger(additive_relations(dq_of("E", 7))).basis().graded_dims
    top = max(dims)
    assert all(dims[d] > 0 for d in range(top + 1))


def test_leading_words_interreduced():
    gb = buchberger(additive_relations(dq_of("E", 6)))
    lw = list(gb.leading_words)
    for u in lw:
        for v in lw:
            if u != v:
                assert not any(v[i:i + len(u)] == u for i in range(len(v) - len(u) + 1))


@pytest.mark.parametrize("fam,n,nm", [("E", 7, (120, 61)), ("E", 8, (354, 178))])
def test_corrected_space_dims(fam, n, nm):
    assert corrected_space_dims(buchberger(additive_relations(dq_of(fam, n)))) == nm


def test_nakayama_e6():
    nu = nakayama_permutation(buchberger(additive_relations(dq_of("E", 6))))
    assert nu == {1: 6, 6: 1, 2: 5, 5: 2, 3: 3, 4: 4}


def test_nakayama_needs_a_permutation():
    # Pi(A_2, 2): the only top-degree word is a* a, a cycle at vertex 2
    gb = buchberger(build_presentation(builtin_dynkin("A", 2), "partial:2"))
    with pytest.raises(GroebnerError):
        nakayama_permutation(gb)


@pytest.mark.parametrize("n", range(4, 8))
def test_central_cycle_rewrites_in_lambda_d(n):
    # gamma (1 + gamma)^-1 + alpha + beta + beta alpha vanishes in Lambda(D_n)
    q = builtin_dynkin("D", n)
    pres = build_presentation(q, "mult")
    gb = buchberger(pres)
    P = lambda s: parse(s, pres.doubled, QQ, pres.macros)
    gamma = P("gamma")
    series = NCPoly.zero(pres.doubled, QQ)
    for k in range(1, 2 * n):
        series = series + (gamma ** k).scale((-1) ** (k + 1))
    assert gb.is_member(series + P("alpha + beta + beta*alpha"))
    assert not gb.is_member(series - P("alpha + beta + beta*alpha"))
