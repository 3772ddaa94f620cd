import pytest

from preprojective.algebra import NCPoly, parse
from preprojective.domains import QQ, GF
from preprojective.groebner import buchberger
from preprojective.presentation import (
    additive_relations,
    build_presentation,
    format_presentation,
    multiplicative_relations,
    nilpotency_bound,
    parse_presentation,
    partial_relations,
)
from preprojective.quiver import builtin_dynkin, double, star_decompose


def dq_of(fam, n):
    return double(builtin_dynkin(fam, n))


def rels(pres):
    return dict(zip(pres.vertices, pres.relations))


def test_d4_additive_per_vertex():
    dq = dq_of("D", 4)
    r = rels(additive_relations(dq))
    P = lambda s: parse(s, dq, QQ)
    assert r == {
        1: P("a*a*"),
        2: P("b*b*"),
        4: P("c_1*c_1*"),
        3: P("-(a* * a + b* * b + c_1* * c_1)"),
    }


def test_a1_has_no_relations():
    assert len(additive_relations(dq_of("A", 1))) == 0


def test_a3_partial_at_end():
    dq = dq_of("A", 3)
    p = partial_relations(additive_relations(dq), 3)
    P = lambda s: parse(s, dq, QQ)
    assert list(p.relations) == [P("a_1*a_1*"), P("a_2*a_2* - a_1* * a_1")]
    assert p.partial == 3


def test_partial_d4_centre_keeps_leaves():
    dq = dq_of("D", 4)
    p = partial_relations(additive_relations(dq), 3)
    assert p.vertices == (1, 2, 4)


def test_partial_at_vertex_without_relation():
    dq = dq_of("A", 1)
    base = additive_relations(dq)
    assert partial_relations(base, 1).relations == base.relations


def test_partial_unknown_vertex():
    with pytest.raises(ValueError):
        partial_relations(additive_relations(dq_of("A", 2)), 7)


def test_relations_are_split_and_degree_two_or_more():
    for fam, n in [("A", 4), ("D", 5), ("E", 6), ("E", 7)]:
        dq = dq_of(fam, n)
        for pres in (additive_relations(dq), multiplicative_relations(None, dq)):
            for v, r in zip(pres.vertices, pres.relations):
                assert r.peirce(v, v) == r
                assert r.min_degree() >= 2


@pytest.mark.parametrize("n", range(1, 7))
def test_mult_equals_add_for_chains(n):
    dq = dq_of("A", n)
    assert multiplicative_relations(None, dq).relations == additive_relations(dq).relations


@pytest.mark.parametrize("n", [6, 7, 8])
def test_e_central_relation(n):
    dq = dq_of("E", n)
    m = multiplicative_relations(None, dq)
    c = star_decompose(dq.base).central
    P = lambda s: parse(s, dq, QQ, m.macros)
    assert m.relation_at(c) == P("alpha + beta + gamma + gamma*beta")


def test_off_centre_relations_are_additive():
    dq = dq_of("E", 8)
    a, m = rels(additive_relations(dq)), rels(multiplicative_relations(None, dq))
    centre = star_decompose(dq.base).central
    assert {v: r for v, r in a.items() if v != centre} == {v: r for v, r in m.items() if v != centre}


@pytest.mark.parametrize("n", range(4, 9))
def test_d_central_forms_generate_same_ideal(n):
    dq = dq_of("D", n)
    m = multiplicative_relations(None, dq)
    c = star_decompose(dq.base).central
    P = lambda s: parse(s, dq, QQ, m.macros)
    other = [r for v, r in zip(m.vertices, m.relations) if v != c] + [P("-alpha*beta + alpha + beta + gamma")]
    alt = type(m)(dq, other, [v for v in m.vertices if v != c] + [c], QQ)
    g1, g2 = buchberger(m), buchberger(alt)
    assert g1.complete and g2.complete
    assert all(not g2.normal_form(r) for r in m.relations)
    assert all(not g1.normal_form(r) for r in alt.relations)


@pytest.mark.parametrize("fam,n", [("D", 4), ("D", 6), ("E", 6), ("E", 7), ("E", 8)])
def test_mult_minus_add_lives_in_degree_four(fam, n):
    # the central relation is -r_add up to terms of length >= 4
    dq = dq_of(fam, n)
    a, m = rels(additive_relations(dq)), rels(multiplicative_relations(None, dq))
    c = star_decompose(dq.base).central
    diff = m[c] + a[c]
    assert diff and diff.min_degree() >= 4


def test_partial_mult_equals_partial_add_for_stars():
    for fam, n in [("D", 4), ("D", 7), ("E", 6), ("E", 8)]:
        q = builtin_dynkin(fam, n)
        c = star_decompose(q).central
        pm = build_presentation(q, f"partial-mult:{c}")
        pa = build_presentation(q, f"partial:{c}")
        assert pm.relations == pa.relations


@pytest.mark.parametrize(
    "fam,n,arrow,bound",
    [("D", 4, "a", 1), ("D", 4, "c_1", 1), ("D", 7, "c_1", 4), ("E", 8, "c", 4), ("E", 6, "b", 2)],
)
def test_nilpotency_bound(fam, n, arrow, bound):
    assert nilpotency_bound(star_decompose(builtin_dynkin(fam, n)), arrow) == bound


def test_nilpotency_bound_rejects_far_arrow():
    with pytest.raises(ValueError):
        nilpotency_bound(star_decompose(builtin_dynkin("E", 8)), "g")


@pytest.mark.parametrize("fam,n", [("D", 5), ("E", 6), ("E", 8)])
def test_arm_cycle_nilpotent_in_partial_algebra(fam, n):
    q = builtin_dynkin(fam, n)
    star = star_decompose(q)
    pres = build_presentation(q, f"partial:{star.central}")
    gb = buchberger(pres)
    for arm in star.arms:
        x = parse(f"{arm.arrows[0]}* * {arm.arrows[0]}", pres.doubled, QQ)
        assert not gb.normal_form(x ** (arm.length + 1))
        assert gb.normal_form(x ** arm.length)


@pytest.mark.parametrize("n", range(2, 7))
def test_chain_partial_cycles_vanish(n):
    dq = dq_of("A", n)
    gb = buchberger(partial_relations(additive_relations(dq), n))
    for i in range(1, n):
        x = parse(f"a_{i} * a_{i}*", dq, QQ)
        assert not gb.normal_form(x ** i)


def test_format_parse_round_trip():
    for fam, n in [("D", 4), ("E", 6)]:
        dq = dq_of(fam, n)
        for pres in (additive_relations(dq), multiplicative_relations(None, dq)):
            back = parse_presentation(format_presentation(pres), dq)
            assert back.relations == pres.relations and back.vertices == pres.vertices


def test_parse_presentation_splits_unlabelled():
    dq = dq_of("A", 2)
    pres = parse_presentation("a_1*a_1* - a_1* * a_1\n", dq)
    assert pres.vertices == (1, 2)


def test_with_domain_drops_vanishing_relations():
    dq = dq_of("A", 2)
    pres = parse_presentation("@vertex 1\n2*a_1*a_1*\n", dq)
    assert len(pres.with_domain(GF(2))) == 0
    assert len(pres.with_domain(GF(3))) == 1


def test_build_presentation_kinds():
    q = builtin_dynkin("D", 4)
    assert build_presentation(q, "add").kind == "additive"
    assert build_presentation(q, "mult").kind == "multiplicative"
    assert build_presentation(q, "partial:3").partial == 3
    with pytest.raises(ValueError):
        build_presentation(q, "sideways")


def test_greek_macros_follow_arm_order():
    dq = dq_of("E", 6)
    m = multiplicative_relations(None, dq).macros
    assert m["alpha"] == parse("a* * a", dq, QQ)
    assert m["beta"] == parse("b* * b", dq, QQ)
    assert m["gamma"] == parse("c* * c", dq, QQ)
    assert isinstance(m["alpha"], NCPoly)
