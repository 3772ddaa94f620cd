import pytest
from gmpy2 import mpq

from preprojective.algebra import NCPoly, ParseError, format_poly, geometric_inverse, parse, peirce
from preprojective.domains import GF, QQ, ZZ, DomainError, LocalizedIntegers, parse_domain
from preprojective.presentation import additive_relations
from preprojective.quiver import builtin_dynkin, double


@pytest.fixture(scope="module")
def d4():
    return double(builtin_dynkin("D", 4))


def P(text, dq, dom=QQ):
    return parse(text, dq, dom)


def test_idempotents_orthogonal(d4):
    e1 = NCPoly.idempotent(d4, 1)
    e2 = NCPoly.idempotent(d4, 2)
    assert e1 * e1 == e1
    assert not e1 * e2


def test_composable_concatenation(d4):
    a, a_ = NCPoly.letter(d4, "a"), NCPoly.letter(d4, "a*")
    aa = a * a_
    assert list(aa.terms) == [d4.word("a", "a*")]
    assert aa.endpoints() == {(d4.vindex[1], d4.vindex[1])}
    assert not a * a


def test_telescoping_product(d4):
    one = NCPoly.one(d4)
    alpha = P("a* * a", d4)
    lhs = (one + alpha) * (one - alpha + alpha ** 2 - alpha ** 3)
    assert lhs == one - alpha ** 4


def test_unit_is_two_sided(d4):
    one = NCPoly.one(d4)
    p = P("2*a*a* - 1/3*b* * b + e_4 + c_1", d4)
    assert one * p == p == p * one


def test_peirce_examples(d4):
    p = P("e_1 + a", d4)
    assert peirce(p, 1, 3) == P("a", d4)
    assert peirce(p, 1, 1) == P("e_1", d4)
    r = additive_relations(d4).relation_at(3)
    centre = peirce(sum(additive_relations(d4).relations, NCPoly.zero(d4, QQ)), 3, 3)
    assert centre == r == P("-(a* * a + b* * b + c_1* * c_1)", d4)


def test_geometric_inverse_examples(d4):
    one = NCPoly.one(d4)
    zero = NCPoly.zero(d4, QQ)
    assert geometric_inverse(zero, 3) == one
    alpha = P("a* * a", d4)
    assert geometric_inverse(alpha, 1) == one - alpha
    beta = P("b* * b", d4)
    assert geometric_inverse(beta, 2) == one - beta + beta * beta


def test_geometric_inverse_rejects_constant(d4):
    with pytest.raises(ValueError):
        geometric_inverse(P("e_1 + a* * a", d4), 2)


def test_geometric_inverse_defect_is_high_degree(d4):
    x = P("a* * a + 1/2*b* * b", d4)
    one = NCPoly.one(d4)
    for bound in range(5):
        defect = geometric_inverse(x, bound) * (one + x) - one
        assert defect.min_degree() > 2 * bound


def test_parse_two_terms(d4):
    p = P("1/2*a*a* - e_3", d4)
    assert len(p.terms) == 2
    assert p.coeff(d4.word("a", "a*")) == mpq(1, 2)
    assert p.coeff(~d4.vindex[3]) == -1


def test_parse_non_composable(d4):
    with pytest.raises(ParseError, match="non-composable"):
        P("a*b", d4)


def test_parse_double_star(d4):
    one = NCPoly.one(d4)
    alpha = P("a* * a", d4)
    assert P("(1+a**a)^2", d4) == one + alpha.scale(2) + alpha * alpha


@pytest.mark.parametrize("bad", ["a + ", "zz", "(a", "2*e_9", "a^^2", "1/0*a"])
def test_parse_errors_have_position(d4, bad):
    with pytest.raises(ParseError, match="position"):
        P(bad, d4)


def test_parse_dual_alias(d4):
    assert P("da", d4) == P("a*", d4)
    assert P("a*da", d4) == P("a * a*", d4)


def test_round_trip(d4):
    for text in ["1/2*a*a* - e_3", "-3*c_1* * c_1 * b* * b + 7/5*e_1", "0", "a - a"]:
        p = P(text, d4)
        assert P(format_poly(p) or "0", d4) == p


def test_format_descending(d4):
    assert format_poly(P("e_3 - 1/2*a*a*", d4)) == "- 1/2 * a * a* + e_3"


def test_prime_field_canonical_residues(d4):
    f7 = GF(7)
    p = P("1/2*a*a* + 8*e_1", d4, f7)
    assert p.coeff(d4.word("a", "a*")) == 4
    assert p.coeff(~d4.vindex[1]) == 1
    assert not P("7*a", d4, f7)


def test_domain_mismatch_rejected(d4):
    with pytest.raises(DomainError):
        P("a", d4) * P("a*", d4, GF(3))


def test_domains():
    assert parse_domain("Q") is QQ and parse_domain("Z") is ZZ
    assert parse_domain("Fp:5") == GF(5) == parse_domain("F5")
    with pytest.raises(DomainError):
        GF(4)
    loc = LocalizedIntegers([3, 2])
    assert str(loc) == "Z[1/2,1/3]"
    assert loc.coerce("5/6") == mpq(5, 6)
    with pytest.raises(DomainError):
        loc.coerce("1/5")
    assert ZZ.is_unit(-1) and not ZZ.is_unit(2)
    with pytest.raises(DomainError):
        ZZ.coerce("1/2")


def test_change_domain_and_denominators(d4):
    p = P("1/6*a*a* + 1/4*e_1", d4)
    assert p.denominators() == {4, 6}
    with pytest.raises(DomainError):
        p.change_domain(GF(3))
    assert p.change_domain(GF(5)).coeff(d4.word("a", "a*")) == 1


def test_truncate_and_degrees(d4):
    p = P("e_1 + a + a*a* + a*a* * a*a*", d4)
    assert p.degree() == 4 and p.min_degree() == 0
    assert p.truncate(2) == P("e_1 + a + a*a*", d4)
