"""Exact computations with additive and multiplicative preprojective algebras."""

from .domains import QQ, ZZ, GF, DomainError, Integers, LocalizedIntegers, PrimeField, Rationals, parse_domain
from .quiver import (
    Arrow,
    DoubledQuiver,
    NotStarShaped,
    Quiver,
    QuiverError,
    bad_primes,
    builtin_dynkin,
    double,
    dynkin_type,
    free_alphabet,
    load_quiver,
    parse_quiver,
    star_decompose,
)
from .algebra import NCPoly, ParseError, Path, format_poly, geometric_inverse, parse, peirce
from .presentation import (
    Presentation,
    additive_relations,
    build_presentation,
    multiplicative_relations,
    nilpotency_bound,
    partial_relations,
)

from .groebner import (
    GroebnerBasis,
    GroebnerError,
    InfiniteDimensional,
    MonomialOrder,
    NormalWordBasis,
    buchberger,
    corrected_space_dims,
    enumerate_basis,
    groebner_basis,
    is_member,
    nakayama_permutation,
    normal_form,
)
from .hh0 import (
    CyclicClass,
    HH0Report,
    class_in_hh0,
    frobenius_obstruction,
    hh0_field,
    hh0_integers,
    minimal_rotation,
    smith_normal_form,
)
from .morphism import (
    DescentCertificate,
    GeneratorImages,
    MorphismError,
    PaperIsoTable,
    apply,
    denominator_primes,
    is_triangular,
    is_unitriangular,
    is_vertex_preserving,
    paper_iso,
    parse_map,
    rescale_to_unitriangular,
    verify_descends,
)

__version__ = "0.1.0"
