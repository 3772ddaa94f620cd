"""Where the additive and multiplicative algebras part ways.

Over Z, HH0 of the additive D_n algebra carries Z/2 summands in degrees
4, 8, ...; the multiplicative algebra has none.  Over F_p at a bad prime the
same classes show up as single cycles that are nonzero in one algebra and
zero in the other.
"""

from preprojective import build_presentation, class_in_hh0, hh0_integers
from preprojective.algebra import parse
from preprojective.domains import GF, ZZ
from preprojective.quiver import builtin_dynkin

for n in (4, 5, 6, 7):
    q = builtin_dynkin("D", n)
    add = hh0_integers(build_presentation(q, "add", ZZ))
    mult = hh0_integers(build_presentation(q, "mult", ZZ))
    print(f"D{n}: additive torsion {add.torsion_exponents or '-'}, multiplicative torsion {mult.torsion_exponents or '-'}")

print()
for fam, n, p, word in [("D", 4, 2, "alpha*beta"), ("E", 6, 3, "beta*alpha*beta"), ("E", 8, 5, "beta*alpha*beta*alpha*beta")]:
    q = builtin_dynkin(fam, n)
    row = []
    for kind in ("add", "mult"):
        pres = build_presentation(q, kind, GF(p))
        row.append(class_in_hh0(parse(word, pres.doubled, GF(p), pres.macros), pres))
    print(f"{fam}{n} over F{p}: {word:28} additive {row[0]:8} multiplicative {row[1]}")
