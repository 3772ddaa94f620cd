"""Check the bundled generator tables: each sends the multiplicative relations
into the additive ideal, fixes arrows up to longer paths, and only divides by
bad primes."""

from preprojective import buchberger, denominator_primes, is_unitriangular, paper_iso, verify_descends
from preprojective.presentation import build_presentation

for name in ("D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8"):
    t = paper_iso(name)
    gb = buchberger(build_presentation(t.quiver, "add"))
    cert = verify_descends(t.images, build_presentation(t.quiver, "mult"), gb)
    primes = sorted(denominator_primes(t.images))
    print(f"{name}: {cert.summary()}; unitriangular {is_unitriangular(t.images, gb)}; "
          f"denominators {primes}, bad primes {sorted(t.bad_primes)}; truncation {cert.truncation}")
