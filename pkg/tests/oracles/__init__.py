"""Independent brute-force oracles used by the test suite.

Everything in this directory is deliberately written from scratch against
plain tuples/dicts, with no imports from the main package, so that the main
implementation can be checked against genuinely independent computations:

- ``tree_oracle``: naive generate-all-and-dedup enumeration of leg-labeled
  trees (Pruefer sequences + min-over-permutations canonical form).
- ``keel_km_oracle``: brute-force stable-tree enumeration and boundary
  relations for the stable locus, with dense Fraction elimination.
- ``orbit_sum_oracle``: signed automorphism-orbit sums of expanded decorated
  trees, used to cross-check symmetry-vanishing.
"""
