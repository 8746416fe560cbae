"""moritalab: executable Morita theory on desk-scale instances.

Exact side: finite rings presented by structure constants, bimodules,
tensor products and hom groups computed through Smith normal form, and
Morita-equivalence certification with explicit inverse bimodules.

Numeric side: finite-dimensional von Neumann algebras (multi-matrix
algebras), standard forms for faithful states, Connes fusion of
correspondences, and Morita certification through commutants.

Both sides plug into one generic bicategory coherence checker.
"""

__version__ = "0.1.0"
