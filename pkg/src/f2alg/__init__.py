"""Exact computational algebra over F2.

Subpackages cover bit-packed linear algebra (`f2linalg`), truncated
graded Hopf algebras and their duals (`hopf`), cobar complexes, Cotor
charts and mapping cones (`cobar`), the augmentation-filtration
spectral sequence (`mayss`), Dyer-Lashof rewriting and free/quotient
bases (`dyer_lashof`), tri-graded survivor charts (`cellfilt`),
Hopf algebras assembled from cell presentations (`cellhopf`), group
homology via free resolutions (`grouphom`), and the command line
(`cli`).  Everything is exact; no floats appear anywhere.
"""

__version__ = "0.1.0"
