"""Exact verification workbench for extremal matching bounds on uniform set families.

Families of k-element subsets of [n] = {1, ..., n} are held as bit masks
(element e occupies bit e-1), all counting is exact integer or rational
arithmetic, and every randomized routine takes an explicit seed.
"""

__version__ = "0.1.0"

# Version stamp carried by every machine-readable report.
SPEC_VERSION = "0.1.0"
