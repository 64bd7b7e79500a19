"""Ranks of the intersection pairing in every codimension.

Walks the small rows of the three tables (full moduli, compact type,
rational tails).  Each entry is the exact rank of the pairing between the
spanning sets in complementary codimensions.
"""

import time

from strataring import rank_table

ROWS = {
    "mbar": [(0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1)],
    "ct": [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (4, 0)],
    "rt": [(2, 2), (3, 1), (4, 0), (5, 0), (6, 0)],
}

for space, rows in ROWS.items():
    print(f"--- {space} ---")
    for g, n in rows:
        t0 = time.time()
        ranks = rank_table(g, n, space)
        print(f"({g},{n}): {', '.join(map(str, ranks))}   [{time.time()-t0:.2f}s]")
