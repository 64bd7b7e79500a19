"""Verify tautological relations by pairing them against spanning sets.

A candidate relation is a homogeneous formal sum; it holds in the
quotient by the pairing kernel iff it pairs to zero with every class of
complementary codimension.  The fixture files ship the degree-1 relation
on (2,1), the three degree-2 relations on (3,1), a 33-term genus-4
boundary relation, and a conjectural 19-term genus-5 relation.
"""

import random
from pathlib import Path

from strataring import FormalSum, decorated_basis, integrate_sum, load_sum, multiply
from strataring.pairing import verify_relation

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

rel = load_sum(str(FIXTURES / "m21_relation.sum"))
report = verify_relation(rel, 2, 1, "ct")
print(f"(2,1) degree-1 relation: {'PASS' if report.passed else 'FAIL'}"
      f" against {len(report.pairings)} classes")

for i in (1, 2, 3):
    rel = load_sum(str(FIXTURES / f"m31_relation_{i}.sum"))
    report = verify_relation(rel, 3, 1, "ct")
    print(f"(3,1) degree-2 relation {i}: {'PASS' if report.passed else 'FAIL'}"
          f" against {len(report.pairings)} classes")

# spot-check the conjectural genus-5 relation against five random classes
rel = load_sum(str(FIXTURES / "g5_relation.sum"))
basis = decorated_basis(5, 0, 4, "ct")
rng = random.Random(0)
values = [
    integrate_sum(multiply(rel, FormalSum.unit(basis[i])), "ct")
    for i in rng.sample(range(len(basis)), 5)
]
print("(5,0) conjectural relation, five random pairings:", values)
