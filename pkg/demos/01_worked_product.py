"""Multiply two boundary classes on the moduli of genus-4 curves.

The first factor is a kappa_2-decorated genus-3 vertex with a self-loop
(codimension 3); the second is a chain of three rational vertices, two of
them with self-loops, attached to a genus-2 vertex carrying one psi
arrowhead (codimension 6).  Their product is a top-degree class whose
integral comes out to exactly 1/8.
"""

from strataring import FormalSum, integrate_sum, multiply, normalize, parse_decorated
from strataring.algebra import pair_contributions
from strataring.integrals import FUNDAMENTAL

G = parse_decorated(
    "graph g=4 n=0 { v0: genus=3; edge(v0.0, v0.1); kappa(v0)=[2:1]; }"
)
H = parse_decorated(
    "graph g=4 n=0 { v0: genus=0; v1: genus=0; v2: genus=0; v3: genus=2;"
    " edge(v0.0, v0.1); edge(v1.0, v1.1); edge(v0.2, v2.0); edge(v1.2, v2.1);"
    " edge(v2.2, v3.0); psi(v3.0)=1; }"
)
print(f"factor 1 (codim {G.codim}):", G)
print(f"factor 2 (codim {H.codim}):", H)

# the two carrier graphs, with their raw structure counts
families = {}
for A, pair, terms in pair_contributions(G, H):
    entry = families.setdefault(A.canonical_key, [A, 0, set(), len(terms), set()])
    entry[1] += 1
    entry[2].add(len(pair.common_edges))
    entry[4].update(c for c, _ in terms)
for A, count, commons, n_terms, coeffs in families.values():
    print(
        f"carrier with {A.n_edges} edges, |Aut| = {A.aut_order}: {count} raw"
        f" generic structures, common edges {sorted(commons)},"
        f" {n_terms} expansion terms of coefficients {sorted(coeffs)}"
    )

product = multiply(FormalSum.unit(G), FormalSum.unit(H))
survivors = normalize(product)
print(f"product has {len(product)} merged terms, {len(survivors)} after normalization")
print("integral over the moduli space:", integrate_sum(survivors, FUNDAMENTAL))
