"""The degree-2 intersection matrix on the compact-type locus of (3,1).

Pairs ten degree-2 classes (four monomial classes on the open part and
six boundary classes) against the seven independent ones through the
top-lambda evaluation, scaled by 13824.  The matrix has rank 7; its
three-dimensional kernel encodes the relations expressing psi_1*kappa_1,
kappa_2 and kappa_1^2 through psi_1^2 and boundary classes.
"""

from fractions import Fraction

from strataring import FormalSum, integrate_sum, multiply, parse_decorated
from strataring.pairing import matrix_rank, null_space

CLASSES = {
    "psi^2": "graph g=3 n=1 { v0: genus=3; leg(1, v0.0); psi(v0.0)=2; }",
    "B1": "graph g=3 n=1 { v0: genus=2; v1: genus=1; edge(v0.0, v1.0); leg(1, v0.1); psi(v0.0)=1; }",
    "B2": "graph g=3 n=1 { v0: genus=2; v1: genus=1; edge(v0.0, v1.0); leg(1, v0.1); psi(v0.1)=1; }",
    "B3": "graph g=3 n=1 { v0: genus=2; v1: genus=1; edge(v0.0, v1.0); leg(1, v1.1); psi(v0.0)=1; }",
    "B4": "graph g=3 n=1 { v0: genus=2; v1: genus=0; v2: genus=1;"
    " edge(v0.0, v1.0); edge(v1.1, v2.0); leg(1, v1.2); }",
    "B5": "graph g=3 n=1 { v0: genus=1; v1: genus=1; v2: genus=1;"
    " edge(v0.0, v1.0); edge(v1.1, v2.0); leg(1, v1.2); }",
    "B6": "graph g=3 n=1 { v0: genus=1; v1: genus=1; v2: genus=1;"
    " edge(v0.0, v1.0); edge(v1.1, v2.0); leg(1, v0.1); }",
    "psi*k1": "graph g=3 n=1 { v0: genus=3; leg(1, v0.0); psi(v0.0)=1; kappa(v0)=[1:1]; }",
    "k2": "graph g=3 n=1 { v0: genus=3; leg(1, v0.0); kappa(v0)=[2:1]; }",
    "k1^2": "graph g=3 n=1 { v0: genus=3; leg(1, v0.0); kappa(v0)=[1:2]; }",
}

classes = {name: parse_decorated(text) for name, text in CLASSES.items()}
names = list(classes)
matrix = []
for r in names[:7]:
    row = [
        13824
        * integrate_sum(
            multiply(FormalSum.unit(classes[r]), FormalSum.unit(classes[c])), "ct"
        )
        for c in names
    ]
    matrix.append(row)
    print(f"{r:7s}", " ".join(f"{str(x):>7s}" for x in row))

print("rank:", matrix_rank(matrix))
kernel = null_space(matrix)
print("kernel dimension:", len(kernel))
for vec in kernel:
    pretty = " + ".join(
        f"({Fraction(c)})*{n}" for c, n in zip(vec, names) if c
    )
    print("relation: 0 =", pretty)
