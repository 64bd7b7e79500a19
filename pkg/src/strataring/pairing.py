"""Intersection-pairing matrices, exact ranks, kernels and relation checks.

The Gram matrix pairs the spanning set in codimension ``k`` against the
one in complementary codimension through the evaluation class of the
chosen space.  Ranks are computed over the integers by fraction-free
(Bareiss) elimination after clearing denominators row by row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .algebra import (
    DecoratedGraph,
    FormalSum,
    _expand_structure_raw,
    _generic_pairs_interned,
    _interned_decorated,
    homogeneous_codim,
    multiply,
)
from .enumeration import decorated_basis, space_admits, top_degree
from .integrals import (
    FUNDAMENTAL,
    LAMBDA_PAIR,
    LAMBDA_TOP,
    evaluation_kind,
    integrate_sum,
    kappa_reduce,
)

_SPACE_KIND = {"mbar": "fundamental", "ct": "lambda_g", "rt": "lambda_g_lambda_g_minus_1"}
_KIND_SPACE = {FUNDAMENTAL: "mbar", LAMBDA_TOP: "ct", LAMBDA_PAIR: "rt"}


def kind_for_space(space: str):
    return evaluation_kind(_SPACE_KIND[space])


def _vertex_tops(A, kind):
    tops = []
    for v in range(A.n_vertices):
        gv, nv = A.genera[v], A.degree(v)
        if kind is FUNDAMENTAL:
            tops.append(3 * gv - 3 + nv)
        elif kind is LAMBDA_TOP:
            tops.append(2 * gv - 3 + nv)
        else:
            tops.append(gv - 2 + nv if gv > 0 else nv - 3)
    return tops


def integrate_product(x: FormalSum, y: FormalSum, kind) -> Fraction:
    """Integral of the product of two sums, fused for speed.

    Equivalent to ``integrate_sum(multiply(x, y), kind)`` but skips the
    canonical merging of product terms: every expansion term is integrated
    directly (the memoized vertex integrals make isomorphic repeats
    cheap), with early exits on off-dimension vertices.
    """
    kind = evaluation_kind(kind)
    top = top_degree(_KIND_SPACE[kind], x.g, x.n)
    total = Fraction(0)
    for cG, dgG in x.terms.values():
        RG, psiG, kappaG = _interned_decorated(dgG)
        for cH, dgH in y.terms.values():
            if dgG.codim + dgH.codim != top:
                continue
            RH, psiH, kappaH = _interned_decorated(dgH)
            c = cG * cH
            for A, pairs in _generic_pairs_interned(RG, RH):
                if kind is not FUNDAMENTAL and not space_admits(A, _KIND_SPACE[kind]):
                    continue
                tops = _vertex_tops(A, kind)
                if any(t < 0 for t in tops):
                    continue
                halfedges_at = A.halfedges_at
                genera = A.genera
                weight = c / A.aut_order
                for pair in pairs:
                    for coeff, psi, kappa in _expand_structure_raw(
                        A, pair, psiG, kappaG, psiH, kappaH
                    ):
                        value = Fraction(coeff)
                        for v in range(A.n_vertices):
                            psis = tuple(psi[h] for h in halfedges_at[v])
                            kap = tuple(j for j, f in kappa[v] for _ in range(f))
                            if sum(psis) + sum(kap) != tops[v]:
                                value = Fraction(0)
                                break
                            vkind = kind
                            if kind is LAMBDA_PAIR and genera[v] == 0:
                                vkind = FUNDAMENTAL
                            factor = kappa_reduce(genera[v], psis, kap, vkind)
                            if factor == 0:
                                value = Fraction(0)
                                break
                            value *= factor
                        if value:
                            total += weight * value
    return total


@dataclass
class GramMatrix:
    g: int
    n: int
    k: int
    space: str
    rows: tuple[DecoratedGraph, ...]
    cols: tuple[DecoratedGraph, ...]
    entries: list[list[Fraction]] = field(repr=False)

    def scaled(self, factor) -> list[list[Fraction]]:
        factor = Fraction(factor)
        return [[factor * x for x in row] for row in self.entries]


def pairing_value(a: DecoratedGraph, b: DecoratedGraph, space: str) -> Fraction:
    return integrate_product(
        FormalSum.unit(a), FormalSum.unit(b), kind_for_space(space)
    )


def gram(g: int, n: int, k: int, space: str, jobs: int = 1) -> GramMatrix:
    """Exact pairing matrix of the codimension-``k`` spanning set against
    the complementary one."""
    top = top_degree(space, g, n)
    if not (0 <= k <= top):
        raise ValueError(f"codimension {k} outside 0..{top}")
    rows = decorated_basis(g, n, k, space)
    cols = decorated_basis(g, n, top - k, space)
    if jobs > 1:
        entries = _fill_parallel(g, n, k, space, len(rows), len(cols), jobs)
    else:
        entries = [[pairing_value(r, c, space) for c in cols] for r in rows]
    return GramMatrix(g, n, k, space, rows, cols, entries)


def _entry_job(args):
    g, n, k, space, i, j = args
    top = top_degree(space, g, n)
    rows = decorated_basis(g, n, k, space)
    cols = decorated_basis(g, n, top - k, space)
    return i, j, pairing_value(rows[i], cols[j], space)


def _fill_parallel(g, n, k, space, n_rows, n_cols, jobs):
    import multiprocessing

    tasks = [(g, n, k, space, i, j) for i in range(n_rows) for j in range(n_cols)]
    entries = [[Fraction(0)] * n_cols for _ in range(n_rows)]
    with multiprocessing.Pool(jobs) as pool:
        for i, j, value in pool.imap(_entry_job, tasks, chunksize=8):
            entries[i][j] = value
    return entries


# -- exact linear algebra -----------------------------------------------


def _integer_rows(entries) -> list[list[int]]:
    out = []
    for row in entries:
        denom = 1
        for x in row:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        out.append([int(x * denom) for x in row])
    return out


def matrix_rank(entries) -> int:
    """Rank over the rationals via Bareiss fraction-free elimination."""
    if not entries or not entries[0]:
        return 0
    m = _integer_rows(entries)
    n_rows, n_cols = len(m), len(m[0])
    rank_count = 0
    prev = 1
    for col in range(n_cols):
        piv = next((i for i in range(rank_count, n_rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank_count], m[piv] = m[piv], m[rank_count]
        p = m[rank_count][col]
        for i in range(rank_count + 1, n_rows):
            for j in range(col + 1, n_cols):
                m[i][j] = (p * m[i][j] - m[i][col] * m[rank_count][j]) // prev
            m[i][col] = 0
        prev = p
        rank_count += 1
        if rank_count == n_rows:
            break
    return rank_count


def rank(m: GramMatrix) -> int:
    return matrix_rank(m.entries)


def kernel_basis(m: GramMatrix) -> list[list[Fraction]]:
    """Basis of the row kernel: vectors ``v`` (indexed like ``m.rows``)
    with ``v . entries == 0``, denominators cleared to primitive integer
    vectors.  These are the candidate relations among the row classes."""
    return null_space([list(col) for col in zip(*m.entries)]) if m.entries else []


def null_space(entries) -> list[list[Fraction]]:
    """Primitive integer basis of ``{x : entries . x = 0}``."""
    if not entries:
        return []
    n_cols = len(entries[0])
    mat = [[Fraction(x) for x in row] for row in entries]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for c in free:
        vec = [Fraction(0)] * n_cols
        vec[c] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][c]
        denom = 1
        for x in vec:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        ints = [int(x * denom) for x in vec]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        if g > 1:
            ints = [x // g for x in ints]
        basis.append([Fraction(x) for x in ints])
    return basis


def rank_table(g: int, n: int, space: str, jobs: int = 1) -> list[int]:
    """Pairing rank in every codimension ``0..top``; symmetric halves are
    computed once (the two Gram matrices are transposes)."""
    top = top_degree(space, g, n)
    ranks = [0] * (top + 1)
    for k in range(top // 2 + 1):
        r = rank(gram(g, n, k, space, jobs=jobs))
        ranks[k] = r
        ranks[top - k] = r
    return ranks


@dataclass
class RelationReport:
    g: int
    n: int
    space: str
    codim: int
    pairings: list[tuple[DecoratedGraph, Fraction]]

    @property
    def passed(self) -> bool:
        return all(v == 0 for _, v in self.pairings)

    def failures(self):
        return [(d, v) for d, v in self.pairings if v != 0]


def verify_relation(r: FormalSum, g: int, n: int, space: str) -> RelationReport:
    """Pair a homogeneous candidate relation against the complementary
    spanning set; it passes iff every pairing is exactly zero."""
    if (r.g, r.n) != (g, n):
        from .algebra import SpaceMismatch

        raise SpaceMismatch("relation lives on a different moduli space")
    top = top_degree(space, g, n)
    if len(r) == 0:
        return RelationReport(g, n, space, 0, [])
    k = homogeneous_codim(r)
    if not (0 <= k <= top):
        from .algebra import DegreeMismatch

        raise DegreeMismatch(f"codimension {k} outside 0..{top}")
    kind = kind_for_space(space)
    pairings = []
    for b in decorated_basis(g, n, top - k, space):
        value = integrate_product(r, FormalSum.unit(b), kind)
        pairings.append((b, value))
    return RelationReport(g, n, space, k, pairings)
