"""Enumeration of stable graphs and decorated spanning sets.

``stable_graphs(g, n, e)`` lists one representative per isomorphism class
with exactly ``e`` edges.  Graphs with ``e`` edges are generated from
those with ``e - 1`` by undoing an edge contraction (splitting a vertex,
or trading a unit of vertex genus for a self-loop); contracting any edge
of a stable graph is again stable, so the sweep is exhaustive.

``decorated_basis`` filters by the target space (all graphs, trees only,
or trees with a single positive-genus vertex) and decorates vertices with
psi/kappa monomials below the boundary-expressibility bound
``codim(theta_v) < g(v) + [g(v)=0] - [n(v)=0]``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

from .algebra import DecoratedGraph
from .graphs import StableGraph, build_graph

SPACES = ("mbar", "ct", "rt")


def top_degree(space: str, g: int, n: int) -> int:
    """Degree of the socle for each flavor of moduli space."""
    if space == "mbar":
        return 3 * g - 3 + n
    if space == "ct":
        return 2 * g - 3 + n
    if space == "rt":
        return g - 2 + n
    raise ValueError(f"unknown space {space!r}")


def space_admits(G: StableGraph, space: str) -> bool:
    if space == "mbar":
        return True
    if space == "ct":
        return G.is_tree
    if space == "rt":
        positive = [gv for gv in G.genera if gv > 0]
        return G.is_tree and len(positive) == 1 and positive[0] == G.genus
    raise ValueError(f"unknown space {space!r}")


@lru_cache(maxsize=None)
def stable_graphs(g: int, n: int, edges: int) -> tuple[StableGraph, ...]:
    """All stable graphs of total genus ``g`` with legs ``1..n`` and the
    given edge count, one per isomorphism class, sorted by canonical key."""
    if 2 * g - 2 + n <= 0:
        raise ValueError("unstable (g, n)")
    if edges == 0:
        return (build_graph([g], legs={i: 0 for i in range(1, n + 1)}),)
    found: dict[object, StableGraph] = {}
    for X in stable_graphs(g, n, edges - 1):
        for Y in _one_edge_refinements(X):
            found.setdefault(Y.canonical_key, Y)
    return tuple(found[k] for k in sorted(found))


def _one_edge_refinements(X: StableGraph):
    nv = X.n_vertices
    nh = X.n_halfedges
    # (a) trade one unit of genus for a self-loop
    for v in range(nv):
        if X.genera[v] >= 1:
            genera = list(X.genera)
            genera[v] -= 1
            vertex_of = list(X.vertex_of) + [v, v]
            partner = list(X.partner) + [nh + 1, nh]
            yield StableGraph(tuple(genera), tuple(vertex_of), tuple(partner), X.legs, _checked=True)
    # (b) split a vertex along a new edge
    for v in range(nv):
        legs_v = [h for h in X.halfedges_at[v] if X.partner[h] == h]
        loops_v = [
            (h, X.partner[h])
            for h in X.halfedges_at[v]
            if X.partner[h] != h and X.vertex_of[X.partner[h]] == v and h < X.partner[h]
        ]
        neighbor_halves: dict[int, list[int]] = {}
        for h in X.halfedges_at[v]:
            w = X.vertex_of[X.partner[h]]
            if X.partner[h] != h and w != v:
                neighbor_halves.setdefault(w, []).append(h)
        nbrs = sorted(neighbor_halves)
        for ga in range(X.genera[v] + 1):
            gb = X.genera[v] - ga
            for moved in _attachment_splits(legs_v, loops_v, [neighbor_halves[w] for w in nbrs]):
                stay_legs_loops, moved_halves, split_loops = moved
                yield from _apply_split(X, v, ga, gb, moved_halves, split_loops)


def _attachment_splits(legs, loops, bundles):
    """Distributions of the attachments of a vertex onto the two sides of a
    split.  Interchangeable half-edges (parallel edges to one neighbor,
    loops) are enumerated by count only."""
    leg_choices = [(set(), {h}) for h in legs]
    from itertools import product

    bundle_choices = []
    for halves in bundles:
        bundle_choices.append([set(halves[:k]) for k in range(len(halves) + 1)])
    loop_choices = []
    # per loop multiset: how many stay, how many split, how many move
    L = len(loops)
    loop_opts = []
    for stay in range(L + 1):
        for split in range(L - stay + 1):
            move = L - stay - split
            loop_opts.append((stay, split, move))
    for stay, split, move in loop_opts:
        moved = set()
        split_set = []
        idx = 0
        for _ in range(split):
            split_set.append(loops[idx + stay])
            idx += 1
        for k in range(move):
            h1, h2 = loops[stay + split + k]
            moved |= {h1, h2}
        loop_choices.append((moved, tuple(split_set)))
    for leg_pick in product(*[(frozenset(), frozenset({h})) for h in legs]):
        leg_moved = set().union(*leg_pick) if leg_pick else set()
        for bundle_pick in product(*bundle_choices) if bundle_choices else [()]:
            bundle_moved = set().union(*bundle_pick) if bundle_pick else set()
            for loop_moved, split_set in loop_choices:
                yield None, leg_moved | bundle_moved | loop_moved, split_set


def _apply_split(X: StableGraph, v: int, ga: int, gb: int, moved, split_loops):
    nh = X.n_halfedges
    new_v = X.n_vertices
    genera = list(X.genera) + [gb]
    genera[v] = ga
    vertex_of = list(X.vertex_of) + [v, new_v]
    partner = list(X.partner) + [nh + 1, nh]
    for h in moved:
        vertex_of[h] = new_v
    for h1, h2 in split_loops:
        vertex_of[h2] = new_v  # loop becomes an edge across the split
    deg_a = sum(1 for h, w in enumerate(vertex_of) if w == v)
    deg_b = sum(1 for h, w in enumerate(vertex_of) if w == new_v)
    if 2 * ga - 2 + deg_a <= 0 or 2 * gb - 2 + deg_b <= 0:
        return
    yield StableGraph(tuple(genera), tuple(vertex_of), tuple(partner), X.legs, _checked=True)


def all_stable_graphs(g: int, n: int, max_edges: int):
    """Stable graphs with at most ``max_edges`` edges, by edge count."""
    for e in range(max_edges + 1):
        yield from stable_graphs(g, n, e)


# -- decorated spanning sets -------------------------------------------


def _kappa_partitions(m: int, max_part: int | None = None):
    """kappa exponent tuples ((j, f), ...) with sum j*f == m."""
    if m == 0:
        yield ()
        return
    top = m if max_part is None else min(m, max_part)
    for j in range(top, 0, -1):
        for f in range(m // j, 0, -1):
            for rest in _kappa_partitions(m - j * f, j - 1):
                yield ((j, f),) + rest


def _psi_distributions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _psi_distributions(total - first, slots - 1):
            yield (first,) + rest


def vertex_decoration_bound(G: StableGraph, v: int) -> int:
    """Strict upper bound for codim(theta_v): decorations at or above it
    are supported on the boundary and excluded from the spanning set."""
    gv = G.genera[v]
    return gv + (1 if gv == 0 else 0) - (1 if G.degree(v) == 0 else 0)


def _vertex_decorations(G: StableGraph, v: int, c: int):
    """(kappa, psi) choices of codimension ``c`` at vertex ``v``."""
    gv = G.genera[v]
    closed = G.degree(v) == 0
    for m in range(c + 1):
        for kap in _kappa_partitions(m):
            if closed and kap == ((1, gv - 2),) and gv - 2 >= 2:
                # the top pure kappa_1 power on a closed vertex is
                # redundant (one-dimensional socle of the open part)
                continue
            for psis in _psi_distributions(c - m, G.degree(v)):
                yield kap, psis


def decorated_basis(g: int, n: int, k: int, space: str) -> tuple[DecoratedGraph, ...]:
    """The spanning set of decorated graphs of codimension ``k``."""
    if space == "rt" and g < 2:
        raise ValueError("rational-tails spaces need genus >= 2")
    if k < 0 or k > top_degree(space, g, n):
        raise ValueError("codimension out of range")
    found: dict[object, DecoratedGraph] = {}
    for e in range(0, k + 1):
        for G in stable_graphs(g, n, e):
            if not space_admits(G, space):
                continue
            bounds = [vertex_decoration_bound(G, v) for v in range(G.n_vertices)]
            for dec in _graph_decorations(G, k - e, bounds):
                d = DecoratedGraph(G, dec[0], dec[1])
                found.setdefault(d.canonical_key, d)
    return tuple(found[key] for key in sorted(found))


def _graph_decorations(G: StableGraph, d: int, bounds):
    """All decorations of total codimension ``d`` within per-vertex bounds,
    yielded as (psi tuple, kappa tuple)."""
    nv = G.n_vertices

    def per_vertex(v: int, remaining: int):
        if v == nv:
            if remaining == 0:
                yield []
            return
        tail_cap = sum(max(0, bounds[w] - 1) for w in range(v + 1, nv))
        lo = max(0, remaining - tail_cap)
        hi = min(remaining, max(0, bounds[v] - 1))
        for c in range(lo, hi + 1):
            for choice in _vertex_decorations(G, v, c):
                for rest in per_vertex(v + 1, remaining - c):
                    yield [choice] + rest

    for combo in per_vertex(0, d):
        psi = [0] * G.n_halfedges
        kappa = []
        for v, (kap, psis) in enumerate(combo):
            kappa.append(kap)
            for h, e in zip(G.halfedges_at[v], psis):
                psi[h] = e
        yield tuple(psi), tuple(kappa)
