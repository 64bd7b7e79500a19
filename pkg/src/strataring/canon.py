"""Canonical forms and automorphism counts for (decorated) stable graphs.

The canonical key is the minimum, over vertex orderings compatible with
iterated color refinement, of a full encoding of the graph data (genera,
leg labels with their psi exponents, kappa monomials, loop and bundle
multisets).  Two graphs get equal keys iff they are isomorphic respecting
leg labels and decorations.

The automorphism order factors as ``|Aut| = A_V * E`` where ``A_V`` is the
number of vertex-level automorphisms (counted as the number of orderings
achieving the minimal encoding) and ``E`` counts half-edge symmetries over
the identity vertex map: loop flips, loop swaps and parallel-edge swaps
that preserve psi exponents.
"""

from __future__ import annotations

from math import factorial


def _vertex_tables(g, psi, kappa):
    """Per-vertex records plus loop/bundle signatures."""
    nv = g.n_vertices
    psi = psi if psi is not None else (0,) * g.n_halfedges
    kappa = kappa if kappa is not None else ((),) * nv
    label_of = g.label_of_leg
    legs = [[] for _ in range(nv)]
    loops = [[] for _ in range(nv)]
    bundles: dict[tuple[int, int], list[tuple[int, int]]] = {}
    bundle_edges: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for label, h in g.legs:
        legs[g.vertex_of[h]].append((label, psi[h]))
    for h1, h2 in g.edges:
        v, w = g.vertex_of[h1], g.vertex_of[h2]
        if v == w:
            a, b = sorted((psi[h1], psi[h2]))
            loops[v].append((a, b))
        else:
            if v > w:
                v, w, h1, h2 = w, v, h2, h1
            bundles.setdefault((v, w), []).append((psi[h1], psi[h2]))
            bundle_edges.setdefault((v, w), []).append((h1, h2))
    records = tuple(
        (
            g.genera[v],
            tuple(kappa[v]),
            tuple(sorted(legs[v])),
            tuple(sorted(loops[v])),
            g.degree(v),
        )
        for v in range(nv)
    )
    bundle_sig = {k: tuple(sorted(ps)) for k, ps in bundles.items()}
    return records, bundle_sig, bundle_edges


def _get_bundle(bundle_sig, u, w):
    if u < w:
        return bundle_sig.get((u, w), ())
    flipped = bundle_sig.get((w, u), ())
    return tuple(sorted((b, a) for a, b in flipped))


def _refine(nv, colors, bundle_sig):
    """Iterate neighborhood refinement to a stable coloring."""
    neighbors: dict[int, list[int]] = {v: [] for v in range(nv)}
    for (u, w) in bundle_sig:
        neighbors[u].append(w)
        neighbors[w].append(u)
    while True:
        sigs = []
        for v in range(nv):
            around = sorted(
                (repr(_get_bundle(bundle_sig, v, w)), colors[w]) for w in neighbors[v]
            )
            sigs.append((colors[v], tuple(around)))
        order = sorted(set(sigs), key=repr)
        index = {s: i for i, s in enumerate(order)}
        new_colors = [index[s] for s in sigs]
        if new_colors == colors:
            return colors
        colors = new_colors


def _uniform_independent(cell, nv, bundle_sig):
    """True when every ordering within the cell yields the same encoding:
    no edges inside the cell and identical bundles to every outside vertex."""
    cset = set(cell)
    for i, u in enumerate(cell):
        for v in cell[i + 1 :]:
            if _get_bundle(bundle_sig, u, v):
                return False
    u0 = cell[0]
    for w in range(nv):
        if w in cset:
            continue
        ref = _get_bundle(bundle_sig, u0, w)
        for v in cell[1:]:
            if _get_bundle(bundle_sig, v, w) != ref:
                return False
    return True


def _encode(order, records, bundle_sig):
    pos = order
    nv = len(order)
    parts = [records[v] for v in pos]
    for i in range(nv):
        for j in range(i + 1, nv):
            parts.append(_get_bundle(bundle_sig, pos[i], pos[j]))
    return tuple(parts)


def _search(g, psi, kappa):
    """Return ``(min_encoding, vertex_aut_count, best_order)``."""
    nv = g.n_vertices
    records, bundle_sig, _ = _vertex_tables(g, psi, kappa)
    if nv == 1:
        return _encode((0,), records, bundle_sig), 1, (0,)

    init = sorted(set(records), key=repr)
    index = {r: i for i, r in enumerate(init)}
    colors0 = _refine(nv, [index[records[v]] for v in range(nv)], bundle_sig)

    best: dict[str, object] = {"enc": None, "count": 0, "order": None}

    def cells_of(colors):
        by: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            by.setdefault(c, []).append(v)
        return [by[c] for c in sorted(by)]

    def recurse(colors, factor):
        cells = cells_of(colors)
        target = next((c for c in cells if len(c) > 1), None)
        if target is None:
            order = tuple(v for c in cells for v in c)
            enc = _encode(order, records, bundle_sig)
            if best["enc"] is None or enc < best["enc"]:
                best["enc"], best["count"], best["order"] = enc, factor, order
            elif enc == best["enc"]:
                best["count"] += factor
            return
        if _uniform_independent(target, nv, bundle_sig):
            new = list(colors)
            base = max(colors) + 1
            for k, v in enumerate(target[1:], start=1):
                new[v] = base + k
            recurse(_refine(nv, new, bundle_sig), factor * factorial(len(target)))
            return
        for v in target:
            new = [2 * c + 1 for c in colors]
            new[v] = 2 * colors[v]
            recurse(_refine(nv, new, bundle_sig), factor)

    recurse(colors0, 1)
    return best["enc"], best["count"], best["order"]


def _extension_count(g, psi):
    """Half-edge automorphisms over the identity vertex permutation."""
    psi = psi if psi is not None else (0,) * g.n_halfedges
    count = 1
    loops: dict[int, dict[tuple[int, int], int]] = {}
    bundles: dict[tuple[int, int], dict[tuple[int, int], int]] = {}
    for h1, h2 in g.edges:
        v, w = g.vertex_of[h1], g.vertex_of[h2]
        if v == w:
            pair = tuple(sorted((psi[h1], psi[h2])))
            loops.setdefault(v, {})
            loops[v][pair] = loops[v].get(pair, 0) + 1
        else:
            if v > w:
                v, w, h1, h2 = w, v, h2, h1
            pair = (psi[h1], psi[h2])
            bundles.setdefault((v, w), {})
            bundles[(v, w)][pair] = bundles[(v, w)].get(pair, 0) + 1
    for groups in loops.values():
        for (a, b), k in groups.items():
            count *= factorial(k) * (2**k if a == b else 1)
    for groups in bundles.values():
        for k in groups.values():
            count *= factorial(k)
    return count


def canonical_data(g, psi=None, kappa=None) -> tuple[str, int]:
    """Canonical key string and exact automorphism order."""
    enc, aut_v, _ = _search(g, psi, kappa)
    return repr((g.n_vertices, enc)), aut_v * _extension_count(g, psi)


def ordering_maps(g, psi=None, kappa=None) -> tuple[dict[int, int], dict[int, int]]:
    """A relabeling ``(halfedge_map, vertex_map)`` onto canonical positions.

    Ties inside edge bundles are broken by original ids; any choice differs
    from another by an automorphism, which is all the callers need.
    """
    _, _, order = _search(g, psi, kappa)
    psi = psi if psi is not None else (0,) * g.n_halfedges
    vmap = {v: i for i, v in enumerate(order)}
    hmap: dict[int, int] = {}
    ctr = 0
    legs_at: dict[int, list[tuple[int, int]]] = {}
    for label, h in g.legs:
        legs_at.setdefault(g.vertex_of[h], []).append((label, h))
    loops_at: dict[int, list[tuple[int, int]]] = {}
    bundle_edges: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for h1, h2 in g.edges:
        v, w = g.vertex_of[h1], g.vertex_of[h2]
        if v == w:
            if (psi[h1], h1) > (psi[h2], h2):
                h1, h2 = h2, h1
            loops_at.setdefault(v, []).append((h1, h2))
        else:
            if vmap[v] > vmap[w]:
                v, w, h1, h2 = w, v, h2, h1
            bundle_edges.setdefault((vmap[v], vmap[w]), []).append((h1, h2))
    for v in order:
        for _, h in sorted(legs_at.get(v, [])):
            hmap[h] = ctr
            ctr += 1
        for h1, h2 in sorted(
            loops_at.get(v, []), key=lambda e: (psi[e[0]], psi[e[1]], e[0])
        ):
            hmap[h1], hmap[h2] = ctr, ctr + 1
            ctr += 2
    for (i, j) in sorted(bundle_edges):
        for h1, h2 in sorted(bundle_edges[(i, j)], key=lambda e: (psi[e[0]], psi[e[1]], e[0])):
            hmap[h1], hmap[h2] = ctr, ctr + 1
            ctr += 2
    return hmap, vmap
