"""Decorated boundary strata and their graded algebra.

A decorated graph is a stable graph with a psi exponent on every
half-edge (legs included) and a kappa monomial on every vertex.  Formal
rational combinations of decorated graphs, with isomorphic terms merged
through canonical keys, carry the product

    [G] . [H] = sum over carrying graphs A of
                (1 / |Aut A|) * sum over raw generic (G, H)-structures of
                the expansion of F_A(G, H) as decorations on A,

where F transports psi exponents through the half-edge embeddings,
expands each kappa class over the fiber of its vertex multinomially, and
multiplies by ``(-psi' - psi'')`` for every common edge.  A term ``[T]``
of a sum stands for the unnormalized pushforward of its decoration; the
class conventionally written with a ``1/|Aut|`` in front is produced by
:func:`sigma`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import factorial

from . import canon
from .graphs import GraphError, StableGraph, intern
from .structures import PairStructure, enumerate_generic_pairs


class SpaceMismatch(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class UnknownVertex(ValueError):
    pass


class UnknownHalfEdge(ValueError):
    pass


class UnstableResult(ValueError):
    pass


class LabelCollision(ValueError):
    pass


class DecoratedGraph:
    """A stable graph with psi exponents per half-edge and kappa exponents
    per vertex (stored as sorted ``(index, power)`` pairs, indices >= 1)."""

    __slots__ = ("graph", "psi", "kappa", "__dict__")

    def __init__(self, graph: StableGraph, psi=None, kappa=None):
        self.graph = graph
        self.psi = tuple(psi) if psi is not None else (0,) * graph.n_halfedges
        if kappa is None:
            kappa = ((),) * graph.n_vertices
        self.kappa = tuple(tuple(sorted(k)) for k in kappa)
        if len(self.psi) != graph.n_halfedges or len(self.kappa) != graph.n_vertices:
            raise ValueError("decoration shape does not match the graph")
        if any(e < 0 for e in self.psi):
            raise ValueError("psi exponents must be nonnegative")
        for k in self.kappa:
            if any(j < 1 or f < 1 for j, f in k):
                raise ValueError("kappa indices and exponents must be positive")

    def vertex_codim(self, v: int) -> int:
        c = sum(j * f for j, f in self.kappa[v])
        c += sum(self.psi[h] for h in self.graph.halfedges_at[v])
        return c

    @cached_property
    def codim(self) -> int:
        return self.graph.n_edges + sum(
            self.vertex_codim(v) for v in range(self.graph.n_vertices)
        )

    @cached_property
    def _canon(self):
        return canon.canonical_data(self.graph, self.psi, self.kappa)

    @property
    def canonical_key(self):
        return self._canon[0]

    @property
    def aut_order(self) -> int:
        """Automorphisms preserving the decorations."""
        return self._canon[1]

    def relabeled(self, hmap, vmap) -> "DecoratedGraph":
        g2 = self.graph.relabeled(hmap, vmap)
        psi = [0] * len(self.psi)
        for h, e in enumerate(self.psi):
            psi[hmap[h]] = e
        kappa = [()] * self.graph.n_vertices
        for v, k in enumerate(self.kappa):
            kappa[vmap[v]] = k
        return DecoratedGraph(g2, tuple(psi), tuple(kappa))

    def __eq__(self, other):
        if not isinstance(other, DecoratedGraph):
            return NotImplemented
        return self.canonical_key == other.canonical_key

    def __hash__(self):
        return hash(self.canonical_key)

    def __repr__(self):
        from . import grammar

        return grammar.decorated_to_text(self)


def codim(d: DecoratedGraph) -> int:
    return d.codim


def kappa_apply(a: int, v: int, d: DecoratedGraph) -> DecoratedGraph:
    """Multiply the decoration at vertex ``v`` by kappa_a."""
    if a < 1:
        raise ValueError("kappa index must be >= 1 (kappa_0 is a scalar)")
    if not (0 <= v < d.graph.n_vertices):
        raise UnknownVertex(f"no vertex {v}")
    k = dict(d.kappa[v])
    k[a] = k.get(a, 0) + 1
    kappa = list(d.kappa)
    kappa[v] = tuple(sorted(k.items()))
    return DecoratedGraph(d.graph, d.psi, tuple(kappa))


def psi_apply(h: int, d: DecoratedGraph) -> DecoratedGraph:
    """Add one arrowhead on half-edge ``h``."""
    if not (0 <= h < d.graph.n_halfedges):
        raise UnknownHalfEdge(f"no half-edge {h}")
    psi = list(d.psi)
    psi[h] += 1
    return DecoratedGraph(d.graph, tuple(psi), d.kappa)


class FormalSum:
    """Rational combination of decorated graphs on a fixed (g, n)."""

    __slots__ = ("g", "n", "terms")

    def __init__(self, g: int, n: int, terms=None):
        self.g = g
        self.n = n
        self.terms: dict[object, tuple[Fraction, DecoratedGraph]] = {}
        for coeff, d in terms or ():
            self._add(Fraction(coeff), d)

    def _add(self, coeff: Fraction, d: DecoratedGraph) -> None:
        if d.graph.genus != self.g or d.graph.n_legs != self.n:
            raise SpaceMismatch("term lives on a different moduli space")
        key = d.canonical_key
        if key in self.terms:
            c = self.terms[key][0] + coeff
            if c == 0:
                del self.terms[key]
            else:
                self.terms[key] = (c, self.terms[key][1])
        elif coeff != 0:
            self.terms[key] = (coeff, d)

    @classmethod
    def unit(cls, d: DecoratedGraph) -> "FormalSum":
        return cls(d.graph.genus, d.graph.n_legs, [(Fraction(1), d)])

    def items(self):
        return [self.terms[k] for k in sorted(self.terms)]

    def coefficient(self, d: DecoratedGraph) -> Fraction:
        entry = self.terms.get(d.canonical_key)
        return entry[0] if entry else Fraction(0)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        if (self.g, self.n) != (other.g, other.n):
            raise SpaceMismatch("sums live on different moduli spaces")
        out = FormalSum(self.g, self.n)
        for c, d in self.terms.values():
            out._add(c, d)
        for c, d in other.terms.values():
            out._add(c, d)
        return out

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + other.scale(-1)

    def scale(self, c) -> "FormalSum":
        c = Fraction(c)
        out = FormalSum(self.g, self.n)
        if c != 0:
            for coeff, d in self.terms.values():
                out._add(coeff * c, d)
        return out

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        if (self.g, self.n) != (other.g, other.n):
            return False
        return {k: v[0] for k, v in self.terms.items()} == {
            k: v[0] for k, v in other.terms.items()
        }

    def __repr__(self):
        from . import grammar

        return grammar.sum_to_text(self)

    def codimensions(self) -> set[int]:
        return {d.codim for _, d in self.terms.values()}


def homogeneous_codim(s: FormalSum) -> int:
    cods = s.codimensions()
    if len(cods) != 1:
        raise DegreeMismatch(f"sum is not homogeneous: codimensions {sorted(cods)}")
    return next(iter(cods))


def sigma(d: DecoratedGraph) -> FormalSum:
    """The stratum class with its conventional ``1/|Aut|`` normalization,
    taken with respect to the underlying (undecorated) graph."""
    return FormalSum.unit(d).scale(Fraction(1, d.graph.aut_order))


def kappa_pullback(a: int, s: FormalSum) -> FormalSum:
    """Multiplication by kappa_a: each term is summed over placements of
    one extra kappa_a on its vertices."""
    out = FormalSum(s.g, s.n)
    for coeff, d in s.terms.values():
        for v in range(d.graph.n_vertices):
            out._add(coeff, kappa_apply(a, v, d))
    return out


def normalize(s: FormalSum) -> FormalSum:
    """Drop terms in which some vertex decoration exceeds the dimension of
    its vertex moduli space; such classes vanish."""
    out = FormalSum(s.g, s.n)
    for coeff, d in s.terms.values():
        ok = all(
            d.vertex_codim(v) <= 3 * d.graph.genera[v] - 3 + d.graph.degree(v)
            for v in range(d.graph.n_vertices)
        )
        if ok:
            out._add(coeff, d)
    return out


# -- multiplication ----------------------------------------------------

_pair_cache: dict[tuple[object, object], list] = {}


def _generic_pairs_interned(RG: StableGraph, RH: StableGraph):
    key = (RG.canonical_key, RH.canonical_key)
    if key not in _pair_cache:
        _pair_cache[key] = enumerate_generic_pairs(RG, RH)
    return _pair_cache[key]


def _compositions(total: int, parts: int):
    """Weak compositions of ``total`` into ``parts`` slots."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(total: int, counts) -> int:
    out = factorial(total)
    for c in counts:
        out //= factorial(c)
    return out


def _expand_structure_raw(
    A: StableGraph,
    pair: PairStructure,
    psiG,
    kappaG,
    psiH,
    kappaH,
):
    """Expansion of one structure's contribution, yielded as raw
    ``(signed integer coefficient, psi tuple, kappa item tuples)`` terms on
    ``A`` (without the ``1/|Aut A|`` weight)."""
    base_psi = [0] * A.n_halfedges
    for h, e in enumerate(psiG):
        if e:
            base_psi[pair.left.beta[h]] += e
    for h, e in enumerate(psiH):
        if e:
            base_psi[pair.right.beta[h]] += e

    kappa_jobs = []  # (fiber vertices, j, f)
    for structure, kappa in ((pair.left, kappaG), (pair.right, kappaH)):
        fibers: dict[int, list[int]] = {}
        for x, u in enumerate(structure.alpha):
            fibers.setdefault(u, []).append(x)
        for u, monomial in enumerate(kappa):
            for j, f in monomial:
                kappa_jobs.append((fibers[u], j, f))

    job_expansions = []
    for fiber, j, f in kappa_jobs:
        opts = []
        for counts in _compositions(f, len(fiber)):
            coeff = _multinomial(f, counts)
            placement = tuple(
                (x, j, c) for x, c in zip(fiber, counts) if c
            )
            opts.append((coeff, placement))
        job_expansions.append(opts)

    excess_options = [((e[0],), (e[1],)) for e in pair.common_edges]
    sign = (-1) ** len(pair.common_edges)

    out = []

    def rec_jobs(i: int, coeff: int, placements):
        if i == len(job_expansions):
            rec_excess(0, coeff, placements, ())
            return
        for c, placement in job_expansions[i]:
            rec_jobs(i + 1, coeff * c, placements + placement)

    def rec_excess(i: int, coeff: int, placements, bumps):
        if i == len(excess_options):
            psi = list(base_psi)
            for h in bumps:
                psi[h] += 1
            kappa_acc = [dict() for _ in range(A.n_vertices)]
            for x, j, c in placements:
                kappa_acc[x][j] = kappa_acc[x].get(j, 0) + c
            out.append(
                (
                    sign * coeff,
                    tuple(psi),
                    tuple(tuple(sorted(k.items())) for k in kappa_acc),
                )
            )
            return
        for choice in excess_options[i]:
            rec_excess(i + 1, coeff, placements, bumps + choice)

    rec_jobs(0, 1, ())
    return out


def expand_pair_structure(
    A: StableGraph,
    pair: PairStructure,
    psiG,
    kappaG,
    psiH,
    kappaH,
):
    """Expansion of one structure's contribution as ``(coeff, DecoratedGraph)``
    terms on ``A`` (without the ``1/|Aut A|`` weight)."""
    return [
        (Fraction(coeff), DecoratedGraph(A, psi, kappa))
        for coeff, psi, kappa in _expand_structure_raw(
            A, pair, psiG, kappaG, psiH, kappaH
        )
    ]


def _interned_decorated(d: DecoratedGraph):
    rep, hmap, vmap = intern(d.graph)
    psi = [0] * len(d.psi)
    for h, e in enumerate(d.psi):
        psi[hmap[h]] = e
    kappa = [()] * d.graph.n_vertices
    for v, k in enumerate(d.kappa):
        kappa[vmap[v]] = k
    return rep, tuple(psi), tuple(kappa)


def pair_contributions(x: DecoratedGraph, y: DecoratedGraph):
    """Per-structure expansions of a product of two decorated graphs.

    Yields ``(carrier, structure, terms)`` triples where ``terms`` is the
    expansion of that one structure's contribution, without the
    ``1/|Aut(carrier)|`` weight; summing the weighted terms over all
    structures reproduces ``multiply``.
    """
    RG, psiG, kappaG = _interned_decorated(x)
    RH, psiH, kappaH = _interned_decorated(y)
    for A, pairs in _generic_pairs_interned(RG, RH):
        for pair in pairs:
            yield A, pair, expand_pair_structure(A, pair, psiG, kappaG, psiH, kappaH)


def multiply(x: FormalSum, y: FormalSum) -> FormalSum:
    """Product in the graded algebra of decorated graphs."""
    if (x.g, x.n) != (y.g, y.n):
        raise SpaceMismatch("factors live on different moduli spaces")
    out = FormalSum(x.g, x.n)
    for cG, dgG in x.terms.values():
        RG, psiG, kappaG = _interned_decorated(dgG)
        for cH, dgH in y.terms.values():
            RH, psiH, kappaH = _interned_decorated(dgH)
            c = cG * cH
            for A, pairs in _generic_pairs_interned(RG, RH):
                weight = c / A.aut_order
                for pair in pairs:
                    for coeff, d in expand_pair_structure(
                        A, pair, psiG, kappaG, psiH, kappaH
                    ):
                        out._add(weight * coeff, d)
    return out


# -- gluing ------------------------------------------------------------


def _join_graphs(piece: DecoratedGraph, host: DecoratedGraph, piece_leg: int, host_leg: int, relabel):
    hg, pg = host.graph, piece.graph
    try:
        h_host = hg.leg_of_label[host_leg]
        h_piece = pg.leg_of_label[piece_leg]
    except KeyError as exc:
        raise UnknownHalfEdge(f"missing leg label {exc}") from exc
    off_v = hg.n_vertices
    off_h = hg.n_halfedges
    genera = hg.genera + pg.genera
    vertex_of = list(hg.vertex_of) + [v + off_v for v in pg.vertex_of]
    partner = list(hg.partner) + [h + off_h for h in pg.partner]
    partner[h_host] = h_piece + off_h
    partner[h_piece + off_h] = h_host
    legs = []
    seen = set()
    for label, h in hg.legs:
        if label == host_leg:
            continue
        new_label = relabel.get(("host", label), relabel.get(label, label))
        legs.append((new_label, h))
    for label, h in pg.legs:
        if label == piece_leg:
            continue
        new_label = relabel.get(("piece", label), relabel.get(label, label))
        legs.append((new_label, h + off_h))
    labels = [label for label, _ in legs]
    if len(set(labels)) != len(labels):
        raise LabelCollision(f"leg labels collide after relabeling: {sorted(labels)}")
    try:
        graph = StableGraph(genera, tuple(vertex_of), tuple(partner), tuple(legs))
    except GraphError as exc:
        raise UnstableResult(str(exc)) from exc
    psi = host.psi + piece.psi
    kappa = host.kappa + piece.kappa
    return DecoratedGraph(graph, psi, kappa)


def graft(
    piece: FormalSum,
    host: DecoratedGraph,
    piece_leg: int,
    host_leg: int,
    relabel=None,
) -> FormalSum:
    """Glue a designated leg of every term of ``piece`` to a leg of
    ``host``, forming one new edge.  Remaining legs are renamed through
    ``relabel`` (keys may be plain labels or ``("host"|"piece", label)``).
    """
    relabel = dict(relabel or {})
    out = None
    for coeff, d in piece.terms.values():
        joined = _join_graphs(d, host, piece_leg, host_leg, relabel)
        if out is None:
            out = FormalSum(joined.graph.genus, joined.graph.n_legs)
        out._add(coeff, joined)
    if out is None:
        raise ValueError("cannot graft an empty sum (target space unknown)")
    return out


def graft_loop(s: FormalSum, leg_a: int, leg_b: int, relabel=None) -> FormalSum:
    """Join two legs of each term of ``s`` to each other, forming a loop
    edge (or an edge between two vertices of the same term)."""
    relabel = dict(relabel or {})
    out = None
    for coeff, d in s.terms.values():
        g = d.graph
        try:
            ha, hb = g.leg_of_label[leg_a], g.leg_of_label[leg_b]
        except KeyError as exc:
            raise UnknownHalfEdge(f"missing leg label {exc}") from exc
        partner = list(g.partner)
        partner[ha], partner[hb] = hb, ha
        legs = []
        for label, h in g.legs:
            if label in (leg_a, leg_b):
                continue
            legs.append((relabel.get(label, label), h))
        labels = [label for label, _ in legs]
        if len(set(labels)) != len(labels):
            raise LabelCollision("leg labels collide after relabeling")
        try:
            graph = StableGraph(g.genera, g.vertex_of, tuple(partner), tuple(legs))
        except GraphError as exc:
            raise UnstableResult(str(exc)) from exc
        joined = DecoratedGraph(graph, d.psi, d.kappa)
        if out is None:
            out = FormalSum(graph.genus, graph.n_legs)
        out._add(coeff, joined)
    if out is None:
        raise ValueError("cannot graft an empty sum (target space unknown)")
    return out
