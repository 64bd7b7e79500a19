from __future__ import annotations

from pathlib import Path

import pytest

from strataring.algebra import DecoratedGraph
from strataring.graphs import build_graph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# frozen at transcription time; a mismatch means the fixture was edited
FIXTURE_SHA256 = {
    "worked_product_g.sum": "4a48225a8803765032e0fb07a4cc07720f2459b1b6f3cacd0468af6817b83ee2",
    "worked_product_h.sum": "94cc081658456c540eace76bfdae385de67738231fbac77d8f98d9e88dc4387b",
    "m21_relation.sum": "9f7eae2152583fa8d0ce5352223afd6fb513ac6dea86e63b371c023106ab4967",
    "m31_relation_1.sum": "b745d4eb1fe6e172e6f3177a7aeca5ff6f5c6ffebf2fb1b0001e3ef09c20e1a2",
    "m31_relation_2.sum": "9a1665780074b7dde361226e52189bdf5af5c6bc99300f09164f7404b77dd9a6",
    "m31_relation_3.sum": "157c5a20583c2a1f6ec3f98a265b98bbf232184668ac4eda5838fc11a41e56a0",
    "m4_relation.sum": "cb8be57303b58e92f26117316e781dcb8608411360c0cad499559401f386dcb3",
    "g5_relation.sum": "e4e660bb1c3d6e12699ac736185368154c9a84a86577cd6e1b2ebbf7163d9ebe",
}


def dec(genera, edges=(), legs=None, psi=None, kappa=None) -> DecoratedGraph:
    """Shorthand builder used across the suite."""
    g = build_graph(genera, edges, legs or {})
    p = [0] * g.n_halfedges
    for h, e in (psi or {}).items():
        p[h] = e
    k = [()] * g.n_vertices
    for v, mono in (kappa or {}).items():
        k[v] = mono
    return DecoratedGraph(g, p, k)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
