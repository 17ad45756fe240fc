"""Catalog lattices, graph import, and flat-band witnesses."""

import numpy as np
import pytest
from gmpy2 import mpq

from conftest import seeded
from fermicert.errors import InfiniteRange, InvalidOrbitIndex, InvalidSpec
from fermicert.floquet import blocks_fiber, effective_hops, symbol_matrix
from fermicert.laurent import LaurentPoly
from fermicert.models import (
    FlatBandState,
    GraphDescription,
    decorated_graph,
    decorated_model,
    from_graph,
    lieb_flat_band_state,
    lieb_graph,
    lieb_model,
    zd_graph,
    zd_model,
)


def lp(m, terms):
    return LaurentPoly(m, {tuple(e): v for e, v in terms.items()})


# ---------------------------------------------------------------------------
# Catalog constructors
# ---------------------------------------------------------------------------


def test_zd_symbol_is_the_cosine_symbol():
    p = symbol_matrix(zd_model(2, (1, 1))).entries
    assert p[0][0] == lp(2, {(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1})


def test_decorated_model_requires_two_orbits():
    with pytest.raises(InvalidSpec):
        decorated_model(2, 1, (1, 1))


def test_decorated_symbol_cycle_and_doubled_edge():
    p3 = symbol_matrix(decorated_model(1, 3, (1,))).entries
    assert p3[1][2] == LaurentPoly.constant(1, 1)
    assert p3[2][0] == LaurentPoly.constant(1, 1)
    assert p3[1][1].is_zero()
    # a 2-cycle degenerates to an edge of multiplicity two
    p2 = symbol_matrix(decorated_model(1, 2, (1,))).entries
    assert p2[0][1] == LaurentPoly.constant(1, 2)
    assert p2[1][0] == LaurentPoly.constant(1, 2)


def test_potential_argument_forms_agree():
    q = (2, 1)
    by_dict = zd_model(2, q, potential={(0, 0): mpq(1, 2), (1, 0): 3})
    by_triples = zd_model(2, q, potential=[(1, (0, 0), mpq(1, 2)), (1, (1, 0), 3)])
    assert set(by_dict.potential) == set(by_triples.potential)
    constant = zd_model(2, q, potential=5)
    assert {p.value for p in constant.potential} == {mpq(5)}
    assert len(constant.potential) == 2


# ---------------------------------------------------------------------------
# Graph import
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "graph,model",
    [
        (lieb_graph(), lieb_model((2, 3))),
        (zd_graph(2), zd_model(2, (2, 3))),
        (zd_graph(3), zd_model(3, (1, 2, 1))),
        (decorated_graph(2, 2), decorated_model(2, 2, (2, 3))),
        (decorated_graph(2, 4), decorated_model(2, 4, (2, 3))),
    ],
)
def test_graph_import_matches_catalog_coefficients(graph, model):
    imported = from_graph(graph, model.period)
    assert effective_hops(imported) == effective_hops(model)


def test_self_loop_counted_once():
    graph = GraphDescription(1, 1, ((1, 1, (0,)),))
    spec = from_graph(graph, (1,))
    assert effective_hops(spec) == {(1, 1, (0,)): mpq(1)}


def test_parallel_edges_accumulate_multiplicity():
    graph = GraphDescription(1, 2, ((1, 2, (0,)), (1, 2, (0,))))
    spec = from_graph(graph, (1,))
    assert effective_hops(spec)[(2, 1, (0,))] == mpq(2)


def test_graph_import_rejects_bad_records():
    with pytest.raises(InvalidOrbitIndex):
        from_graph(GraphDescription(1, 1, ((1, 2, (0,)),)), (1,))
    with pytest.raises(InvalidSpec):
        from_graph(GraphDescription(2, 1, ((1, 1, (1,)),)), (1, 1))
    with pytest.raises(InfiniteRange):
        from_graph(GraphDescription(1, 1, ((1, 1, (100,)),)), (1,))


def test_lieb_edges_join_nearest_vertices():
    # vertex coordinates: orbit 1 at 2*cell, orbit 2 at 2*cell + e1,
    # orbit 3 at 2*cell + e2; every edge must have unit length
    anchor = {1: (0, 0), 2: (1, 0), 3: (0, 1)}
    for i, j, offset in lieb_graph().edges:
        vi = anchor[i]
        vj = tuple(a + 2 * o for a, o in zip(anchor[j], offset))
        assert sum(abs(a - b) for a, b in zip(vi, vj)) == 1


# ---------------------------------------------------------------------------
# Flat-band witness data
# ---------------------------------------------------------------------------


def test_lieb_orbit_cell_indexing_covers_the_plane():
    # (orbit, cell) maps onto the vertex set {n: n1, n2 not both odd}:
    # orbit 1 <-> both even, orbit 2 <-> (odd, even), orbit 3 <-> (even, odd)
    anchor = {1: (0, 0), 2: (1, 0), 3: (0, 1)}
    window = range(-2, 3)
    vertices = {
        tuple(a + 2 * c for a, c in zip(anchor[orbit], cell)): (orbit, cell)
        for orbit in (1, 2, 3)
        for cell in [(x, y) for x in window for y in window]
    }
    expected = {
        (x, y)
        for x in range(-4, 6)
        for y in range(-4, 6)
        if not (x % 2 == 1 and y % 2 == 1)
    }
    assert expected <= set(vertices)
    assert len(vertices) == 3 * len(window) ** 2  # injective


def test_flat_band_state_translation():
    state = lieb_flat_band_state()
    moved = state.translate((2, -1))
    assert moved.as_dict()[(3, (2, -1))] == mpq(1)
    assert moved.as_dict()[(2, (2, 0))] == mpq(-1)


def test_fibers_of_catalog_models_are_hermitian():
    rng = seeded(51)
    for spec in (lieb_model((2, 3)), decorated_model(2, 3, (2, 1)), zd_model(3, (1, 2, 2))):
        for _ in range(3):
            k = [rng.random() for _ in range(spec.dimension)]
            mat = blocks_fiber(spec, k)
            assert np.max(np.abs(mat - mat.conj().T)) < 1e-12
