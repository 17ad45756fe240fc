"""Catalog lattice constructors and the general graph-to-operator import.

The catalog covers the hypercubic lattice, the Lieb lattice, and the
cycle-decorated hypercubic lattice; arbitrary periodic graphs enter through
GraphDescription records listing one representative per edge orbit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from gmpy2 import mpq

from .errors import InfiniteRange, InvalidOrbitIndex, InvalidSpec
from .exactnum import as_mpq
from .floquet import Hop, OperatorSpec, PotentialEntry, cells

MAX_OFFSET = 64


def _potential_entries(nu, q, potential):
    """Normalize a potential argument into PotentialEntry records.

    Accepts None or 0 (free), a single rational (constant on every site), a
    mapping keyed by (orbit, cell) pairs — or by bare cells when nu == 1 — or
    an iterable of (orbit, cell, value) triples.
    """
    if potential is None or potential == 0:
        return ()
    if isinstance(potential, (int, str, mpq)) or hasattr(potential, "denominator"):
        value = as_mpq(potential)
        return tuple(
            PotentialEntry(orbit, cell, value)
            for orbit in range(1, nu + 1)
            for cell in cells(tuple(q))
        )
    entries = []
    items = potential.items() if isinstance(potential, dict) else potential
    for item in items:
        if isinstance(potential, dict):
            key, value = item
            if nu == 1 and key and isinstance(key[0], int) and len(key) == len(q):
                orbit, cell = 1, tuple(key)
            else:
                orbit, cell = int(key[0]), tuple(key[1])
        else:
            orbit, cell, value = item
            orbit, cell = int(orbit), tuple(cell)
        entries.append(PotentialEntry(orbit, cell, as_mpq(value)))
    return tuple(entries)


def zd_model(d: int, q, potential=None) -> OperatorSpec:
    """Nearest-neighbor hopping on the hypercubic lattice Z^d."""
    q = tuple(int(x) for x in q)
    hops = tuple(
        Hop(1, 1, tuple(1 if i == j else 0 for i in range(d)), mpq(1))
        for j in range(d)
    )
    return OperatorSpec(
        dimension=d,
        orbits=1,
        period=q,
        hopping=hops,
        potential=_potential_entries(1, q, potential),
        symmetrize=True,
        model="zd",
    )


def lieb_model(q, potential=None) -> OperatorSpec:
    """The Lieb lattice: a square lattice with edge-midpoint sites.

    Orbit 1 sits at the corners, orbit 2 on horizontal edges, orbit 3 on
    vertical edges; the symbol entries are p12 = 1 + z1^{-1}, p13 = 1 + z2^{-1}
    and their adjoints.
    """
    q = tuple(int(x) for x in q)
    if len(q) != 2:
        raise InvalidSpec("the Lieb lattice is two-dimensional")
    hops = (
        Hop(1, 2, (0, 0), mpq(1)),
        Hop(1, 2, (1, 0), mpq(1)),
        Hop(1, 3, (0, 0), mpq(1)),
        Hop(1, 3, (0, 1), mpq(1)),
    )
    return OperatorSpec(
        dimension=2,
        orbits=3,
        period=q,
        hopping=hops,
        potential=_potential_entries(3, q, potential),
        symmetrize=True,
        model="lieb",
    )


def decorated_model(d: int, nu: int, q, potential=None) -> OperatorSpec:
    """Z^d with a nu-cycle attached at every lattice point.

    Orbit 1 is the lattice site and carries the nearest-neighbor hops; orbits
    1..nu form the cycle.  For nu = 2 the cycle degenerates to a doubled edge,
    counted with multiplicity (a^{12}_0 = 2).
    """
    if nu < 2:
        raise InvalidSpec("decoration requires at least two orbits")
    q = tuple(int(x) for x in q)
    zero = (0,) * d
    hops = [
        Hop(1, 1, tuple(1 if i == j else 0 for i in range(d)), mpq(1))
        for j in range(d)
    ]
    if nu == 2:
        hops.append(Hop(1, 2, zero, mpq(2)))
    else:
        for j in range(1, nu):
            hops.append(Hop(j, j + 1, zero, mpq(1)))
        hops.append(Hop(nu, 1, zero, mpq(1)))
    return OperatorSpec(
        dimension=d,
        orbits=nu,
        period=q,
        hopping=tuple(hops),
        potential=_potential_entries(nu, q, potential),
        symmetrize=True,
        model="decorated",
    )


# ---------------------------------------------------------------------------
# General periodic graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphDescription:
    """A periodic graph given by one representative edge per translation orbit.

    An edge record (i, j, offset) joins vertex v_i in the base cell to vertex
    v_j in the cell shifted by offset.
    """

    dimension: int
    orbit_count: int
    edges: tuple[tuple[int, int, tuple[int, ...]], ...]


def from_graph(graph: GraphDescription, q, potential=None, model=None) -> OperatorSpec:
    """Adjacency operator of a periodic graph as an operator specification.

    Coefficients count edges with multiplicity: the edge (i, j, o) connects
    v_i to v_j + o, so it contributes to both a^{ji}_o and a^{ij}_{-o} (once,
    not twice, for a self-loop).
    """
    d, nu = graph.dimension, graph.orbit_count
    table: dict = {}
    for i, j, offset in graph.edges:
        offset = tuple(int(x) for x in offset)
        if not (1 <= i <= nu and 1 <= j <= nu):
            raise InvalidOrbitIndex(f"edge endpoint outside 1..{nu}")
        if len(offset) != d:
            raise InvalidSpec("edge offset length must equal dimension")
        if any(abs(x) > MAX_OFFSET for x in offset):
            raise InfiniteRange(f"edge offset {offset} exceeds the range bound")
        keys = {(j, i, offset), (i, j, tuple(-x for x in offset))}
        for key in keys:  # one key for a self-loop, two otherwise
            table[key] = table.get(key, mpq(0)) + 1
    hops = tuple(
        Hop(i, j, offset, value) for (i, j, offset), value in sorted(table.items())
    )
    q = tuple(int(x) for x in q)
    return OperatorSpec(
        dimension=d,
        orbits=nu,
        period=q,
        hopping=hops,
        potential=_potential_entries(nu, q, potential),
        symmetrize=False,
        model=model,
    )


def lieb_graph() -> GraphDescription:
    """Edge-orbit description of the Lieb lattice matching lieb_model."""
    return GraphDescription(
        dimension=2,
        orbit_count=3,
        edges=(
            (1, 2, (0, 0)),
            (1, 2, (-1, 0)),
            (1, 3, (0, 0)),
            (1, 3, (0, -1)),
        ),
    )


def zd_graph(d: int) -> GraphDescription:
    return GraphDescription(
        dimension=d,
        orbit_count=1,
        edges=tuple(
            (1, 1, tuple(-1 if i == j else 0 for i in range(d))) for j in range(d)
        ),
    )


def decorated_graph(d: int, nu: int) -> GraphDescription:
    zero = (0,) * d
    edges = [
        (1, 1, tuple(-1 if i == j else 0 for i in range(d))) for j in range(d)
    ]
    if nu == 2:
        edges += [(1, 2, zero), (2, 1, zero)]
    else:
        edges += [(j, j + 1, zero) for j in range(1, nu)]
        edges.append((nu, 1, zero))
    return GraphDescription(dimension=d, orbit_count=nu, edges=tuple(edges))


# ---------------------------------------------------------------------------
# Flat band witness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatBandState:
    """A finitely supported vector on (orbit, cell) sites with exact amplitudes."""

    amplitudes: tuple[tuple[int, tuple[int, ...], mpq], ...]

    def as_dict(self) -> dict:
        return {(orbit, cell): value for orbit, cell, value in self.amplitudes}

    def translate(self, n: tuple[int, ...]) -> "FlatBandState":
        return FlatBandState(
            tuple(
                (orbit, tuple(c + m for c, m in zip(cell, n)), value)
                for orbit, cell, value in self.amplitudes
            )
        )


def lieb_flat_band_state() -> FlatBandState:
    """Compactly supported zero-energy eigenstate of the free Lieb operator.

    It alternates around one square plaquette: +1 on the two vertical-edge
    sites, -1 on the two horizontal-edge sites.
    """
    return FlatBandState(
        (
            (3, (0, 0), mpq(1)),
            (3, (1, 0), mpq(1)),
            (2, (0, 0), mpq(-1)),
            (2, (0, 1), mpq(-1)),
        )
    )
