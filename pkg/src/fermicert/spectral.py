"""Numerical verification layer: finite-torus spectra, fiber unions, and
exact flat-band kernel checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

import numpy as np
from gmpy2 import mpq

from .errors import SizeLimitExceeded
from .floquet import (
    OperatorSpec,
    blocks_fiber,
    dispersion,
    effective_hops,
    potential_table,
)
from .laurent import lp_eval
from .models import FlatBandState

MAX_TORUS_DIM = 4096


def _torus_sites(spec: OperatorSpec, repetitions) -> list[tuple[int, ...]]:
    lengths = [n * s for n, s in zip(repetitions, spec.period)]
    return list(itertools.product(*(range(x) for x in lengths)))


def torus_matrix(spec: OperatorSpec, repetitions) -> np.ndarray:
    """The operator restricted to Z^d modulo N*q with periodic boundaries."""
    repetitions = tuple(int(n) for n in repetitions)
    nu, q = spec.orbits, spec.period
    lengths = [n * s for n, s in zip(repetitions, q)]
    sites = _torus_sites(spec, repetitions)
    dim = nu * len(sites)
    if dim > MAX_TORUS_DIM:
        raise SizeLimitExceeded(f"torus dimension {dim} exceeds {MAX_TORUS_DIM}")
    index = {site: a for a, site in enumerate(sites)}
    out = np.zeros((dim, dim), dtype=float)
    for (i, j, offset), value in effective_hops(spec).items():
        for site in sites:
            src = tuple((l - o) % L for l, o, L in zip(site, offset, lengths))
            out[index[site] * nu + (i - 1), index[src] * nu + (j - 1)] += float(value)
    vtab = potential_table(spec)
    for site in sites:
        cell = tuple(l % s for l, s in zip(site, q))
        for orbit in range(1, nu + 1):
            row = index[site] * nu + (orbit - 1)
            out[row, row] += float(vtab[(orbit, cell)])
    return out


def torus_spectrum(spec: OperatorSpec, repetitions) -> np.ndarray:
    """Sorted eigenvalues of the periodic restriction to the N*q torus."""
    return np.sort(np.linalg.eigvalsh(torus_matrix(spec, repetitions)))


def floquet_union(spec: OperatorSpec, repetitions) -> np.ndarray:
    """Sorted union of fiber spectra over the discrete momentum grid.

    The grid k_j = m_j / (N_j q_j), 0 <= m_j < N_j, reproduces exactly the
    momenta of the N-fold torus, so the multisets agree with torus_spectrum.
    """
    repetitions = tuple(int(n) for n in repetitions)
    dim = spec.fiber_dimension() * prod(repetitions)
    if dim > MAX_TORUS_DIM:
        raise SizeLimitExceeded(f"total dimension {dim} exceeds {MAX_TORUS_DIM}")
    values = []
    for m in itertools.product(*(range(n) for n in repetitions)):
        k = [mj / (nj * sj) for mj, nj, sj in zip(m, repetitions, spec.period)]
        values.append(np.linalg.eigvalsh(blocks_fiber(spec, k)))
    return np.sort(np.concatenate(values))


def flat_band_check(spec: OperatorSpec, state: FlatBandState, lambda0) -> bool:
    """Exact test that (H - lambda0) annihilates a finitely supported vector."""
    lambda0 = mpq(lambda0)
    psi = state.as_dict()
    image: dict = {}

    def add(key, value):
        if value:
            total = image.get(key, mpq(0)) + value
            if total:
                image[key] = total
            else:
                image.pop(key, None)

    hops = effective_hops(spec)
    vtab = potential_table(spec)
    q = spec.period
    for (orbit, cell), amp in psi.items():
        for (i, j, offset), value in hops.items():
            if j == orbit:
                add((i, tuple(c + o for c, o in zip(cell, offset))), value * amp)
        reduced = tuple(c % s for c, s in zip(cell, q))
        add((orbit, cell), (vtab[(orbit, reduced)] - lambda0) * amp)
    return not image


@dataclass(frozen=True)
class RootCheckResult:
    """Worst residual of fiber eigenvalues on the dispersion variety."""

    max_residual: float
    scale: float
    samples: int

    def passed(self, tol: float = 1e-7) -> bool:
        return self.max_residual <= tol * self.scale


def dispersion_root_check(
    spec: OperatorSpec, samples: int = 5, seed: int = 0
) -> RootCheckResult:
    """Every fiber eigenvalue must be a root of the dispersion polynomial."""
    ptilde = dispersion(spec)
    scale = 1.0 + max(
        abs(c.embed()) for coeff in ptilde.terms.values() for c in _cyclos(coeff)
    )
    rng = np.random.default_rng(seed)
    worst = 0.0
    d = spec.dimension
    for _ in range(samples):
        k = rng.random(d)
        z = [complex(np.exp(2j * np.pi * kj)) for kj in k]
        for energy in np.linalg.eigvalsh(blocks_fiber(spec, k)):
            worst = max(worst, abs(lp_eval(ptilde, z, complex(energy))))
    return RootCheckResult(worst, scale, samples)


def _cyclos(coeff):
    return coeff.coeffs if coeff.coeffs else ()


def band_functions(spec: OperatorSpec, path, samples: int | None = None):
    """Sorted fiber eigenvalues along a momentum path.

    With `samples` given, the path vertices are joined by straight segments
    and resampled to that many evenly spaced points; rows are (k, energies).
    """
    points = [tuple(float(x) for x in k) for k in path]
    if samples is not None and len(points) >= 2 and samples > len(points):
        verts = np.array(points)
        seg_lengths = np.linalg.norm(np.diff(verts, axis=0), axis=1)
        total = float(seg_lengths.sum()) or 1.0
        stations = np.concatenate([[0.0], np.cumsum(seg_lengths)]) / total
        ts = np.linspace(0.0, 1.0, samples)
        resampled = []
        for t in ts:
            idx = int(np.searchsorted(stations, t, side="right") - 1)
            idx = min(idx, len(points) - 2)
            span = stations[idx + 1] - stations[idx]
            frac = 0.0 if span == 0 else (t - stations[idx]) / span
            resampled.append(tuple(verts[idx] + frac * (verts[idx + 1] - verts[idx])))
        points = resampled
    rows = []
    for k in points:
        energies = np.sort(np.linalg.eigvalsh(blocks_fiber(spec, k)))
        rows.append((k, energies))
    return rows


def band_csv(rows, dimension: int) -> str:
    """Render band data as CSV with 12 significant digits."""
    n_bands = len(rows[0][1]) if rows else 0
    header = [f"k{j + 1}" for j in range(dimension)] + [
        f"E{j + 1}" for j in range(n_bands)
    ]
    lines = [",".join(header)]
    for k, energies in rows:
        cells = [f"{x:.12g}" for x in k] + [f"{e:.12g}" for e in energies]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
