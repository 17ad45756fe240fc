"""Fiber matrices, exact determinants, and dispersion polynomials."""

import numpy as np
import pytest
from gmpy2 import mpq

from conftest import make_spec, random_spec, seeded
from fermicert.errors import (
    InvalidSpec,
    SizeLimitExceeded,
    TwistInvarianceViolated,
)
from fermicert.exactnum import Cyclotomic, LambdaPoly, zeta
from fermicert.floquet import (
    OperatorSpec,
    _twist_entry,
    block_B,
    block_D,
    blocks_fiber,
    cells,
    charpoly,
    det_bareiss,
    det_cofactor,
    direct_fiber,
    dispersion,
    effective_hops,
    mu,
    reduce_quotient,
    spec_json_problems,
    symbol_matrix,
    validate_spec,
)
from fermicert.laurent import LaurentPoly, substitute_powers
from fermicert.models import lieb_model, zd_model


def lp(m, terms):
    return LaurentPoly(m, {tuple(e): v for e, v in terms.items()})


# ---------------------------------------------------------------------------
# Specifications
# ---------------------------------------------------------------------------


def test_symmetrize_fills_adjoint_hops():
    spec = make_spec(1, 2, (1,), [(1, 2, (1,), mpq(3, 2))])
    hops = effective_hops(spec)
    assert hops[(1, 2, (1,))] == mpq(3, 2)
    assert hops[(2, 1, (-1,))] == mpq(3, 2)


def test_conflicting_symmetrization_rejected():
    with pytest.raises(InvalidSpec):
        make_spec(1, 2, (1,), [(1, 2, (1,), 1), (2, 1, (-1,), 2)])


def test_validate_spec_reports_problems():
    good = zd_model(2, (2, 2))
    assert validate_spec(good) == []
    bad = OperatorSpec(
        dimension=2,
        orbits=1,
        period=(2, 2),
        hopping=good.hopping,
        potential=good.potential,
        symmetrize=True,
        model="zd",
    )
    problems = spec_json_problems({"dimension": 2, "orbits": 0, "period": [2, 2]})
    assert problems  # orbit count must be positive
    assert validate_spec(bad) == []


def test_fiber_size_guard():
    with pytest.raises(SizeLimitExceeded):
        dispersion(zd_model(1, (65,)))


def test_spec_json_roundtrip():
    spec = lieb_model((2, 3), potential={(1, (0, 0)): mpq(1, 2), (2, (1, 2)): -3})
    assert OperatorSpec.from_json(spec.to_json()) == spec


# ---------------------------------------------------------------------------
# Symbols, twists, and blocks
# ---------------------------------------------------------------------------


def test_mu_values():
    factors = mu((1, 2), (2, 3))
    assert factors[0] == zeta(2)
    assert factors[1] == zeta(3, 2)
    assert all(f == Cyclotomic.one() for f in mu((0, 0), (2, 3)))


def test_lieb_symbol_matrix():
    p = symbol_matrix(lieb_model((1, 1))).entries
    assert p[0][1] == lp(2, {(0, 0): 1, (-1, 0): 1})
    assert p[0][2] == lp(2, {(0, 0): 1, (0, -1): 1})
    assert p[1][0] == lp(2, {(0, 0): 1, (1, 0): 1})
    assert p[2][0] == lp(2, {(0, 0): 1, (0, 1): 1})
    assert p[0][0].is_zero() and p[1][2].is_zero()


def test_block_D_twists_the_symbol():
    spec = zd_model(1, (2,))
    blocks = block_D(spec).blocks
    assert blocks[0][0][0][0] == lp(1, {(1,): 1, (-1,): 1})
    assert blocks[1][1][0][0] == lp(1, {(1,): -1, (-1,): -1})
    assert blocks[0][1][0][0].is_zero()


def test_block_B_two_point_transform():
    spec = zd_model(1, (2,), potential={(0,): 3, (1,): 5})
    blocks = block_B(spec).blocks
    diag = blocks[0][0][0][0].terms[(0,)].constant_value().as_rational()
    off = blocks[0][1][0][0].terms[(0,)].constant_value().as_rational()
    assert diag == 4  # (3 + 5) / 2
    assert off == -1  # (3 - 5) / 2


def test_block_B_constant_potential_is_scalar():
    spec = zd_model(2, (2, 1), potential=mpq(7, 3))
    blocks = block_B(spec).blocks
    for a in range(2):
        for b in range(2):
            entry = blocks[a][b][0][0]
            if a == b:
                assert entry == LaurentPoly.constant(2, mpq(7, 3))
            else:
                assert entry.is_zero()


# ---------------------------------------------------------------------------
# Determinants
# ---------------------------------------------------------------------------


def test_determinant_methods_agree_on_random_specs():
    rng = seeded(31)
    count = 0
    while count < 8:
        spec = random_spec(rng, d=2, max_nu=2, max_q=2)
        if spec.fiber_dimension() > 6:
            continue
        count += 1
        base = dispersion(spec, method="bareiss")
        assert dispersion(spec, method="cofactor") == base
        assert dispersion(spec, method="interp") == base


def test_charpoly_against_cofactor_determinant():
    rng = seeded(33)
    for _ in range(10):
        n = rng.randint(1, 4)
        mat = [
            [
                Cyclotomic.from_rational(mpq(rng.randint(-3, 3), rng.randint(1, 2)))
                for _ in range(n)
            ]
            for _ in range(n)
        ]
        shifted = [
            [
                LambdaPoly([mat[i][j], Cyclotomic.from_rational(-1)])
                if i == j
                else LambdaPoly([mat[i][j]])
                for j in range(n)
            ]
            for i in range(n)
        ]
        direct = det_cofactor(shifted, LambdaPoly.zero(), LambdaPoly.one())
        assert charpoly(mat) == direct
        assert (
            det_bareiss(
                shifted,
                LambdaPoly.zero(),
                LambdaPoly.one(),
                lambda a, b: a.exact_div(b),
            )
            == direct
        )


# ---------------------------------------------------------------------------
# Dispersion polynomials: closed-form oracles
# ---------------------------------------------------------------------------


def test_dispersion_zd_free():
    assert dispersion(zd_model(1, (1,))) == lp(
        1, {(1,): 1, (-1,): 1, (0,): -LambdaPoly.variable()}
    )


def test_dispersion_free_lieb():
    lam = LambdaPoly.variable()
    expected = lp(
        2,
        {
            (0, 0): lam * 4 - lam * lam * lam,
            (1, 0): lam,
            (-1, 0): lam,
            (0, 1): lam,
            (0, -1): lam,
        },
    )
    assert dispersion(lieb_model((1, 1))) == expected


def test_dispersion_free_decorated():
    # closed form for the 3-cycle decoration: (b0 - lambda)(lambda^2 - 1) + 2(lambda + 1)
    from fermicert.models import decorated_model

    lam = LambdaPoly.variable()
    b0 = lp(2, {(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1})
    lam_c = LaurentPoly.constant(2, lam)
    expected = (b0 - lam_c) * LaurentPoly.constant(
        2, lam * lam - 1
    ) + LaurentPoly.constant(2, lam * 2 + 2)
    assert dispersion(decorated_model(2, 3, (1, 1))) == expected


def test_dispersion_period_two_reduction():
    spec = zd_model(1, (2,))
    lam = LambdaPoly.variable()
    ptilde = dispersion(spec)
    assert ptilde == lp(1, {(0,): lam * lam - 2, (2,): -1, (-2,): -1})
    assert reduce_quotient(ptilde, (2,)) == lp(
        1, {(0,): lam * lam - 2, (1,): -1, (-1,): -1}
    )


def test_dispersion_lambda_structure():
    rng = seeded(35)
    for _ in range(6):
        spec = random_spec(rng, d=2, max_nu=2, max_q=2)
        if spec.fiber_dimension() > 6:
            continue
        n = spec.fiber_dimension()
        ptilde = dispersion(spec)
        assert ptilde.lambda_degree() == n
        lead = ptilde.terms[(0, 0)].coeffs[n]
        assert lead.as_rational() == (1 if n % 2 == 0 else -1)
        # trace identity: next coefficient sums the diagonal of the fiber
        total_potential = sum(
            (v for _, _, v in _potential_triples(spec)), mpq(0)
        ) + _diagonal_hop_mass(spec) * spec.cell_count
        sub = ptilde.terms.get((0, 0), LambdaPoly.zero())
        coeff = sub.coeffs[n - 1] if sub.degree >= n - 1 else Cyclotomic.zero()
        expected = total_potential * (1 if n % 2 else -1)
        assert coeff.as_rational() == expected


def _potential_triples(spec):
    return [(e.orbit, e.cell, e.value) for e in spec.potential]


def _diagonal_hop_mass(spec):
    total = mpq(0)
    for (i, j, offset), value in effective_hops(spec).items():
        if i == j and all(x == 0 for x in offset):
            total += value
    return total


def test_product_identity_single_orbit():
    # For one free orbit the dispersion factors over the twisted symbols.
    rng = seeded(37)
    for q in [(2,), (3,)]:
        spec = zd_model(1, q)
        ptilde = dispersion(spec)
        product = LaurentPoly.constant(1, 1)
        base = dispersion(zd_model(1, (1,)))
        for w in cells(q):
            product = product * _twist_entry(base, mu(w, q))
        assert ptilde == product
    q = (2, 2)
    spec = zd_model(2, q)
    ptilde = dispersion(spec)
    product = LaurentPoly.constant(2, 1)
    base = dispersion(zd_model(2, (1, 1)))
    for w in cells(q):
        product = product * _twist_entry(base, mu(w, q))
    assert ptilde == product


# ---------------------------------------------------------------------------
# Twist invariance and the quotient
# ---------------------------------------------------------------------------


def test_twist_invariance_sample():
    rng = seeded(39)
    done = 0
    while done < 5:
        spec = random_spec(rng)
        if spec.fiber_dimension() > 6:
            continue
        done += 1
        ptilde = dispersion(spec)
        for w in cells(spec.period):
            assert _twist_entry(ptilde, mu(w, spec.period)) == ptilde


def test_reduce_quotient_rejects_non_invariant_input():
    with pytest.raises(TwistInvarianceViolated):
        reduce_quotient(lp(1, {(1,): 1}), (2,))


def test_reduce_quotient_substitution_roundtrip():
    spec = lieb_model((2, 1))
    ptilde = dispersion(spec)
    reduced = reduce_quotient(ptilde, (2, 1))
    assert substitute_powers(reduced, (2, 1)) == ptilde


# ---------------------------------------------------------------------------
# Numerical fibers
# ---------------------------------------------------------------------------


def test_direct_fiber_small_cases():
    spec = zd_model(1, (1,))
    assert np.allclose(direct_fiber(spec, [0.0]), [[2.0]])
    assert np.allclose(direct_fiber(spec, [0.5]), [[-2.0]])


def test_fiber_representations_are_unitarily_equivalent():
    rng = seeded(41)
    for _ in range(6):
        spec = random_spec(rng)
        for _ in range(3):
            k = [rng.random() for _ in range(spec.dimension)]
            a = np.sort(np.linalg.eigvalsh(direct_fiber(spec, k)))
            b = np.sort(np.linalg.eigvalsh(blocks_fiber(spec, k)))
            assert np.max(np.abs(a - b)) < 1e-9


def test_fiber_matrices_are_hermitian():
    rng = seeded(43)
    for _ in range(5):
        spec = random_spec(rng)
        k = [rng.random() for _ in range(spec.dimension)]
        for mat in (direct_fiber(spec, k), blocks_fiber(spec, k)):
            assert np.max(np.abs(mat - mat.conj().T)) < 1e-12
