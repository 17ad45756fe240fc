"""Exact dispersion polynomials and irreducible-component certificates for
periodic graph operators."""

from .certify import (
    A1Result,
    A2Result,
    AsymptoticData,
    CertificateReport,
    DegreeRelation,
    DichotomyResult,
    FactorCount,
    asymptotics,
    certify,
    certify_polynomial,
    check_proper,
    count_binomial_factors,
    count_catalog_factors,
    degree_relation,
    dichotomy_check,
    meets_origin_sufficient,
    verify_A1_catalog,
)
from .errors import FermicertError
from .exactnum import Cyclotomic, LambdaPoly, zeta
from .floquet import (
    FloquetMatrix,
    Hop,
    OperatorSpec,
    PotentialEntry,
    SymbolMatrix,
    block_B,
    block_D,
    blocks_fiber,
    cells,
    direct_fiber,
    dispersion,
    fiber_matrix,
    mu,
    reduce_quotient,
    symbol_matrix,
)
from .laurent import (
    LaurentPoly,
    NewtonPolytope,
    PlusPart,
    exponent_divide,
    facial_polynomial,
    hat,
    inner_normals,
    lowest_component,
    lp_eval,
    newton_polytope,
    plus_part,
    specialize_lambda,
    strip_monomial,
    substitute_powers,
)
from .models import (
    FlatBandState,
    GraphDescription,
    decorated_model,
    from_graph,
    lieb_flat_band_state,
    lieb_model,
    zd_model,
)
from .spectral import (
    band_functions,
    dispersion_root_check,
    flat_band_check,
    floquet_union,
    torus_spectrum,
)

__version__ = "0.1.0"
