"""Sparse multivariate Laurent polynomials over spectral-parameter polynomials.

Terms map integer exponent vectors to LambdaPoly coefficients.  All asymptotic
constructions live here: plus parts, the last-variable inversion, lowest
(weighted-)degree components, monomial stripping, exponent division, and Newton
polytopes with their facial data.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import (
    DimensionMismatch,
    InexactDivision,
    NonPositiveVector,
    NotDivisible,
    ZeroCoordinate,
    ZeroPolynomial,
)
from .exactnum import Cyclotomic, LambdaPoly

_Q0 = mpq(0)


def _coeff(value) -> LambdaPoly:
    if isinstance(value, LambdaPoly):
        return value
    if isinstance(value, Cyclotomic):
        return LambdaPoly([value])
    return LambdaPoly([Cyclotomic.from_rational(value)])


def grlex_key(exponent: tuple[int, ...]):
    return (sum(exponent), exponent)


class LaurentPoly:
    """Sparse Laurent polynomial; no zero coefficients are stored."""

    __slots__ = ("num_vars", "terms")
    __hash__ = None

    def __init__(self, num_vars: int, terms: dict | None = None, _clean: bool = False):
        self.num_vars = num_vars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            clean = {}
            for exp, coeff in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != num_vars:
                    raise DimensionMismatch("exponent length does not match num_vars")
                coeff = _coeff(coeff)
                if not coeff.is_zero():
                    prev = clean.get(exp)
                    coeff = coeff if prev is None else prev + coeff
                    if coeff.is_zero():
                        del clean[exp]
                    else:
                        clean[exp] = coeff
            self.terms = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(num_vars: int) -> "LaurentPoly":
        return LaurentPoly(num_vars, {}, _clean=True)

    @staticmethod
    def constant(num_vars: int, value) -> "LaurentPoly":
        c = _coeff(value)
        if c.is_zero():
            return LaurentPoly.zero(num_vars)
        return LaurentPoly(num_vars, {(0,) * num_vars: c}, _clean=True)

    @staticmethod
    def monomial(num_vars: int, exponent: Sequence[int], value=1) -> "LaurentPoly":
        c = _coeff(value)
        if c.is_zero():
            return LaurentPoly.zero(num_vars)
        return LaurentPoly(num_vars, {tuple(int(e) for e in exponent): c}, _clean=True)

    @staticmethod
    def variable(num_vars: int, index: int) -> "LaurentPoly":
        exp = [0] * num_vars
        exp[index] = 1
        return LaurentPoly.monomial(num_vars, exp)

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """Units of the Laurent ring are single terms with nonzero coefficient."""
        return len(self.terms) == 1

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def total_degree(self) -> int:
        """Maximum total exponent degree over the terms."""
        if not self.terms:
            raise ZeroPolynomial("degree of the zero polynomial")
        return max(sum(exp) for exp in self.terms)

    def alpha_min(self) -> tuple[int, ...]:
        """Componentwise minimum exponent over the terms."""
        if not self.terms:
            raise ZeroPolynomial("alpha_min of the zero polynomial")
        m = self.num_vars
        mins = [min(exp[j] for exp in self.terms) for j in range(m)]
        return tuple(mins)

    def lambda_degree(self) -> int:
        if not self.terms:
            return -1
        return max(c.degree for c in self.terms.values())

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.num_vars != other.num_vars:
            raise DimensionMismatch(
                f"operands have {self.num_vars} and {other.num_vars} variables"
            )

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.num_vars, other)
        self._check(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            cur = out.get(exp)
            total = coeff if cur is None else cur + coeff
            if total.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = total
        return LaurentPoly(self.num_vars, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(
            self.num_vars, {e: -c for e, c in self.terms.items()}, _clean=True
        )

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.num_vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                cur = out.get(exp)
                total = prod if cur is None else cur + prod
                if total.is_zero():
                    out.pop(exp, None)
                else:
                    out[exp] = total
        return LaurentPoly(self.num_vars, out, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, value) -> "LaurentPoly":
        c = _coeff(value)
        if c.is_zero():
            return LaurentPoly.zero(self.num_vars)
        return LaurentPoly(
            self.num_vars, {e: k * c for e, k in self.terms.items()}, _clean=True
        )

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers only for monomials; invert explicitly")
        result = LaurentPoly.constant(self.num_vars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.num_vars, other)
        return self.num_vars == other.num_vars and self.terms == other.terms

    # -- io -----------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": self.num_vars,
            "terms": [
                {"exp": list(exp), "coeff": coeff.to_json()}
                for exp, coeff in self.sorted_terms()
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "LaurentPoly":
        terms = {
            tuple(t["exp"]): LambdaPoly.from_json(t["coeff"]) for t in data["terms"]
        }
        return LaurentPoly(int(data["vars"]), terms)

    def __repr__(self):
        return f"LaurentPoly({self.num_vars}, {self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.sorted_terms():
            mono = "*".join(
                f"z{j + 1}" if e == 1 else f"z{j + 1}^{e}"
                for j, e in enumerate(exp)
                if e != 0
            )
            cs = str(coeff)
            if mono:
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append(f"-{mono}")
                else:
                    wrap = ("+" in cs[1:]) or ("-" in cs[1:])
                    parts.append(f"({cs})*{mono}" if wrap else f"{cs}*{mono}")
            else:
                parts.append(cs)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


# ---------------------------------------------------------------------------
# Asymptotic constructions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlusPart:
    """Minimal nonnegative monomial shift making a Laurent polynomial a polynomial."""

    alpha0: tuple[int, ...]
    poly: LaurentPoly


@dataclass(frozen=True)
class NewtonPolytope:
    """Extreme points of the convex hull of the exponent set."""

    vertices: tuple[tuple[int, ...], ...]


def substitute_powers(f: LaurentPoly, l: Sequence[int]) -> LaurentPoly:
    """Replace each variable z_j by z_j^(l_j)."""
    l = tuple(int(x) for x in l)
    if len(l) != f.num_vars:
        raise DimensionMismatch("substitution vector length mismatch")
    if any(x < 1 for x in l):
        raise NonPositiveVector(f"substitution vector {l} must be positive")
    terms = {
        tuple(e * s for e, s in zip(exp, l)): coeff for exp, coeff in f.terms.items()
    }
    return LaurentPoly(f.num_vars, terms, _clean=True)


def hat(f: LaurentPoly) -> LaurentPoly:
    """Invert the last variable.  An involution; coefficients are untouched."""
    if f.num_vars < 1:
        raise DimensionMismatch("need at least one variable")
    terms = {exp[:-1] + (-exp[-1],): coeff for exp, coeff in f.terms.items()}
    return LaurentPoly(f.num_vars, terms, _clean=True)


def plus_part(f: LaurentPoly) -> PlusPart:
    """The smallest shift alpha0 >= 0 with x^alpha0 * f a genuine polynomial."""
    if f.is_zero():
        raise ZeroPolynomial("plus part of the zero polynomial")
    mins = f.alpha_min()
    alpha0 = tuple(max(-m, 0) for m in mins)
    terms = {
        tuple(e + a for e, a in zip(exp, alpha0)): coeff
        for exp, coeff in f.terms.items()
    }
    return PlusPart(alpha0, LaurentPoly(f.num_vars, terms, _clean=True))


def lowest_component(f: LaurentPoly, l: Sequence[int] | None = None) -> LaurentPoly:
    """Sum of the terms minimizing the weighted degree <l, alpha>.

    With the default all-ones weight this is the lowest degree component; in
    general it is the facial polynomial of the Newton polytope face with inner
    normal l.
    """
    if f.is_zero():
        raise ZeroPolynomial("lowest component of the zero polynomial")
    if l is None:
        l = (1,) * f.num_vars
    l = tuple(int(x) for x in l)
    if len(l) != f.num_vars:
        raise DimensionMismatch("weight vector length mismatch")
    if all(x == 0 for x in l):
        raise NonPositiveVector("weight vector must be nonzero")
    low = min(sum(e * w for e, w in zip(exp, l)) for exp in f.terms)
    terms = {
        exp: coeff
        for exp, coeff in f.terms.items()
        if sum(e * w for e, w in zip(exp, l)) == low
    }
    return LaurentPoly(f.num_vars, terms, _clean=True)


facial_polynomial = lowest_component


def strip_monomial(f: LaurentPoly) -> tuple[tuple[int, ...], LaurentPoly]:
    """Write f = x^gamma * core with gamma the componentwise minimum exponent."""
    if f.is_zero():
        raise ZeroPolynomial("cannot strip the zero polynomial")
    gamma = f.alpha_min()
    terms = {
        tuple(e - g for e, g in zip(exp, gamma)): coeff
        for exp, coeff in f.terms.items()
    }
    return gamma, LaurentPoly(f.num_vars, terms, _clean=True)


def exponent_divide(f: LaurentPoly, q: Sequence[int]) -> LaurentPoly:
    """Inverse of substitute_powers: divide every exponent componentwise by q."""
    q = tuple(int(x) for x in q)
    if len(q) != f.num_vars:
        raise DimensionMismatch("period vector length mismatch")
    if any(x < 1 for x in q):
        raise NonPositiveVector(f"period vector {q} must be positive")
    terms = {}
    for exp, coeff in f.terms.items():
        for j, (e, s) in enumerate(zip(exp, q)):
            if e % s != 0:
                raise NotDivisible(j, e)
        terms[tuple(e // s for e, s in zip(exp, q))] = coeff
    return LaurentPoly(f.num_vars, terms, _clean=True)


def specialize_lambda(f: LaurentPoly, value) -> LaurentPoly:
    """Substitute a fixed value for the spectral parameter in every coefficient."""
    terms = {}
    for exp, coeff in f.terms.items():
        c = coeff.eval_cyclotomic(value)
        if not c.is_zero():
            terms[exp] = LambdaPoly([c])
    return LaurentPoly(f.num_vars, terms, _clean=True)


def lp_eval(f: LaurentPoly, z: Sequence[complex], lam: complex) -> complex:
    """Numeric evaluation at a point with nonzero coordinates."""
    if len(z) != f.num_vars:
        raise DimensionMismatch("point dimension mismatch")
    if any(abs(c) == 0 for c in z):
        raise ZeroCoordinate("evaluation point has a zero coordinate")
    total = 0j
    for exp, coeff in f.terms.items():
        mono = 1 + 0j
        for base, e in zip(z, exp):
            mono *= base**e
        total += coeff.eval_complex(lam) * mono
    return total


def laurent_exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Exact quotient in the Laurent ring; raises InexactDivision otherwise."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return LaurentPoly.zero(f.num_vars)
    gamma_f, core_f = strip_monomial(f)
    gamma_g, core_g = strip_monomial(g)
    shift = tuple(a - b for a, b in zip(gamma_f, gamma_g))
    quot = _poly_exact_div(core_f, core_g)
    terms = {tuple(e + s for e, s in zip(exp, shift)): c for exp, c in quot.terms.items()}
    return LaurentPoly(f.num_vars, terms, _clean=True)


def _poly_exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Exact division of genuine polynomials by leading-term cancellation (grlex)."""
    lead_g = max(g.terms, key=grlex_key)
    cg = g.terms[lead_g]
    quot: dict = {}
    rem = f
    while not rem.is_zero():
        lead_r = max(rem.terms, key=grlex_key)
        diff = tuple(a - b for a, b in zip(lead_r, lead_g))
        if any(d < 0 for d in diff):
            raise InexactDivision("leading monomial not divisible")
        c = rem.terms[lead_r].exact_div(cg)
        quot[diff] = c
        rem = rem - LaurentPoly(f.num_vars, {diff: c}, _clean=True) * g
    return LaurentPoly(f.num_vars, quot, _clean=True)


# ---------------------------------------------------------------------------
# Newton polytopes
# ---------------------------------------------------------------------------


def newton_polytope(f: LaurentPoly) -> NewtonPolytope:
    """Extreme points of the convex hull of the exponent set of f."""
    if f.is_zero():
        raise ZeroPolynomial("Newton polytope of the zero polynomial")
    points = sorted(set(f.terms))
    m = f.num_vars
    if len(points) == 1:
        verts = points
    elif m == 1:
        verts = sorted({points[0], points[-1]})
    elif m == 2:
        verts = _hull_2d(points)
    else:
        verts = [p for p in points if not _in_hull(p, [q for q in points if q != p])]
    return NewtonPolytope(tuple(sorted(verts)))


def _hull_2d(points: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Monotone chain; strict turns only, so collinear points are dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_2d_ccw(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Extreme points in counterclockwise order (exposed for facial analysis)."""
    return _hull_2d(list(points))


def _in_hull(p, others) -> bool:
    """Exact feasibility of p in conv(others) via a tiny phase-1 simplex."""
    if not others:
        return False
    m = len(p)
    # variables: lambda_i >= 0; constraints: sum lambda_i v_i = p, sum lambda_i = 1
    rows = []
    for j in range(m):
        rows.append([mpq(v[j]) for v in others] + [mpq(p[j])])
    rows.append([mpq(1)] * len(others) + [mpq(1)])
    return _lp_feasible(rows)


def _lp_feasible(rows: list[list]) -> bool:
    """Is there x >= 0 with A x = b?  rows = [a_1 | b_1; ...].  Exact simplex."""
    n_cons = len(rows)
    n_vars = len(rows[0]) - 1
    # make b >= 0
    tab = []
    for r in rows:
        if r[-1] < 0:
            r = [-c for c in r]
        tab.append(list(r))
    # add artificials; objective = sum of artificials
    total_vars = n_vars + n_cons
    for i, r in enumerate(tab):
        art = [_Q0] * n_cons
        art[i] = mpq(1)
        tab[i] = r[:-1] + art + [r[-1]]
    basis = [n_vars + i for i in range(n_cons)]
    obj = [_Q0] * (total_vars + 1)
    for i in range(n_cons):
        for j in range(total_vars + 1):
            obj[j] += tab[i][j]
    for i in range(n_cons):  # basic (artificial) columns carry zero reduced cost
        obj[n_vars + i] = _Q0
    while True:
        # Bland's rule: entering variable = smallest index with positive reduced cost
        enter = -1
        for j in range(total_vars):
            if obj[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        # ratio test
        leave, best = -1, None
        for i in range(n_cons):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best, leave = ratio, i
        if leave < 0:
            break  # unbounded; cannot happen for phase 1
        piv = tab[leave][enter]
        tab[leave] = [c / piv for c in tab[leave]]
        for i in range(n_cons):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [c - f * d for c, d in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [c - f * d for c, d in zip(obj, tab[leave])]
        basis[leave] = enter
    return obj[-1] == 0


def _primitive(vec: tuple[int, ...]) -> tuple[int, ...] | None:
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g == 0:
        return None
    return tuple(v // g for v in vec)


def inner_normals(polytope: NewtonPolytope) -> list[tuple[int, ...]]:
    """Primitive inner normals of the polytope facets (all-dimensional candidates
    for low-dimensional polytopes are included; harmless for sufficient tests)."""
    verts = list(polytope.vertices)
    m = len(verts[0])
    if len(verts) == 1:
        return []
    if m == 1:
        return [(1,), (-1,)]
    if m == 2:
        ccw = hull_2d_ccw(verts)
        normals = []
        if len(ccw) == 2:
            d = (ccw[1][0] - ccw[0][0], ccw[1][1] - ccw[0][1])
            for n in ((-d[1], d[0]), (d[1], -d[0])):
                p = _primitive(n)
                if p:
                    normals.append(p)
            return normals
        for a, b in zip(ccw, ccw[1:] + ccw[:1]):
            d = (b[0] - a[0], b[1] - a[1])
            p = _primitive((-d[1], d[0]))  # interior lies left of a->b for CCW hulls
            if p:
                normals.append(p)
        return normals
    return _normals_brute(verts, m)


def _normals_brute(verts: list[tuple[int, ...]], m: int) -> list[tuple[int, ...]]:
    from itertools import combinations

    if len(verts) > 40:
        return []
    seen = set()
    out = []
    for subset in combinations(verts, m):
        base = subset[0]
        diffs = [tuple(v[i] - base[i] for i in range(m)) for v in subset[1:]]
        normal = _nullspace_normal(diffs, m)
        if normal is None:
            continue
        vals = [sum(n * v[i] for i, n in enumerate(normal)) for v in verts]
        ref = sum(n * b for n, b in zip(normal, base))
        if all(v >= ref for v in vals):
            cand = normal
        elif all(v <= ref for v in vals):
            cand = tuple(-n for n in normal)
        else:
            continue
        p = _primitive(cand)
        if p and p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _nullspace_normal(diffs: list[tuple[int, ...]], m: int) -> tuple[int, ...] | None:
    """Integer normal to m-1 difference vectors via cofactor expansion."""
    if len(diffs) != m - 1:
        return None
    normal = []
    for i in range(m):
        sub = [[row[j] for j in range(m) if j != i] for row in diffs]
        normal.append(((-1) ** i) * _int_det(sub))
    if all(n == 0 for n in normal):
        return None
    return tuple(normal)


def _int_det(mat: list[list[int]]) -> int:
    n = len(mat)
    if n == 0:
        return 1
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = 0
    for j in range(n):
        if mat[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
            total += ((-1) ** j) * mat[0][j] * _int_det(minor)
    return total
