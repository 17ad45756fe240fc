"""Exact arithmetic substrate: rationals, cyclotomic numbers, and polynomials in the
spectral parameter over them.

Rationals are gmpy2.mpq throughout.  A Cyclotomic is an element of Q(zeta_N)
stored in the power basis 1, zeta, ..., zeta^(phi(N)-1) reduced modulo the N-th
cyclotomic polynomial, so equality of same-conductor elements is coefficient-wise.
A LambdaPoly is a dense univariate polynomial in the spectral parameter with
Cyclotomic coefficients.
"""

from __future__ import annotations

import cmath
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import ConductorLimitExceeded, InexactDivision

CONDUCTOR_LIMIT = 10**4

_Q0 = mpq(0)
_Q1 = mpq(1)


def as_mpq(value) -> mpq:
    """Coerce ints, Fractions, strings like '3/2', and mpq to mpq."""
    return mpq(value)


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _int_poly_exact_div(num: list[int], den: Sequence[int]) -> list[int]:
    # den is monic up to sign of its leading coefficient (+-1 for cyclotomics)
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    quot = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c % lead != 0:
            raise InexactDivision("non-integral quotient in cyclotomic setup")
        q = c // lead
        quot[k - dd] = q
        if q:
            for i in range(dd + 1):
                num[k - dd + i] -= q * den[i]
    if any(num):
        raise InexactDivision("nonzero remainder in cyclotomic setup")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _int_poly_exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """Rows r_k with zeta_n^(phi+k) = sum_i r_k[i] zeta_n^i, for k = 0..phi-2."""
    phi = euler_phi(n)
    phi_poly = cyclotomic_polynomial(n)
    rows = []
    # x^phi = -(phi_poly without leading term)
    cur = [-c for c in phi_poly[:phi]]
    rows.append(tuple(cur))
    top = rows[0]
    for _ in range(phi - 2):
        nxt = [0] * phi
        carry = cur[phi - 1]
        for i in range(phi - 1):
            nxt[i + 1] = cur[i]
        if carry:
            for i in range(phi):
                nxt[i] += carry * top[i]
        rows.append(tuple(nxt))
        cur = nxt
    return tuple(rows)


def _reduce_coeffs(n: int, coeffs: Sequence) -> list:
    """Reduce a coefficient list (powers of zeta_n) modulo the cyclotomic polynomial."""
    phi = euler_phi(n)
    work = [as_mpq(c) for c in coeffs]
    if len(work) <= phi:
        return work + [_Q0] * (phi - len(work))
    phi_poly = cyclotomic_polynomial(n)
    for k in range(len(work) - 1, phi - 1, -1):
        c = work[k]
        if c:
            work[k] = _Q0
            for i in range(phi):
                work[k - phi + i] -= c * phi_poly[i]
    return work[:phi]


class Cyclotomic:
    """An element of Q(zeta_N) in the reduced power basis."""

    __slots__ = ("conductor", "coeffs")
    __hash__ = None

    def __init__(self, conductor: int, coeffs: Iterable, _reduced: bool = False):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        if conductor > CONDUCTOR_LIMIT:
            raise ConductorLimitExceeded(f"conductor {conductor} exceeds {CONDUCTOR_LIMIT}")
        if _reduced:
            vec = list(coeffs)
        else:
            vec = _reduce_coeffs(conductor, list(coeffs))
        n, vec = _shrink_conductor(conductor, vec)
        self.conductor = n
        self.coeffs = tuple(vec)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(value) -> "Cyclotomic":
        return Cyclotomic(1, [as_mpq(value)], _reduced=True)

    @staticmethod
    def zero() -> "Cyclotomic":
        return _ZERO

    @staticmethod
    def one() -> "Cyclotomic":
        return _ONE

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_rational(self):
        """Return the mpq value if the element is rational, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def lift_coeffs(self, conductor: int) -> list:
        """Coefficient vector of this element inside Q(zeta_conductor)."""
        if conductor == self.conductor:
            return list(self.coeffs)
        if conductor % self.conductor != 0:
            raise ValueError("can only lift to a multiple of the conductor")
        step = conductor // self.conductor
        raw = [_Q0] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            raw[i * step] = c
        return _reduce_coeffs(conductor, raw)

    def lift(self, conductor: int) -> "Cyclotomic":
        if conductor > CONDUCTOR_LIMIT:
            raise ConductorLimitExceeded(f"conductor {conductor} exceeds {CONDUCTOR_LIMIT}")
        return Cyclotomic(conductor, self.lift_coeffs(conductor), _reduced=True)

    def _common(self, other: "Cyclotomic"):
        n = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        if n > CONDUCTOR_LIMIT:
            raise ConductorLimitExceeded(f"conductor {n} exceeds {CONDUCTOR_LIMIT}")
        return n, self.lift_coeffs(n), other.lift_coeffs(n)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.conductor == other.conductor:
            return Cyclotomic(
                self.conductor,
                [a + b for a, b in zip(self.coeffs, other.coeffs)],
                _reduced=True,
            )
        n, a, b = self._common(other)
        return Cyclotomic(n, [x + y for x, y in zip(a, b)], _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, [-c for c in self.coeffs], _reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.conductor == 1 and other.conductor == 1:
            return Cyclotomic(1, [self.coeffs[0] * other.coeffs[0]], _reduced=True)
        if self.conductor == other.conductor:
            n, a, b = self.conductor, self.coeffs, other.coeffs
        else:
            n, a, b = self._common(other)
        return Cyclotomic(n, _vec_mul(n, a, b), _reduced=True)

    __rmul__ = __mul__

    def inv(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        r = self.as_rational()
        if r is not None:
            return Cyclotomic.from_rational(1 / r)
        inv_vec = _vec_inv(self.conductor, self.coeffs)
        return Cyclotomic(self.conductor, inv_vec, _reduced=True)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inv()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = _ONE
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "Cyclotomic":
        """Complex conjugation, zeta -> zeta^(-1)."""
        n = self.conductor
        raw = [_Q0] * n
        for i, c in enumerate(self.coeffs):
            raw[(n - i) % n] += c
        return Cyclotomic(n, raw)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.conductor == other.conductor:
            return self.coeffs == other.coeffs
        n, a, b = self._common(other)
        return a == b

    # -- numerics / io ------------------------------------------------

    def embed(self) -> complex:
        """Numeric value under zeta_N -> exp(2 pi i / N)."""
        n = self.conductor
        total = 0j
        for i, c in enumerate(self.coeffs):
            if c:
                total += float(c) * cmath.exp(2j * cmath.pi * i / n)
        return total

    def to_json(self) -> dict:
        return {"N": self.conductor, "coeffs": [str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(data: dict) -> "Cyclotomic":
        return Cyclotomic(int(data["N"]), [mpq(c) for c in data["coeffs"]])

    def __repr__(self):
        return f"Cyclotomic({self.conductor}, {self.coeffs})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                base = f"z{self.conductor}" if i == 1 else f"z{self.conductor}^{i}"
                if c == 1:
                    parts.append(base)
                elif c == -1:
                    parts.append(f"-{base}")
                else:
                    parts.append(f"{c}*{base}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


def _coerce(value):
    if isinstance(value, Cyclotomic):
        return value
    try:
        return Cyclotomic.from_rational(value)
    except (TypeError, ValueError):
        return NotImplemented


def _shrink_conductor(n: int, vec: list):
    """Syntactic conductor reduction: drop a prime from N when the element
    visibly lies in the subfield (all coefficients sit on the sub-basis and the
    candidate verifies by lifting back)."""
    changed = True
    while changed and n > 1:
        changed = False
        for p in _prime_factors(n):
            m = n // p
            if all(c == 0 or i % p == 0 for i, c in enumerate(vec)):
                candidate = [_Q0] * (max((len(vec) - 1) // p, 0) + 1)
                for i, c in enumerate(vec):
                    if c:
                        candidate[i // p] = c
                candidate = _reduce_coeffs(m, candidate)
                # verify: lift back and compare
                step = p
                raw = [_Q0] * ((len(candidate) - 1) * step + 1)
                for i, c in enumerate(candidate):
                    raw[i * step] = c
                if _reduce_coeffs(n, raw) == vec:
                    n, vec = m, candidate
                    changed = True
                    break
    return n, vec


def _vec_mul(n: int, a: Sequence, b: Sequence) -> list:
    phi = len(a)
    prod = [_Q0] * (2 * phi - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    if phi == 1:
        return prod
    rows = _reduction_rows(n)
    out = prod[:phi]
    for k in range(phi, 2 * phi - 1):
        c = prod[k]
        if c:
            row = rows[k - phi]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return out


def _vec_inv(n: int, a: Sequence) -> list:
    """Inverse in Q(zeta_n) via extended Euclid against the cyclotomic polynomial."""
    phi_poly = [mpq(c) for c in cyclotomic_polynomial(n)]
    r0, r1 = phi_poly, _poly_trim(list(a))
    s0, s1 = [_Q0], [_Q1]
    while True:
        if len(r1) == 1:
            # r1 is a nonzero constant: a * s1 = r1 (mod phi) => inverse = s1 / r1
            c = r1[0]
            inv = [x / c for x in s1]
            return _reduce_coeffs(n, inv)
        q, r = _poly_divmod_q(r0, r1)
        r0, r1 = r1, _poly_trim(r)
        s0, s1 = s1, _poly_trim(_poly_sub(s0, _poly_mul_q(q, s1)))


def _poly_trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_sub(a: list, b: list) -> list:
    out = list(a) + [_Q0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return out


def _poly_mul_q(a: list, b: list) -> list:
    out = [_Q0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_divmod_q(a: list, b: list):
    a = list(a)
    db = len(b) - 1
    if db == 0 and b[0] == 0:
        raise ZeroDivisionError("division by zero polynomial")
    lead = b[-1]
    q = [_Q0] * max(len(a) - db, 1)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            f = c / lead
            q[k - db] = f
            for i in range(db + 1):
                a[k - db + i] -= f * b[i]
    return q, a[:db] if db > 0 else [_Q0]


_ZERO = Cyclotomic(1, [_Q0], _reduced=True)
_ONE = Cyclotomic(1, [_Q1], _reduced=True)


def zeta(n: int, k: int = 1) -> Cyclotomic:
    """The root of unity zeta_n^k, in canonical form."""
    if n < 1:
        raise ValueError("conductor must be positive")
    k %= n
    raw = [_Q0] * (k + 1)
    raw[k] = _Q1
    return Cyclotomic(n, raw)


# ---------------------------------------------------------------------------
# Polynomials in the spectral parameter
# ---------------------------------------------------------------------------


class LambdaPoly:
    """Dense univariate polynomial in the spectral parameter over Q(zeta)."""

    __slots__ = ("coeffs",)
    __hash__ = None

    def __init__(self, coeffs: Iterable):
        vec = [c if isinstance(c, Cyclotomic) else Cyclotomic.from_rational(c) for c in coeffs]
        while vec and vec[-1].is_zero():
            vec.pop()
        self.coeffs = tuple(vec)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "LambdaPoly":
        return LambdaPoly([])

    @staticmethod
    def one() -> "LambdaPoly":
        return LambdaPoly([_ONE])

    @staticmethod
    def constant(value) -> "LambdaPoly":
        return LambdaPoly([value])

    @staticmethod
    def variable() -> "LambdaPoly":
        return LambdaPoly([_ZERO, _ONE])

    # -- structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the convention degree(0) = -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Cyclotomic:
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_value(self) -> Cyclotomic:
        return self.coeffs[0] if self.coeffs else _ZERO

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce_lpoly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return LambdaPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LambdaPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _coerce_lpoly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_lpoly(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LambdaPoly.zero()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    if not b.is_zero():
                        out[i + j] = out[i + j] + a * b
        return LambdaPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: "LambdaPoly"):
        other = _coerce_lpoly(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        db = other.degree
        lead_inv = other.leading().inv()
        quot = [_ZERO] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c.is_zero():
                f = c * lead_inv
                quot[k - db] = f
                for i in range(db + 1):
                    rem[k - db + i] = rem[k - db + i] - f * other.coeffs[i]
        return LambdaPoly(quot), LambdaPoly(rem[:db] if db > 0 else [])

    def exact_div(self, other: "LambdaPoly") -> "LambdaPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise InexactDivision("nonzero remainder in spectral-parameter division")
        return q

    def gcd(self, other: "LambdaPoly") -> "LambdaPoly":
        """Monic gcd."""
        a, b = self, _coerce_lpoly(other)
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a * LambdaPoly.constant(a.leading().inv())

    def __eq__(self, other):
        other = _coerce_lpoly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    # -- evaluation / io ----------------------------------------------------

    def eval_cyclotomic(self, value) -> Cyclotomic:
        if not isinstance(value, Cyclotomic):
            value = Cyclotomic.from_rational(value)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def eval_complex(self, value: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * value + c.embed()
        return acc

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @staticmethod
    def from_json(data: list) -> "LambdaPoly":
        return LambdaPoly([Cyclotomic.from_json(c) for c in data])

    def __repr__(self):
        return f"LambdaPoly({list(self.coeffs)!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            cs = str(c)
            wrap = ("+" in cs[1:]) or ("-" in cs[1:]) or ("*" in cs)
            if wrap:
                cs = f"({cs})"
            if i == 0:
                parts.append(cs)
            else:
                var = "λ" if i == 1 else f"λ^{i}"
                if cs == "1":
                    parts.append(var)
                elif cs == "-1":
                    parts.append(f"-{var}")
                else:
                    parts.append(f"{cs}*{var}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


def _coerce_lpoly(value):
    if isinstance(value, LambdaPoly):
        return value
    if isinstance(value, Cyclotomic):
        return LambdaPoly([value])
    try:
        return LambdaPoly([Cyclotomic.from_rational(value)])
    except (TypeError, ValueError):
        return NotImplemented
