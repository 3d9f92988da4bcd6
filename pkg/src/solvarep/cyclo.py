"""Exact scalar arithmetic: rationals, cyclotomic fields Q(zeta_N), prime fields.

A cyclotomic value is stored by its coordinates in the power basis
1, z, z^2, ..., z^(phi(N)-1) of Q[X]/(Phi_N), z a primitive N-th root of
unity.  All arithmetic re-reduces modulo Phi_N, so the representation is
canonical: two values are equal iff their coordinate tuples are equal.

Prime fields F_ell serve as modular splitting-field backends; they carry a
distinguished root of unity so that roots of unity correspond across the
two scalar backends.
"""

from __future__ import annotations

import cmath
import threading
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

__all__ = [
    "Cyclotomic",
    "CyclotomicField",
    "PrimeField",
    "PrimeFieldScalar",
    "cyclotomic_polynomial",
    "euler_phi",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def euler_phi(n: int) -> int:
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            out *= p - 1
            m //= p
            while m % p == 0:
                out *= p
                m //= p
        p += 1
    if m > 1:
        out *= m - 1
    return out


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, remainder must vanish
    num = list(num)
    dn, dd = len(num) - 1, len(den) - 1
    quot = [0] * (dn - dd + 1)
    for k in range(dn - dd, -1, -1):
        c = num[dd + k]
        assert c % den[dd] == 0
        q = c // den[dd]
        quot[k] = q
        for j, d in enumerate(den):
            num[k + j] -= q * d
    assert all(c == 0 for c in num)
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant first) of the n-th cyclotomic polynomial.

    Computed by dividing X^n - 1 by the product of Phi_d over the proper
    divisors d of n; Phi_1 = X - 1 seeds the recursion.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul_int(den, list(cyclotomic_polynomial(d)))
    return tuple(_poly_divide_exact(num, den))


def _poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


class _LevelData:
    """Precomputed reduction data for one cyclotomic level N."""

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        self.poly = cyclotomic_polynomial(n)
        # rows[j] = coordinates of z^(phi+j) in the power basis, 0 <= j < n-phi
        rows = []
        if n > 1:
            cur = [-c for c in self.poly[: self.phi]]  # z^phi
            rows.append(tuple(cur))
            for _ in range(self.phi + 1, n):
                shifted = [0] + cur
                lead = shifted.pop()
                if lead:
                    shifted = [c + lead * r for c, r in zip(shifted, rows[0])]
                cur = shifted
                rows.append(tuple(cur))
        self.rows = rows
        self.max_reduction_coeff = max(
            (abs(c) for row in rows for c in row), default=1
        )


_LEVEL_LOCK = threading.Lock()
_LEVEL_CACHE: dict[int, _LevelData] = {}


def _level_data(n: int) -> _LevelData:
    try:
        return _LEVEL_CACHE[n]
    except KeyError:
        pass
    with _LEVEL_LOCK:
        if n not in _LEVEL_CACHE:
            _LEVEL_CACHE[n] = _LevelData(n)
        return _LEVEL_CACHE[n]


def reduction_bound(n: int) -> int:
    """Max absolute coefficient appearing in the X^j mod Phi_n tables."""
    return _level_data(n).max_reduction_coeff


_ZERO = Fraction(0)
_ONE = Fraction(1)


class Cyclotomic:
    """An element of Q(zeta_N) in canonical power-basis form.

    Immutable; arithmetic returns new values.  Mixing levels raises
    ValueError: callers convert explicitly (`retarget`) when an embedding
    Q(zeta_M) -> Q(zeta_N), M | N, is intended.
    """

    __slots__ = ("level", "coords", "_hash", "_zero")

    def __init__(self, level: int, coords: Sequence[Fraction]):
        data = _level_data(level)
        if len(coords) != data.phi:
            raise ValueError(f"need {data.phi} coordinates at level {level}")
        self.level = level
        self.coords = tuple(
            c if type(c) is Fraction else Fraction(c) for c in coords
        )
        self._hash = None
        self._zero = None

    # -- constructors ------------------------------------------------

    @staticmethod
    def _raw(level: int, coords: tuple) -> "Cyclotomic":
        """Unchecked constructor: coords must be a canonical Fraction tuple."""
        obj = Cyclotomic.__new__(Cyclotomic)
        obj.level = level
        obj.coords = coords
        obj._hash = None
        obj._zero = None
        return obj

    @staticmethod
    def from_rational(level: int, value) -> "Cyclotomic":
        phi = _level_data(level).phi
        coords = [Fraction(value)] + [_ZERO] * (phi - 1)
        return Cyclotomic(level, coords)

    @staticmethod
    def zeta(level: int, power: int = 1) -> "Cyclotomic":
        """zeta_N^power, reduced to canonical form (instances shared)."""
        return _zeta_cached(level, power % level)

    @staticmethod
    def from_exponent_counts(level: int, counts: dict[int, Fraction]) -> "Cyclotomic":
        """Sum of counts[e] * zeta^e over arbitrary integer exponents e."""
        data = _level_data(level)
        acc = [_ZERO] * data.phi
        for e, c in counts.items():
            if not c:
                continue
            e %= level
            if e < data.phi:
                acc[e] += c
            else:
                for i, r in enumerate(data.rows[e - data.phi]):
                    if r:
                        acc[i] += c * r
        return Cyclotomic(level, acc)

    # -- arithmetic --------------------------------------------------

    def _check(self, other: "Cyclotomic") -> None:
        if not isinstance(other, Cyclotomic):
            raise TypeError("expected a Cyclotomic value")
        if other.level != self.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")

    def __add__(self, other):
        self._check(other)
        out = list(self.coords)
        for i, c in enumerate(other.coords):
            if c:
                out[i] = out[i] + c if out[i] else c
        return Cyclotomic._raw(self.level, tuple(out))

    def __sub__(self, other):
        self._check(other)
        out = list(self.coords)
        for i, c in enumerate(other.coords):
            if c:
                out[i] = out[i] - c if out[i] else -c
        return Cyclotomic._raw(self.level, tuple(out))

    def __neg__(self):
        return Cyclotomic._raw(self.level,
                               tuple(-a if a else a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        data = _level_data(self.level)
        phi = data.phi
        acc = [_ZERO] * (2 * phi - 1)
        sa = [(i, c) for i, c in enumerate(self.coords) if c]
        sb = [(j, c) for j, c in enumerate(other.coords) if c]
        for i, ca in sa:
            for j, cb in sb:
                k = i + j
                acc[k] = acc[k] + ca * cb if acc[k] else ca * cb
        out = acc[:phi]
        for j in range(phi, 2 * phi - 1):
            c = acc[j]
            if c:
                e = j % self.level  # zeta^N = 1
                if e < phi:
                    out[e] = out[e] + c if out[e] else c
                else:
                    for i, r in enumerate(data.rows[e - phi]):
                        if r:
                            out[i] = out[i] + c * r if out[i] else c * r
        return Cyclotomic._raw(self.level, tuple(out))

    __rmul__ = __mul__

    def scale(self, q) -> "Cyclotomic":
        if type(q) is not Fraction:
            q = Fraction(q)
        if not q:
            return Cyclotomic._raw(self.level, (_ZERO,) * len(self.coords))
        return Cyclotomic._raw(
            self.level, tuple(a * q if a else a for a in self.coords)
        )

    def inverse(self) -> "Cyclotomic":
        """Field inverse via extended gcd with Phi_N over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        data = _level_data(self.level)
        # extended Euclid on (self as poly, Phi_N) over Q
        a = list(self.coords)
        b = [Fraction(c) for c in data.poly]
        s0, s1 = [_ONE], [_ZERO]

        def deg(p):
            for k in range(len(p) - 1, -1, -1):
                if p[k]:
                    return k
            return -1

        def poly_sub_scaled(p, q, c, shift):
            out = list(p)
            need = len(q) + shift
            if len(out) < need:
                out += [_ZERO] * (need - len(out))
            for i, x in enumerate(q):
                if x:
                    out[i + shift] -= c * x
            return out

        while True:
            da, db = deg(a), deg(b)
            if db < 0:
                break
            if da < db:
                a, b = b, a
                s0, s1 = s1, s0
                continue
            c = a[da] / b[db]
            a = poly_sub_scaled(a, b, c, da - db)
            s0 = poly_sub_scaled(s0, s1, c, da - db)
            if deg(a) < deg(b):
                a, b = b, a
                s0, s1 = s1, s0
        # now b == 0 and a = gcd (a nonzero constant since Phi_N irreducible)
        da = deg(a)
        if da != 0:
            raise ArithmeticError("gcd with Phi_N not constant")
        inv_lead = 1 / a[0]
        coords = [c * inv_lead for c in s0[: data.phi]]
        coords += [_ZERO] * (data.phi - len(coords))
        # s0 may exceed phi-1 in raw degree; fold it through the basis
        extra = {i: c * inv_lead for i, c in enumerate(s0) if i >= data.phi and c}
        if extra:
            folded = Cyclotomic.from_exponent_counts(self.level, extra)
            coords = [x + y for x, y in zip(coords, folded.coords)]
        return Cyclotomic(self.level, coords)

    def __pow__(self, k: int) -> "Cyclotomic":
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic.from_rational(self.level, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- structure ---------------------------------------------------

    def galois_image(self, r: int) -> "Cyclotomic":
        """Image under zeta -> zeta^r; r must be coprime to the level."""
        if gcd(r, self.level) != 1:
            raise ValueError(f"{r} is not coprime to {self.level}")
        counts = {(i * r) % self.level: c for i, c in enumerate(self.coords) if c}
        return Cyclotomic.from_exponent_counts(self.level, counts)

    def retarget(self, new_level: int) -> "Cyclotomic":
        """Embed into Q(zeta_M) for a multiple M of the current level."""
        if new_level == self.level:
            return self
        if new_level % self.level != 0:
            raise ValueError("can only embed into a level that is a multiple")
        k = new_level // self.level
        counts: dict[int, Fraction] = {}
        for i, c in enumerate(self.coords):
            if c:
                counts[i * k] = counts.get(i * k, _ZERO) + c
        return Cyclotomic.from_exponent_counts(new_level, counts)

    def is_zero(self) -> bool:
        if self._zero is None:
            self._zero = all(not c for c in self.coords)
        return self._zero

    def is_rational(self) -> bool:
        return all(not c for c in self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is not rational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(self.level, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.level == other.level and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self.coords))
        return self._hash

    def embed_numeric(self, precision: int = 53):
        """Numeric image at zeta_N = exp(2*pi*i/N).  Display only.

        precision is in bits (>= 53).  Returns a python complex for the
        default precision, an mpmath mpc above it.
        """
        if precision < 53:
            raise ValueError("precision below 53 bits is not supported")
        if precision == 53:
            z = cmath.exp(2j * cmath.pi / self.level)
            out = 0j
            for i, c in enumerate(self.coords):
                if c:
                    out += float(c) * z**i
            return out
        import mpmath

        with mpmath.workprec(precision):
            z = mpmath.exp(2j * mpmath.pi / self.level)
            out = mpmath.mpc(0)
            for i, c in enumerate(self.coords):
                if c:
                    out += mpmath.mpf(c.numerator) / c.denominator * z**i
            return out

    def __repr__(self):
        return f"Cyclotomic({self.level}, {self.text()!r})"

    def text(self) -> str:
        """Human form 'a0 + a1*z + ...' (z = zeta_N understood)."""
        terms = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                sym = "z" if i == 1 else f"z^{i}"
                terms.append(("-" if c < 0 else "+") + f" {mag}{sym}"
                             if terms else (("-" if c < 0 else "") + f"{mag}{sym}"))
        if not terms:
            return "0"
        return " ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"level": self.level, "coords": [str(c) for c in self.coords]}


def sum_cyclotomics(level: int, values: Iterable["Cyclotomic"]) -> "Cyclotomic":
    """One-pass sum of many values (cheap for sparse summands)."""
    phi = _level_data(level).phi
    acc = [_ZERO] * phi
    for v in values:
        for i, c in enumerate(v.coords):
            if c:
                acc[i] += c
    return Cyclotomic(level, acc)


@lru_cache(maxsize=100000)
def _zeta_cached(level: int, power: int) -> "Cyclotomic":
    data = _level_data(level)
    coords = [_ZERO] * data.phi
    if power < data.phi:
        coords[power] = _ONE
    else:
        for i, c in enumerate(data.rows[power - data.phi]):
            coords[i] = Fraction(c)
    return Cyclotomic(level, coords)


class CyclotomicField:
    """Scalar backend Q(zeta_N)."""

    kind = "cyclotomic"

    def __init__(self, level: int):
        self.level = level
        _level_data(level)

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.level == self.level

    def __hash__(self):
        return hash(("cyc", self.level))

    def __repr__(self):
        return f"CyclotomicField({self.level})"

    @property
    def zero(self):
        return Cyclotomic.from_rational(self.level, 0)

    @property
    def one(self):
        return Cyclotomic.from_rational(self.level, 1)

    def from_rational(self, q):
        return Cyclotomic.from_rational(self.level, q)

    def root_of_unity(self, order: int):
        if self.level % order != 0:
            raise ValueError(f"no root of order {order} at level {self.level}")
        return Cyclotomic.zeta(self.level, self.level // order)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a.inverse()

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def sum_scalars(self, values):
        return sum_cyclotomics(self.level, values)

    def pth_root(self, value, p: int):
        """p-th root, available only for rationals with an exact root."""
        if not value.is_rational():
            raise ArithmeticError("exact p-th roots only for rational scalars")
        q = value.rational_value()
        root = _rational_nth_root(q, p)
        if root is None:
            raise ArithmeticError(f"{q} has no rational {p}-th root")
        return self.from_rational(root)

    def scalar_json(self, a):
        return a.to_json()

    def scalar_text(self, a):
        return a.text()


def _int_nth_root(m: int, p: int):
    if m < 0:
        if p % 2 == 0:
            return None
        r = _int_nth_root(-m, p)
        return None if r is None else -r
    r = round(m ** (1.0 / p)) if m else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**p == m:
            return cand
    return None


def _rational_nth_root(q: Fraction, p: int):
    num = _int_nth_root(q.numerator, p)
    den = _int_nth_root(q.denominator, p)
    if num is None or den is None:
        return None
    return Fraction(num, den)


class NoPthRoot(ArithmeticError):
    """Requested p-th root does not exist in the field."""


class PrimeFieldScalar:
    """Residue in F_ell; thin value wrapper over the backend ops."""

    __slots__ = ("modulus", "value")

    def __init__(self, modulus: int, value: int):
        self.modulus = modulus
        self.value = value % modulus

    def _check(self, other):
        if not isinstance(other, PrimeFieldScalar) or other.modulus != self.modulus:
            raise ValueError("modulus mismatch")

    def __add__(self, other):
        self._check(other)
        return PrimeFieldScalar(self.modulus, self.value + other.value)

    def __mul__(self, other):
        self._check(other)
        return PrimeFieldScalar(self.modulus, self.value * other.value)

    def inverse(self):
        return PrimeFieldScalar(self.modulus, pow(self.value, -1, self.modulus))

    def __pow__(self, k: int):
        return PrimeFieldScalar(self.modulus, pow(self.value, k, self.modulus))

    def __eq__(self, other):
        return (
            isinstance(other, PrimeFieldScalar)
            and other.modulus == self.modulus
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.modulus, self.value))

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


class PrimeField:
    """Scalar backend F_ell with a pinned root of unity of order `unit_order`.

    Raw python ints are the scalar representation (kept reduced mod ell);
    PrimeFieldScalar wraps values at the public boundary.
    """

    kind = "prime"

    def __init__(self, ell: int, unit_order: int = 1):
        if not is_prime(ell):
            raise ValueError(f"{ell} is not prime")
        if (ell - 1) % unit_order != 0:
            raise ValueError("unit order must divide ell - 1")
        self.ell = ell
        self.level = unit_order
        g = _smallest_primitive_root(ell)
        self.generator = g
        self.omega = pow(g, (ell - 1) // unit_order, ell)
        self._bsgs_baby: dict[int, int] | None = None

    def __eq__(self, other):
        return (
            isinstance(other, PrimeField)
            and other.ell == self.ell
            and other.level == self.level
        )

    def __hash__(self):
        return hash(("mod", self.ell, self.level))

    def __repr__(self):
        return f"PrimeField({self.ell}, unit_order={self.level})"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_rational(self, q):
        q = Fraction(q)
        return q.numerator * pow(q.denominator, -1, self.ell) % self.ell

    def root_of_unity(self, order: int):
        if self.level % order != 0:
            raise ValueError(f"no pinned root of order {order}")
        return pow(self.omega, self.level // order, self.ell)

    def add(self, a, b):
        return (a + b) % self.ell

    def sub(self, a, b):
        return (a - b) % self.ell

    def mul(self, a, b):
        return (a * b) % self.ell

    def neg(self, a):
        return -a % self.ell

    def inv(self, a):
        if a % self.ell == 0:
            raise ZeroDivisionError("inverse of zero residue")
        return pow(a, -1, self.ell)

    def is_zero(self, a):
        return a % self.ell == 0

    def eq(self, a, b):
        return (a - b) % self.ell == 0

    def sum_scalars(self, values):
        return sum(values) % self.ell

    def discrete_log(self, a: int) -> int:
        """Baby-step/giant-step log of a to the primitive-root base."""
        ell = self.ell
        a %= ell
        if a == 0:
            raise ZeroDivisionError("log of zero")
        m = isqrt(ell - 1) + 1
        if self._bsgs_baby is None:
            baby = {}
            cur = 1
            for j in range(m):
                baby.setdefault(cur, j)
                cur = cur * self.generator % ell
            self._bsgs_baby = baby
        baby = self._bsgs_baby
        giant = pow(self.generator, -m, ell)
        cur = a
        for i in range(m + 1):
            if cur in baby:
                return (i * m + baby[cur]) % (ell - 1)
            cur = cur * giant % ell
        raise ArithmeticError("discrete log failed")  # unreachable for prime ell

    def pth_root(self, value: int, p: int):
        """One mu with mu^p = value, via discrete logarithm.

        Requires p | ell - 1.  Raises NoPthRoot when value is not a p-th
        power residue (callers treat this as a bad prime choice).
        """
        ell = self.ell
        value %= ell
        if (ell - 1) % p != 0:
            raise NoPthRoot(f"{p} does not divide ell - 1")
        if value == 0:
            return 0
        if pow(value, (ell - 1) // p, ell) != 1:
            raise NoPthRoot(f"no {p}-th root of {value} mod {ell}")
        k = self.discrete_log(value)
        assert k % p == 0
        return pow(self.generator, k // p, ell)

    def scalar_json(self, a):
        return {"mod": self.ell, "value": a % self.ell}

    def scalar_text(self, a):
        return str(a % self.ell)


@lru_cache(maxsize=None)
def _smallest_primitive_root(ell: int) -> int:
    order = ell - 1
    fac = []
    m, p = order, 2
    while p * p <= m:
        if m % p == 0:
            fac.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        fac.append(m)
    for g in range(2, ell):
        if all(pow(g, order // q, ell) != 1 for q in fac):
            return g
    raise ArithmeticError(f"no primitive root mod {ell}")  # unreachable
