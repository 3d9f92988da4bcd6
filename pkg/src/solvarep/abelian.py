"""Representations and idempotents of finite abelian groups over Q, R, C, F_q.

The cyclic case drives everything: X^n - 1 factors over the field, each
irreducible factor yields one irreducible representation (its companion
matrix) and one primitive central idempotent (inverse-root power sums by
Newton's identities).  General abelian groups reduce to faithful
representations of cyclic quotients, and abelian p-groups additionally get
the product-form rational idempotent rules along a long presentation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iter_product

from .catalog import catalog
from .cyclo import Cyclotomic, CyclotomicField, euler_phi, is_prime
from .fclass import FieldDescriptor
from .galg import AlgebraElement, ExactMatrix
from .pcgroup import LongPresentation, PcGroup, build_group, parse_presentation
from .pci import DiagramError, verify_partition

__all__ = [
    "RationalField",
    "GF",
    "Poly",
    "AbelianShape",
    "abelian_shapes",
    "EProduct",
    "RuleNode",
    "RuleDiagram",
    "factor_xn_minus_1",
    "factor_cyclotomic",
    "cyclic_irreps",
    "cyclic_quotients",
    "abelian_irreps",
    "pgroup_presentation",
    "pgroup_pci_diagram_Q",
    "pullback_idempotent",
    "pci_from_factor",
    "wedderburn_counts",
]


# -- field backends -----------------------------------------------------------


class RationalField:
    """Plain exact rationals under the shared scalar-backend protocol."""

    kind = "rational"
    level = 1

    zero = Fraction(0)
    one = Fraction(1)

    def from_rational(self, q):
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def is_zero(self, a):
        return not a

    def eq(self, a, b):
        return a == b

    def scalar_json(self, a):
        return str(a)

    def scalar_text(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational-field")

    def __repr__(self):
        return "RationalField()"


class PrimeGF:
    """F_p with int scalars."""

    kind = "gf"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.size = p
        self.char = p
        self.degree = 1

    zero = 0
    one = 1

    def from_rational(self, q):
        q = Fraction(q)
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, k: int):
        return pow(a, k, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def element(self, rank: int):
        return rank % self.p

    def rank(self, a) -> int:
        return a % self.p

    def scalar_json(self, a):
        return a % self.p

    def scalar_text(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeGF) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class ExtField:
    """Extension base[Y]/(h), elements as coefficient tuples over the base.

    h is the first irreducible monic polynomial of its degree when built via
    GF(); element enumeration ranks tuples with low-degree coefficients
    varying fastest, which fixes every "first element such that" search.
    """

    kind = "gf"

    def __init__(self, base, modulus: tuple):
        self.base = base
        self.modulus = modulus  # monic, constant-first, length m+1
        self.m = len(modulus) - 1
        self.size = base.size ** self.m
        self.char = base.char
        self.degree = base.degree * self.m
        self.zero = (base.zero,) * self.m
        self.one = tuple([base.one] + [base.zero] * (self.m - 1))

    def from_rational(self, q):
        return tuple([self.base.from_rational(q)] + [self.base.zero] * (self.m - 1))

    def embed(self, a):
        """Base-field scalar into the extension."""
        return tuple([a] + [self.base.zero] * (self.m - 1))

    def in_base(self, a) -> bool:
        return all(self.base.is_zero(c) for c in a[1:])

    def to_base(self, a):
        if not self.in_base(a):
            raise ValueError("element does not lie in the base field")
        return a[0]

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        base = self.base
        acc = [base.zero] * (2 * self.m - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not base.is_zero(y):
                    acc[i + j] = base.add(acc[i + j], base.mul(x, y))
        # reduce modulo h
        for k in range(len(acc) - 1, self.m - 1, -1):
            c = acc[k]
            if base.is_zero(c):
                continue
            acc[k] = base.zero
            for j in range(self.m):
                acc[k - self.m + j] = base.sub(
                    acc[k - self.m + j], base.mul(c, self.modulus[j])
                )
        return tuple(acc[: self.m])

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.size - 2)

    def pow(self, a, k: int):
        out = self.one
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def eq(self, a, b):
        return all(self.base.eq(x, y) for x, y in zip(a, b))

    def element(self, rank: int):
        out = []
        for _ in range(self.m):
            out.append(self.base.element(rank % self.base.size))
            rank //= self.base.size
        return tuple(out)

    def rank(self, a) -> int:
        out = 0
        for c in reversed(a):
            out = out * self.base.size + self.base.rank(c)
        return out

    def scalar_json(self, a):
        return [self.base.scalar_json(c) for c in a]

    def scalar_text(self, a):
        return "(" + ",".join(self.base.scalar_text(c) for c in a) + ")"

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ext", self.base, self.modulus))

    def __repr__(self):
        return f"GF({self.base.size}^{self.m})"


def _first_irreducible(base, m: int) -> tuple:
    """First monic irreducible of degree m over base, scanning constant-first
    coefficient tuples in rank order."""
    if m == 1:
        return (base.neg(base.element(0)), base.one)  # Y (always irreducible)
    total = base.size**m
    for r in range(total):
        coeffs = []
        rr = r
        for _ in range(m):
            coeffs.append(base.element(rr % base.size))
            rr //= base.size
        poly = tuple(coeffs + [base.one])
        if _poly_irreducible(base, poly):
            return poly
    raise ArithmeticError("no irreducible polynomial found")  # unreachable


def _poly_irreducible(field, poly: tuple) -> bool:
    """Monic poly irreducible over a finite field: Y^(q^m) = Y mod poly and
    gcd tests at the maximal proper prime-power stages."""
    m = len(poly) - 1
    q = field.size
    y = _poly_x(field)
    cur = y
    # Y^(q^k) mod poly, iterated Frobenius
    frob = []
    for _ in range(m):
        cur = _poly_powmod(field, cur, q, poly)
        frob.append(cur)
    if _poly_mod(field, _poly_sub(field, frob[-1], y), poly) != _poly_zero(field):
        return False
    for s in {m // s for s in _prime_factors(m)}:
        diff = _poly_sub(field, frob[s - 1], y)
        if _poly_deg(field, _poly_gcd(field, diff, poly)) > 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def GF(q: int):
    """The finite field of q = p^r elements (tower over F_p for r > 1)."""
    fac = _prime_factors(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = fac[0]
    r = 0
    m = q
    while m > 1:
        m //= p
        r += 1
    base = PrimeGF(p)
    if r == 1:
        return base
    return ExtField(base, _first_irreducible(base, r))


def extension_of(field, m: int):
    """F_{q^m} over the given F_q."""
    if m == 1:
        return field
    return ExtField(field, _first_irreducible(field, m))


# -- generic polynomial helpers (constant-first coefficient tuples) ----------


def _poly_zero(field):
    return ()


def _poly_x(field):
    return (field.zero, field.one)


def _poly_trim(field, p):
    i = len(p)
    while i > 0 and field.is_zero(p[i - 1]):
        i -= 1
    return tuple(p[:i])


def _poly_deg(field, p) -> int:
    return len(p) - 1


def _poly_add(field, a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (field.zero,) * (n - len(a))
    b = tuple(b) + (field.zero,) * (n - len(b))
    return _poly_trim(field, [field.add(x, y) for x, y in zip(a, b)])


def _poly_sub(field, a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (field.zero,) * (n - len(a))
    b = tuple(b) + (field.zero,) * (n - len(b))
    return _poly_trim(field, [field.sub(x, y) for x, y in zip(a, b)])


def _poly_mul(field, a, b):
    if not a or not b:
        return ()
    acc = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not field.is_zero(y):
                acc[i + j] = field.add(acc[i + j], field.mul(x, y))
    return _poly_trim(field, acc)


def _poly_divmod(field, a, b):
    b = _poly_trim(field, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    inv_lead = field.inv(lead)
    q = [field.zero] * max(len(a) - db, 0)
    for k in range(len(a) - db - 1, -1, -1):
        c = field.mul(a[db + k], inv_lead)
        if field.is_zero(c):
            continue
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] = field.sub(a[k + j], field.mul(c, y))
    return _poly_trim(field, q), _poly_trim(field, a)


def _poly_mod(field, a, b):
    return _poly_divmod(field, a, b)[1]


def _poly_gcd(field, a, b):
    a, b = _poly_trim(field, a), _poly_trim(field, b)
    while b:
        a, b = b, _poly_mod(field, a, b)
    if a:
        inv = field.inv(a[-1])
        a = tuple(field.mul(c, inv) for c in a)
    return a


def _poly_powmod(field, a, k: int, mod):
    out = (field.one,)
    base = _poly_mod(field, a, mod)
    while k:
        if k & 1:
            out = _poly_mod(field, _poly_mul(field, out, base), mod)
        base = _poly_mod(field, _poly_mul(field, base, base), mod)
        k >>= 1
    return out


@dataclass(frozen=True)
class Poly:
    """Monic-or-not polynomial with a field backend; constant-first coeffs."""

    field: object
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _poly_trim(self.field, self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "Poly") -> "Poly":
        return Poly(self.field, _poly_mul(self.field, self.coeffs, other.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and other.field == self.field
            and len(other.coeffs) == len(self.coeffs)
            and all(self.field.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((len(self.coeffs),))

    def divides(self, other: "Poly") -> bool:
        return not _poly_mod(self.field, other.coeffs, self.coeffs)

    def companion_matrix(self) -> ExactMatrix:
        f = self.field
        d = self.degree
        if d == 0:
            raise ValueError("companion matrix needs positive degree")
        lead_inv = f.inv(self.coeffs[-1])
        entries = [[f.zero] * d for _ in range(d)]
        for i in range(1, d):
            entries[i][i - 1] = f.one
        for i in range(d):
            entries[i][d - 1] = f.neg(f.mul(self.coeffs[i], lead_inv))
        return ExactMatrix(f, entries)

    def text(self, var: str = "X") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.field.is_zero(c):
                continue
            cs = self.field.scalar_text(c)
            if i == 0:
                parts.append(cs)
            else:
                head = "" if cs == "1" else ("-" if cs == "-1" else cs + "*")
                parts.append(f"{head}{var}" + ("" if i == 1 else f"^{i}"))
        return " + ".join(reversed(parts)).replace("+ -", "- ")

    def to_json(self):
        return [self.field.scalar_json(c) for c in self.coeffs]


# -- factorization of X^n - 1 -------------------------------------------------


def _field_backend(field: FieldDescriptor, n: int):
    if field.kind == "Q":
        return RationalField()
    if field.kind in ("R", "C"):
        return CyclotomicField(n)
    return GF(field.q)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def factor_xn_minus_1(n: int, field: FieldDescriptor) -> list[Poly]:
    """Irreducible factors of X^n - 1 over the field, grouped by the order d
    of the roots (ascending d, deterministic within each d)."""
    out = []
    for d in _divisors(n):
        out.extend(factor_cyclotomic(d, field, ambient=n))
    return out


def factor_cyclotomic(n: int, field: FieldDescriptor, ambient: int | None = None) -> list[Poly]:
    """Irreducible factors of Phi_n over the field.

    All factors share one degree: phi(n) over Q, 1 or 2 over R, 1 over C,
    ord_n(q) over F_q (the q-cyclotomic cosets of Z/n).
    """
    ambient = ambient if ambient is not None else n
    if field.kind == "Q":
        f = RationalField()
        from .cyclo import cyclotomic_polynomial

        return [Poly(f, tuple(Fraction(c) for c in cyclotomic_polynomial(n)))]
    if field.kind == "C":
        f = CyclotomicField(ambient)
        k = ambient // n
        out = []
        for j in range(n):
            if math.gcd(j, n) == 1:
                root = Cyclotomic.zeta(ambient, j * k)
                out.append(Poly(f, (-root, f.one)))
        return out
    if field.kind == "R":
        f = CyclotomicField(ambient)
        k = ambient // n
        out = []
        if n == 1:
            return [Poly(f, (f.from_rational(-1), f.one))]
        if n == 2:
            return [Poly(f, (f.one, f.one))]
        for j in range(1, n // 2 + (n % 2)):
            if math.gcd(j, n) == 1 and 2 * j != n:
                mid = Cyclotomic.zeta(ambient, j * k) + Cyclotomic.zeta(ambient, -j * k)
                out.append(Poly(f, (f.one, -mid, f.one)))
        return out
    # finite field
    q = field.q
    if math.gcd(q, n) != 1:
        raise ValueError(f"characteristic divides {n}")
    base = GF(q)
    m = _multiplicative_order(q, n)
    ext = extension_of(base, m)
    extended = m > 1
    beta = _element_of_order(ext, n)
    cosets = _cyclotomic_cosets(q, n)
    if any(len(c) != m for c in cosets):
        raise DiagramError("cyclotomic coset size differs from ord_n(q)")
    out = []
    for coset in cosets:
        poly = (ext.one,)
        for j in coset:
            root = ext.pow(beta, j)
            poly = _poly_mul(ext, poly, (_neg(ext, root), ext.one))
        down = []
        for c in poly:
            if extended:
                if not ext.in_base(c):
                    raise DiagramError("coset factor has coefficients outside F_q")
                down.append(ext.to_base(c))
            else:
                down.append(c)
        out.append(Poly(base, tuple(down)))
    return out


def _neg(field, a):
    return field.neg(a)


def _multiplicative_order(q: int, n: int) -> int:
    if n == 1:
        return 1
    k, cur = 1, q % n
    while cur != 1:
        cur = cur * q % n
        k += 1
    return k


def _element_of_order(field, d: int):
    """First field element (rank order) of multiplicative order exactly d."""
    if d == 1:
        return field.one
    primes = _prime_factors(d)
    for r in range(1, field.size):
        a = field.element(r)
        if not field.eq(field.pow(a, d), field.one):
            continue
        if all(not field.eq(field.pow(a, d // s), field.one) for s in primes):
            return a
    raise ArithmeticError(f"no element of order {d}")


def _cyclotomic_cosets(q: int, n: int) -> list[list[int]]:
    """Orbits of multiplication by q on the units of Z/n, smallest first."""
    seen = set()
    out = []
    for j in range(n):
        if j in seen or math.gcd(j, n) != 1:
            continue
        orbit = [j]
        seen.add(j)
        cur = j * q % n
        while cur != j:
            orbit.append(cur)
            seen.add(cur)
            cur = cur * q % n
        out.append(sorted(orbit))
    return out


# -- cyclic representations ----------------------------------------------------


@dataclass
class CyclicIrrep:
    order: int
    factor: Poly
    matrix: ExactMatrix
    faithful: bool

    @property
    def degree(self) -> int:
        return self.factor.degree


def cyclic_irreps(n: int, field: FieldDescriptor) -> list[CyclicIrrep]:
    """One representation per irreducible factor of X^n - 1: x maps to the
    factor's companion matrix; faithful exactly on the Phi_n factors."""
    out = []
    for d in _divisors(n):
        for f in factor_cyclotomic(d, field, ambient=n):
            out.append(CyclicIrrep(n, f, f.companion_matrix(), d == n))
    return out


# -- abelian shapes ------------------------------------------------------------


@dataclass(frozen=True)
class AbelianShape:
    """One-prime component: a_r = multiplicity of C_{p^r}."""

    p: int
    mult: tuple[tuple[int, int], ...]  # (r, a_r), r descending, a_r > 0

    @property
    def exponent_rank(self) -> int:
        return self.mult[0][0]

    def a(self, r: int) -> int:
        return dict(self.mult).get(r, 0)

    def b(self, r: int) -> int:
        return sum(a for rr, a in self.mult if rr >= r)

    def c(self, r: int) -> int:
        return sum(s * a for s, a in self.mult if s < r)

    def log_order(self) -> int:
        return sum(r * a for r, a in self.mult)

    def order(self) -> int:
        return self.p ** self.log_order()

    def components(self) -> list[int]:
        """Cyclic component orders p^r, largest first, with multiplicity."""
        out = []
        for r, a in self.mult:
            out.extend([self.p**r] * a)
        return out


def abelian_shapes(invariants: list[int]) -> list[AbelianShape]:
    """Shapes per prime from a list of cyclic factor orders."""
    per_prime: dict[int, dict[int, int]] = {}
    for m in invariants:
        if m < 1:
            raise ValueError("cyclic factor orders must be positive")
        for p in _prime_factors(m):
            r = 0
            while m % p == 0:
                m //= p
                r += 1
            per_prime.setdefault(p, {})
            per_prime[p][r] = per_prime[p].get(r, 0) + 1
    out = []
    for p in sorted(per_prime):
        mult = tuple(sorted(per_prime[p].items(), reverse=True))
        out.append(AbelianShape(p, mult))
    return out


def shapes_order(shapes: list[AbelianShape]) -> int:
    return math.prod(s.order() for s in shapes)


def shapes_components(shapes: list[AbelianShape]) -> list[int]:
    out = []
    for s in shapes:
        out.extend(s.components())
    return out


# -- cyclic quotients and abelian irreps ---------------------------------------


def cyclic_quotients(shapes: list[AbelianShape]) -> list[tuple[frozenset, int]]:
    """(kernel H, d) pairs with G/H cyclic of order d, one per cyclic
    subgroup of the dual; elements are exponent tuples over the components."""
    comps = shapes_components(shapes)
    lcm = math.lcm(*comps) if comps else 1
    elements = list(iter_product(*[range(m) for m in comps]))
    seen: dict[frozenset, int] = {}
    order = []
    for g in elements:
        d = 1
        for gi, mi in zip(g, comps):
            d = math.lcm(d, mi // math.gcd(gi, mi))
        kernel = frozenset(
            h for h in elements
            if sum(hi * gi * (lcm // mi) for hi, gi, mi in zip(h, g, comps)) % lcm == 0
        )
        if kernel not in seen:
            seen[kernel] = d
            order.append(kernel)
        elif seen[kernel] != d:
            raise DiagramError("kernel with inconsistent quotient order")
    return [(k, seen[k]) for k in order]


@dataclass
class AbelianIrrep:
    kernel: frozenset
    quotient_order: int
    factor: Poly
    matrices: list[ExactMatrix]     # one per cyclic component generator

    @property
    def degree(self) -> int:
        return self.factor.degree


def abelian_irreps(shapes: list[AbelianShape], field: FieldDescriptor) -> list[AbelianIrrep]:
    """Pull every faithful irreducible of every cyclic quotient back to G.

    The generator of the i-th cyclic component maps to the companion-matrix
    power given by its image in the quotient.
    """
    comps = shapes_components(shapes)
    out = []
    for kernel, d in cyclic_quotients(shapes):
        # find a dual element realizing this kernel (smallest in iteration order)
        chi = _dual_element_for_kernel(comps, kernel, d)
        powers = [gi * d // mi for gi, mi in zip(chi, comps)]
        for f in factor_cyclotomic(d, field):
            c = f.companion_matrix()
            mats = [c**(a % d) if d > 1 else ExactMatrix.identity(f.field, 1)
                    for a in powers]
            out.append(AbelianIrrep(kernel, d, f, mats))
    total = sum(r.degree for r in out)
    if total != (math.prod(comps) if comps else 1):
        raise DiagramError("abelian irreducible degrees do not sum to |G|")
    return out


def _dual_element_for_kernel(comps, kernel, d):
    lcm = math.lcm(*comps) if comps else 1
    for g in iter_product(*[range(m) for m in comps]):
        dd = 1
        for gi, mi in zip(g, comps):
            dd = math.lcm(dd, mi // math.gcd(gi, mi))
        if dd != d:
            continue
        ker = frozenset(
            h for h in iter_product(*[range(m) for m in comps])
            if sum(hi * gi * (lcm // mi) for hi, gi, mi in zip(h, g, comps)) % lcm == 0
        )
        if ker == kernel:
            return g
    raise DiagramError("no dual element for kernel")


# -- abelian p-group rules over Q ----------------------------------------------


@dataclass(frozen=True)
class EProduct:
    """Product of averaging factors e_X (X a group element) and at most one
    complementary factor e'_z (z a chain generator)."""

    plain: tuple[int, ...]          # group elements X
    primed: int | None              # generator element z, or None

    def label(self, group: PcGroup) -> str:
        parts = [f"e[{group.element_name(x)}]" for x in self.plain]
        if self.primed is not None:
            parts.append(f"e'[{group.element_name(self.primed)}]")
        return "*".join(parts) if parts else "1"


@dataclass
class RuleNode:
    level: int
    index: int
    product: EProduct
    element: AlgebraElement
    parents: list[int]
    children: list[int]
    is_trivial: bool


@dataclass
class RuleDiagram:
    group: PcGroup
    presentation: LongPresentation
    levels: list[list[RuleNode]]

    @property
    def leaves(self):
        return self.levels[-1]


def pgroup_presentation(shape: AbelianShape) -> LongPresentation:
    """Long presentation of the abelian p-group: per component (r, j) the
    chain x_{(r,j),1}, ..., x_{(r,j),r} with x^p stepping down; components
    ordered by (r descending, j ascending)."""
    lines = [f"group p{shape.p}_" + "_".join(f"{r}x{a}" for r, a in shape.mult)]
    for r, a in shape.mult:
        for j in range(1, a + 1):
            prev = None
            for depth in range(1, r + 1):
                name = f"g{r}_{j}_{depth}"
                if prev is None:
                    lines.append(f"gen {name} {shape.p}")
                else:
                    lines.append(f"gen {name} {shape.p} pow {prev}")
                prev = name
    return parse_presentation("\n".join(lines) + "\n")


def _avg_element(group: PcGroup, backend, x: int, p: int) -> AlgebraElement:
    coeffs = {}
    cur = 0
    inv_p = backend.from_rational(Fraction(1, p))
    for _ in range(p):
        coeffs[cur] = backend.add(coeffs.get(cur, backend.zero), inv_p)
        cur = group.mul(cur, x)
    return AlgebraElement(group, group.n, backend, coeffs)


def expand_eproduct(group: PcGroup, backend, prod: EProduct, p: int) -> AlgebraElement:
    out = AlgebraElement.one(group, backend)
    for x in prod.plain:
        out = out * _avg_element(group, backend, x, p)
    if prod.primed is not None:
        out = out * (AlgebraElement.one(group, backend)
                     - _avg_element(group, backend, prod.primed, p))
    return out


def pgroup_pci_diagram_Q(shape: AbelianShape, backend=None) -> RuleDiagram:
    """Rational PCI-diagram of an abelian p-group by the product-form rules.

    Stage l to l+1 with new chain generator u: the trivial node gains the
    two children e*e_u and e*e'_u; a node with primed factor e'_z persists
    unchanged when z = u^(p^s), and otherwise branches into the p children
    e*e_{z^k u}.  Every node is expanded to an exact element of Q[G] and
    each stage is verified as an exact partition of unity.
    """
    p = shape.p
    pres = pgroup_presentation(shape)
    group = build_group(pres)
    backend = backend or CyclotomicField(1)
    root = RuleNode(0, 0, EProduct((), None),
                    AlgebraElement.one(group, backend), [], [], True)
    levels = [[root]]
    for level in range(group.n):
        u = group.generator_index(level)  # new generator, at top-level indexing
        cur = levels[level]
        nxt: list[RuleNode] = []
        for node in cur:
            if node.is_trivial:
                plain = node.product.plain + (u,)
                kids = [
                    RuleNode(level + 1, len(nxt), EProduct(plain, None), None,
                             [node.index], [], True),
                    RuleNode(level + 1, len(nxt) + 1,
                             EProduct(node.product.plain, u), None,
                             [node.index], [], False),
                ]
            else:
                z = node.product.primed
                if _is_power_of(group, u, z, p):
                    kids = [RuleNode(level + 1, len(nxt), node.product, None,
                                     [node.index], [], False)]
                else:
                    kids = []
                    zu = u
                    for k in range(p):
                        prod = EProduct(node.product.plain + (zu,), z)
                        # X = z^k u: build by multiplying k copies of z onto u
                        kids.append(RuleNode(level + 1, len(nxt) + k, prod, None,
                                             [node.index], [], False))
                        zu = group.mul(z, zu)
            for kid in kids:
                node.children.append(kid.index)
                nxt.append(kid)
        for kid in nxt:
            kid.element = expand_eproduct(group, backend, kid.product, p)
        verify_partition(group, [k.element for k in nxt], group.n,
                         context=f"rules stage {level + 1}")
        levels.append(nxt)
    return RuleDiagram(group, pres, levels)


def _is_power_of(group: PcGroup, u: int, z: int, p: int) -> bool:
    """z = u^(p^s) for some s >= 1."""
    cur = u
    while True:
        nxt = 0
        for _ in range(p):
            nxt = group.mul(nxt, cur)
        cur = nxt
        if cur == 0:
            return False
        if cur == z:
            return True


# -- pull back -----------------------------------------------------------------


def pullback_idempotent(group: PcGroup, backend, kernel_members: list[int],
                        ebar: list[tuple[int, object]]) -> AlgebraElement:
    """e_K times a lift of an idempotent of F[G/K].

    ebar lists one (representative, scalar) pair per coset in the support;
    the result is verified idempotent and checked on a second lift when K
    is nontrivial (the pull back cannot depend on the lift).
    """
    k_set = sorted(set(kernel_members))
    if 0 not in k_set:
        raise ValueError("kernel must contain the identity")
    inv_size = backend.from_rational(Fraction(1, len(k_set)))
    e_k = AlgebraElement(group, group.n, backend,
                         {g: inv_size for g in k_set})
    seen_cosets = set()
    for rep, _ in ebar:
        coset = frozenset(group.mul(k, rep) for k in k_set)
        if coset in seen_cosets:
            raise ValueError("two representatives share a coset")
        seen_cosets.add(coset)
    lift1 = AlgebraElement(group, group.n, backend, {rep: c for rep, c in ebar})
    out = e_k * lift1
    if len(k_set) > 1:
        k0 = k_set[1]
        lift2 = AlgebraElement(group, group.n, backend,
                               {group.mul(k0, rep): c for rep, c in ebar})
        if e_k * lift2 != out:
            raise DiagramError("pull back depends on the lift (bad kernel)")
    if not out.is_idempotent():
        raise DiagramError("pull back is not idempotent (ebar was not one)")
    return out


# -- Newton-identity idempotents ------------------------------------------------


@lru_cache(maxsize=None)
def _cyclic_group(n: int) -> PcGroup:
    return build_group(catalog(f"c{n}"))


def pci_from_factor(f: Poly, n: int, field: FieldDescriptor) -> AlgebraElement:
    """Idempotent of F[C_n] attached to an irreducible factor f of X^n - 1.

    Coefficients are the power sums of the inverse roots of f, divided by n,
    computed from f's coefficients by Newton's identities without leaving F.
    Verified: idempotent, and annihilated by f(x).
    """
    fld = f.field
    d = f.degree
    if d < 1:
        raise ValueError("factor must have positive degree")
    group = _cyclic_group(n)
    if n == 1:
        return AlgebraElement.one(group, fld)
    # reversed polynomial has the inverse roots; normalize monic
    rev = tuple(reversed(f.coeffs))
    c0_inv = fld.inv(rev[-1])
    rev = tuple(fld.mul(c, c0_inv) for c in rev)
    # Newton: p_k + sum_{i=1}^{min(k-1,d)} a_{d-i} p_{k-i} + [k<=d] k a_{d-k} = 0
    a = rev[:-1]  # a_0 .. a_{d-1}
    psums = [fld.from_rational(d)]
    for k in range(1, n):
        acc = fld.zero
        for i in range(1, min(k - 1, d) + 1):
            coef = a[d - i]
            if not fld.is_zero(coef):
                acc = fld.add(acc, fld.mul(coef, psums[k - i]))
        if k <= d:
            acc = fld.add(acc, fld.mul(fld.from_rational(k), a[d - k]))
        psums.append(fld.neg(acc))
    inv_n = fld.inv(fld.from_rational(n))
    # normal forms of x^k in the chain group (its last generator generates)
    coeffs = {}
    cur = 0
    gen = group.element_from_name(group.presentation.gens[-1])
    for k in range(n):
        v = fld.mul(psums[k], inv_n)
        if not fld.is_zero(v):
            coeffs[cur] = fld.add(coeffs.get(cur, fld.zero), v)
        cur = group.mul(cur, gen)
    e = AlgebraElement(group, group.n, fld, coeffs)
    if not e.is_idempotent():
        raise DiagramError("Newton idempotent fails e^2 = e")
    # f(x) * e must vanish
    acc = AlgebraElement.zero(group, fld)
    cur = AlgebraElement.one(group, fld)
    xelt = AlgebraElement.group_element(group, fld, gen)
    for c in f.coeffs:
        if not fld.is_zero(c):
            acc = acc + cur.scale(c)
        cur = cur * xelt
    if not (acc * e).is_zero():
        raise DiagramError("factor does not annihilate its idempotent")
    return e


# -- Wedderburn counts -----------------------------------------------------------


@dataclass
class WedderburnSummand:
    d: int
    copies: int
    closed_form_theorem: int | None = None
    closed_form_corollary: int | None = None

    def to_json(self):
        out = {"d": self.d, "copies": self.copies, "field": f"Q(zeta_{self.d})"}
        if self.closed_form_corollary is not None:
            out["closed_form_corollary"] = self.closed_form_corollary
            out["closed_form_theorem"] = self.closed_form_theorem
        return out


def wedderburn_counts(shapes: list[AbelianShape]) -> list[WedderburnSummand]:
    """Multiplicity f_d of Q(zeta_d) in Q[G] for an abelian G.

    f_d is computed by counting elements of order d (the authoritative
    oracle).  For p-groups the two closed forms in circulation are also
    evaluated: the corollary form p^(c_r + (r-1)(b_r - 1)) (p^{b_r}-1)/(p-1)
    matches the oracle; the variant with (r-1) b_{r-1} in the exponent does
    not in general, and the mismatch is reported rather than trusted.
    """
    comps = shapes_components(shapes)
    order = math.prod(comps) if comps else 1
    counts: dict[int, int] = {}
    for g in iter_product(*[range(m) for m in comps]):
        d = 1
        for gi, mi in zip(g, comps):
            d = math.lcm(d, mi // math.gcd(gi, mi))
        counts[d] = counts.get(d, 0) + 1
    out = []
    single = shapes[0] if len(shapes) == 1 else None
    for d in sorted(counts):
        f_d = counts[d] // euler_phi(d)
        if counts[d] % euler_phi(d):
            raise DiagramError("element count not divisible by phi(d)")
        summand = WedderburnSummand(d, f_d)
        if single is not None and d > 1:
            p = single.p
            r = 0
            dd = d
            while dd % p == 0:
                dd //= p
                r += 1
            if dd == 1:
                b_r, b_r1, c_r = single.b(r), single.b(r - 1), single.c(r)
                geom = (p**b_r - 1) // (p - 1)
                summand.closed_form_corollary = p ** (c_r + (r - 1) * (b_r - 1)) * geom
                summand.closed_form_theorem = p ** (c_r + (r - 1) * b_r1) * geom
        out.append(summand)
    total = sum(s.copies * euler_phi(s.d) for s in out)
    if total != order:
        raise DiagramError("sum f_d phi(d) differs from |G|")
    return out
