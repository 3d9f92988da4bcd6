"""Group-algebra elements over an exact scalar backend.

An AlgebraElement is a finitely supported map from group-element indices (at
a fixed level of the chain) to scalars of one backend.  Products are group
convolutions; every predicate (idempotency, centrality, proportionality) is
an exact comparison.  Dense exact linear algebra lives here too: rank,
solve and kernel over the backend with deterministic pivoting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cyclo import Cyclotomic, _level_data
from .pcgroup import PcGroup

# above this many coefficient pairs, convolutions switch to vectorized
# integer kernels (identical results, needed at the order-500 scale); the
# cyclotomic bound shrinks with the coordinate width since each scalar
# product costs a full coordinate convolution
_FAST_PAIR_THRESHOLD = 20000


def _fast_pair_threshold(backend) -> int:
    if backend.kind != "cyclotomic":
        return _FAST_PAIR_THRESHOLD
    phi = _level_data(backend.level).phi
    return max(384, _FAST_PAIR_THRESHOLD // max(phi, 1))

__all__ = [
    "AlgebraElement",
    "ExactMatrix",
    "BackendMismatch",
    "NotProportional",
    "InconsistentSystem",
    "scalar_ratio",
    "rank",
    "solve",
    "kernel",
    "left_regular_matrix",
]


class BackendMismatch(ValueError):
    pass


class NotProportional(ArithmeticError):
    pass


class InconsistentSystem(ArithmeticError):
    pass


class AlgebraElement:
    """Element of the level-i group algebra with sparse coefficients.

    Zero coefficients are never stored, so equality is plain coefficient
    comparison.  Instances are immutable values.
    """

    __slots__ = ("group", "level", "backend", "coeffs")

    def __init__(self, group: PcGroup, level: int, backend, coeffs: dict):
        self.group = group
        self.level = level
        self.backend = backend
        clean = {}
        size = group.level_order(level)
        for g, c in coeffs.items():
            if g < 0 or g >= size:
                raise ValueError(f"index {g} out of range at level {level}")
            if not backend.is_zero(c):
                clean[g] = c
        self.coeffs = clean

    # -- constructors --------------------------------------------------

    @staticmethod
    def _raw(group: PcGroup, level: int, backend, coeffs: dict) -> "AlgebraElement":
        """Unchecked constructor for callers that guarantee canonical input
        (valid indices, no explicit zeros)."""
        self = AlgebraElement.__new__(AlgebraElement)
        self.group = group
        self.level = level
        self.backend = backend
        self.coeffs = coeffs
        return self

    @staticmethod
    def zero(group: PcGroup, backend, level: int | None = None) -> "AlgebraElement":
        level = group.n if level is None else level
        return AlgebraElement(group, level, backend, {})

    @staticmethod
    def one(group: PcGroup, backend, level: int | None = None) -> "AlgebraElement":
        level = group.n if level is None else level
        return AlgebraElement(group, level, backend, {0: backend.one})

    @staticmethod
    def group_element(group: PcGroup, backend, g: int,
                      level: int | None = None) -> "AlgebraElement":
        level = group.n if level is None else level
        return AlgebraElement(group, level, backend, {g: backend.one})

    @staticmethod
    def from_support(group: PcGroup, backend, support: Iterable[int],
                     level: int | None = None) -> "AlgebraElement":
        """Sum of group elements with unit coefficients."""
        level = group.n if level is None else level
        return AlgebraElement(group, level, backend, {g: backend.one for g in support})

    # -- helpers ---------------------------------------------------------

    def _check(self, other: "AlgebraElement") -> None:
        if self.group is not other.group:
            raise BackendMismatch("elements belong to different groups")
        if self.level != other.level:
            raise BackendMismatch(f"level mismatch: {self.level} vs {other.level}")
        if self.backend != other.backend:
            raise BackendMismatch("scalar backend mismatch")

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (
            self.group is other.group
            and self.level == other.level
            and self.backend == other.backend
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.level, tuple(sorted(self.coeffs.items(),
                                              key=lambda kv: kv[0]))))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        be = self.backend
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            if g in out:
                out[g] = be.add(out[g], c)
            else:
                out[g] = c
        return AlgebraElement(self.group, self.level, be, out)

    def __sub__(self, other):
        self._check(other)
        be = self.backend
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            if g in out:
                out[g] = be.sub(out[g], c)
            else:
                out[g] = be.neg(c)
        return AlgebraElement(self.group, self.level, be, out)

    def __neg__(self):
        be = self.backend
        return AlgebraElement(
            self.group, self.level, be, {g: be.neg(c) for g, c in self.coeffs.items()}
        )

    def scale(self, s) -> "AlgebraElement":
        """Multiply by a scalar (backend scalar, int, or Fraction)."""
        be = self.backend
        if isinstance(s, (int, Fraction)):
            s = be.from_rational(s)
        if be.is_zero(s):
            return AlgebraElement.zero(self.group, be, self.level)
        return AlgebraElement(
            self.group, self.level, be, {g: be.mul(c, s) for g, c in self.coeffs.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        be = self.backend
        grp, level = self.group, self.level
        a, b = self.coeffs, other.coeffs
        if len(a) * len(b) > _fast_pair_threshold(be):
            if be.kind == "prime":
                return _mul_modular_fast(self, other)
            return _mul_cyclotomic_fast(self, other)
        # convolution: iterate the smaller support on the outside
        swap = len(a) > len(b)
        out: dict[int, object] = {}
        if not swap:
            for g, ca in a.items():
                for h, cb in b.items():
                    t = grp.mul(g, h, level)
                    prod = be.mul(ca, cb)
                    if t in out:
                        out[t] = be.add(out[t], prod)
                    else:
                        out[t] = prod
        else:
            for h, cb in b.items():
                for g, ca in a.items():
                    t = grp.mul(g, h, level)
                    prod = be.mul(ca, cb)
                    if t in out:
                        out[t] = be.add(out[t], prod)
                    else:
                        out[t] = prod
        return AlgebraElement(grp, level, be, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "AlgebraElement":
        if k < 0:
            raise ValueError("negative powers not supported")
        out = AlgebraElement.one(self.group, self.backend, self.level)
        for _ in range(k):
            out = out * self
        return out

    def conj_by(self, g: int) -> "AlgebraElement":
        """Image under h -> g^-1 h g, extended linearly."""
        grp, level = self.group, self.level
        return AlgebraElement._raw(
            grp, level, self.backend,
            {grp.conj(h, g, level): c for h, c in self.coeffs.items()},
        )

    def promote(self, level: int) -> "AlgebraElement":
        """Reindex into a higher level of the chain."""
        if level == self.level:
            return self
        if level < self.level:
            raise ValueError("cannot demote an algebra element")
        grp = self.group
        return AlgebraElement(
            grp, level, self.backend,
            {grp.promote(g, self.level, level): c for g, c in self.coeffs.items()},
        )

    def restrict(self, level: int) -> "AlgebraElement":
        """Reindex at any level whose subgroup contains the support."""
        if level >= self.level:
            return self.promote(level)
        grp = self.group
        sfx = grp.level_order(self.level) // grp.level_order(level)
        out = {}
        for g, c in self.coeffs.items():
            if g % sfx:
                raise ValueError(f"support escapes level {level}")
            out[g // sfx] = c
        return AlgebraElement(grp, level, self.backend, out)

    # -- predicates -------------------------------------------------------

    def is_idempotent(self) -> bool:
        return self * self == self

    def is_central_at(self, level: int) -> bool:
        """Commutes with the long generators of G_level (hence with G_level).

        The support must lie inside G_level; levels other than the element's
        own are handled by reindexing.
        """
        elt = self.restrict(level)
        grp = self.group
        for j in range(level):
            if elt.conj_by(grp.generator_index(j, level)) != elt:
                return False
        return True

    def coefficient(self, g: int):
        return self.coeffs.get(g, self.backend.zero)

    def identity_coefficient(self):
        return self.coefficient(0)

    # -- rendering ----------------------------------------------------------

    def term_strings(self) -> list[str]:
        grp, be = self.group, self.backend
        return [
            f"({be.scalar_text(c)})*{grp.element_name(g, self.level)}"
            for g, c in sorted(self.coeffs.items())
        ]

    def __repr__(self):
        body = " + ".join(self.term_strings()) or "0"
        return f"<level {self.level}: {body}>"

    def to_json(self) -> dict:
        be = self.backend
        kind = {"cyclotomic": {"field": "cyclotomic", "level": be.level},
                "prime": {"field": "prime", "modulus": getattr(be, "ell", None)}}[be.kind]
        return {
            "level": self.level,
            "backend": kind,
            "terms": [
                {"elt": self.group.element_name(g, self.level), "coef": be.scalar_json(c)}
                for g, c in sorted(self.coeffs.items())
            ],
        }


def _mul_modular_fast(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Convolution over F_ell via vectorized translation rows."""
    be = a.backend
    ell = be.ell
    grp, level = a.group, a.level
    size = grp.level_order(level)
    out = np.zeros(size, dtype=np.int64)
    if len(a.coeffs) <= len(b.coeffs):
        hs = np.fromiter(b.coeffs.keys(), dtype=np.int64, count=len(b.coeffs))
        vs = np.fromiter((v % ell for v in b.coeffs.values()), dtype=np.int64,
                         count=len(b.coeffs))
        for g, ca in a.coeffs.items():
            targets = grp.left_translation(g, level, hs)
            np.add.at(out, targets, (ca % ell) * vs % ell)
            if size and out.max() >= (1 << 62) - ell * ell:
                out %= ell
    else:
        gs = np.fromiter(a.coeffs.keys(), dtype=np.int64, count=len(a.coeffs))
        vs = np.fromiter((v % ell for v in a.coeffs.values()), dtype=np.int64,
                         count=len(a.coeffs))
        for h, cb in b.coeffs.items():
            targets = _right_translation(grp, h, level)[gs]
            np.add.at(out, targets, vs * (cb % ell) % ell)
            if size and out.max() >= (1 << 62) - ell * ell:
                out %= ell
    out %= ell
    return AlgebraElement(
        grp, level, be, {int(i): int(v) for i, v in enumerate(out.tolist()) if v}
    )


def _right_translation(grp: PcGroup, h: int, level: int) -> np.ndarray:
    """Vector of g*h over all g (right multiplication by fixed h)."""
    size = grp.level_order(level)
    # g*h = (h^-1 * g^-1)^-1; use inverse arrays and a left translation
    inv = np.asarray(grp._inv[level], dtype=np.int64)
    return inv[grp.left_translation(grp.inv(h, level), level, inv)]


def _flatten_cyclotomic(elt: AlgebraElement):
    """(denominator, element indices, exponent indices, int values) with all
    coordinates scaled to a common integer denominator."""
    denom = 1
    sparse = []
    for g, c in elt.coeffs.items():
        for e, q in enumerate(c.coords):
            if q:
                sparse.append((g, e, q))
                d = q.denominator
                if d != 1 and denom % d:
                    denom = denom * d // math.gcd(denom, d)
    gs, es, vs = [], [], []
    for g, e, q in sparse:
        gs.append(g)
        es.append(e)
        vs.append(q.numerator * (denom // q.denominator))
    return denom, np.array(gs, dtype=np.int64), np.array(es, dtype=np.int64), vs


def _mul_cyclotomic_fast(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Exact convolution via integer arrays over (group) x (zeta exponents).

    Scalars are cleared to a common denominator, the double convolution is
    an integer scatter-add, exponents at or above phi(N) are folded through
    the reduction rows, and the result is re-normalized.  Falls back to
    arbitrary-precision objects when int64 could overflow.
    """
    be = a.backend
    n = be.level
    data = _level_data(n)
    phi = data.phi
    grp, level = a.group, a.level
    size = grp.level_order(level)
    da, ga, ea, va = _flatten_cyclotomic(a)
    db, gb, eb, vb = _flatten_cyclotomic(b)
    if len(ga) > len(gb):
        # convolution cost is (outer support) * (inner length); keep outer small
        return _mul_cyclotomic_fast_swapped(a, b)
    max_a = max((abs(v) for v in va), default=0)
    max_b = max((abs(v) for v in vb), default=0)
    dtype = np.int64
    if max_a and max_b and max_a * max_b * len(gb) >= (1 << 58):
        dtype = object
    vb_arr = np.array(vb, dtype=dtype)
    out = np.zeros((size, 2 * phi - 1 if phi > 1 else 1), dtype=dtype)
    # group every outer (g, e, v) by g so each translation row is built once
    by_g: dict[int, list[tuple[int, int]]] = {}
    for g, e, v in zip(ga.tolist(), ea.tolist(), va):
        by_g.setdefault(g, []).append((e, v))
    for g, terms in by_g.items():
        tg = grp.left_translation(g, level, gb)
        for e, v in terms:
            np.add.at(out, (tg, (e + eb)), vb_arr * v)
    # fold exponents >= phi through zeta^N = 1 and the reduction rows
    folded = out[:, :phi].copy()
    for col in range(phi, out.shape[1]):
        colv = out[:, col]
        if not colv.any():
            continue
        e = col % n
        if e < phi:
            folded[:, e] += colv
        else:
            row = data.rows[e - phi]
            for i, r in enumerate(row):
                if r:
                    folded[:, i] += colv * r
    denom = da * db
    coeffs = {}
    zero = Fraction(0)
    for g in np.nonzero(folded.any(axis=1))[0].tolist():
        coords = [Fraction(int(x), denom) if x else zero for x in folded[g]]
        coeffs[int(g)] = Cyclotomic(n, coords)
    return AlgebraElement(grp, level, be, coeffs)


def _mul_cyclotomic_fast_swapped(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Same as above with b's support iterated on the outside."""
    be = a.backend
    n = be.level
    data = _level_data(n)
    phi = data.phi
    grp, level = a.group, a.level
    size = grp.level_order(level)
    da, ga, ea, va = _flatten_cyclotomic(a)
    db, gb, eb, vb = _flatten_cyclotomic(b)
    max_a = max((abs(v) for v in va), default=0)
    max_b = max((abs(v) for v in vb), default=0)
    dtype = np.int64
    if max_a and max_b and max_a * max_b * len(ga) >= (1 << 58):
        dtype = object
    va_arr = np.array(va, dtype=dtype)
    out = np.zeros((size, 2 * phi - 1 if phi > 1 else 1), dtype=dtype)
    by_h: dict[int, list[tuple[int, int]]] = {}
    for h, e, v in zip(gb.tolist(), eb.tolist(), vb):
        by_h.setdefault(h, []).append((e, v))
    for h, terms in by_h.items():
        th = _right_translation(grp, h, level)[ga]
        for e, v in terms:
            np.add.at(out, (th, (e + ea)), va_arr * v)
    folded = out[:, :phi].copy()
    for col in range(phi, out.shape[1]):
        colv = out[:, col]
        if not colv.any():
            continue
        e = col % n
        if e < phi:
            folded[:, e] += colv
        else:
            row = data.rows[e - phi]
            for i, r in enumerate(row):
                if r:
                    folded[:, i] += colv * r
    denom = da * db
    coeffs = {}
    zero = Fraction(0)
    for g in np.nonzero(folded.any(axis=1))[0].tolist():
        coords = [Fraction(int(x), denom) if x else zero for x in folded[g]]
        coeffs[int(g)] = Cyclotomic(n, coords)
    return AlgebraElement(grp, level, be, coeffs)


def sum_elements(elts: Sequence[AlgebraElement]) -> AlgebraElement:
    """Sum of many elements; vectorized over integer coordinates when the
    total term count is large and the backend is cyclotomic."""
    if not elts:
        raise ValueError("empty sum")
    first = elts[0]
    total_terms = sum(len(e.coeffs) for e in elts)
    if first.backend.kind != "cyclotomic" or total_terms < 4000:
        out = first
        for e in elts[1:]:
            out = out + e
        return out
    be = first.backend
    grp, level = first.group, first.level
    size = grp.level_order(level)
    phi = _level_data(be.level).phi
    denom = 1
    flats = []
    for e in elts:
        first._check(e)
        d, gs, es, vs = _flatten_cyclotomic(e)
        flats.append((d, gs, es, vs))
        denom = denom * d // math.gcd(denom, d)
    acc = np.zeros((size, phi), dtype=object)
    for d, gs, es, vs in flats:
        mult = denom // d
        np.add.at(acc, (gs, es), np.array([v * mult for v in vs], dtype=object))
    coeffs = {}
    for g in range(size):
        row = acc[g]
        if not any(row):
            continue
        coeffs[g] = Cyclotomic(be.level, [Fraction(int(x), denom) for x in row])
    return AlgebraElement(grp, level, be, coeffs)


def scalar_ratio(a: AlgebraElement, b: AlgebraElement):
    """The scalar s with a = s*b, verified exactly on every coordinate.

    s is read off the first nonzero coordinate of b (ascending element
    index).  Raises NotProportional when the coordinates disagree and
    ZeroDivisionError when b = 0.
    """
    a._check(b)
    be = a.backend
    if b.is_zero():
        raise ZeroDivisionError("ratio against the zero element")
    if a.is_zero():
        return be.zero
    pivot = b.support()[0]
    ca = a.coefficient(pivot)
    s = be.mul(ca, be.inv(b.coeffs[pivot]))
    if a != b.scale(s):
        raise NotProportional("elements are not proportional")
    return s


@dataclass
class ExactMatrix:
    """Dense rectangular matrix over one scalar backend."""

    backend: object
    entries: list[list]  # rows

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged matrix")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @staticmethod
    def identity(backend, n: int) -> "ExactMatrix":
        return ExactMatrix(
            backend,
            [[backend.one if i == j else backend.zero for j in range(n)] for i in range(n)],
        )

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.backend != other.backend or self.rows != other.rows or self.cols != other.cols:
            return False
        be = self.backend
        return all(
            be.eq(a, b) for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    def __mul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        be = self.backend
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = be.zero
                for k in range(self.cols):
                    acc = be.add(acc, be.mul(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            out.append(row)
        return ExactMatrix(be, out)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        be = self.backend
        return ExactMatrix(
            be,
            [[be.add(a, b) for a, b in zip(ra, rb)]
             for ra, rb in zip(self.entries, other.entries)],
        )

    def scale(self, s) -> "ExactMatrix":
        be = self.backend
        return ExactMatrix(be, [[be.mul(x, s) for x in row] for row in self.entries])

    def __pow__(self, k: int) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        out = ExactMatrix.identity(self.backend, self.rows)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        be = self.backend
        aug = [list(row) + ExactMatrix.identity(be, n).entries[i]
               for i, row in enumerate(self.entries)]
        aug = _eliminate(be, aug, limit_cols=n)
        # back substitution: aug rows now echelon; demand full rank
        pivots = _pivot_columns(be, aug, n)
        if len(pivots) != n:
            raise InconsistentSystem("matrix is singular")
        # normalize to reduced echelon
        for r in range(n - 1, -1, -1):
            pc = pivots[r]
            inv = be.inv(aug[r][pc])
            aug[r] = [be.mul(x, inv) for x in aug[r]]
            for r2 in range(r):
                f = aug[r2][pc]
                if not be.is_zero(f):
                    aug[r2] = [be.sub(x, be.mul(f, y)) for x, y in zip(aug[r2], aug[r])]
        return ExactMatrix(be, [row[n:] for row in aug])

    def trace(self):
        be = self.backend
        acc = be.zero
        for i in range(min(self.rows, self.cols)):
            acc = be.add(acc, self.entries[i][i])
        return acc

    def is_diagonal(self) -> bool:
        be = self.backend
        return all(
            be.is_zero(x)
            for i, row in enumerate(self.entries)
            for j, x in enumerate(row)
            if i != j
        )

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.backend,
                           [list(col) for col in zip(*self.entries)])

    def to_json(self):
        be = self.backend
        return [[be.scalar_json(x) for x in row] for row in self.entries]


def _eliminate(be, rows: list[list], limit_cols: int | None = None) -> list[list]:
    """Forward elimination, deterministic pivoting: first nonzero column,
    smallest row index.  Mutates and returns rows (in echelon order).
    Pivots are only sought in the first limit_cols columns."""
    if not rows:
        return rows
    ncols = len(rows[0]) if limit_cols is None else limit_cols
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if not be.is_zero(rows[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = be.inv(rows[r][c])
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if not be.is_zero(f):
                factor = be.mul(f, inv)
                rows[i] = [be.sub(x, be.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return rows


def _pivot_columns(be, echelon: list[list], ncols: int | None = None) -> list[int]:
    out = []
    limit = ncols if ncols is not None else (len(echelon[0]) if echelon else 0)
    for row in echelon:
        for c, x in enumerate(row[:limit]):
            if not be.is_zero(x):
                out.append(c)
                break
    return out


def _as_rows(vectors, backend=None):
    """Rows of coefficients for AlgebraElements (over the union of supports),
    or the entry rows of an ExactMatrix."""
    if isinstance(vectors, ExactMatrix):
        return vectors.backend, [list(r) for r in vectors.entries], None
    vectors = list(vectors)
    if not vectors:
        raise ValueError("no vectors given")
    first = vectors[0]
    if isinstance(first, AlgebraElement):
        be = first.backend
        support = sorted(set().union(*[set(v.coeffs) for v in vectors]))
        cols = {g: i for i, g in enumerate(support)}
        rows = []
        for v in vectors:
            first._check(v)
            row = [be.zero] * len(support)
            for g, c in v.coeffs.items():
                row[cols[g]] = c
            rows.append(row)
        return be, rows, support
    raise TypeError("expected AlgebraElements or an ExactMatrix")


def rank(vectors) -> int:
    be, rows, _ = _as_rows(vectors)
    ech = _eliminate(be, rows)
    return len(_pivot_columns(be, ech))


def solve(matrix: ExactMatrix, rhs: Sequence) -> list:
    """Solve matrix * x = rhs exactly; raises InconsistentSystem."""
    be = matrix.backend
    if len(rhs) != matrix.rows:
        raise ValueError("rhs length mismatch")
    n = matrix.cols
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix.entries)]
    ech = _eliminate(be, aug, limit_cols=n)
    pivots = _pivot_columns(be, ech, n)
    # inconsistency: a pivot in the rhs column
    for row in ech[len(pivots):]:
        if not be.is_zero(row[n]):
            raise InconsistentSystem("no solution")
    x = [be.zero] * n
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        acc = ech[r][n]
        for j in range(c + 1, n):
            if not be.is_zero(x[j]):
                acc = be.sub(acc, be.mul(ech[r][j], x[j]))
        x[c] = be.mul(acc, be.inv(ech[r][c]))
    return x


def kernel(matrix: ExactMatrix) -> list[list]:
    """Basis of the right null space; [] when the kernel is trivial."""
    be = matrix.backend
    n = matrix.cols
    ech = _eliminate(be, [list(r) for r in matrix.entries])
    pivots = _pivot_columns(be, ech, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [be.zero] * n
        x[f] = be.one
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            acc = be.zero
            for j in range(c + 1, n):
                if not be.is_zero(x[j]):
                    acc = be.add(acc, be.mul(ech[r][j], x[j]))
            x[c] = be.neg(be.mul(acc, be.inv(ech[r][c])))
        basis.append(x)
    return basis


def left_regular_matrix(a: AlgebraElement, basis: Sequence[AlgebraElement]) -> ExactMatrix:
    """Matrix of v -> a*v on span(basis), columns solved exactly.

    Raises InconsistentSystem (with the offending basis index) when the
    image leaves the span.
    """
    be = a.backend
    _, rows, support = _as_rows(list(basis))
    cols = {g: i for i, g in enumerate(support)}
    basis_matrix = ExactMatrix(be, [list(col) for col in zip(*rows)])  # |support| x d
    out_cols = []
    for j, v in enumerate(basis):
        image = a * v
        vec = [be.zero] * len(support)
        for g, c in image.coeffs.items():
            if g not in cols:
                raise InconsistentSystem(f"image of basis vector {j} escapes the span")
            vec[cols[g]] = c
        try:
            out_cols.append(solve(basis_matrix, vec))
        except InconsistentSystem:
            raise InconsistentSystem(f"image of basis vector {j} escapes the span")
    return ExactMatrix(be, [list(row) for row in zip(*out_cols)])
