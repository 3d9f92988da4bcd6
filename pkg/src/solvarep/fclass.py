"""F-rational layer: F-conjugacy classes, reduced F-character tables, and
F-rational primitive central idempotents.

Over a non-closed field F the class of an element x of order n merges the
ordinary classes of the powers x^r, where r ranges over the subgroup of
(Z/n)^* cut out by Gal(F(zeta_n)/F): all units for Q, {+-1} for R, the
powers of q for F_q, and {1} for C.  Complex leaves orbit under the same
power action; orbit sums are the F-rational idempotents and (up to the
Schur index, which is not computed here) the F-character rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclo import CyclotomicField
from .galg import AlgebraElement, NotProportional, scalar_ratio
from .pcgroup import PcGroup
from .pci import DiagramError, PciDiagram

__all__ = [
    "FieldDescriptor",
    "RATIONAL",
    "REAL",
    "COMPLEX",
    "finite",
    "FClass",
    "GaloisOrbit",
    "FTable",
    "exponent_subgroup",
    "f_conjugacy_classes",
    "galois_orbit_sum_pcis",
    "reduced_f_character_table",
    "pci_from_character_row",
]


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str            # "Q" | "R" | "C" | "F"
    q: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "R", "C", "F"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if (self.kind == "F") != (self.q is not None):
            raise ValueError("finite fields need q, others must not carry one")

    @staticmethod
    def parse(text: str) -> "FieldDescriptor":
        t = text.strip()
        if t in ("Q", "R", "C"):
            return FieldDescriptor(t)
        if t.upper().startswith("F:"):
            return finite(int(t[2:]))
        if t.upper().startswith("F") and t[1:].isdigit():
            return finite(int(t[1:]))
        raise ValueError(f"cannot parse field {text!r}")

    def label(self) -> str:
        return {"Q": "Q", "R": "R", "C": "C"}.get(self.kind) or f"F{self.q}"


RATIONAL = FieldDescriptor("Q")
REAL = FieldDescriptor("R")
COMPLEX = FieldDescriptor("C")


def finite(q: int) -> FieldDescriptor:
    if q < 2:
        raise ValueError("finite field size must be a prime power >= 2")
    return FieldDescriptor("F", q)


def exponent_subgroup(n: int, field: FieldDescriptor) -> list[int]:
    """The subgroup of (Z/n)^* of exponents r with x ~_F x^r."""
    if n == 1:
        return [1]
    if field.kind == "C":
        return [1]
    if field.kind == "R":
        return sorted({1 % n, (n - 1) % n})
    if field.kind == "Q":
        return [r for r in range(1, n + 1) if gcd(r, n) == 1]
    q = field.q
    if gcd(q, n) != 1:
        raise ValueError(f"field size {q} not coprime to {n}")
    out = []
    r = q % n
    seen = {1}
    out.append(1)
    while r not in seen:
        seen.add(r)
        out.append(r)
        r = r * q % n
    return sorted(out)


@dataclass
class FClass:
    index: int
    representative: int           # group element index
    class_ids: tuple[int, ...]    # merged ordinary classes
    members: tuple[int, ...]      # sorted element indices
    exponents: tuple[int, ...]    # F-exponent subgroup at the representative order

    def __len__(self):
        return len(self.members)


def f_conjugacy_classes(group: PcGroup, field: FieldDescriptor) -> list[FClass]:
    """Merge ordinary classes under g -> g^r for r in the exponent subgroup."""
    classes = group.conjugacy_classes()
    merged_of = list(range(len(classes)))

    def find(i):
        while merged_of[i] != i:
            merged_of[i] = merged_of[merged_of[i]]
            i = merged_of[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            merged_of[max(ri, rj)] = min(ri, rj)

    for ci, cls in enumerate(classes):
        g = cls.representative
        o = group.element_order(g)
        for r in exponent_subgroup(o, field):
            union(ci, group.class_of(_power(group, g, r)))
    buckets: dict[int, list[int]] = {}
    for ci in range(len(classes)):
        buckets.setdefault(find(ci), []).append(ci)
    out = []
    groups_sorted = sorted(
        buckets.values(), key=lambda ids: min(classes[c].members[0] for c in ids)
    )
    for idx, ids in enumerate(groups_sorted):
        members = tuple(sorted(m for c in ids for m in classes[c].members))
        rep = members[0]
        o = group.element_order(rep)
        out.append(FClass(idx, rep, tuple(sorted(ids)), members,
                          tuple(exponent_subgroup(o, field))))
    return out


def _power(group: PcGroup, g: int, k: int) -> int:
    out = 0
    for _ in range(k):
        out = group.mul(out, g)
    return out


@dataclass
class GaloisOrbit:
    index: int
    leaf_indices: tuple[int, ...]
    delta: int
    character: list        # orbit-sum values, one per ordinary class
    idempotent: AlgebraElement


def galois_orbit_sum_pcis(group: PcGroup, field: FieldDescriptor,
                          diagram: PciDiagram) -> list[GaloisOrbit]:
    """Orbit the complex leaves under the field's power action and sum.

    Each orbit sum is re-verified: an idempotent, central, and with every
    coefficient fixed by the corresponding coordinate Galois action (all
    rational coefficients in the F = Q case).
    """
    if diagram.backend.kind != "cyclotomic":
        raise ValueError("orbit sums need the exact diagram")
    leaves = diagram.leaves
    if any(leaf.character is None for leaf in leaves):
        raise ValueError("diagram leaves carry no character data")
    n = group.exponent
    subgroup = exponent_subgroup(n, field)
    classes = group.conjugacy_classes()
    power_class = {
        r: [group.class_of(_power(group, c.representative, r)) for c in classes]
        for r in subgroup
    }
    key_of = {tuple(leaf.character): i for i, leaf in enumerate(leaves)}
    seen: set[int] = set()
    orbits = []
    for i, leaf in enumerate(leaves):
        if i in seen:
            continue
        orbit = set()
        for r in subgroup:
            twisted = tuple(leaf.character[power_class[r][ci]]
                            for ci in range(len(classes)))
            j = key_of.get(twisted)
            if j is None:
                raise DiagramError("power-twisted character is not a leaf character")
            orbit.add(j)
        orbit_ids = tuple(sorted(orbit))
        seen.update(orbit_ids)
        total = leaves[orbit_ids[0]].idempotent
        chi = list(leaves[orbit_ids[0]].character)
        for j in orbit_ids[1:]:
            total = total + leaves[j].idempotent
            chi = [a + b for a, b in zip(chi, leaves[j].character)]
        _verify_orbit_sum(total, subgroup, field, group)
        orbits.append(GaloisOrbit(len(orbits), orbit_ids, len(orbit_ids), chi, total))
    return orbits


def _verify_orbit_sum(elt: AlgebraElement, subgroup, field, group) -> None:
    if not elt.is_idempotent() or not elt.is_central_at(group.n):
        raise DiagramError("orbit sum is not a central idempotent")
    for r in subgroup:
        for c in elt.coeffs.values():
            if c.galois_image(r) != c:
                raise DiagramError("orbit sum has coefficients outside the field")
    if field.kind == "Q":
        if any(not c.is_rational() for c in elt.coeffs.values()):
            raise DiagramError("rational orbit sum has irrational coefficients")


@dataclass
class FTable:
    field: FieldDescriptor
    group: PcGroup
    classes: list[FClass]
    labels: list[str]
    rows: list[list]       # exact scalars, aligned with classes

    def to_json(self):
        return {
            "field": self.field.label(),
            "classes": [self.group.element_name(c.representative)
                        for c in self.classes],
            "class_sizes": [len(c) for c in self.classes],
            "rows": [
                {"label": lab, "values": [v.to_json() for v in row]}
                for lab, row in zip(self.labels, self.rows)
            ],
        }

    def to_text(self) -> str:
        heads = [""] + [self.group.element_name(c.representative)
                        for c in self.classes]
        body = [[lab] + [_scalar_text(v) for v in row]
                for lab, row in zip(self.labels, self.rows)]
        widths = [max(len(r[i]) for r in [heads] + body) for i in range(len(heads))]
        lines = ["  ".join(h.rjust(w) for h, w in zip(heads, widths))]
        for row in body:
            lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
        return "\n".join(lines) + "\n"


def _scalar_text(v) -> str:
    return v.text() if hasattr(v, "text") else str(v)


def reduced_f_character_table(group: PcGroup, field: FieldDescriptor,
                              diagram: PciDiagram) -> FTable:
    """Square table of orbit-sum character values on the F-classes.

    Rows are Galois-orbit sums of complex characters; the Schur-index
    multiplier is deliberately not applied, so rows are "reduced": the true
    irreducible F-character is m times the printed row.
    """
    if field.kind == "F":
        raise ValueError("character tables are emitted for characteristic 0 only")
    fclasses = f_conjugacy_classes(group, field)
    orbits = galois_orbit_sum_pcis(group, field, diagram)
    if len(fclasses) != len(orbits):
        raise DiagramError("orbit count differs from F-class count")
    rows = []
    labels = []
    order = sorted(range(len(orbits)),
                   key=lambda i: (_degree_of(orbits[i]), orbits[i].leaf_indices))
    for pos, oi in enumerate(order):
        orbit = orbits[oi]
        row = []
        for fc in fclasses:
            vals = {tuple(orbit.character[ci].coords) for ci in fc.class_ids}
            if len(vals) != 1:
                raise DiagramError("orbit character is not constant on an F-class")
            row.append(orbit.character[fc.class_ids[0]])
        rows.append(row)
        labels.append(f"psi_{pos + 1} (reduced)")
    return FTable(field, group, fclasses, labels, rows)


def _degree_of(orbit: GaloisOrbit):
    v = orbit.character[0]
    return v.rational_value()


def pci_from_character_row(group: PcGroup, row, field: FieldDescriptor,
                           diagram_backend=None):
    """Idempotent from a class-function row: e'' = sum row(x^-1) x, scaled by
    the scalar s with e''^2 = s e''.

    `row` is aligned with f_conjugacy_classes(group, field).  Returns
    (idempotent, s, n_inferred), n_inferred = |G|/s when that is a positive
    integer (for a reduced row this equals n times the Schur index).
    Raises NotProportional when the row is not proportional to an
    irreducible F-character; sums of rows sharing the same |G|/n scalar are
    undetectable here and come back as non-primitive central idempotents.
    """
    backend = diagram_backend or CyclotomicField(group.exponent)
    fclasses = f_conjugacy_classes(group, field)
    if len(row) != len(fclasses):
        raise ValueError("row length differs from the number of F-classes")
    class_value = {}
    for fc, v in zip(fclasses, row):
        for m in fc.members:
            class_value[m] = v
    coeffs = {}
    for g in range(group.order):
        v = class_value[group.inv(g)]
        if not backend.is_zero(v):
            coeffs[g] = v
    e2 = AlgebraElement(group, group.n, backend, coeffs)
    if e2.is_zero():
        raise NotProportional("zero row")
    s = scalar_ratio(e2 * e2, e2)
    if backend.is_zero(s):
        raise NotProportional("row squares to zero")
    e = e2.scale(backend.inv(s))
    if not e.is_idempotent() or not e.is_central_at(group.n):
        raise DiagramError("character row did not produce a central idempotent")
    n_inferred = None
    if hasattr(s, "is_rational") and s.is_rational():
        q = Fraction(group.order) / s.rational_value()
        if q.denominator == 1 and q > 0:
            n_inferred = int(q)
    return e, s, n_inferred
