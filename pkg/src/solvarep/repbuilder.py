"""Irreducible matrix representations from the diagram (steps 3-6).

Inside the minimal left ideal cut out by the first path idempotent f_1 of a
leaf, the vectors v_1 = f_1 and v_j = f_j g_j f_1 (g_j the first group
element making the product nonzero) form a basis on which the chain class
sums act diagonally.  Generator matrices are read off by projecting x_k v_j
with each f_m; every presentation relation is then verified exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cyclo import CyclotomicField
from .galg import (
    AlgebraElement,
    ExactMatrix,
    InconsistentSystem,
    NotProportional,
    kernel,
    rank,
    scalar_ratio,
)
from .pcgroup import PcGroup
from .pci import DiagramError, PciDiagram, PciNode, build_exact_diagram, path_idempotents

__all__ = [
    "GtBasis",
    "MatrixRep",
    "RepReport",
    "gt_basis",
    "build_matrices",
    "verify_rep",
    "character_of",
    "are_equivalent",
    "all_irreps",
]


@dataclass
class GtBasis:
    leaf: PciNode
    path_idems: list[AlgebraElement]
    witnesses: list[int]            # group elements g_j, j >= 2 (g_1 = identity)
    vectors: list[AlgebraElement]


@dataclass
class MatrixRep:
    group: PcGroup
    leaf: PciNode
    degree: int
    matrices: dict[str, ExactMatrix]   # one per long generator
    basis: GtBasis

    def __post_init__(self):
        self._element_cache: dict[int, ExactMatrix] = {}

    def matrix_of_element(self, g: int) -> ExactMatrix:
        """Image of a group element: product of generator matrices along its
        normal form (memoized)."""
        cached = self._element_cache.get(g)
        if cached is not None:
            return cached
        out = ExactMatrix.identity(self.backend, self.degree)
        exps = self.group.exponents(g)
        for j, a in enumerate(exps):
            m = self.matrices[self.group.presentation.gens[j]]
            for _ in range(a):
                out = out * m
        self._element_cache[g] = out
        return out

    def matrix_of_algebra_element(self, elt: AlgebraElement) -> ExactMatrix:
        """Linear extension; entries summed in one pass per position."""
        be = self.backend
        d = self.degree
        terms: list[list[list]] = [[[] for _ in range(d)] for _ in range(d)]
        for g, c in sorted(elt.restrict(self.group.n).coeffs.items()):
            m = self.matrix_of_element(g)
            for i in range(d):
                row = m.entries[i]
                for j in range(d):
                    v = row[j]
                    if not be.is_zero(v):
                        terms[i][j].append(be.mul(v, c))
        entries = [
            [be.sum_scalars(terms[i][j]) if terms[i][j] else be.zero
             for j in range(d)]
            for i in range(d)
        ]
        return ExactMatrix(be, entries)

    @property
    def backend(self):
        return self.matrices[self.group.presentation.gens[0]].backend

    def to_json(self):
        return {
            "leaf": self.leaf.node_id,
            "degree": self.degree,
            "generators": [
                {"name": name, "matrix": m.to_json()}
                for name, m in self.matrices.items()
            ],
            "character": [
                {
                    "class_rep": self.group.element_name(c.representative),
                    "value": v.to_json(),
                }
                for c, v in zip(self.group.conjugacy_classes(),
                                character_of(self))
            ],
        }


def gt_basis(diagram: PciDiagram, leaf: PciNode) -> GtBasis:
    """Basis vectors of the model left ideal attached to a leaf.

    f_1 is the lexicographically first path idempotent; witnesses are the
    first group elements (normal-form order) with f_j g f_1 != 0.
    """
    group = diagram.group
    f = path_idempotents(diagram, leaf)
    f1 = f[0]
    vectors = [f1]
    witnesses = []
    backend = f1.backend
    for j in range(1, len(f)):
        found = None
        for g in range(group.order):
            cand = f[j] * AlgebraElement.group_element(group, backend, g) * f1
            if not cand.is_zero():
                found = (g, cand)
                break
        if found is None:
            raise DiagramError("no witness element found (corrupt diagram)")
        witnesses.append(found[0])
        vectors.append(found[1])
    if rank(vectors) != len(vectors):
        raise DiagramError("basis vectors are not independent")
    return GtBasis(leaf, f, witnesses, vectors)


def build_matrices(basis: GtBasis, group: PcGroup) -> MatrixRep:
    """Generator matrices in the GT basis, coefficient by projection."""
    f = basis.path_idems
    v = basis.vectors
    d = len(v)
    backend = v[0].backend
    matrices = {}
    for k, name in enumerate(group.presentation.gens):
        xk = AlgebraElement.group_element(group, backend, group.generator_index(k))
        entries = [[backend.zero] * d for _ in range(d)]
        for j in range(d):
            image = xk * v[j]
            for m in range(d):
                proj = f[m] * image
                if proj.is_zero():
                    continue
                try:
                    entries[m][j] = scalar_ratio(proj, v[m])
                except NotProportional:
                    raise DiagramError(
                        f"projection of {name}*v_{j} is not along v_{m}"
                    )
        matrices[name] = ExactMatrix(backend, entries)
    rep = MatrixRep(group, basis.leaf, d, matrices, basis)
    report = verify_rep(rep, group)
    if not report.ok:
        raise DiagramError(f"representation fails verification: {report.failures()}")
    return rep


@dataclass
class RepReport:
    degree: int
    power_relations: dict[str, bool]
    conj_relations: dict[str, bool]
    gt_diagonal: dict[int, bool]

    @property
    def ok(self) -> bool:
        return (
            all(self.power_relations.values())
            and all(self.conj_relations.values())
            and all(self.gt_diagonal.values())
        )

    def failures(self) -> list[str]:
        out = [f"power {k}" for k, v in self.power_relations.items() if not v]
        out += [f"conj {k}" for k, v in self.conj_relations.items() if not v]
        out += [f"diag level {k}" for k, v in self.gt_diagonal.items() if not v]
        return out


def verify_rep(rep: MatrixRep, group: PcGroup) -> RepReport:
    """Exact relation checks plus chain-class-sum diagonality."""
    pres = group.presentation
    be = rep.backend
    power_ok = {}
    conj_ok = {}
    for i, name in enumerate(pres.gens):
        m = rep.matrices[name]
        lhs = m ** pres.primes[i]
        w = group.promote(group.power_elt[i + 1], i, group.n)
        power_ok[name] = lhs == rep.matrix_of_element(w)
        try:
            mi = m.inverse()
        except InconsistentSystem:
            # a singular generator image cannot satisfy any relation set
            for j in range(i):
                conj_ok[f"{name}^-1 {pres.gens[j]} {name}"] = False
            continue
        for j in range(i):
            target = group.conj(group.generator_index(j), group.generator_index(i))
            got = mi * rep.matrices[pres.gens[j]] * m
            conj_ok[f"{name}^-1 {pres.gens[j]} {name}"] = got == rep.matrix_of_element(target)
    diag_ok = {}
    for i in range(1, group.n + 1):
        x = group.generator_index(i - 1, i)
        support = [group.promote(h, i, group.n) for h in group.class_sum_support(x, i)]
        elt = AlgebraElement.from_support(group, be, support)
        diag_ok[i] = rep.matrix_of_algebra_element(elt).is_diagonal()
    return RepReport(rep.degree, power_ok, conj_ok, diag_ok)


def character_of(rep: MatrixRep) -> list:
    """Trace class function, one value per conjugacy class."""
    return [
        rep.matrix_of_element(c.representative).trace()
        for c in rep.group.conjugacy_classes()
    ]


def are_equivalent(rep_a: MatrixRep, rep_b, group: PcGroup | None = None,
                   max_intertwiner_degree: int = 8):
    """(equivalent, intertwiner): characters decide; an exact invertible T
    with T a(x_k) = b(x_k) T certifies the positive answer for small degrees.

    rep_b may be a MatrixRep or a plain {generator: ExactMatrix} map.
    """
    if isinstance(rep_b, MatrixRep):
        group = rep_b.group
        mats_b = rep_b.matrices
    else:
        mats_b = rep_b
    if group is None:
        group = rep_a.group
    be = rep_a.backend
    da = rep_a.degree
    db = next(iter(mats_b.values())).rows
    if da != db:
        return False, None
    chi_a = character_of(rep_a)
    chi_b = [
        _matrix_of_element_in(mats_b, group, be, c.representative, db).trace()
        for c in group.conjugacy_classes()
    ]
    if any(not be.eq(a, b) for a, b in zip(chi_a, chi_b)):
        return False, None
    if da > max_intertwiner_degree:
        return True, None
    t = _intertwiner(rep_a.matrices, mats_b, group, be, da)
    return True, t


def _matrix_of_element_in(mats, group, be, g, degree):
    out = ExactMatrix.identity(be, degree)
    for j, a in enumerate(group.exponents(g)):
        m = mats[group.presentation.gens[j]]
        for _ in range(a):
            out = out * m
    return out


def _intertwiner(mats_a, mats_b, group, be, d):
    """Solve T A_k = B_k T exactly; returns an invertible T."""
    rows = []
    names = group.presentation.gens
    for name in names:
        a = mats_a[name]
        b = mats_b[name]
        # unknowns T[r][c] flattened row-major
        for i in range(d):
            for j in range(d):
                row = [be.zero] * (d * d)
                # (T A)_ij = sum_k T_ik A_kj ; (B T)_ij = sum_k B_ik T_kj
                for k in range(d):
                    row[i * d + k] = be.add(row[i * d + k], a.entries[k][j])
                for k in range(d):
                    row[k * d + j] = be.sub(row[k * d + j], b.entries[i][k])
                rows.append(row)
    basis = kernel(ExactMatrix(be, rows))
    for vec in basis:
        t = ExactMatrix(be, [[vec[i * d + j] for j in range(d)] for i in range(d)])
        try:
            t.inverse()
        except InconsistentSystem:
            continue
        return t
    raise DiagramError("characters agree but no invertible intertwiner found")


def all_irreps(group: PcGroup, diagram: PciDiagram | None = None) -> list[MatrixRep]:
    """One verified representation per leaf, in canonical leaf order."""
    if diagram is None:
        diagram = build_exact_diagram(group)
    reps = []
    for leaf in diagram.leaves:
        basis = gt_basis(diagram, leaf)
        reps.append(build_matrices(basis, group))
    total = sum(r.degree**2 for r in reps)
    if total != group.order:
        raise DiagramError("degree squares do not sum to the group order")
    return reps
