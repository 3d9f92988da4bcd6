"""Primitive central idempotents along the chain: the PCI-diagram.

The diagram is built level by level.  A level-i idempotent that stays
central one level up splits into p children

    f_k = (1/p) * sum_j (zeta_p^k * b / mu)^j * e,      b = Cbar(x*) * e,

where b^p e = lambda e and mu is a p-th root of lambda; otherwise its p
conjugates under the new generator fuse into their sum.  Phase 1 runs the
whole induction over a modular splitting field F_ell (ell = 1 mod exp G),
where p-th roots are cheap; phase 2 recovers the exact cyclotomic
idempotents from eigenvalue multiplicities and re-verifies everything
exactly, so the modular detour never weakens the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclo import (
    Cyclotomic,
    CyclotomicField,
    NoPthRoot,
    PrimeField,
    is_prime,
    reduction_bound,
)
from .galg import AlgebraElement, NotProportional, scalar_ratio, sum_elements
from .pcgroup import PcGroup

__all__ = [
    "PciNode",
    "PciDiagram",
    "BermanSplit",
    "BermanFused",
    "DiagramError",
    "PrimeEscalation",
    "select_prime",
    "berman_split",
    "berman_fuse",
    "build_modular_diagram",
    "lift_pci_to_cyclotomic",
    "build_pci_diagram",
    "build_exact_diagram",
    "gz_generators",
    "path_idempotents",
    "root_paths",
]


class DiagramError(RuntimeError):
    pass


class PrimeEscalation(RuntimeError):
    """The current modular prime is unusable; retry with the next one."""


@dataclass
class PciNode:
    level: int
    index: int
    idempotent: AlgebraElement
    degree: int
    parents: list[int] = field(default_factory=list)
    children: list[int] = field(default_factory=list)
    is_trivial: bool = False
    # class-function values of the attached irreducible character, one per
    # conjugacy class of the level subgroup (exact diagrams only)
    character: list | None = None
    # for degree-1 nodes: zeta_N exponent of the character per class
    char_exponents: list[int] | None = None

    @property
    def node_id(self) -> str:
        return f"n{self.level}_{self.index}"


@dataclass
class PciDiagram:
    group: PcGroup
    backend: object
    levels: list[list[PciNode]]

    @property
    def leaves(self) -> list[PciNode]:
        return self.levels[-1]

    def node(self, level: int, index: int) -> PciNode:
        return self.levels[level][index]

    def degrees(self) -> list[int]:
        return [n.degree for n in self.leaves]


@dataclass
class BermanSplit:
    parent_index: int
    representative: int      # x* as an element of the extended level
    lam: object              # scalar with (Cbar(x*) e)^p = lam * e
    children: list[AlgebraElement]


@dataclass
class BermanFused:
    parent_indices: list[int]
    child: AlgebraElement


def select_prime(group: PcGroup, above: int | None = None) -> int:
    """Smallest usable modular prime for the group (or the next one).

    ell = 1 (mod exp G), ell does not divide |G|, and ell exceeds both
    2*sqrt|G| (so eigenvalue multiplicities lift uniquely) and
    2*|G|*C*exp(G) with C the reduction-table bound (so scaled idempotent
    coordinates round-trip through F_ell).
    """
    n = group.exponent
    size = group.order
    bound = max(
        2 * math.isqrt(size) + 1,
        2 * size * reduction_bound(n) * n,
        above if above is not None else 0,
    )
    ell = bound + 1
    # align to 1 mod n
    ell += (-(ell - 1)) % n
    while ell < 2**31:
        if is_prime(ell) and size % ell != 0:
            return ell
        ell += n
    raise PrimeEscalation("no usable prime below 2^31")


def _class_sum(group: PcGroup, backend, g: int, level: int) -> AlgebraElement:
    return AlgebraElement.from_support(
        group, backend, group.class_sum_support(g, level), level
    )


def berman_split(group: PcGroup, backend, e: AlgebraElement, level: int,
                 x_star: int | None = None) -> BermanSplit:
    """Split a centrally-stable idempotent into p children one level up.

    e lives at `level`; the result children live at level+1.  x_star
    defaults to the new long generator; when the scalar lambda vanishes the
    other elements of the nontrivial cosets are tried in normal-form order
    (a nonzero lambda always exists for a genuine idempotent).
    """
    p = group.primes[level]
    up = level + 1
    e_up = e.restrict(up)
    candidates = [x_star] if x_star is not None else _coset_candidates(group, up)
    lam = None
    chosen = None
    b = None
    for cand in candidates:
        b = _class_sum(group, backend, cand, up) * e_up
        bp = b
        for _ in range(p - 1):
            bp = bp * b
        try:
            lam_c = scalar_ratio(bp, e_up)
        except NotProportional:
            raise DiagramError("class-sum power is not scalar on the idempotent")
        if not backend.is_zero(lam_c):
            lam, chosen = lam_c, cand
            break
    if lam is None:
        raise PrimeEscalation("no coset element with nonzero lambda")
    try:
        mu = backend.pth_root(lam, p)
    except NoPthRoot:
        raise PrimeEscalation(f"lambda has no {p}-th root in the backend")
    c = b.scale(backend.inv(mu))
    zeta = backend.root_of_unity(p)
    # powers c^j e, j = 0..p-1
    powers = [e_up]
    for _ in range(p - 1):
        powers.append(powers[-1] * c)
    if backend.kind == "prime" and p * p >= 1024:
        children = _split_children_modular(group, backend, powers, zeta, p, up)
    else:
        children = []
        inv_p = Fraction(1, p)
        for k in range(p):
            acc = powers[0]
            zk = _scalar_pow(backend, zeta, k)
            w = backend.one
            for j in range(1, p):
                w = backend.mul(w, zk)
                acc = acc + powers[j].scale(w)
            children.append(acc.scale(inv_p))
    total = children[0]
    for ch in children[1:]:
        total = total + ch
    if total != e_up:
        raise DiagramError("split children do not sum to the parent")
    return BermanSplit(-1, chosen, lam, children)


def _split_children_modular(group, backend, powers, zeta, p, level):
    """Vectorized child assembly: children = (1/p) Vandermonde(zeta) @ powers."""
    ell = backend.ell
    if ell * ell * p >= (1 << 62):
        raise PrimeEscalation("prime too large for vectorized split assembly")
    size = group.level_order(level)
    m = np.zeros((p, size), dtype=np.int64)
    for j, elt in enumerate(powers):
        for g, v in elt.coeffs.items():
            m[j, g] = v % ell
    zcol = np.empty(p, dtype=np.int64)
    cur = 1
    for k in range(p):
        zcol[k] = cur
        cur = cur * zeta % ell
    vand = np.empty((p, p), dtype=np.int64)
    acc = np.ones(p, dtype=np.int64)
    for j in range(p):
        vand[:, j] = acc
        acc = acc * zcol % ell
    inv_p = pow(p, -1, ell)
    rows = vand @ m % ell * inv_p % ell
    children = []
    for k in range(p):
        row = rows[k]
        support = np.nonzero(row)[0]
        coeffs = {int(g): int(row[g]) for g in support}
        children.append(AlgebraElement._raw(group, level, backend, coeffs))
    return children


def _scalar_pow(backend, s, k: int):
    out = backend.one
    for _ in range(k):
        out = backend.mul(out, s)
    return out


def _coset_candidates(group: PcGroup, up: int):
    p = group.primes[up - 1]
    x = group.generator_index(up - 1, up)
    yield x
    for g in range(group.level_order(up)):
        if g % p != 0 and g != x:
            yield g


def berman_fuse(group: PcGroup, nodes: list[PciNode], idx: int,
                level: int) -> BermanFused:
    """Fuse the conjugate orbit of nodes[idx] under the new generator.

    All p conjugates must already be present at the current level;
    a missing conjugate or a wrong orbit size signals an upstream bug.
    """
    p = group.primes[level]
    up = level + 1
    x_up = group.generator_index(level, up)
    lookup = {}
    for j, node in enumerate(nodes):
        lookup[_coeff_key(node.idempotent)] = j
    orbit = [idx]
    cur = nodes[idx].idempotent.restrict(up)
    for _ in range(p - 1):
        cur = cur.conj_by(x_up)
        j = lookup.get(_coeff_key(cur.restrict(level)))
        if j is None:
            raise DiagramError("conjugate idempotent missing at its level")
        if j == idx:
            break
        orbit.append(j)
    if len(orbit) != p:
        raise DiagramError(f"conjugate orbit has size {len(orbit)}, expected {p}")
    child = nodes[orbit[0]].idempotent.restrict(up)
    for j in orbit[1:]:
        child = child + nodes[j].idempotent.restrict(up)
    return BermanFused(orbit, child)


def _coeff_key(elt: AlgebraElement):
    return tuple(sorted(elt.coeffs.items(), key=lambda kv: kv[0]))


def _principal(group: PcGroup, backend, level: int) -> AlgebraElement:
    size = group.level_order(level)
    c = backend.from_rational(Fraction(1, size))
    return AlgebraElement(group, level, backend, {g: c for g in range(size)})


def build_modular_diagram(group: PcGroup, ell: int | None = None) -> PciDiagram:
    """Run the whole Berman induction over F_ell (phase 1)."""
    if ell is None:
        ell = select_prime(group)
    backend = PrimeField(ell, unit_order=max(group.exponent, 1))
    return _build_diagram(group, backend)


def _build_diagram(group: PcGroup, backend) -> PciDiagram:
    root = PciNode(0, 0, AlgebraElement.one(group, backend, 0), 1, is_trivial=True)
    levels = [[root]]
    for level in range(group.n):
        cur = levels[level]
        nxt: list[PciNode] = []
        consumed: set[int] = set()
        x_up = group.generator_index(level, level + 1)
        for idx, node in enumerate(cur):
            if idx in consumed:
                continue
            e_up = node.idempotent.restrict(level + 1)
            if e_up.conj_by(x_up) == e_up:
                outcome = berman_split(group, backend, node.idempotent, level)
                outcome.parent_index = idx
                for child_elt in outcome.children:
                    child = PciNode(level + 1, len(nxt), child_elt, node.degree,
                                    parents=[idx])
                    node.children.append(child.index)
                    nxt.append(child)
            else:
                outcome = berman_fuse(group, cur, idx, level)
                consumed.update(outcome.parent_indices)
                degree = sum(cur[j].degree for j in outcome.parent_indices)
                child = PciNode(level + 1, len(nxt), outcome.child, degree,
                                parents=sorted(outcome.parent_indices))
                for j in outcome.parent_indices:
                    cur[j].children.append(child.index)
                nxt.append(child)
        _mark_trivial(group, nxt)
        verify_partition(group, [n.idempotent for n in nxt], level + 1,
                         context=f"level {level + 1}")
        levels.append(nxt)
    diagram = PciDiagram(group, backend, levels)
    _check_counts(diagram)
    return diagram


def _mark_trivial(group: PcGroup, nodes: list[PciNode]) -> None:
    if not nodes:
        return
    backend = nodes[0].idempotent.backend
    principal = _principal(group, backend, nodes[0].level)
    for node in nodes:
        node.is_trivial = node.idempotent == principal


def _check_counts(diagram: PciDiagram) -> None:
    group = diagram.group
    leaves = diagram.leaves
    nclasses = len(group.conjugacy_classes(group.n))
    if len(leaves) != nclasses:
        raise DiagramError(
            f"{len(leaves)} leaves vs {nclasses} conjugacy classes"
        )
    if sum(n.degree**2 for n in leaves) != group.order:
        raise DiagramError("sum of squared degrees differs from the group order")


# -- exact verification ----------------------------------------------------

_DIRECT_PAIR_BUDGET = 3_000_000


def verify_partition(group: PcGroup, elts: list[AlgebraElement], level: int,
                     context: str = "") -> None:
    """Exact partition-of-unity check: idempotents, centrality, sum, and
    pairwise orthogonality.

    Pairwise products are checked directly while affordable.  Beyond the
    budget orthogonality is certified instead: commuting verified
    idempotents summing to 1 satisfy sum_{i != j} e_i e_j = 0, and each
    e_i e_j is a central idempotent whose regular trace is dim of its
    image, which is nonnegative, so every cross product is 0 exactly.
    """
    if not elts:
        raise DiagramError(f"empty level ({context})")
    backend = elts[0].backend
    total = sum_elements(elts)
    if total != AlgebraElement.one(group, backend, level):
        raise DiagramError(f"partition of unity fails ({context})")
    for e in elts:
        if not e.is_central_at(level):
            raise DiagramError(f"non-central idempotent ({context})")
    for e in elts:
        if not e.is_idempotent():
            raise DiagramError(f"non-idempotent node ({context})")
    cost = sum(len(e.coeffs) ** 2 for e in elts) * max(len(elts) - 1, 0)
    if cost <= _DIRECT_PAIR_BUDGET:
        for i, a in enumerate(elts):
            for b in elts[i + 1:]:
                if not (a * b).is_zero():
                    raise DiagramError(f"non-orthogonal pair ({context})")
    # else: orthogonality follows from the docstring argument


# -- exact lift --------------------------------------------------------------


def lift_pci_to_cyclotomic(diagram: PciDiagram) -> PciDiagram:
    """Recover the exact diagram over Q(zeta_N) from a modular one (phase 2).

    Per node: modular character values from the idempotent's coefficients,
    eigenvalue multiplicities by a length-o inverse DFT at each class, a
    unique integer lift of each multiplicity, exact character and idempotent
    assembly, then full exact verification and a reduction round-trip.
    """
    group = diagram.group
    mod = diagram.backend
    if mod.kind != "prime":
        raise ValueError("lift expects a modular diagram")
    N = group.exponent
    exact = CyclotomicField(N)
    ell = mod.ell
    omega_pows = {}
    w = 1
    for k in range(N):
        omega_pows[w] = k
        w = w * mod.omega % ell
    levels: list[list[PciNode]] = []
    for level_nodes in diagram.levels:
        if not level_nodes:
            levels.append([])
            continue
        level = level_nodes[0].level
        lifted = _lift_level(group, mod, exact, level_nodes, level, omega_pows)
        levels.append(lifted)
        if level > 0:
            _verify_exact_level(group, mod, level_nodes, lifted, level)
    out = PciDiagram(group, exact, levels)
    _check_counts(out)
    return out


def _verify_exact_level(group, mod, mod_nodes, exact_nodes, level) -> None:
    """Exact post-lift checks for one level.

    Sum = 1, centrality, idempotency (degree-1 nodes by exponent
    multiplicativity of the lifted character, which implies e^2 = e for a
    linear character; higher degrees by direct products), orthogonality by
    direct products within budget or by the commuting-idempotent trace
    certificate, and the modular reduction round-trip per class.
    """
    N = group.exponent
    elts = [n.idempotent for n in exact_nodes]
    backend = elts[0].backend
    total = sum_elements(elts)
    if total != AlgebraElement.one(group, backend, level):
        raise PrimeEscalation(f"partition of unity fails at exact level {level}")
    for e in elts:
        if not e.is_central_at(level):
            raise PrimeEscalation(f"non-central exact idempotent at level {level}")
    classes = group.conjugacy_classes(level)
    gens = [group.generator_index(j, level) for j in range(level)]
    size = group.level_order(level)
    ell = mod.ell
    for node in exact_nodes:
        if node.char_exponents is not None:
            # chi = zeta^s per class; multiplicativity of s over (gen, all
            # elements) pairs makes chi a linear character, hence e idempotent
            s = node.char_exponents
            for x in gens:
                sx = s[group.class_of(x, level)]
                for h in range(size):
                    sh = s[group.class_of(h, level)]
                    if (sx + sh - s[group.class_of(group.mul(x, h, level), level)]) % N:
                        raise PrimeEscalation("lifted character is not multiplicative")
        else:
            if not node.idempotent.is_idempotent():
                raise PrimeEscalation(f"non-idempotent exact node at level {level}")
    cost = sum(len(e.coeffs) ** 2 for e in elts) * max(len(elts) - 1, 0)
    if cost <= _DIRECT_PAIR_BUDGET:
        for i, a in enumerate(elts):
            for b in elts[i + 1:]:
                if not (a * b).is_zero():
                    raise PrimeEscalation("non-orthogonal exact pair")
    # else: certified by the trace argument (see verify_partition)
    # reduction round trip, class by class
    # both coefficient maps are (d/|G_i|) chi(class of g^-1), so per-class
    # equality of the reduced characters pins every coefficient
    for mnode, enode in zip(mod_nodes, exact_nodes):
        d_inv = pow(mnode.degree, -1, ell)
        for ci, c in enumerate(classes):
            chibar = (mnode.idempotent.coefficient(
                group.inv(c.representative, level)) % ell
                * size % ell * d_inv % ell)
            if _reduce_cyclotomic(mod, enode.character[ci]) != chibar:
                raise PrimeEscalation(
                    "exact character does not reduce to the modular one")


def _lift_level(group, mod, exact, nodes, level, omega_pows):
    ell = mod.ell
    N = group.exponent
    size = group.level_order(level)
    if level == 0:
        root = PciNode(0, 0, AlgebraElement.one(group, exact, 0), 1,
                       parents=[], children=[n for n in nodes[0].children],
                       is_trivial=True)
        root.character = [exact.one]
        return [root]
    classes = group.conjugacy_classes(level)
    reps = [c.representative for c in classes]
    rep_orders = [group.element_order(r, level) for r in reps]
    inv_class = [group.class_of(group.inv(r, level), level) for r in reps]
    # chi_bar per (node, class) from the modular coefficients
    chibar_rows = []
    for node in nodes:
        d_inv = pow(node.degree, -1, ell)
        ebar = node.idempotent
        chibar_rows.append([
            ebar.coefficient(group.inv(c.representative, level)) % ell
            * size % ell * d_inv % ell
            for c in classes
        ])
    # exact character values: dlog shortcut for degree 1, batched
    # inverse DFT across nodes for higher degrees
    chis: list[list] = [[None] * len(classes) for _ in nodes]
    exp_rows: dict[int, list[int]] = {}
    deep = [i for i, node in enumerate(nodes) if node.degree > 1]
    for i, node in enumerate(nodes):
        if node.degree > 1:
            continue
        row = chibar_rows[i]
        exps = []
        for ci in range(len(classes)):
            s = omega_pows.get(row[ci])
            if s is None:
                raise PrimeEscalation("character value outside the unit group")
            exps.append(s)
            chis[i][ci] = Cyclotomic.zeta(N, s)
        exp_rows[i] = exps
    if deep:
        power_class = [
            [group.class_of(_pow(group, r, k, level), level) for k in range(o)]
            for r, o in zip(reps, rep_orders)
        ]
        if ell * ell * max(rep_orders) >= (1 << 62):
            raise PrimeEscalation("prime too large for the batched lift")
        for ci, (rep, o) in enumerate(zip(reps, rep_orders)):
            w_inv = pow(mod.root_of_unity(o), -1, ell)
            col = np.empty(o, dtype=np.int64)
            cur = 1
            for k in range(o):
                col[k] = cur
                cur = cur * w_inv % ell
            # dft[k, j] = w_inv^(j*k), columns built by elementwise products
            dft = np.empty((o, o), dtype=np.int64)
            acc = np.ones(o, dtype=np.int64)
            for j in range(o):
                dft[:, j] = acc
                acc = acc * col % ell
            vals = np.array(
                [[chibar_rows[i][power_class[ci][k]] for k in range(o)]
                 for i in deep],
                dtype=np.int64,
            )
            inv_o = pow(o, -1, ell)
            mults = vals @ dft % ell * inv_o % ell
            step = N // o
            for row_idx, i in enumerate(deep):
                d = nodes[i].degree
                counts = {}
                total = 0
                for j in range(o):
                    m = int(mults[row_idx, j])
                    if m > d:
                        raise PrimeEscalation(
                            "eigenvalue multiplicity exceeds the degree")
                    if m:
                        counts[j * step] = Fraction(m)
                        total += m
                if total != d:
                    raise PrimeEscalation(
                        "eigenvalue multiplicities do not sum to the degree")
                chis[i][ci] = Cyclotomic.from_exponent_counts(N, counts)
    lifted = []
    scaled_cache: dict[tuple, Cyclotomic] = {}
    for i, node in enumerate(nodes):
        d = node.degree
        chi = chis[i]
        coeffs = {}
        scale = Fraction(d, size)
        for ci, c in enumerate(classes):
            val = chi[inv_class[ci]]
            if val.is_zero():
                continue
            key = (scale, val)
            sval = scaled_cache.get(key)
            if sval is None:
                sval = val.scale(scale)
                scaled_cache[key] = sval
            for m in c.members:
                coeffs[m] = sval
        elt = AlgebraElement(group, level, exact, coeffs)
        new_node = PciNode(level, node.index, elt, d,
                           parents=list(node.parents),
                           children=list(node.children),
                           is_trivial=node.is_trivial)
        new_node.character = chi
        new_node.char_exponents = exp_rows.get(i)
        lifted.append(new_node)
    return lifted


def _pow(group: PcGroup, g: int, k: int, level: int) -> int:
    out = 0
    for _ in range(k):
        out = group.mul(out, g, level)
    return out


def _reduce_cyclotomic(mod, value: Cyclotomic) -> int:
    ell = mod.ell
    acc = 0
    for i, q in enumerate(value.coords):
        if q:
            w = pow(mod.omega, i, ell)
            acc = (acc + q.numerator * pow(q.denominator, -1, ell) * w) % ell
    return acc


# -- drivers ------------------------------------------------------------------


def build_pci_diagram(group: PcGroup, backend=None, prime: int | None = None,
                      retries: int = 5) -> PciDiagram:
    """Dispatch on the requested backend: modular phase only, or full lift."""
    if isinstance(backend, PrimeField):
        return _build_diagram(group, backend)
    if backend is None or isinstance(backend, CyclotomicField):
        return build_exact_diagram(group, prime=prime, retries=retries)
    raise TypeError("unsupported backend")


def build_exact_diagram(group: PcGroup, prime: int | None = None,
                        retries: int = 5) -> PciDiagram:
    """Phase 1 over F_ell plus exact lift, escalating the prime on failure."""
    ell = prime if prime is not None else select_prime(group)
    last = None
    for _ in range(retries):
        try:
            modular = build_modular_diagram(group, ell)
            return lift_pci_to_cyclotomic(modular)
        except PrimeEscalation as exc:
            last = exc
            ell = select_prime(group, above=ell)
    raise DiagramError(f"prime escalation budget exhausted: {last}")


def gz_generators(group: PcGroup, backend=None) -> list[AlgebraElement]:
    """Chain class sums Cbar_{G_i}(x_i), embedded at the top level.

    These generate the maximal commutative subalgebra that acts diagonally
    on every module basis produced from the diagram.
    """
    if backend is None:
        backend = CyclotomicField(group.exponent)
    out = []
    for i in range(1, group.n + 1):
        x = group.generator_index(i - 1, i)
        support = group.class_sum_support(x, i)
        elt = AlgebraElement.from_support(group, backend, support, i)
        out.append(elt.promote(group.n))
    return out


def root_paths(diagram: PciDiagram, leaf: PciNode) -> list[list[PciNode]]:
    """All root-to-leaf node chains, ordered lexicographically by the node
    index at each level (top first)."""
    paths = [[leaf]]
    for level in range(leaf.level, 0, -1):
        new_paths = []
        for path in paths:
            for pidx in path[0].parents:
                new_paths.append([diagram.node(level - 1, pidx)] + path)
        paths = new_paths
    paths.sort(key=lambda p: tuple(n.index for n in p))
    return paths


def path_idempotents(diagram: PciDiagram, leaf: PciNode) -> list[AlgebraElement]:
    """Products of the idempotents along each root-to-leaf path.

    Along a path, a split child absorbs its parent and a fused child is
    absorbed by it, so the product only needs a real convolution when the
    running factor is no longer the direct parent of the next node.
    """
    group = diagram.group
    n = group.n
    out = []
    for path in root_paths(diagram, leaf):
        running = path[0].idempotent  # the root: 1
        running_node: PciNode | None = path[0]
        for node in path[1:]:
            if running_node is not None and running_node.index in node.parents \
                    and len(node.parents) == 1:
                # split child: e_child * e_parent = e_child
                running = node.idempotent
                running_node = node
            elif running_node is not None and running_node.index in node.parents:
                # fused child: e_parent * e_child = e_parent
                running = running_node.idempotent.restrict(node.level)
                running_node = None
            else:
                running = running.restrict(node.level) * node.idempotent
                running_node = None
        f = running.restrict(n) if running.level != n else running
        if f.is_zero():
            raise DiagramError("zero path idempotent (corrupt diagram)")
        out.append(f)
    elts = out
    total = elts[0]
    for e in elts[1:]:
        total = total + e
    if total != leaf.idempotent.restrict(n):
        raise DiagramError("path idempotents do not sum to the leaf")
    for i, a in enumerate(elts):
        if not (a * a == a):
            raise DiagramError("path idempotent is not idempotent")
        for b in elts[i + 1:]:
            if not (a * b).is_zero():
                raise DiagramError("path idempotents are not orthogonal")
    return elts
