from fractions import Fraction

import pytest

from solvarep.cyclo import CyclotomicField, PrimeField
from solvarep.galg import AlgebraElement, scalar_ratio
from solvarep.pci import (
    DiagramError,
    berman_fuse,
    berman_split,
    build_exact_diagram,
    build_modular_diagram,
    build_pci_diagram,
    gz_generators,
    lift_pci_to_cyclotomic,
    path_idempotents,
    root_paths,
    select_prime,
)

from fixtures import PCI_SETS, avg, class_sum, group_and_field, one, root


def idem_set(diagram, level=None):
    nodes = diagram.levels[-1 if level is None else level]
    return {n.idempotent for n in nodes}


class TestPrimeSelection:
    def test_bounds_hold(self):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group

        for name in ("s3", "q8", "sl23", "s4"):
            g = build_group(catalog(name))
            ell = select_prime(g)
            assert (ell - 1) % g.exponent == 0
            assert g.order % ell
            assert ell > 2 * g.order

    def test_escalation_strictly_increases(self):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group

        g = build_group(catalog("s3"))
        l1 = select_prime(g)
        l2 = select_prime(g, above=l1)
        assert l2 > l1 and (l2 - 1) % g.exponent == 0


class TestBermanSteps:
    def test_s3_fuse(self):
        g, f = group_and_field("s3")
        w = root(f, 3)
        e_wx = avg(g, f, "x", 3, w)
        e_w2x = avg(g, f, "x", 3, w * w)
        # fuse needs sibling nodes at level 1
        from solvarep.pci import PciNode

        nodes = [
            PciNode(1, 0, avg(g, f, "x", 3).restrict(1), 1),
            PciNode(1, 1, e_wx.restrict(1), 1),
            PciNode(1, 2, e_w2x.restrict(1), 1),
        ]
        out = berman_fuse(g, nodes, 1, 1)
        assert sorted(out.parent_indices) == [1, 2]
        expected = (e_wx + e_w2x).restrict(2)
        assert out.child == expected
        # expansion: (2 - x - x^2)/3
        xs = g.element_from_name("x")
        m = f.from_rational(Fraction(-1, 3))
        manual = AlgebraElement(g, 2, f, {
            0: f.from_rational(Fraction(2, 3)),
            xs: m,
            g.mul(xs, xs): m,
        })
        assert out.child == manual

    def test_q8_fuse_gives_one_minus_ex(self):
        g, f = group_and_field("q8")
        i = root(f, 4)
        emx = avg(g, f, "x", 2, f.from_rational(-1))
        e_iy = (emx * avg(g, f, "y", 2, i)).restrict(2)
        e_miy = (emx * avg(g, f, "y", 2, -i)).restrict(2)
        from solvarep.pci import PciNode

        exy = (avg(g, f, "x", 2) * avg(g, f, "y", 2)).restrict(2)
        exmy = (avg(g, f, "x", 2) * avg(g, f, "y", 2, f.from_rational(-1))).restrict(2)
        nodes = [PciNode(2, k, e, 1) for k, e in enumerate((exy, exmy, e_iy, e_miy))]
        out = berman_fuse(g, nodes, 2, 2)
        assert out.child == emx.restrict(3)

    def test_a4_fuse(self):
        g, f = group_and_field("a4")
        pm = lambda nm, s: avg(g, f, nm, 2, f.from_rational(s))
        parts = [pm("x", 1) * pm("y", -1), pm("x", -1) * pm("y", 1),
                 pm("x", -1) * pm("y", -1)]
        from solvarep.pci import PciNode

        nodes = [PciNode(2, 0, (pm("x", 1) * pm("y", 1)).restrict(2), 1)]
        nodes += [PciNode(2, k + 1, e.restrict(2), 1) for k, e in enumerate(parts)]
        out = berman_fuse(g, nodes, 1, 2)
        assert out.child == (one(g, f) - pm("x", 1) * pm("y", 1)).restrict(3)
        assert len(out.parent_indices) == 3

    def test_sl23_split_exact(self):
        g, f = group_and_field("sl23")
        emx = avg(g, f, "x", 2, f.from_rational(-1))
        out = berman_split(g, f, emx.restrict(3), 3)
        assert out.lam == f.from_rational(-8)
        assert len(out.children) == 3
        w = root(f, 3)
        c = (class_sum(g, f, "t") * emx).scale(Fraction(-1, 2))
        for k, child in enumerate(out.children):
            zk = w**k
            manual = (emx + c.scale(zk) + (c * c).scale(zk * zk)).scale(Fraction(1, 3))
            assert child == manual.restrict(4)

    def test_s4_split_exact(self):
        g, f = group_and_field("s4")
        exy = avg(g, f, "x", 2) * avg(g, f, "y", 2)
        top = (one(g, f) - exy).restrict(3)
        out = berman_split(g, f, top, 3)
        assert out.lam == f.from_rational(4)
        assert len(out.children) == 2
        total = out.children[0] + out.children[1]
        assert total == top.restrict(4)

    def test_c3_split_from_unity(self):
        g, f = group_and_field("s3")  # level 1 is C3
        e0 = AlgebraElement.one(g, f, 0)
        out = berman_split(g, f, e0, 0)
        w = root(f, 3)
        expected = {avg(g, f, "x", 3).restrict(1),
                    avg(g, f, "x", 3, w).restrict(1),
                    avg(g, f, "x", 3, w * w).restrict(1)}
        assert set(out.children) == expected


class TestModularDiagram:
    @pytest.mark.parametrize("name,profile", [
        ("s3", [1, 1, 2]),
        ("d8", [1, 1, 1, 1, 2]),
        ("q8", [1, 1, 1, 1, 2]),
        ("a4", [1, 1, 1, 3]),
        ("sl23", [1, 1, 1, 2, 2, 2, 3]),
        ("s4", [1, 1, 2, 3, 3]),
    ])
    def test_degree_profiles(self, name, profile):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group

        g = build_group(catalog(name))
        diagram = build_modular_diagram(g)
        assert sorted(diagram.degrees()) == profile
        assert sum(d * d for d in diagram.degrees()) == g.order

    def test_c2_diagram(self):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group

        g = build_group(catalog("c2"))
        diagram = build_modular_diagram(g)
        assert len(diagram.leaves) == 2
        assert all(n.degree == 1 for n in diagram.leaves)

    def test_leaf_count_equals_class_count(self):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group

        for name in ("s3", "q8", "sl23", "s4", "dihedral12", "c12"):
            g = build_group(catalog(name))
            diagram = build_modular_diagram(g)
            assert len(diagram.leaves) == len(g.conjugacy_classes())

    def test_dichotomy_exhaustive(self):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group

        g = build_group(catalog("s4"))
        diagram = build_modular_diagram(g)
        for level_nodes in diagram.levels[:-1]:
            for node in level_nodes:
                assert node.children, "every node is consumed by some outcome"


class TestExactDiagram:
    @pytest.mark.parametrize("name", ["s3", "d8", "q8", "a4", "sl23", "s4"])
    def test_matches_published_pci_sets(self, name):
        g, f, expected = PCI_SETS[name]()
        diagram = build_exact_diagram(g)
        got = {n.idempotent for n in diagram.leaves}
        assert got == {e.restrict(g.n) for e in expected}

    def test_d8_degrees_with_paper_shape(self):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group

        g = build_group(catalog("d8"))
        diagram = build_exact_diagram(g)
        assert sorted(diagram.degrees()) == [1, 1, 1, 1, 2]

    def test_q8_two_dim_leaf_is_one_minus_x_over_two(self):
        g, f, _ = PCI_SETS["q8"]()
        diagram = build_exact_diagram(g)
        two_dim = [n for n in diagram.leaves if n.degree == 2]
        assert len(two_dim) == 1
        x = g.element_from_name("x")
        expected = AlgebraElement(g, g.n, f, {
            0: f.from_rational(Fraction(1, 2)),
            x: f.from_rational(Fraction(-1, 2)),
        })
        assert two_dim[0].idempotent == expected

    def test_trivial_node_is_principal(self):
        g, f, _ = PCI_SETS["s3"]()
        diagram = build_exact_diagram(g)
        trivial = [n for n in diagram.leaves if n.is_trivial]
        assert len(trivial) == 1
        size = g.order
        c = f.from_rational(Fraction(1, size))
        assert trivial[0].idempotent == AlgebraElement(
            g, g.n, f, {i: c for i in range(size)})

    def test_modular_exact_consistency_two_primes(self):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group
        from solvarep.pci import _reduce_cyclotomic

        g = build_group(catalog("sl23"))
        exact = build_exact_diagram(g)
        ell1 = select_prime(g)
        ell2 = select_prime(g, above=ell1)
        for ell in (ell1, ell2):
            modular = build_modular_diagram(g, ell)
            mod_set = {tuple(sorted(n.idempotent.coeffs.items()))
                       for n in modular.leaves}
            backend = modular.backend
            red_set = set()
            for n in exact.leaves:
                items = tuple(sorted(
                    (gidx, _reduce_cyclotomic(backend, c))
                    for gidx, c in n.idempotent.coeffs.items()
                ))
                red_set.add(tuple((gi, v) for gi, v in items if v))
            assert red_set == mod_set

    def test_prime_override_same_set(self):
        from solvarep.catalog import catalog
        from solvarep.pcgroup import build_group

        g = build_group(catalog("s3"))
        d1 = build_exact_diagram(g)
        ell2 = select_prime(g, above=select_prime(g))
        d2 = build_exact_diagram(g, prime=ell2)
        assert idem_set(d1) == idem_set(d2)

    def test_characters_attached(self):
        g, f, _ = PCI_SETS["sl23"]()
        diagram = build_exact_diagram(g)
        classes = g.conjugacy_classes()
        for node in diagram.leaves:
            assert node.character is not None
            assert len(node.character) == len(classes)
            # degree = character at the identity class
            assert node.character[0] == f.from_rational(node.degree)


class TestGZGenerators:
    def test_s3(self):
        g, f = group_and_field("s3")
        gens = gz_generators(g, f)
        x = g.element_from_name("x")
        # x is central in the abelian level-1 subgroup: singleton class sum
        first = AlgebraElement.group_element(g, f, x)
        y = g.element_from_name("y")
        second = AlgebraElement.from_support(
            g, f, [y, g.mul(x, y), g.mul(g.mul(x, x), y)])
        assert gens == [first, second]

    def test_abelian_singletons(self):
        g, f = group_and_field("q8")
        gens = gz_generators(g, f)
        # levels 1 and 2 are abelian: singleton class sums
        assert len(gens[0].coeffs) == 1 and len(gens[1].coeffs) == 1

    def test_sl23_fourth_generator_support(self):
        g, f = group_and_field("sl23")
        gens = gz_generators(g, f)
        assert len(gens[3].coeffs) == 4

    def test_pairwise_commute(self):
        for name in ("s3", "sl23", "s4"):
            g, f = group_and_field(name)
            gens = gz_generators(g, f)
            for i, a in enumerate(gens):
                for b in gens[i + 1:]:
                    assert a * b == b * a


class TestPathIdempotents:
    def test_s3_two_dim_leaf(self):
        g, f, _ = PCI_SETS["s3"]()
        diagram = build_exact_diagram(g)
        leaf = next(n for n in diagram.leaves if n.degree == 2)
        paths = path_idempotents(diagram, leaf)
        w = root(f, 3)
        expected = {avg(g, f, "x", 3, w), avg(g, f, "x", 3, w * w)}
        assert set(paths) == expected

    def test_degree_one_leaf_is_itself(self):
        g, f, _ = PCI_SETS["d8"]()
        diagram = build_exact_diagram(g)
        for leaf in diagram.leaves:
            if leaf.degree == 1:
                assert path_idempotents(diagram, leaf) == [leaf.idempotent]

    def test_s4_b5_pair(self):
        g, f, _ = PCI_SETS["s4"]()
        diagram = build_exact_diagram(g)
        two_dim = [n for n in diagram.leaves if n.degree == 2]
        assert len(two_dim) == 1
        paths = path_idempotents(diagram, two_dim[0])
        assert len(paths) == 2
        total = paths[0] + paths[1]
        assert total == two_dim[0].idempotent

    def test_path_order_lexicographic(self):
        g, f, _ = PCI_SETS["sl23"]()
        diagram = build_exact_diagram(g)
        for leaf in diagram.leaves:
            chains = root_paths(diagram, leaf)
            keys = [tuple(n.index for n in c) for c in chains]
            assert keys == sorted(keys)
            assert len(chains) == leaf.degree
