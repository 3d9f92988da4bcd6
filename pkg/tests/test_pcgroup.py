import math

import pytest

from solvarep.catalog import catalog
from solvarep.pcgroup import (
    ParseError,
    PresentationError,
    PcGroup,
    build_group,
    parse_presentation,
    print_presentation,
)


def group(name):
    return build_group(catalog(name))


class TestParser:
    def test_s3_shape(self):
        pres = catalog("s3")
        assert pres.gens == ["x", "y"]
        assert pres.primes == [3, 2]
        assert pres.conj_words[1][0] == [(0, 2)]  # y^-1 x y = x^2

    def test_non_prime_order(self):
        with pytest.raises(ParseError, match="not prime"):
            parse_presentation("group g\ngen x 4\n")

    def test_forward_reference(self):
        with pytest.raises(ParseError, match="unknown|forward"):
            parse_presentation("group g\ngen x 2 pow y\ngen y 2\n")
        with pytest.raises(ParseError, match="unknown|forward"):
            parse_presentation("group g\ngen x 2\ngen y 2 pow y\n")

    def test_unknown_token(self):
        with pytest.raises(ParseError):
            parse_presentation("group g\ngen x 2 frob y\n")

    def test_q8_power_words(self):
        pres = catalog("q8")
        assert pres.primes == [2, 2, 2]
        assert pres.power_words[1] == [(0, 1)]  # y^2 = x
        assert pres.power_words[2] == [(0, 1)]  # z^2 = x

    def test_comments_and_blanks(self):
        pres = parse_presentation("# header\ngroup g\n\ngen x 2  # trailing\n")
        assert pres.gens == ["x"]

    def test_round_trip_catalog(self):
        for name in ("s3", "d8", "q8", "sl23", "a4", "s4", "c12", "dihedral20"):
            pres = catalog(name)
            assert parse_presentation(print_presentation(pres)) == pres


class TestBuild:
    def test_s3_elements(self):
        g = group("s3")
        assert g.order == 6
        names = [g.element_name(i) for i in range(6)]
        assert names == ["e", "y", "x", "x*y", "x^2", "x^2*y"]

    def test_sl23_order_and_exponent(self):
        g = group("sl23")
        assert g.order == 24
        assert g.exponent == 12

    def test_cyclic_group(self):
        g = group("c5")
        assert g.order == 5
        x = g.generator_index(0)
        assert g.mul(x, g.mul(x, x)) == g.element_from_name("x1^3")

    def test_trivial_group(self):
        g = group("c1")
        assert g.order == 1 and g.exponent == 1

    def test_inconsistent_presentation(self):
        # y^-1 x y = x^2 is not an automorphism of C_4... build as chain (2,2)
        bad = "group g\ngen a 2\ngen b 2 pow a\ngen c 2 act a -> a act b -> a\n"
        with pytest.raises(PresentationError):
            build_group(parse_presentation(bad))

    def test_order_cap(self):
        with pytest.raises(PresentationError, match="cap"):
            build_group(catalog("c128"), max_order=100)

    def test_normal_form_round_trip(self):
        for name in ("s3", "q8", "sl23", "s4", "dihedral12"):
            g = group(name)
            for idx in range(g.order):
                assert g.index_of_exponents(g.exponents(idx)) == idx

    def test_phi_inverse_composition(self):
        for name in ("sl23", "s4", "dihedral20"):
            g = group(name)
            for i in range(1, g.n + 1):
                phi, phi_inv = g.phi[i], g.phi_inv[i]
                assert all(phi_inv[phi[k]] == k for k in range(len(phi)))

    def test_chain_normality(self):
        for name in ("sl23", "s4"):
            g = group(name)
            for i in range(1, g.n + 1):
                xi = g.generator_index(i - 1, i)
                below = g.level_order(i - 1)
                for h in range(below):
                    c = g.conj(g.promote(h, i - 1, i), xi, i)
                    assert c % g.primes[i - 1] == 0  # lands back in G_{i-1}


class TestOps:
    def test_q8_order_of_y(self):
        g = group("q8")
        y = g.element_from_name("y")
        assert g.element_order(y) == 4

    def test_inverse(self):
        for name in ("s3", "q8", "s4"):
            g = group(name)
            for idx in range(g.order):
                assert g.mul(idx, g.inv(idx)) == 0
                assert g.mul(g.inv(idx), idx) == 0

    def test_s3_conjugation(self):
        g = group("s3")
        x, y = g.element_from_name("x"), g.element_from_name("y")
        assert g.conj(x, y) == g.element_from_name("x^2")

    def test_associativity_exhaustive_small(self):
        g = group("s3")
        for a in range(6):
            for b in range(6):
                for c in range(6):
                    assert g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))

    def test_large_group_no_table(self):
        g = build_group(catalog("dihedral500"))
        assert g.order == 500
        r = g.element_from_name("x4")  # generates the rotation subgroup
        assert g.element_order(r) == 250
        y = g.element_from_name("y")
        assert g.conj(r, y) == g.inv(r)


class TestClasses:
    def test_sl23_classes(self):
        g = group("sl23")
        classes = g.conjugacy_classes()
        assert len(classes) == 7
        sizes = sorted(len(c) for c in classes)
        assert sizes == [1, 1, 4, 4, 4, 4, 6]
        nm = g.element_from_name
        got = {frozenset(c.members) for c in classes}
        # singleton centre and the six order-4 elements
        assert frozenset({0}) in got and frozenset({nm("x")}) in got
        sixer = frozenset(nm(n) for n in ("y", "x*y", "z", "x*z", "y*z", "x*y*z"))
        assert sixer in got
        # hand-checked conjugates: y^-1 t y = z*t, z^-1 t z = y*z*t,
        # y^-1 t^2 y = x*y*z*t^2, z^-1 t^2 z = x*y*t^2
        t_class = frozenset(nm(n) for n in ("t", "z*t", "y*z*t", "y*t"))
        t2_class = frozenset(nm(n) for n in ("t^2", "x*y*z*t^2", "x*y*t^2", "x*z*t^2"))
        assert t_class in got and t2_class in got
        # the remaining two classes are x * (those), order-6 elements
        assert frozenset(g.mul(nm("x"), m) for m in t_class) in got
        orders = {frozenset(c.members): {g.element_order(m) for m in c.members}
                  for c in classes}
        assert orders[t_class] == {3} and orders[frozenset(
            g.mul(nm("x"), m) for m in t_class)] == {6}

    def test_d8_classes(self):
        g = group("d8")
        classes = g.conjugacy_classes()
        nm = g.element_from_name
        expected = {
            frozenset({0}),
            frozenset({nm("x")}),
            frozenset({nm("y*z"), nm("x*y*z")}),
            frozenset({nm("z"), nm("x*z")}),
            frozenset({nm("y"), nm("x*y")}),
        }
        assert {frozenset(c.members) for c in classes} == expected

    def test_abelian_levels_singletons(self):
        g = group("q8")
        assert all(len(c) == 1 for c in g.conjugacy_classes(2))

    def test_partition_and_size_divisibility(self):
        for name in ("s3", "d8", "q8", "sl23", "a4", "s4", "dihedral12"):
            g = group(name)
            for level in range(1, g.n + 1):
                classes = g.conjugacy_classes(level)
                assert sum(len(c) for c in classes) == g.level_order(level)
                assert all(g.level_order(level) % len(c) == 0 for c in classes)
                assert classes[0].members == (0,)

    def test_class_sum_support_s3(self):
        g = group("s3")
        y = g.element_from_name("y")
        # brute-force oracle over all 6 elements
        oracle = sorted({g.conj(y, h) for h in range(6)})
        assert list(g.class_sum_support(y)) == oracle
        assert oracle == sorted(
            g.element_from_name(n) for n in ("y", "x*y", "x^2*y")
        )

    def test_central_element_singleton(self):
        g = group("q8")
        x = g.element_from_name("x")
        assert g.class_sum_support(x) == (x,)

    def test_sl23_class_of_t(self):
        g = group("sl23")
        t = g.element_from_name("t")
        assert len(g.class_sum_support(t)) == 4

    def test_level_guard(self):
        g = group("s3")
        with pytest.raises(ValueError):
            g.class_sum_support(5, level=1)
