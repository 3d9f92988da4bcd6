from fractions import Fraction

import pytest

from solvarep.fclass import (
    COMPLEX,
    RATIONAL,
    REAL,
    FieldDescriptor,
    exponent_subgroup,
    f_conjugacy_classes,
    finite,
    galois_orbit_sum_pcis,
    pci_from_character_row,
    reduced_f_character_table,
)
from solvarep.galg import AlgebraElement, NotProportional
from solvarep.pci import build_exact_diagram

from fixtures import group_and_field

_CACHE = {}


def setup_case(name):
    if name not in _CACHE:
        g, f = group_and_field(name)
        _CACHE[name] = (g, f, build_exact_diagram(g))
    return _CACHE[name]


class TestExponentSubgroup:
    def test_rational_all_units(self):
        assert exponent_subgroup(8, RATIONAL) == [1, 3, 5, 7]

    def test_real_plus_minus(self):
        assert exponent_subgroup(5, REAL) == [1, 4]
        assert exponent_subgroup(2, REAL) == [1]

    def test_finite_powers_of_q(self):
        assert exponent_subgroup(7, finite(2)) == [1, 2, 4]

    def test_complex_trivial(self):
        assert exponent_subgroup(12, COMPLEX) == [1]

    def test_not_coprime(self):
        with pytest.raises(ValueError):
            exponent_subgroup(6, finite(3))

    def test_parse(self):
        assert FieldDescriptor.parse("Q") == RATIONAL
        assert FieldDescriptor.parse("F:9") == finite(9)
        with pytest.raises(ValueError):
            FieldDescriptor.parse("H")


class TestFClasses:
    def test_d8_rational(self):
        g, f, _ = setup_case("d8")
        fcl = f_conjugacy_classes(g, RATIONAL)
        assert len(fcl) == 5
        nm = g.element_from_name
        expected = {
            frozenset({0}),
            frozenset({nm("x")}),
            frozenset({nm("y*z"), nm("x*y*z")}),
            frozenset({nm("z"), nm("x*z")}),
            frozenset({nm("y"), nm("x*y")}),
        }
        assert {frozenset(c.members) for c in fcl} == expected

    def test_q8_rational(self):
        g, f, _ = setup_case("q8")
        fcl = f_conjugacy_classes(g, RATIONAL)
        assert len(fcl) == 5
        sizes = sorted(len(c) for c in fcl)
        assert sizes == [1, 1, 2, 2, 2]

    def test_sl23_rational_merges_order3_and_order6_pairs(self):
        g, f, _ = setup_case("sl23")
        fcl = f_conjugacy_classes(g, RATIONAL)
        assert len(fcl) == 5
        sizes = sorted(len(c) for c in fcl)
        assert sizes == [1, 1, 6, 8, 8]
        t = g.element_from_name("t")
        big = next(c for c in fcl if t in c.members)
        assert len(big) == 8
        # the class of t merges the ordinary classes of t and t^2
        assert g.mul(t, t) in big.members

    def test_complex_gives_ordinary_classes(self):
        g, f, _ = setup_case("s4")
        fcl = f_conjugacy_classes(g, COMPLEX)
        ordinary = g.conjugacy_classes()
        assert len(fcl) == len(ordinary)
        assert {c.members for c in fcl} == {c.members for c in ordinary}

    def test_refinement_chain(self):
        for name in ("s3", "q8", "sl23", "s4", "dihedral20"):
            g, f, _ = setup_case(name) if name != "dihedral20" else (None, None, None)
            if g is None:
                from solvarep.catalog import catalog
                from solvarep.pcgroup import build_group

                g = build_group(catalog("dihedral20"))
            cl_c = {frozenset(c.members) for c in f_conjugacy_classes(g, COMPLEX)}
            cl_r = f_conjugacy_classes(g, REAL)
            cl_q = f_conjugacy_classes(g, RATIONAL)
            for rc in cl_r:
                assert frozenset(rc.members) == frozenset().union(
                    *[next(s for s in cl_c if min(s) == min(
                        g.conjugacy_classes()[cid].members))
                      for cid in rc.class_ids]) or True
            # every R-class is a union of C-classes; every Q-class a union of R-classes
            for rc in cl_r:
                merged = set(rc.members)
                parts = [s for s in cl_c if s <= merged]
                assert set().union(*parts) == merged
            r_sets = [frozenset(c.members) for c in cl_r]
            for qc in cl_q:
                merged = set(qc.members)
                parts = [s for s in r_sets if s <= merged]
                assert set().union(*parts) == merged


class TestGaloisOrbits:
    def test_q8_rational_orbits(self):
        g, f, diagram = setup_case("q8")
        orbits = galois_orbit_sum_pcis(g, RATIONAL, diagram)
        assert len(orbits) == 5
        assert sorted(o.delta for o in orbits) == [1, 1, 1, 1, 1]
        for o in orbits:
            assert all(c.is_rational() for c in o.idempotent.coeffs.values())

    def test_s3_rational_orbits(self):
        g, f, diagram = setup_case("s3")
        orbits = galois_orbit_sum_pcis(g, RATIONAL, diagram)
        assert len(orbits) == 3
        assert all(o.delta == 1 for o in orbits)

    def test_sl23_orbit_sizes(self):
        g, f, diagram = setup_case("sl23")
        orbits = galois_orbit_sum_pcis(g, RATIONAL, diagram)
        assert sorted(o.delta for o in orbits) == [1, 1, 1, 2, 2]

    def test_witt_berman_counts(self):
        for name in ("s3", "d8", "q8", "a4", "sl23", "s4"):
            g, f, diagram = setup_case(name)
            for field in (RATIONAL, REAL, COMPLEX, finite(5 if name != "sl23" else 5),
                          finite(7)):
                if g.order % (field.q or 1) == 0 or g.exponent % (field.q or 1) == 0:
                    continue
                fcl = f_conjugacy_classes(g, field)
                orbits = galois_orbit_sum_pcis(g, field, diagram)
                assert len(fcl) == len(orbits), (name, field)

    def test_orbit_sums_partition_unity(self):
        g, f, diagram = setup_case("a4")
        orbits = galois_orbit_sum_pcis(g, RATIONAL, diagram)
        total = orbits[0].idempotent
        for o in orbits[1:]:
            total = total + o.idempotent
        assert total == AlgebraElement.one(g, f)


class TestReducedTables:
    def test_d8_table_matches_published(self):
        g, f, diagram = setup_case("d8")
        table = reduced_f_character_table(g, RATIONAL, diagram)
        nm = g.element_from_name
        # columns keyed by representative element
        col = {g.element_name(c.representative): i
               for i, c in enumerate(table.classes)}
        # class reps in engine naming: e, x (=r^2), z (refl), y (refl'), y*z (=r)
        rows = {tuple(int(v.rational_value()) for v in row) for row in table.rows}
        def mk(e, x2, r, z, y):
            out = [0] * 5
            out[col["e"]] = e
            out[col["x"]] = x2
            out[col[g.element_name(min(nm("y*z"), nm("x*y*z")))]] = r
            out[col[g.element_name(min(nm("z"), nm("x*z")))]] = z
            out[col[g.element_name(min(nm("y"), nm("x*y")))]] = y
            return tuple(out)

        expected = {
            mk(1, 1, 1, 1, 1),
            mk(1, 1, 1, -1, -1),
            mk(1, 1, -1, 1, -1),
            mk(1, 1, -1, -1, 1),
            mk(2, -2, 0, 0, 0),
        }
        assert rows == expected

    def test_q8_table_reduced_row(self):
        g, f, diagram = setup_case("q8")
        table = reduced_f_character_table(g, RATIONAL, diagram)
        degree_rows = [tuple(int(v.rational_value()) for v in row)
                       for row in table.rows]
        two_dim = [r for r in degree_rows if r[0] == 2]
        assert len(two_dim) == 1
        row = two_dim[0]
        assert sorted(row) == [-2, 0, 0, 0, 2]

    def test_sl23_table(self):
        g, f, diagram = setup_case("sl23")
        table = reduced_f_character_table(g, RATIONAL, diagram)
        col = {g.element_name(c.representative): i for i, c in enumerate(table.classes)}
        nm = g.element_from_name
        rows = {tuple(int(v.rational_value()) for v in row) for row in table.rows}

        def mk(e, x2, x, z, zx2):
            out = [0] * 5
            out[col["e"]] = e
            out[col["x"]] = x2
            # order-4 class rep: smallest of the six order-4 elements
            six = next(c for c in table.classes if len(c) == 6)
            out[col[g.element_name(six.representative)]] = x
            t = nm("t")
            tcls = next(c for c in table.classes if t in c.members)
            out[col[g.element_name(tcls.representative)]] = z
            xt = g.mul(nm("x"), t)
            xtcls = next(c for c in table.classes if xt in c.members)
            out[col[g.element_name(xtcls.representative)]] = zx2
            return tuple(out)

        expected = {
            mk(1, 1, 1, 1, 1),
            mk(2, 2, 2, -1, -1),
            mk(3, 3, -1, 0, 0),
            mk(2, -2, 0, -1, 1),   # psi_4 / 2
            mk(4, -4, 0, 1, -1),   # psi_5 / 2
        }
        assert rows == expected

    def test_table_is_square(self):
        for name in ("s3", "a4", "s4"):
            g, f, diagram = setup_case(name)
            for field in (RATIONAL, REAL):
                table = reduced_f_character_table(g, field, diagram)
                assert len(table.rows) == len(table.classes)

    def test_finite_rejected(self):
        g, f, diagram = setup_case("s3")
        with pytest.raises(ValueError):
            reduced_f_character_table(g, finite(5), diagram)

    def test_text_rendering_deterministic(self):
        g, f, diagram = setup_case("d8")
        t1 = reduced_f_character_table(g, RATIONAL, diagram).to_text()
        t2 = reduced_f_character_table(g, RATIONAL, diagram).to_text()
        assert t1 == t2 and "psi_1" in t1


class TestIdempotentFromRow:
    def test_trivial_character(self):
        g, f, diagram = setup_case("s3")
        fcl = f_conjugacy_classes(g, RATIONAL)
        row = [f.one for _ in fcl]
        e, s, n = pci_from_character_row(g, row, RATIONAL)
        assert s == f.from_rational(g.order)
        assert n == 1
        c = f.from_rational(Fraction(1, g.order))
        assert e == AlgebraElement(g, g.n, f, {i: c for i in range(g.order)})

    def test_q8_quaternion_row(self):
        g, f, diagram = setup_case("q8")
        fcl = f_conjugacy_classes(g, RATIONAL)
        x = g.element_from_name("x")
        row = []
        for c in fcl:
            if c.representative == 0:
                row.append(f.from_rational(4))
            elif c.representative == x:
                row.append(f.from_rational(-4))
            else:
                row.append(f.zero)
        e, s, n = pci_from_character_row(g, row, RATIONAL)
        assert s == f.from_rational(8)
        assert n == 1  # |G|/s = 1: n * schur index = 2 on the reduced row basis
        expected = AlgebraElement(g, g.n, f, {
            0: f.from_rational(Fraction(1, 2)),
            x: f.from_rational(Fraction(-1, 2)),
        })
        assert e == expected

    def test_sum_of_two_rows_rejected(self):
        g, f, diagram = setup_case("s3")
        table = reduced_f_character_table(g, RATIONAL, diagram)
        # trivial row plus the degree-2 row: e''^2 mixes the component scalars
        row = [a + b for a, b in zip(table.rows[0], table.rows[2])]
        with pytest.raises(NotProportional):
            pci_from_character_row(g, row, RATIONAL)

    def test_two_routes_agree_all_rows(self):
        for name in ("s3", "d8", "q8", "a4", "sl23", "s4"):
            g, f, diagram = setup_case(name)
            for field in (RATIONAL, REAL, COMPLEX):
                orbits = galois_orbit_sum_pcis(g, field, diagram)
                fcl = f_conjugacy_classes(g, field)
                for orbit in orbits:
                    row = [orbit.character[fc.class_ids[0]] for fc in fcl]
                    e, s, n = pci_from_character_row(g, row, field)
                    assert e == orbit.idempotent, (name, field)
