import io
import json
import sys

import pytest

from solvarep.catalog import catalog
from solvarep.cli import main
from solvarep.pcgroup import parse_presentation, print_presentation


def run_cli(*argv):
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = main(list(argv))
    finally:
        sys.stdout = old
    return code, buf.getvalue()


class TestDispatch:
    def test_irreps_s3_json(self):
        code, out = run_cli("irreps", "--catalog", "s3", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert sorted(r["degree"] for r in doc["irreps"]) == [1, 1, 2]

    def test_chartable_sl23_shape(self):
        code, out = run_cli("chartable", "--catalog", "sl23", "--field", "Q",
                            "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["classes"]) == 5
        assert len(doc["rows"]) == 5

    def test_cyclic_factor_f2(self):
        code, out = run_cli("cyclic", "factor", "--n", "7", "--field", "F:2",
                            "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["factors"]) == 3

    def test_info(self):
        code, out = run_cli("info", "--catalog", "q8")
        assert code == 0
        assert "order: 8" in out

    def test_pci_modular_mode(self):
        code, out = run_cli("pci", "--catalog", "d8", "--mode", "modl",
                            "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert sorted(doc["degrees"]) == [1, 1, 1, 1, 2]

    def test_verify_verb(self):
        code, out = run_cli("verify", "--catalog", "a4")
        assert code == 0
        assert "OK" in out and "FAIL]" not in out

    def test_abelian_wedderburn(self):
        code, out = run_cli("abelian", "wedderburn", "--invariants", "2,2",
                            "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert {(s["d"], s["copies"]) for s in doc} == {(1, 1), (2, 3)}

    def test_abelian_rules_diagram(self):
        code, out = run_cli("abelian", "diagram", "--invariants", "4")
        assert code == 0
        assert "e'" in out

    def test_file_source(self, tmp_path):
        path = tmp_path / "grp.txt"
        path.write_text(print_presentation(catalog("s3")))
        code, out = run_cli("info", "--file", str(path))
        assert code == 0 and "order: 6" in out

    def test_digits_rendering(self):
        code, out = run_cli("irreps", "--catalog", "s3", "--digits", "4")
        assert code == 0
        assert "0.866" in out  # sin(2 pi / 3)


class TestCatalog:
    def test_q8_relations(self):
        pres = catalog("q8")
        assert pres.primes == [2, 2, 2]
        assert pres.power_words[2] == [(0, 1)]

    def test_c12_chain(self):
        pres = catalog("c12")
        assert pres.primes == [2, 2, 3]

    def test_a4_conjugation(self):
        pres = catalog("a4")
        # z^-1 x z = y, z^-1 y z = x y
        assert pres.conj_words[2][0] == [(1, 1)]
        assert pres.conj_words[2][1] == [(0, 1), (1, 1)]

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            catalog("nosuch")

    def test_round_trip_all(self):
        for name in ("s3", "d8", "q8", "sl23", "a4", "s4", "c30", "dihedral16"):
            pres = catalog(name)
            assert parse_presentation(print_presentation(pres)) == pres


class TestErrorsAndDeterminism:
    def test_unknown_catalog_error_json(self):
        code, out = run_cli("pci", "--catalog", "nosuch", "--format", "json")
        assert code == 1
        doc = json.loads(out)
        assert doc["error"]["code"] == "unknown-catalog"

    def test_unreadable_file(self):
        code, out = run_cli("info", "--file", "/no/such/file", "--format", "json")
        assert code == 1
        assert json.loads(out)["error"]["code"] == "unreadable-file"

    def test_usage_error_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            run_cli("pci", "--format", "bogus")
        assert exc.value.code == 2

    def test_byte_identical_runs(self):
        for argv in (
            ("pci", "--catalog", "sl23"),
            ("irreps", "--catalog", "d8", "--format", "json"),
            ("chartable", "--catalog", "q8", "--field", "Q"),
            ("diagram", "--catalog", "s4", "--format", "dot"),
        ):
            c1, o1 = run_cli(*argv)
            c2, o2 = run_cli(*argv)
            assert (c1, o1) == (c2, o2)

    def test_dot_has_level_ranks(self):
        code, out = run_cli("diagram", "--catalog", "d8", "--format", "dot")
        assert code == 0
        assert out.count("rank=same") == 4  # levels 0..3
        # 1 + 2 + 4 + 5 nodes
        assert out.count("[label=") == 12
