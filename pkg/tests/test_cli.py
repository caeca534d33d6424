import pytest

from altrings.catalog import catalog, parse, serialize
from altrings.cli import main
from altrings.fields import GF, QQ


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_alternative_zorn(capsys):
    code, out, _ = run(capsys, "check", "--catalog", "zorn", "--prop", "alternative")
    assert code == 0
    assert "check:alternative" in out and "holds" in out


def test_check_all_identities_default(capsys):
    code, out, _ = run(capsys, "check", "--catalog", "zorn")
    assert code == 1  # associativity fails on zorn
    assert "check:associative" in out and "fails" in out


def test_check_torsion_and_prime(capsys):
    code, out, _ = run(
        capsys, "check", "--catalog", "mat2", "--field", "GFp:2",
        "--torsion", "3", "--prime",
    )
    assert code == 0
    assert "check:torsion-free-3" in out
    assert "check:prime" in out


def test_check_prime_witness_printed(capsys):
    code, out, _ = run(
        capsys, "check", "--catalog", "tri2", "--field", "GFp:2", "--prime"
    )
    assert code == 1
    assert "aRb = 0" in out


def test_peirce_conditions_tri2_exit_1(capsys):
    code, out, _ = run(capsys, "peirce", "--catalog", "tri2", "--conditions")
    assert code == 1
    assert "peirce:cond-1(1,2)" in out
    assert "peirce:dims" in out


def test_peirce_full_run_mat2(capsys):
    code, out, _ = run(capsys, "peirce", "--catalog", "mat2")
    assert code == 0
    assert "peirce:relation-composition" in out
    assert "peirce:commutant-12" in out


def test_peirce_explicit_idempotent(capsys):
    code, out, _ = run(
        capsys, "peirce", "--catalog", "mat2", "--idem", "0 0 0 1"
    )
    assert code == 0
    assert "(1, 1, 1, 1)" in out


def test_peirce_undecided_exit_2(capsys):
    # product2 over Q: condition (4) is undecided, (2)/(3) fail -> exit 1;
    # restrict to commutant checks for a clean undecided-free run first
    code, _, _ = run(capsys, "peirce", "--catalog", "product2", "--commutant")
    assert code == 0
    code, out, _ = run(capsys, "peirce", "--catalog", "product2", "--conditions")
    assert code == 1
    assert "undecided" in out


def test_derive_and_lie(capsys):
    code, out, _ = run(capsys, "derive", "--catalog", "zorn")
    assert code == 0 and "derive:der-dim" in out and "14" in out
    code, out, _ = run(capsys, "derive", "--catalog", "mat2", "--n", "2", "--basis")
    assert code == 0 and "derive:lie2-dim" in out and "derive:basis-0" in out


def test_decompose_roundtrip(tmp_path, capsys):
    path = tmp_path / "D.lmap"
    path.write_text(
        "lmap 1\ndim 4\n"
        "row 1 0 0 1\nrow 0 -2 0 0\nrow 0 0 2 0\nrow 1 0 0 1\n"
    )
    code, out, _ = run(
        capsys, "decompose", "--catalog", "mat2", "--map", str(path), "--n", "2"
    )
    assert code == 0
    assert "decompose:delta" in out and "decompose:tau" in out
    assert "decompose:leibniz" in out


def test_decompose_rejection_named_certificate(tmp_path, capsys):
    path = tmp_path / "bad.lmap"
    # ad_{E12}: images of basis under x -> [x, E12]
    path.write_text(
        "lmap 1\ndim 4\n"
        "row 0 0 -1 0\nrow 1 0 0 -1\nrow 0 0 0 0\nrow 0 0 1 0\n"
    )
    code, out, _ = run(
        capsys, "decompose", "--catalog", "mat2", "--map", str(path)
    )
    assert code == 1
    assert "decompose:condition-c" in out


def test_fosner(capsys):
    code, out, _ = run(capsys, "fosner", "--catalog", "mat2", "--n", "2", "--k", "1")
    assert code == 0
    assert "fosner:inclusion" in out


def test_search_exhaust(capsys):
    code, out, _ = run(
        capsys, "search", "--catalog", "product2", "--field", "GFp:2",
        "--mode", "exhaust",
    )
    assert code == 0
    assert "search:exhaust-tally" in out
    assert "search:exhaust-no-contradiction" in out


def test_search_converse_verify_defect_pipeline(tmp_path, capsys):
    lmap = tmp_path / "ad.lmap"
    lmap.write_text(
        "lmap 1\ndim 4\n"
        "row 0 0 0 0\nrow 0 -1 0 0\nrow 0 0 1 0\nrow 0 0 0 0\n"
    )
    table = tmp_path / "T.tmap"
    code, out, _ = run(
        capsys, "search", "--catalog", "mat2", "--field", "GFp:3",
        "--mode", "converse", "--map", str(lmap), "--seed", "1",
        "--out", str(table),
    )
    assert code == 0 and table.exists()
    code, out, _ = run(
        capsys, "search", "--catalog", "mat2", "--field", "GFp:3",
        "--mode", "verify", "--map", str(table),
    )
    assert code == 0 and "exhaustive" in out
    code, out, _ = run(
        capsys, "search", "--catalog", "mat2", "--field", "GFp:3",
        "--mode", "defect", "--map", str(table),
    )
    assert code == 0 and "search:almost-additive" in out


def test_search_verify_undecided_exit_2(tmp_path, capsys):
    lmap = tmp_path / "ad.lmap"
    lmap.write_text(
        "lmap 1\ndim 4\n"
        "row 0 0 0 0\nrow 0 -1 0 0\nrow 0 0 1 0\nrow 0 0 0 0\n"
    )
    table = tmp_path / "T.tmap"
    run(
        capsys, "search", "--catalog", "mat2", "--field", "GFp:3",
        "--mode", "converse", "--map", str(lmap), "--out", str(table),
    )
    code, out, _ = run(
        capsys, "search", "--catalog", "mat2", "--field", "GFp:3",
        "--mode", "verify", "--map", str(table), "--budget", "100",
    )
    assert code == 2
    assert "sampled" in out


def test_catalog_list_and_export_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    for name in ("mat2", "tri2", "zorn", "product2"):
        assert f"catalog:{name}" in out

    out_path = tmp_path / "zorn.saf"
    code, _, _ = run(
        capsys, "catalog", "--export", "zorn", "--field", "GFp:5",
        "--out", str(out_path),
    )
    assert code == 0
    data = out_path.read_bytes()
    assert parse(data).tensor == catalog("zorn", GF(5)).tensor

    code, out, _ = run(capsys, "catalog", "--export", "zorn", "--field", "GFp:5")
    assert code == 0
    assert out.encode() == serialize(catalog("zorn", GF(5)))


def test_info_file_input(tmp_path, capsys):
    path = tmp_path / "a.saf"
    path.write_bytes(serialize(catalog("mat2", QQ)))
    code, out, _ = run(capsys, "info", "--file", str(path))
    assert code == 0
    assert "info:dim" in out and "4" in out


def test_tsv_format(capsys):
    code, out, _ = run(
        capsys, "check", "--catalog", "zorn", "--prop", "alternative",
        "--format", "tsv",
    )
    assert code == 0
    line = [ln for ln in out.splitlines() if ln.startswith("check:")][0]
    assert line.split("\t") == ["check:alternative", "holds", ""]


def test_usage_errors_exit_3(tmp_path, capsys):
    code, _, err = run(capsys, "check")  # no algebra source
    assert code == 3 and "error:" in err
    code, _, err = run(capsys, "check", "--catalog", "mat2", "--field", "GF5")
    assert code == 3
    code, _, err = run(capsys, "decompose", "--catalog", "mat2")
    assert code == 3

    bad = tmp_path / "bad.saf"
    bad.write_text("saf 1\nfield Q\ndim 1\nmul 1 1 9 1\n")
    code, _, err = run(capsys, "info", "--file", str(bad))
    assert code == 3 and "line 4" in err


def test_map_file_errors_are_line_numbered(tmp_path, capsys):
    path = tmp_path / "bad.lmap"
    path.write_text("lmap 1\ndim 4\nrow 1 2 3\n")
    code, _, err = run(
        capsys, "decompose", "--catalog", "mat2", "--map", str(path)
    )
    assert code == 3 and ":3:" in err

    tbl = tmp_path / "bad.tmap"
    tbl.write_text("tmap 1\nsize 16\nmap 0 99\n")
    code, _, err = run(
        capsys, "search", "--catalog", "mat2", "--field", "GFp:2",
        "--mode", "verify", "--map", str(tbl),
    )
    assert code == 3 and ":3:" in err


def test_unknown_subcommand_exit_3(capsys):
    assert run(capsys, "frobnicate")[0] == 3
