from __future__ import annotations

from strataring.cli import main


def test_multiply_integrate_pipeline(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "product.sum"
    code = main(
        [
            "multiply",
            str(fixtures_dir / "worked_product_g.sum"),
            str(fixtures_dir / "worked_product_h.sum"),
            "--normalize",
            "-o",
            str(out),
        ]
    )
    assert code == 0
    code = main(["integrate", str(out), "--kind", "fundamental"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "1/8"


def test_rank_table_output(capsys):
    assert main(["rank-table", "-g", "2", "-n", "0", "--space", "mbar"]) == 0
    assert capsys.readouterr().out.strip() == "1,2,2,1"


def test_enumerate_lists_count(capsys):
    assert main(["enumerate", "-g", "5", "-n", "0", "-k", "3", "--space", "ct"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == "# 31 classes"
    assert len(lines) == 32


def test_gram_csv_scale(capsys):
    assert main(
        ["gram", "-g", "0", "-n", "4", "-k", "1", "--space", "mbar", "--scale", "6"]
    ) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert all("," in r or r for r in rows)
    assert all(x == "6" for r in rows for x in r.split(","))


def test_verify_relation_pass_and_exit_codes(fixtures_dir, capsys):
    code = main(
        ["verify-relation", str(fixtures_dir / "m21_relation.sum"), "-g", "2", "-n", "1", "--space", "ct"]
    )
    assert code == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_verify_relation_fail(tmp_path, capsys):
    bad = tmp_path / "bad.sum"
    bad.write_text("1 * graph g=2 n=1 { v0: genus=2; leg(1, v0.0); psi(v0.0)=1; }\n")
    code = main(["verify-relation", str(bad), "-g", "2", "-n", "1", "--space", "ct"])
    assert code == 1
    assert capsys.readouterr().out.startswith("FAIL")


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "broken.sum"
    bad.write_text("1 * graph g=2 n=0 { v0 genus=2; }\n")
    assert main(["integrate", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_cache_flag_roundtrip(tmp_path, capsys):
    cache = tmp_path / "cache.txt"
    args = ["rank-table", "-g", "1", "-n", "2", "--space", "mbar", "--cache", str(cache)]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert cache.exists() and cache.read_text().startswith("v1 ")
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_jobs_flag_is_deterministic(capsys):
    main(["gram", "-g", "2", "-n", "0", "-k", "1", "--space", "mbar"])
    serial = capsys.readouterr().out
    main(["gram", "-g", "2", "-n", "0", "-k", "1", "--space", "mbar", "--jobs", "2"])
    parallel = capsys.readouterr().out
    assert serial == parallel
