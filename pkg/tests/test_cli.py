import json

import pytest

from relguess.cli import main
from relguess.field import PrimeField
from relguess.synthetic import synthetic_ideal
from relguess.structures import format_gdeg
from relguess.tables import ExplicitTable, write_table

F7 = PrimeField(7)


def two_exp(i, j):
    return (5 + 4 * i + 3 * j) * 2 ** (i + j) + (3 + 6 * i + j) * 5 ** (i + j)


@pytest.fixture
def two_exp_table(tmp_path):
    path = tmp_path / "two_exp.tbl"
    vals = {(i, j): two_exp(i, j) for i in range(13) for j in range(13) if i + j <= 12}
    write_table(path, ExplicitTable(F7, 2, vals))
    return str(path)


@pytest.fixture
def lattice_table(tmp_path):
    path = tmp_path / "lat.tbl"
    vals = {(i, j): 2 ** i * ((j + 1) % 3) for i in range(8) for j in range(12)}
    write_table(path, ExplicitTable("Q", 2, vals))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    assert code == 0
    return json.loads(out)


def test_guess_drl(capsys, two_exp_table):
    doc = run_json(capsys, "guess", "--table", two_exp_table, "--degree", "3", "--verify-shifts", "40")
    assert doc["relations"] == ["x*y + 3", "x^2 + y^2 + 6", "y^3 + 4*x + 6*y"]
    assert doc["classification"] == ["correct-so-far"] * 3
    assert doc["order"] == "DRL(y < x)"


def test_guess_lex_caps(capsys, two_exp_table):
    doc = run_json(capsys, "guess", "--table", two_exp_table, "--order", "lex", "--caps", "4 4", "--degree", "4")
    assert doc["relations"] == ["y^4 + 6*y^2 + 2", "x + 2*y^3 + 5*y"]


def test_guess_lattice_jobs_identical(capsys, lattice_table):
    args = ["guess", "--table", lattice_table, "--order", "lex", "--lattice", "0 3; 1 0",
            "--caps", "1 5", "--degree", "5", "--trace"]
    one = run(capsys, *args, "--jobs", "1", "--json")[1]
    many = run(capsys, *args, "--jobs", "4", "--json")[1]
    assert one == many
    assert json.loads(one)["relations"] == ["y^3 - 1", "x - 2"]


def test_guess_adaptive_king(capsys):
    doc = run_json(capsys, "guess", "--walk", "king", "--field", "Q", "--order", "lex",
                   "--cone", "1 1; 2 0", "--adaptive", "--max-staircase", "3", "--extra-rows", "0",
                   "--verify-shifts", "10")
    assert doc["relations"] == ["x*y - 1"] and doc["classification"] == ["fake"]
    assert doc["truncated"]


def test_default_buffer_rejects_fake_king_relation(capsys):
    doc = run_json(capsys, "guess", "--walk", "king", "--field", "Q", "--order", "lex",
                   "--cone", "1 1; 2 0", "--adaptive", "--max-staircase", "3")
    assert "x*y - 1" not in doc["relations"]
    assert doc["staircase"][:2] == ["1", "x*y"]


def test_guess_prels(capsys, tmp_path):
    from math import comb
    path = tmp_path / "binom.tbl"
    write_table(path, ExplicitTable("Q", 2, {(i, j): comb(i, j) for i in range(12) for j in range(12)}))
    doc = run_json(capsys, "guess", "--table", str(path), "--prels", "--rows", "45", "--cols", "20",
                   "--vars", "x,y;t,u")
    assert "u*y - t + u" in doc["relations"] and "t*x - u*x - t - 1" in doc["relations"]


def test_guess_human_output(capsys, two_exp_table):
    code, out = run(capsys, "guess", "--table", two_exp_table, "--degree", "3")
    assert code == 0 and "x*y + 3" in out and "staircase: 1 y x y^2" in out


def test_dump_replays(capsys, tmp_path, two_exp_table):
    dump = str(tmp_path / "q.tbl")
    a = run_json(capsys, "guess", "--table", two_exp_table, "--degree", "3", "--dump", dump)
    b = run_json(capsys, "guess", "--table", dump, "--degree", "3")
    assert a == b


def test_verify(capsys, tmp_path, two_exp_table):
    rels = tmp_path / "gb.txt"
    rels.write_text("x*y + 3\nx^2 + y^2 + 6\ny^3 + 4*x + 6*y\n")
    doc = run_json(capsys, "verify", "--table", two_exp_table, "--relations", str(rels), "--shifts", "50")
    assert doc["classification"] == ["correct-so-far"] * 3 and doc["shifts"] == 50
    king = tmp_path / "king.txt"
    king.write_text("x*y - 1\n")
    doc = run_json(capsys, "verify", "--walk", "king", "--field", "Q", "--relations", str(king))
    assert doc["classification"] == ["fake"]
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    doc = run_json(capsys, "verify", "--table", two_exp_table, "--relations", str(empty))
    assert doc["relations"] == [] and doc["classification"] == []


def test_walk_table_cache(capsys, tmp_path):
    out = str(tmp_path / "g.tbl")
    a = run_json(capsys, "walk-table", "--walk", "gessel", "--bounds", "8 4", "--out-table", out)
    b = run_json(capsys, "walk-table", "--walk", "gessel", "--bounds", "8 4", "--out-table", out)
    assert not a["cached"] and b["cached"]
    spec = tmp_path / "walk.txt"
    spec.write_text("dim 1; steps: (1); (-1)\n")
    c = run_json(capsys, "walk-table", "--walk", str(spec), "--field", "Q", "--bounds", "6 6",
                 "--out-table", out)
    assert not c["cached"] and c["field"] == "Q"


def test_fglm_gb(capsys, tmp_path):
    gb = tmp_path / "two_exp.gb"
    gb.write_text("order lex; vars x,y; field 7\ny^4 + 6*y^2 + 2\nx + 2*y^3 + 5*y\n")
    doc = run_json(capsys, "fglm", "--gb", str(gb), "--no-timings")
    assert doc["basis"] == ["y^4 + 6*y^2 + 2", "x + 2*y^3 + 5*y"]


def test_fglm_matrix_and_bench(capsys, tmp_path):
    ideal = synthetic_ideal(n=3, q=3, orbits=5, seed=1)
    m = tmp_path / "m.txt"
    g = tmp_path / "g.txt"
    g.write_text(format_gdeg(ideal.gmap))
    run_json(capsys, "fglm", "--synthetic", "n=3,q=3,orbits=5", "--seed", "1", "--write-matrix", str(m))
    doc = run_json(capsys, "fglm", "--matrix", str(m), "--gdeg", str(g), "--bench", "--no-timings")
    assert doc["identical"] and doc["group_order"] == 3 and doc["basis"]["d"] == 3


def test_bench_table1_small(capsys):
    doc = run_json(capsys, "bench-table1", "--shapes", "cone=40x30,full=40x30", "--verify", "30")
    assert set(doc) == {"cone", "full"}
    assert doc["cone"]["shape"] == [40, 30]
    doc = run_json(capsys, "bench-table1", "--shapes", "full=1x1")
    assert doc["full"]["relations"] == 0


def test_config_round_trip(capsys, tmp_path, two_exp_table):
    saved = str(tmp_path / "run.json")
    first = run(capsys, "guess", "--table", two_exp_table, "--degree", "3", "--json", "--save-config", saved)[1]
    again = run(capsys, "guess", "--config", saved, "--json")[1]
    assert first == again
    # flags win over the config file
    flag = run_json(capsys, "guess", "--config", saved, "--degree", "2")
    # two buffer rows by default on the command line
    assert flag["matrix_shape"] == [[8, 6]]


def test_errors_exit_2(capsys, tmp_path):
    assert main(["guess", "--degree", "2"]) == 2
    assert main(["fglm"]) == 2
    assert "error" in capsys.readouterr().err
