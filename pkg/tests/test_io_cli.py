import csv
import io
import json
import random
from contextlib import redirect_stdout

import pytest

from pcrbds.cli import CSV_HEADER, main
from pcrbds.generators import FAMILIES, generate
from pcrbds.graphs import ConnGraph, Instance, RedBlueGraph, ResourceLimitError, is_kdd_free
from pcrbds.io import InstanceFileError, dumps_instance, loads_instance, read_instance, write_instance

from conftest import small_instance


def run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main([str(a) for a in argv])
    return code, buf.getvalue()


@pytest.fixture
def i1_file(tmp_path, i1):
    path = tmp_path / "i1.json"
    write_instance(path, i1, {"name": "I1"})
    return path


def test_round_trip_is_byte_identical():
    for seed in range(50):
        inst = small_instance(seed)
        text = dumps_instance(inst, {"seed": seed})
        back, meta = loads_instance(text)
        assert back == inst and meta == {"seed": seed}
        assert dumps_instance(back, meta) == text


def test_parse_errors_name_the_field():
    with pytest.raises(InstanceFileError, match="line 1"):
        loads_instance("{")
    with pytest.raises(InstanceFileError, match="missing field 't'"):
        loads_instance(json.dumps({"red_count": 1, "blue_count": 0, "conn_edges": [], "cov_edges": [], "k": 1}))
    bad = {"red_count": 2, "blue_count": 1, "conn_edges": [[0, 2]], "cov_edges": [], "k": 1, "t": 0}
    with pytest.raises(InstanceFileError, match=r"conn_edges\[0\]"):
        loads_instance(json.dumps(bad))
    bad.update(conn_edges=[], k=True)
    with pytest.raises(InstanceFileError, match="'k'"):
        loads_instance(json.dumps(bad))
    bad.update(k=3)
    with pytest.raises(InstanceFileError):
        loads_instance(json.dumps(bad))


def test_solve_examples(i1_file):
    code, out = run(["solve", i1_file, "--algo", "brute"])
    assert code == 0 and "size: 2" in out and "coverage: 3" in out
    code, out = run(["solve", i1_file, "--algo", "epas", "--epsilon", "1/2", "--d", "2", "--mode", "exhaustive"])
    assert code == 0
    assert int(out.split("coverage: ")[1].split()[0]) >= 2
    code, out = run(["solve", i1_file, "--algo", "pas", "--epsilon", "1/2", "--d", "2"])
    assert code == 0 and int(out.split("size: ")[1].split()[0]) <= 3
    code, out = run(["solve", i1_file, "--algo", "exact-t", "--terminals", "2"])
    assert code == 0 and "2" in out.split("vertices: ")[1].split()[0].split(",")


def test_solve_exit_codes(tmp_path, i1, i1_file):
    hard = tmp_path / "hard.json"
    write_instance(hard, i1.replace(t=4))
    assert run(["solve", hard, "--algo", "exact-t", "--mode", "exhaustive"])[0] == 2
    assert run(["solve", i1_file, "--algo", "epas"])[0] == 1
    assert run(["solve", i1_file, "--algo", "epas", "--epsilon", "3/2", "--d", "2"])[0] == 1
    assert run(["solve", tmp_path / "missing.json", "--algo", "brute"])[0] == 1
    assert run(["solve", i1_file, "--algo", "nope"])[0] == 1
    big = tmp_path / "big.json"
    write_instance(big, Instance(ConnGraph.path(30), RedBlueGraph.from_red_adj([[0]] * 30, 1), 2, 1))
    assert run(["solve", big, "--algo", "brute"])[0] == 3
    assert run(["solve", big, "--algo", "exact-t"])[0] == 0
    wide = tmp_path / "wide.json"
    write_instance(wide, Instance(ConnGraph.path(3), RedBlueGraph.from_red_adj([range(30)] * 3, 30), 2, 25))
    assert run(["solve", wide, "--algo", "exact-t"])[0] == 3


def test_solve_csv(tmp_path, i1_file):
    out = tmp_path / "run.csv"
    assert run(["solve", i1_file, "--algo", "epas", "--epsilon", "1/2", "--d", "2", "--csv", out])[0] == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == CSV_HEADER
    assert rows[0] == "algo,epsilon,d,seed,trials,verdict,size,coverage,wall_time_ms,opt_coverage,opt_size".split(",")
    assert rows[1][:6] == ["epas", "1/2", "2", "0", "", "solution"]


def test_check_examples(tmp_path, i1_file):
    code, out = run(["check", i1_file, "--solution", "0,1", "--target", "3"])
    assert code == 0 and "result: pass" in out
    code, out = run(["check", i1_file, "--solution", "0,2", "--target", "3"])
    assert code == 2 and "connected: false" in out
    k22 = tmp_path / "k22.json"
    write_instance(k22, Instance(ConnGraph.path(2), RedBlueGraph.from_red_adj([[0, 1], [0, 1]], 2), 1, 1))
    assert run(["check", k22, "--kdd", "2"])[0] == 2
    assert run(["check", i1_file, "--kdd", "2"])[0] == 0
    assert run(["check", i1_file, "--solution", "x"])[0] == 1
    assert run(["check", i1_file])[0] == 1


def test_gen_examples(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["gen", "--family", "matching", "--nr", 5, "--nb", 5, "--out", a])[0] == 0
    inst, _ = read_instance(a)
    assert inst.cov.edges() == [(i, i) for i in range(5)]
    run(["gen", "--family", "matching", "--nr", 5, "--nb", 5, "--out", b])
    assert a.read_bytes() == b.read_bytes()
    code, _ = run(["gen", "--family", "random-bipartite", "--d-free", 2, "--nr", 6, "--nb", 8, "--seed", 7,
                   "--out", a])
    inst, meta = read_instance(a)
    assert code == 0 and is_kdd_free(inst.cov, 2) and meta["d_hint"] == 2
    code, _ = run(["gen", "--family", "clique-conn", "--nr", 6, "--nb", 2, "--max-red-degree", 2, "--d-free", 1])
    assert code == 3


def test_generate_is_deterministic():
    for family in FAMILIES:
        assert generate(family, 7, 9, seed=3) == generate(family, 7, 9, seed=3)
    with pytest.raises(ValueError):
        generate("nope", 2, 2)
    with pytest.raises(ResourceLimitError):
        generate("clique-conn", 6, 2, max_red_degree=2, d_free=1, max_resamples=5)


def test_encode_examples(tmp_path):
    p3 = tmp_path / "p3.json"
    p3.write_text(json.dumps({"vertex_count": 3, "edges": [[0, 1], [1, 2]], "k": 1, "t": 2}))
    out = tmp_path / "enc.json"
    assert run(["encode", "--from", "pvc", p3, "--out", out])[0] == 0
    inst, meta = read_instance(out)
    assert (inst.red_count, inst.blue_count) == (3, 2) and meta["encoded_from"] == "pvc"
    k3 = tmp_path / "k3.json"
    k3.write_text(json.dumps({"vertex_count": 3, "edges": [[0, 1], [1, 2], [0, 2]]}))
    assert run(["encode", "--from", "pds", k3, "--k", 1, "--t", 3, "--conn-mode", "star", "--out", out])[0] == 0
    inst, _ = read_instance(out)
    assert inst.red_count == 4 and inst.k == 2
    assert run(["encode", "--from", "pds", k3, "--out", out])[0] == 1
    sets = tmp_path / "sets.json"
    sets.write_text(json.dumps({"universe_size": 3, "sets": [[0, 1], [1, 2]], "k": 2, "t": 3}))
    for kind in ("maxcov", "phs"):
        assert run(["encode", "--from", kind, sets, "--out", out])[0] == 0
        assert dumps_instance(*read_instance(out)) == out.read_text()


def _corpus(tmp_path, n=3):
    d = tmp_path / "corpus"
    d.mkdir()
    for seed in range(n):
        inst, meta = generate("random-bipartite", 6, 6, k=2, t=2, seed=seed)
        write_instance(d / f"g{seed}.json", inst, meta)
    return d


def _rows(path):
    return list(csv.reader(path.open()))


def test_bench_rows_and_determinism(tmp_path):
    corpus = _corpus(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["bench", "--corpus", corpus, "--algos", "exact-t,brute", "--seed", 1]
    assert run(args + ["--out", a])[0] == 0
    assert run(args + ["--out", b, "--n-jobs", 2])[0] == 0
    ra, rb = _rows(a), _rows(b)
    assert len(ra) == 1 + 6 and ra[0] == CSV_HEADER
    drop = CSV_HEADER.index("wall_time_ms")
    strip = lambda rows: [r[:drop] + r[drop + 1:] for r in rows]
    assert strip(ra) == strip(rb)
    assert all(r[CSV_HEADER.index("opt_coverage")] for r in ra[1:])


def test_bench_oversize_brute_is_resource_error(tmp_path):
    corpus = _corpus(tmp_path, 1)
    inst = Instance(ConnGraph.path(20), RedBlueGraph.from_red_adj([[i % 3] for i in range(20)], 3), 2, 1)
    write_instance(corpus / "big.json", inst)
    out = tmp_path / "o.csv"
    assert run(["bench", "--corpus", corpus, "--algos", "brute", "--out", out])[0] == 0
    verdicts = [r[CSV_HEADER.index("verdict")] for r in _rows(out)[1:]]
    assert verdicts == ["resource_error", "solution"]


def test_bench_unknown_algo(tmp_path):
    assert run(["bench", "--corpus", _corpus(tmp_path, 1), "--algos", "foo"])[0] == 1


def test_random_instances_never_emit_unverified_solutions(tmp_path):
    rng = random.Random(0)
    for seed in range(15):
        inst = small_instance(seed)
        path = tmp_path / f"s{seed}.json"
        write_instance(path, inst)
        algo = rng.choice(["exact-t", "brute"])
        code, out = run(["solve", path, "--algo", algo, "--mode", "exhaustive"])
        assert code in (0, 2)
        if code == 0:
            line = next(x for x in out.splitlines() if x.startswith("vertices:"))
            vs = line.split(":", 1)[1].strip()
            assert run(["check", path, "--solution", vs])[0] == 0
