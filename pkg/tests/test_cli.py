import subprocess
import sys

import pytest

from gnalign.cli import main


@pytest.fixture(scope="module")
def instance(tmp_path_factory):
    out = tmp_path_factory.mktemp("inst")
    assert main(["gen", "--n", "24", "--edge-prob", "0.25", "--noise", "0.1", "--seed", "5",
                 "--clusters", "8", "--tree", "--out", str(out)]) == 0
    return out


def inputs(d):
    return ["--g-edges", str(d / "g.tsv"), "--h-edges", str(d / "h.tsv"),
            "--g-vertices", str(d / "g.vertices"), "--h-vertices", str(d / "h.vertices"),
            "--sim", str(d / "sim.tsv")]


@pytest.mark.parametrize("method", ["ga", "isorank", "mp", "mrf"])
def test_align_writes_header_and_pairs(instance, tmp_path, method):
    out = tmp_path / "a.tsv"
    argv = ["align", *inputs(instance), "--clusters", str(instance / "clusters.tsv"),
            "--method", method, "--lambda", "0.5", "--samples", "500", "--out", str(out)]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == f"# method={method}"
    assert any(line.startswith("# J=") for line in lines)
    assert all(len(line.split("\t")) == 3 for line in lines if not line.startswith("#"))


def test_score_recomputes_objective(instance, tmp_path):
    aln, sc = tmp_path / "a.tsv", tmp_path / "s.tsv"
    assert main(["align", *inputs(instance), "--clusters", str(instance / "clusters.tsv"),
                 "--method", "mp", "--out", str(aln)]) == 0
    j_header = next(x for x in aln.read_text().splitlines() if x.startswith("# J="))
    assert main(["score", *inputs(instance), "--alignment", str(aln), "--out", str(sc)]) == 0
    header, row = sc.read_text().splitlines()
    assert header == "J\tS\tobjective"
    assert row.split("\t")[0] == j_header.split("=")[1]


def test_score_infeasible_exit_code(instance, tmp_path):
    aln = tmp_path / "bad.tsv"
    aln.write_text("h0\tg0\nh1\tg1\n")
    argv = ["score", *inputs(instance), "--constrained", "--alignment", str(aln)]
    sim = (instance / "sim.tsv").read_text()
    restricted = tmp_path / "sim.tsv"
    restricted.write_text("".join(x + "\n" for x in sim.splitlines()
                                  if not x.startswith("h0\tg0\t")))
    argv[argv.index("--sim") + 1] = str(restricted)
    assert main(argv) == 2


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("a b c\n")
    assert main(["align", "--g-edges", str(bad), "--h-edges", str(bad)]) == 5


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["align"])
    assert err.value.code == 1


def test_not_a_tree_exit_code_and_fallback(tmp_path):
    tri = "a b\nb c\na c\n"
    (tmp_path / "g.tsv").write_text(tri)
    (tmp_path / "h.tsv").write_text(tri.replace("a", "x").replace("b", "y").replace("c", "z"))
    (tmp_path / "c.tsv").write_text("1\tG\ta\n1\tH\tx\n2\tG\tb\n2\tH\ty\n3\tG\tc\n3\tH\tz\n")
    base = ["align", "--g-edges", str(tmp_path / "g.tsv"), "--h-edges", str(tmp_path / "h.tsv"),
            "--clusters", str(tmp_path / "c.tsv"), "--method", "mp", "--out", str(tmp_path / "o")]
    assert main(base) == 3
    assert main(base + ["--fallback", "ga"]) == 0
    assert (tmp_path / "o").read_text().startswith("# method=ga")


def test_cap_exit_code(tmp_path):
    (tmp_path / "g.tsv").write_text("a b\n")
    (tmp_path / "h.tsv").write_text("x y\n")
    (tmp_path / "c.tsv").write_text("1\tG\ta\n1\tG\tb\n1\tH\tx\n1\tH\ty\n")
    argv = ["align", "--g-edges", str(tmp_path / "g.tsv"), "--h-edges", str(tmp_path / "h.tsv"),
            "--clusters", str(tmp_path / "c.tsv"), "--method", "mp", "--max-side", "1"]
    assert main(argv) == 4


def test_mp_requires_clusters(instance):
    assert main(["align", *inputs(instance), "--method", "mp"]) == 5


def test_module_entry_point(instance, tmp_path):
    out = tmp_path / "s.csv"
    proc = subprocess.run([sys.executable, "-m", "gnalign", "sweep", *inputs(instance),
                           "--methods", "ga", "--grid", "0,1", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert len(out.read_text().splitlines()) == 3
