import io
import json
import pathlib
import sys

import pytest

from zmut.cli import NEGATIVE, OK, UNKNOWN, USAGE, run

GOLDEN = pathlib.Path(__file__).parent / "golden"

# name -> argv, run from inside the golden directory
CASES = {
    "enumerate_quad": ["enumerate", "--polygon", "quad.json"],
    "enumerate_quad_json": ["enumerate", "--polygon", "quad.json", "--format", "json"],
    "enumerate_triangle": ["enumerate", "--polygon", "triangle.json"],
    "mutate_beta": ["mutate", "--poly", "@beta.txt", "--phi", "0,1,-2", "--h", "1+x"],
    "toric_hilbert_quad": ["toric", "hilbert", "--polygon", "quad.json"],
    "toric_ideal_quad": ["toric", "ideal", "--polygon", "quad.json"],
    "polygon_edges_quad": ["polygon", "edges", "--polygon", "quad.json"],
    "check_alpha": ["check", "zero-mutable", "--poly", "@alpha.txt", "--format", "json"],
    "cluster_check_alpha": ["cluster", "check", "--poly", "@alpha.txt"],
    "tangent_beta": ["tangent", "--poly", "@beta.txt"],
}


def invoke(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, io.StringIO(stdin_text), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def in_golden(monkeypatch):
    monkeypatch.chdir(GOLDEN)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, in_golden):
    code, out, _ = invoke(CASES[name])
    assert code == OK
    assert out == (GOLDEN / f"{name}.out").read_text(encoding="utf-8")


def test_enumerate_quad_is_three(in_golden):
    _, out, _ = invoke(["enumerate", "--polygon", "quad.json", "--format", "json"])
    assert len(json.loads(out)["polynomials"]) == 3


def test_mutate_beta_value(in_golden):
    from zmut.laurent import parse

    _, out, _ = invoke(CASES["mutate_beta"])
    assert parse(out.strip()) == parse("((1+y)^3 + x*y^2)/(x*y)")


def test_hilbert_mentions_correction(in_golden):
    _, out, _ = invoke(CASES["toric_hilbert_quad"])
    assert "s3 = (-1,-2,3)" in out and "(-1,2,3)" in out
    assert sum(1 for line in out.splitlines() if " = (" in line and not line.startswith("note")) == 8


def test_deterministic_across_jobs(in_golden):
    a = invoke(["enumerate", "--polygon", "quad.json", "--format", "json"])
    b = invoke(["enumerate", "--polygon", "quad.json", "--format", "json", "--jobs", "2"])
    assert a == b


def test_stdin(in_golden):
    text = (GOLDEN / "beta.txt").read_text()
    code, out, _ = invoke(["mutate", "--poly", "-", "--phi", "0,1,-2", "--h", "1+x"], text)
    assert code == OK and out == (GOLDEN / "mutate_beta.out").read_text()


def test_inline_polygon():
    code, out, _ = invoke(["polygon", "area", "--polygon=-1,-1 2,-1 1,1 -1,2"])
    assert code == OK and out.strip() == "12"


class TestExitCodes:
    def test_not_zero_mutable(self):
        code, _, _ = invoke(["check", "zero-mutable", "--poly", "1 + 3*x + x^2"])
        assert code == NEGATIVE

    def test_not_mutable(self, in_golden):
        code, _, _ = invoke(["check", "mutable", "--poly", "@alpha.txt", "--phi", "0,1,-2", "--h", "1+x"])
        assert code == NEGATIVE

    def test_mutate_failure(self, in_golden):
        code, out, _ = invoke(["mutate", "--poly", "@alpha.txt", "--phi", "0,1,-2", "--h", "1+x"])
        assert code == NEGATIVE and out.startswith("not mutable: level -")

    def test_parse_error(self):
        code, _, err = invoke(["poly", "parse", "--poly", "1 + x^"])
        assert code == USAGE and err

    def test_unknown_subcommand(self):
        assert invoke(["frobnicate"])[0] == USAGE

    def test_bad_bounds(self):
        assert invoke(["check", "zero-mutable", "--poly", "1+x", "--bounds", "bogus=1"])[0] == USAGE

    def test_unknown_verdict(self, in_golden):
        code, _, _ = invoke(["check", "zero-mutable", "--poly", "@beta.txt", "--bounds", "node_cap=1"])
        assert code == UNKNOWN


def regenerate():
    import os

    os.chdir(GOLDEN)
    for name, argv in CASES.items():
        code, out, err = invoke(argv)
        if code != OK:
            raise SystemExit(f"{name}: exit {code}\n{err}")
        (GOLDEN / f"{name}.out").write_text(out, encoding="utf-8")


if __name__ == "__main__":
    if sys.argv[1:] == ["--regen"]:
        regenerate()
