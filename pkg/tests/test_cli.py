import json
from pathlib import Path

import pytest

import univext.equivalence as eq
from univext.category import LinearA
from univext.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_UNSTABLE, main
from univext.figure import regions, render
from univext.scenarios import BUILTIN, ScenarioError, load_scenario, parse_scenario
from univext.torsion import explicit_pair

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(BUILTIN))
def test_figure_golden(capsys, name):
    code, out, _ = run(capsys, "figure", name)
    assert code == EXIT_OK
    assert out == (GOLDEN / f"{name}.txt").read_text()


def test_a3_figure_regions():
    sc = load_scenario("a3-paper")
    got = {k: [str(m) for m in v] for k, v in regions(sc.pair).items()}
    assert set(got["perp(T) minus T"]) == {"[1,1]", "[1,2]", "[1,3]", "[2,3]"}
    assert set(got["E"]) == {"[1,1]", "[1,2]", "[1,3]", "[3,3]"}


def test_case2_figure_regions():
    sc = load_scenario("tube5-case2-paper")
    got = regions(sc.pair, sc.cap)
    assert {str(m) for m in got["E"]} == {"[2,2]", "[4,4]", "[2,3]", "[2,4]"}
    assert {str(m) for m in got["perp(T) minus T"]} == {"[2,2]", "[2,3]", "[2,4]", "[3,4]"}


def test_zero_torsion_overlays_cover_everything():
    pair = explicit_pair(LinearA(3), [])
    got = regions(pair)
    assert got["perp(T) minus T"] == got["E"]
    assert len(got["E"]) == 6
    rows = [line for line in render(pair).splitlines() if " | " in line]
    assert rows and not any("#" in r for r in rows)


def test_verify_a3_text(capsys):
    code, out, _ = run(capsys, "verify", "a3-paper")
    assert code == EXIT_OK
    assert out.startswith("a3-paper: PASS")
    assert "[fail]" not in out


def test_verify_structured_is_deterministic(capsys):
    _, first, _ = run(capsys, "verify", "a3-paper", "--format", "structured")
    _, second, _ = run(capsys, "verify", "a3-paper", "--format", "structured")
    assert first == second
    doc = json.loads(first)
    assert doc["schema_version"] == 1
    assert doc["scenario"] == "a3-paper"
    assert all(set(c) >= {"name", "status", "witnesses"} for c in doc["checks"])
    (bij,) = [c for c in doc["checks"] if c["name"].endswith("object bijection")]
    assert "[2,3] <-> [3,3]" in bij["bijection"]


def test_failing_scenario(capsys):
    code, out, _ = run(capsys, "verify", str(ROOT / "scenarios" / "a3-not-closed.toml"), "--format", "structured")
    assert code == EXIT_FAIL
    doc = json.loads(out)
    (ext,) = [c for c in doc["checks"] if c["name"] == "torsion-pair: closed-under-extensions"]
    assert ext["status"] == "fail"
    assert ext["witnesses"][0].startswith("[1,2]")


def test_empty_checks(capsys):
    code, out, _ = run(capsys, "verify", str(ROOT / "scenarios" / "empty-checks.toml"), "--format", "structured")
    assert code == EXIT_OK
    assert json.loads(out)["checks"] == []


@pytest.mark.parametrize("n,count", [(1, 2), (2, 5), (3, 14)])
def test_enumerate(capsys, n, count):
    code, out, _ = run(capsys, "enumerate", "--n", str(n), "--format", "structured")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["count"] == count
    assert len(doc["checks"]) == count
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_enumerate_with_workers(capsys, monkeypatch):
    monkeypatch.setenv("UNIVEXT_WORKERS", "2")
    code, out, _ = run(capsys, "enumerate", "--n", "3")
    assert code == EXIT_OK
    assert out.rstrip().endswith("count: 14")


@pytest.mark.parametrize(
    "argv",
    [
        ("enumerate", "--n", "0"),
        ("enumerate", "--n", "7"),
        ("verify", "no-such-scenario"),
        ("verify", "a3-paper", "--cap", "0"),
        ("verify", "a3-paper", "--format", "yaml"),
        ("frobnicate",),
    ],
)
def test_input_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_INPUT


def test_bad_workers_env(capsys, monkeypatch):
    monkeypatch.setenv("UNIVEXT_WORKERS", "many")
    code, _, err = run(capsys, "enumerate", "--n", "2")
    assert code == EXIT_INPUT
    assert "UNIVEXT_WORKERS" in err


def test_not_stabilized_exit_code(capsys, monkeypatch, tmp_path):
    calls = iter(range(10_000))
    monkeypatch.setattr(eq, "factoring_dim", lambda *a, **k: next(calls))
    doc = BUILTIN["tube5-case2-paper"].replace(
        'checks = ["torsion-pair", "equivalence", "ff-corollary", "wakamatsu", "pushout"]', 'checks = ["equivalence"]'
    )
    path = tmp_path / "unstable.toml"
    path.write_text(doc)
    code, _, err = run(capsys, "verify", str(path))
    assert code == EXIT_UNSTABLE
    assert "--cap" in err


@pytest.mark.parametrize(
    "text,where",
    [
        ("schema = 2\n", "scenario.schema"),
        ('schema = 1\n[category]\nkind = "linear"\nn = 3\n[pair]\nkind = "explicit"\ntorsion = ["[4,4]"]\n', "pair.torsion[0]"),
        ('schema = 1\n[category]\nkind = "linear"\nn = 3\n[pair]\nkind = "explicit"\ntorsion = [3]\n', "pair.torsion[0]"),
        ('schema = 1\nchecks = ["bogus"]\n[category]\nkind = "linear"\nn = 3\n[pair]\nkind = "explicit"\n', "scenario.checks[0]"),
        ('schema = 1\n[category]\nkind = "cyclic"\n[pair]\nkind = "explicit"\n', "category.kind"),
        ('schema = 1\n[category]\nkind = "linear"\nn = 3\n[pair]\nkind = "rays"\nindices = [0]\nwings = [[]]\n', "pair.kind"),
        ('schema = 1\nextra = 1\n', "unknown key"),
        ("schema = [", "x.toml"),
    ],
)
def test_parse_errors_name_location(text, where):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(text, "x.toml")
    assert where in str(err.value)


def test_builtins_parse():
    for name in BUILTIN:
        sc = load_scenario(name)
        assert sc.name == name
    sc = load_scenario("tube5-case1-paper").with_overrides(cap=15, prime=103)
    assert sc.spec.length_cap == 15 and sc.spec.prime == 103


def test_sample_scenarios_parse():
    for path in sorted((ROOT / "scenarios").glob("*.toml")):
        load_scenario(str(path))
