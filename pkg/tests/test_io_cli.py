from __future__ import annotations

import json
import random
import subprocess
import sys
from io import StringIO

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epminor import io as eio
from epminor.cli import main
from epminor.counterexample import figure1_instance, negative_family
from epminor.graph_core import GraphError, RootedGraph, grid_graph
from epminor.patterns import complete
from epminor.sweeps import random_rooted


def run(args, stdin=""):
    proc = subprocess.run(
        [sys.executable, "-m", "epminor", *args], input=stdin, capture_output=True, text=True, timeout=300
    )
    return proc.returncode, proc.stdout, proc.stderr


def pipe(first, second):
    code, out, err = run(first)
    assert code == 0, err
    return run(second, out)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_round_trip_is_byte_stable(seed):
    rg = random_rooted(random.Random(seed), random.Random(seed).randint(1, 9))
    text = eio.dumps_instance(rg, provenance={"seed": seed})
    back, meta = eio.loads_instance(text)
    assert back == rg and meta["provenance"] == {"seed": seed}
    assert eio.dumps_instance(back, provenance=meta["provenance"]) == text


def test_grid_instances_keep_coordinates():
    text = eio.dumps_instance(figure1_instance(4), grid=(4, 4))
    back, meta = eio.loads_instance(text)
    assert back.graph.grid_shape == (4, 4)
    assert meta["grid"] == [4, 4]


def test_declared_grid_must_match():
    data = eio.instance_to_json(RootedGraph(grid_graph(2, 2)), grid=(2, 2))
    data["edges"] = data["edges"][:-1]
    with pytest.raises(GraphError):
        eio.instance_from_json(data)


def test_dot_export():
    dot = eio.to_dot(RootedGraph(grid_graph(2, 2), (frozenset({0}),)), highlight={3: "red"})
    assert dot.startswith("graph G {")
    assert dot.count(" -- ") == 4
    assert 'label="0 Z0"' in dot and 'color="red"' in dot


def test_gen_output_parses_back_identically(capsys):
    assert main(["gen", "negative", "--h", "K1", "--l", "3", "--n", "2", "--x", "1"]) == 0
    text = capsys.readouterr().out
    rg, meta = eio.loads_instance(text)
    assert meta["provenance"] == {"t": 1, "l": 3, "n": 2, "x": 1}
    assert rg == negative_family(complete(1), 3, 2).rooted
    assert eio.dumps_instance(rg, provenance=meta["provenance"]) == text


def test_three_set_grid_pack():
    code, out, _ = pipe(["gen", "figure1", "--n", "4"], ["pack", "--h", "K1", "--l", "3"])
    assert code == 0 and out.strip() == "nu=1"


def test_grid_to_dot_is_a_four_cycle():
    code, out, _ = pipe(["gen", "grid", "--g", "2", "--h", "2"], ["export", "dot"])
    assert code == 0
    assert sorted(l.strip() for l in out.splitlines() if "--" in l) == ["0 -- 1;", "0 -- 2;", "1 -- 3;", "2 -- 3;"]


def test_duality_sweep_has_no_violations():
    code, out, _ = run(["duality-check", "--h", "K1", "--l", "2", "--k", "2", "--bound", "mader", "--sweep", "6"])
    assert code == 0
    assert json.loads(out)["violations"] == 0


def test_violation_exit_code(capsys, monkeypatch):
    text = eio.dumps_instance(RootedGraph(grid_graph(3, 3), (frozenset({0}), frozenset({8}))))
    monkeypatch.setattr(sys, "stdin", StringIO(text))
    assert main(["duality-check", "--h", "K1", "--l", "2", "--k", "2", "--bound", "0"]) == 2


def test_cover_json(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", StringIO(eio.dumps_instance(figure1_instance(4))))
    assert main(["cover", "--h", "K1", "--l", "3", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["tau"] == 2


def test_verify_negative_uses_provenance():
    code, out, _ = pipe(["gen", "negative", "--h", "K1", "--l", "3", "--n", "3"], ["verify-negative", "--h", "K1"])
    assert code == 0
    rep = json.loads(out)
    assert rep["nu"] == 1 and rep["clause_b"] is True


def test_pipeline_exit_codes():
    code, out, err = pipe(["gen", "grid", "--g", "2", "--h", "3", "--z", "[[0],[5]]"], ["pipeline", "--h", "K1", "--l", "2", "--k", "2", "--trace"])
    assert code == 0
    assert json.loads(out)["kind"] == "deletion_set"
    assert all(json.loads(line) for line in err.splitlines())
    code, _, _ = pipe(["gen", "grid", "--g", "12", "--z", "[[0],[143]]"], ["pipeline", "--h", "K1", "--l", "2", "--k", "2"])
    assert code == 3


@pytest.mark.parametrize(
    "args,stdin",
    [
        (["pack", "--nope"], ""),
        (["pack", "--h", "K1"], ""),
        (["pack", "--h", "Q9"], '{"n":1,"edges":[],"z":[[0]]}'),
        (["gen", "grid", "--h", "x"], ""),
    ],
)
def test_usage_errors_exit_one(args, stdin):
    assert run(args, stdin)[0] == 1
