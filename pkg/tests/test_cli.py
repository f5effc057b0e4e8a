import json

import pytest

import cli
import elliptic_sl2z as sl2z
import selftest


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_hn_example(capsys):
    code, out, _ = run(capsys, "hn", "--z", "0,1;-1,0")
    assert code == 0
    assert "semistable: no" in out
    assert "HN factors (2):" in out
    assert "1. M[2,2]  Z = -1  phase 1  mass 1" in out
    assert "2. M[1,1]  Z = 0 + 1 i  phase 1/2  mass 1" in out
    assert "mass = 2" in out


def test_hn_from_config_as_json(tmp_path, capsys):
    config = write_json(tmp_path, "hn.json", {"sigma": {"n": 2, "z": [["0", "1"], ["-1", "0"]]},
                                              "object": [[1, 2], [1, 2]]})
    code, out, _ = run(capsys, "hn", "--config", config, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [f["phase"] for f in data["factors"]] == ["1", "1/2"]
    assert [f["intervals"] for f in data["factors"]] == [[[2, 2], [2, 2]], [[1, 1], [1, 1]]]
    assert data["mass"] == "4"
    assert data["semistable"] is None


def test_malformed_json_is_a_parse_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"sigma": {"z": [["0", "1"]\n}', encoding="utf-8")
    code, out, err = run(capsys, "hn", "--config", str(path))
    assert code == 2
    assert out == ""
    assert "line 2, column" in err


def test_missing_config_file(capsys):
    code, _, err = run(capsys, "dist", "--config", "does/not/exist.json")
    assert code == 2
    assert "Cannot read" in err


def test_contract_violation_names_invariant(capsys):
    code, _, err = run(capsys, "hn", "--z", "0,-1")
    assert code == 1
    assert "[stability-function]" in err


def test_float_in_config_is_rejected(tmp_path, capsys):
    config = write_json(tmp_path, "sigma.json", {"z": [[0.5, 1]]})
    code, _, err = run(capsys, "axioms", "--config", config)
    assert code == 2
    assert "not exact" in err


def test_dist(tmp_path, capsys):
    config = write_json(tmp_path, "dist.json", {"sigma1": {"z": [["0", "1"]]}, "sigma2": {"z": [["0", "2"]]}})
    code, out, _ = run(capsys, "dist", "--config", config)
    assert code == 0
    assert out == "d = ~0.693147180560 (±5e-13)\nattained at M[1,1] (log-mass)\n"
    same = write_json(tmp_path, "same.json", {"sigma1": {"z": [["0", "1"]]}, "sigma2": {"z": [["0", "1"]]}})
    code, out, _ = run(capsys, "dist", "--config", same, "--format", "json")
    assert json.loads(out) == {"distance": "0", "exact_zero": True, "witness": None, "component": "none"}


def test_dist_precision(tmp_path, capsys):
    config = write_json(tmp_path, "dist.json", {"sigma1": {"z": [["0", "1"]]}, "sigma2": {"z": [["-1", "0"]]}})
    code, out, _ = run(capsys, "dist", "--config", config, "--precision", "4")
    assert code == 0
    assert out.startswith("d = ~0.5000 (±5e-05)")


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "--z", "0,1;-1,0;1,1")
    assert code == 0
    assert out.startswith("n = 3: all axioms hold")
    assert "local finiteness: automatic" in out


def test_k3_classify(tmp_path, capsys):
    config = write_json(tmp_path, "k3.json", {"model": {"rho": 1, "ns_gram": [[2]]},
                                              "period": {"B": ["0"], "omega": ["2"]}})
    code, out, _ = run(capsys, "k3", "classify", "--config", config)
    assert code == 0
    assert "class: InP0Plus" in out
    assert "wall scan box: 2 (completeness bound)" in out
    assert "component: +" in out


def test_k3_classify_on_wall_json(tmp_path, capsys):
    config = write_json(tmp_path, "k3.json", {"model": {"rho": 1, "ns_gram": [[2]]},
                                              "period": {"re": ["1", "0", "-1"], "im": ["0", "1", "0"]},
                                              "box": 3})
    code, out, _ = run(capsys, "k3", "classify", "--config", config, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["class"] == "OnWall"
    assert data["walls"] == [[-1, 0, -1], [1, 0, 1]]
    assert data["wall_box"] == 3
    assert data["completeness_bound"] is None


def test_k3_delta_csv(tmp_path, capsys):
    config = write_json(tmp_path, "delta.json", {"model": {"rho": 1, "ns_gram": [[2]]}, "box": 1})
    code, out, _ = run(capsys, "k3", "delta", "--config", config, "--format", "csv")
    assert code == 0
    assert out == "r,D1,s\n-1,0,-1\n1,0,1\n"


def test_k3_grid_counts(capsys):
    code, out, _ = run(capsys, "k3", "grid", "--beta-range", "0:0:0", "--omega-range", "1:2:1", "--format", "csv")
    assert code == 0
    assert out == "beta,omega,class,walls\n0,1,OnWall,2\n0,2,InP0Plus,0\n"


def test_roots_csv(capsys):
    code, out, _ = run(capsys, "roots", "--type", "A2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "c1,c2"
    assert len(lines) == 7
    assert "1,1" in lines


def test_roots_from_cartan(tmp_path, capsys):
    config = write_json(tmp_path, "d4.json", {"cartan": [[2, -1, -1, -1], [-1, 2, 0, 0], [-1, 0, 2, 0], [-1, 0, 0, 2]]})
    code, out, _ = run(capsys, "roots", "--config", config)
    assert code == 0
    assert out.startswith("D4: 24 roots (expected 24)")


def test_chamber_examples(capsys):
    code, out, _ = run(capsys, "chamber", "--beta", "1/2", "--omega", "0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "PerverseFace(0)"
    assert "O_y: strictly semistable" in out
    assert "factor classes: (-1, 0), (1, 1)" in out
    code, out, _ = run(capsys, "chamber", "--beta", "1/2", "--omega", "1")
    assert out.splitlines()[0] == "AmpleConeU"
    assert "O_y: stable" in out
    assert "Z(O_y) = -1" in out


def test_chamber_excluded(capsys):
    code, out, _ = run(capsys, "chamber", "--beta", "1", "--omega", "0")
    assert code == 0
    assert out.splitlines()[0] == "Excluded"
    assert "violating root: [1]" in out


def test_chamber_higher_rank(tmp_path, capsys):
    config = write_json(tmp_path, "chamber.json", {"type": "A2",
                                                   "point": {"beta": ["1/3", "1/3"], "omega": ["0", "0"]}})
    code, out, _ = run(capsys, "chamber", "--config", config)
    assert code == 0
    assert out.splitlines()[0] == "HigherFace"
    assert "note: higher-codimension face" in out


def test_chamber_needs_both_coordinates(capsys):
    code, _, err = run(capsys, "chamber", "--beta", "1/2")
    assert code == 2


def test_complement_grid_csv(capsys):
    code, out, _ = run(capsys, "complement-grid", "--beta-range", "0:1:2", "--omega-range", "0:0:0",
                       "--format", "csv")
    assert code == 0
    assert out == ("beta,omega,in_complement,region,twist\n"
                   "0,0,false,Excluded,0\n"
                   "1/2,0,true,PerverseFace(0),0\n"
                   "1,0,false,Excluded,1\n")


def test_complement_grid_svg_is_deterministic(tmp_path, capsys):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (first, second):
        code, out, _ = run(capsys, "complement-grid", "--beta-range", "0:2:8", "--omega-range=-1:1:4",
                           "--format", "svg", "--out", str(path))
        assert code == 0
        assert out == ""
    assert first.read_bytes() == second.read_bytes()
    assert b"<svg" in first.read_bytes()


def test_svg_needs_out(capsys):
    code, _, err = run(capsys, "complement-grid", "--format", "svg")
    assert code == 2
    assert "--out" in err


def test_format_not_available(capsys):
    code, _, err = run(capsys, "hn", "--z", "0,1", "--format", "csv")
    assert code == 2
    assert "no CSV output" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "word.json"
    code, out, _ = run(capsys, "sl2z", "decompose", "--matrix", "2,1,1,1", "--format", "json", "--out", str(target))
    assert code == 0
    assert out == ""
    data = json.loads(target.read_text(encoding="utf-8"))
    assert sl2z.matrix_of(sl2z.parse_word(data["word"])) == ((2, 1), (1, 1))


def test_sl2z_eval(capsys):
    code, out, _ = run(capsys, "sl2z", "eval", "--word", "F,T,T,F", "--vector", "1,0")
    assert code == 0
    assert "matrix: [[-1, 2], [0, -1]]" in out
    assert "(1, 0) -> (-1, 0)" in out
    assert "kernel witness: no" in out
    code, out, _ = run(capsys, "sl2z", "eval", "--word", "Shift,Shift")
    assert "kernel witness: yes" in out


def test_sl2z_decompose_not_in_group(capsys):
    code, _, err = run(capsys, "sl2z", "decompose", "--matrix", "1,1,1,1")
    assert code == 1
    assert "[det-one]" in err


def test_seed_out_of_range(capsys):
    code, _, err = run(capsys, "selftest", "--seed", str(2 ** 64))
    assert code == 2


def test_unknown_command_exits_with_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["frobnicate"])
    assert excinfo.value.code == 2


def small_checks():
    return [name_fn for name_fn in selftest.CHECKS
            if name_fn[0] in ("lattice-signatures", "k3-examples", "heart-hn-objects", "sl2z")]


def test_selftest_is_deterministic(monkeypatch, capsys):
    monkeypatch.setattr(selftest, "CHECKS", small_checks())
    outputs = []
    for workers in ("1", "1", "3"):
        code, out, _ = run(capsys, "selftest", "--seed", "42", "--workers", workers)
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1] == outputs[2]
    assert outputs[0].startswith("selftest seed=42\n")
    assert outputs[0].endswith("4/4 checks passed\n")


def test_selftest_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(selftest, "CHECKS", [("always-fails", lambda rng: (False, "forced"))])
    code, out, err = run(capsys, "selftest", "--seed", "1")
    assert code == 1
    assert "FAIL always-fails: forced" in out
    assert "[selftest]" not in out
    assert "always-fails" in err


def test_cache_commands(capsys):
    run(capsys, "roots", "--type", "A2")
    code, out, _ = run(capsys, "cache", "stats", "--format", "json")
    assert code == 0
    assert json.loads(out)["total_entries"] == 1
    code, out, _ = run(capsys, "cache", "clear")
    assert out == "cache cleared\n"
    _, out, _ = run(capsys, "cache", "stats", "--format", "json")
    assert json.loads(out)["total_entries"] == 0


@pytest.mark.parametrize("command, data", [
    (["hn"], {"sigma": {"z": 5}}),
    (["axioms"], {"sigma": {"z": [["0", "1"]], "n": [1]}}),
    (["k3", "classify"], {"model": {"rho": 1, "ns_gram": 2}, "period": {"B": ["0"], "omega": ["2"]}}),
    (["k3", "classify"], {"model": {"rho": 1, "ns_gram": [[2]]}, "period": {"B": ["0"], "omega": "2"}}),
    (["roots"], {"cartan": [2, -1]}),
    (["chamber"], {"point": {"beta": {"x": 1}, "omega": ["0"]}}),
    (["complement-grid"], {"beta": 5}),
])
def test_wrong_shape_config_is_a_parse_error(tmp_path, capsys, command, data):
    config = write_json(tmp_path, "shape.json", data)
    code, out, err = run(capsys, *command, "--config", config)
    assert code == 2
    assert out == ""
    assert "Parse error" in err


def test_non_square_ns_gram_names_invariant(tmp_path, capsys):
    config = write_json(tmp_path, "k3.json", {"model": {"rho": 1, "ns_gram": [[2, 0]]},
                                              "period": {"B": ["0"], "omega": ["2"]}})
    code, out, err = run(capsys, "k3", "classify", "--config", config)
    assert code == 1
    assert out == ""
    assert "[gram-square]" in err


def test_empty_cartan_names_invariant(tmp_path, capsys):
    config = write_json(tmp_path, "roots.json", {"cartan": []})
    code, _, err = run(capsys, "roots", "--config", config)
    assert code == 1
    assert "[cartan]" in err
