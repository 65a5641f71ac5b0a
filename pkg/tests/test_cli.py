import json

from qbrolin.cli import main

SQ_MINUS_2 = {"coeffs": [[-2, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]]}


def _write(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_unknown_top_key(tmp_path, capsys):
    cfg = _write(tmp_path, "c.json", {"mode": "julia", "frobnicate": 1,
                                      "polynomial": SQ_MINUS_2})
    assert main([cfg]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError"
    assert "frobnicate" in err["message"]


def test_unknown_mode(tmp_path):
    cfg = _write(tmp_path, "c.json", {"mode": "frobnicate"})
    assert main([cfg]) == 2


def test_unknown_param_for_mode(tmp_path):
    cfg = _write(tmp_path, "c.json", {"mode": "julia",
                                      "polynomial": SQ_MINUS_2,
                                      "params": {"depth": 3}})
    assert main([cfg]) == 2


def test_missing_polynomial(tmp_path):
    cfg = _write(tmp_path, "c.json", {"mode": "green"})
    assert main([cfg]) == 2


def test_unreadable_config(tmp_path):
    assert main([str(tmp_path / "nope.json")]) == 2


def test_numerical_failure_exit_code(tmp_path, capsys):
    # the equilibrium target 0 is exceptional for q^2
    cfg = _write(tmp_path, "c.json", {
        "mode": "equilibrium",
        "polynomial": {"coeffs": [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]]},
        "params": {"target": 0.0, "depth": 4},
        "out": str(tmp_path / "out")})
    assert main([cfg]) == 3
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ExceptionalTarget"


def test_julia_pgm_output(tmp_path):
    cfg = _write(tmp_path, "c.json", {
        "mode": "julia", "polynomial": SQ_MINUS_2,
        "grid": {"center": [0, 0], "half_width": 2.0, "h": 0.0625},
        "params": {"max_iter": 40}, "out": str(tmp_path / "out")})
    assert main([cfg]) == 0
    pgm = (tmp_path / "out" / "julia.pgm").read_bytes()
    assert pgm.startswith(b"P5\n65 65\n255\n")
    assert len(pgm) == len(b"P5\n65 65\n255\n") + 65 * 65
    man = json.loads((tmp_path / "out" / "julia.manifest.json").read_text())
    assert "out" not in man["config"]
    assert man["config"]["mode"] == "julia"


def test_mode_override_flag(tmp_path):
    cfg = _write(tmp_path, "c.json", {
        "mode": "julia", "polynomial": SQ_MINUS_2,
        "grid": {"center": [0, 0], "half_width": 2.0, "h": 0.125},
        "out": str(tmp_path / "out")})
    assert main([cfg, "--mode", "green"]) == 0
    assert (tmp_path / "out" / "green.pgm").exists()


def test_equilibrium_outputs(tmp_path):
    out = tmp_path / "out"
    cfg = _write(tmp_path, "c.json", {
        "mode": "equilibrium", "polynomial": SQ_MINUS_2,
        "params": {"target": 0.0, "depth": 6}, "out": str(out)})
    assert main([cfg]) == 0
    measure = json.loads((out / "measure.json").read_text())
    mass = sum(a["weight"] for a in measure["atoms"])
    assert abs(mass - 1.0) < 1e-9
    csv = (out / "measure.csv").read_text().splitlines()
    assert csv[0] == "kind,alpha,rho,weight"
    assert len(csv) == len(measure["atoms"]) + 1


def test_general_gap_mode(tmp_path):
    out = tmp_path / "out"
    cfg = _write(tmp_path, "c.json", {
        "mode": "general-gap",
        "polynomial": {"coeffs": [[0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0]]},
        "params": {"a": 0.0, "b": 1.0, "n_list": [2, 3]}, "out": str(out)})
    assert main([cfg]) == 0
    rows = (out / "gap.csv").read_text().splitlines()
    assert rows[0].startswith("n,")
    assert len(rows) == 3
