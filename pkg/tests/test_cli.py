import json
import subprocess
import sys

import numpy as np
import pytest

from lyapgap.chain import two_state_chain
from lyapgap.cli import main
from lyapgap.corpus import add_circulation, exponential_lyapunov, random_metropolis_chain


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture(scope="module")
def nonreversible_files(tmp_path_factory):
    rng = np.random.default_rng(3)
    chain, target = random_metropolis_chain(rng, 8, shape="laplace", scale=0.6)
    nr = add_circulation(chain, target, rng, strength=0.9)
    d = tmp_path_factory.mktemp("chains")
    cpath, vpath = d / "nr.json", d / "v.json"
    cpath.write_text(json.dumps(nr.to_dict()))
    vpath.write_text(json.dumps(exponential_lyapunov(target, 0.8).tolist()))
    return str(cpath), str(vpath), exponential_lyapunov(target, 0.8)


def test_analyze_example(capsys):
    code, rep = run(capsys, "analyze", "example1.json", "--eps", "0.1",
                    "--lyapunov", "[1,3]", "--set", "0")
    assert code == 0
    np.testing.assert_allclose(rep["exact"]["eigenvalues"], [1.0, -0.8], atol=1e-12)
    assert rep["reference_certificate"]["beta_plus"] == 1 / 14
    assert rep["reference_certificate"]["drift_check"]["passed"]
    assert rep["sound"]
    # the chain is not PSD, so no Theorem1+PSD route; Doeblin and exact routes remain
    routes = {b["route"] for b in rep["bounds"]}
    assert routes == {"ExactSpectrum", "Doeblin"}
    assert not rep["poincare"]["psd"]


def test_analyze_fixed_constants(capsys):
    code, rep = run(capsys, "analyze", "example1", "--lyapunov", "[1,3]", "--set", "0",
                    "--lambda", "0.5", "--b", "3")
    assert code == 0 and rep["poincare"]["beta_plus"] == 1 / 14


def test_analyze_file_and_level_set(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(two_state_chain(0.2).to_dict()))
    code, rep = run(capsys, "analyze", str(path), "--lyapunov", "[1,3]", "--level-set", "2")
    assert code == 0 and rep["certificates"]["drift"]["K"] == [0]


def test_analyze_sweep(capsys):
    code = main(["analyze", "example1", "--lyapunov", "[1,3]", "--sweep-level-sets"])
    rep = json.loads(capsys.readouterr().out)
    assert code == 0 and "sweep" in rep


def test_analyze_nonreversible_requires_flag(capsys, nonreversible_files):
    cpath, vpath, _ = nonreversible_files
    code, rep = run(capsys, "analyze", cpath)
    assert code == 1 and rep["error"]["kind"] == "NotReversible"


def test_analyze_nonreversible_route(capsys, nonreversible_files):
    cpath, vpath, V = nonreversible_files
    code, rep = run(capsys, "analyze", cpath, "--nonreversible", "--lyapunov", vpath,
                    "--sweep-level-sets")
    assert code == 0
    routes = {b["route"] for b in rep["bounds"]}
    assert "Prop2_PdaggerP" in routes
    assert rep["checks"]["PdaggerP"]["drift"]["passed"]
    assert rep["checks"]["PdaggerP"]["minorization"]["passed"]
    assert rep["sound"]


def test_error_json_on_bad_input(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"P": [[0.5, 0.6], [0.4, 0.4]]}))
    code, rep = run(capsys, "analyze", str(path))
    assert code == 1 and rep["error"]["kind"] == "NonStochastic" and rep["error"]["detail"]
    code, rep = run(capsys, "analyze", "missing.json")
    assert code == 1 and rep["error"]["kind"] == "InvalidInput"


def test_certify_fit_and_verify(capsys):
    code, rep = run(capsys, "certify", "example1", "--lyapunov", "[1,3]", "--set", "0")
    assert code == 0 and rep["minorization"]["alpha"] == 1.0
    code, rep = run(capsys, "certify", "example1",
                    "--drift", '{"V": [1, 3], "K": [0], "lambda": 0.5, "b": 3}',
                    "--minorization", '{"K": [0], "alpha": 1.5, "nu": [0.1, 0.9]}')
    assert code == 1 and rep["drift"]["passed"] and not rep["minorization"]["passed"]


def test_ou(capsys, tmp_path):
    out = tmp_path / "ou.csv"
    code, rep = run(capsys, "ou", "--a", "0.5", "--sigma", "1", "--grid", "401", "--L", "10",
                    "--out", str(out))
    assert code == 0
    np.testing.assert_allclose(rep["spectrum"]["eigenvalues"][:4], 0.5 ** np.arange(4), atol=5e-3)
    assert rep["bounds"]["theorem1"]["norm_bound"] == pytest.approx(0.98363672, abs=1e-8)
    assert rep["bounds"]["printed_formula_norm_bound"] == pytest.approx(0.96831053, abs=1e-8)
    assert rep["comparison"]["sound"]
    assert out.read_text().startswith("k,eigenvalue,predicted\n")
    code, rep9 = run(capsys, "ou", "--a", "0.9")
    assert code == 0 and rep9["spectrum"]["op_norm_L20"] < rep["spectrum"]["op_norm_L20"]


def test_ou_too_narrow(capsys):
    code, rep = run(capsys, "ou", "--a", "0.2", "--L", "5")
    assert code == 1 and rep["error"]["kind"] == "GridTooNarrow"


def test_diffmap(capsys, tmp_path):
    out = tmp_path / "dm.csv"
    code, rep = run(capsys, "diffmap", "--potential", "shifted_quadratic", "--epsilon", "0.1",
                    "--lambda0", "0.5", "--R", "2.449489742783178", "--grid", "321", "--L", "8",
                    "--out", str(out))
    assert code == 0
    assert rep["assumption_U"]["passed"] and rep["spectrum"]["psd"]
    assert rep["reversible"]["reversible"] and rep["comparison"]["sound"]
    assert len(out.read_text().splitlines()) == 322


def test_diffmap_errors(capsys):
    code, rep = run(capsys, "diffmap", "--epsilon", "0.3")
    assert code == 1 and rep["error"]["kind"] == "EpsilonOutOfRange"
    code, rep = run(capsys, "diffmap", "--potential", "flat")
    assert code == 1 and rep["error"]["kind"] == "AssumptionUViolated"


def test_diffmap_potential_params(capsys):
    code, rep = run(capsys, "diffmap", "--potential", "lipschitz_plus_quadratic",
                    "--param", "c=1", "--param", "delta=1", "--epsilon", "0.05",
                    "--lambda0", "0.2", "--R", "4", "--L", "12", "--grid", "481")
    assert code == 0 and rep["comparison"]["sound"]


def test_simulate(capsys, tmp_path):
    prefix = tmp_path / "s"
    code, rep = run(capsys, "simulate", "example1", "--start", "0", "--beta", "exact",
                    "--N", "60", "--out", str(prefix))
    assert code == 0 and rep["beta"] == pytest.approx(0.2)
    rows = (tmp_path / "s_tv.csv").read_text().strip().splitlines()[1:]
    for row in rows:
        _, v, e = map(float, row.split(","))
        assert v <= e + 1e-9
    assert (tmp_path / "s_moment.csv").exists()


def test_simulate_from_stationary_and_certified(capsys):
    code, rep = run(capsys, "simulate", "example1", "--mu0", "[0.5, 0.5]", "--N", "10")
    assert code == 0 and rep["tv"]["final_value"] == 0.0
    code, rep = run(capsys, "simulate", "example1", "--beta", str(1 / 14), "--N", "100")
    assert code == 0 and rep["tv"]["holds"] and rep["tv"]["worst_slack"] >= 0


def test_simulate_route_beta(capsys):
    code, rep = run(capsys, "simulate", "example1", "--beta", "Doeblin", "--N", "50",
                    "--lyapunov", "[1,3]", "--set", "0")
    assert code == 0 and rep["beta"] == pytest.approx(0.1) and rep["beta_source"] == "Doeblin"
    code, rep = run(capsys, "simulate", "example1", "--beta", "Prop1_Psquared",
                    "--lyapunov", "[1,3]", "--set", "0")
    assert code == 1 and rep["error"]["kind"] == "InvalidInput"


def test_counterexample(capsys):
    code, rep = run(capsys, "counterexample", "--eps", "0.01", "0.1", "0.2")
    assert code == 0 and rep["all_certificates_pass"] and rep["constants_independent_of_eps"]
    np.testing.assert_allclose([r["beta_minus_exact"] for r in rep["rows"]], [0.02, 0.2, 0.4],
                               atol=1e-12)
    code, rep = run(capsys, "counterexample", "--eps", "0.25")
    assert code == 0 and rep["rows"][0]["drift"]
    code, rep = run(capsys, "counterexample", "--eps", "0.3")
    assert code == 1 and rep["error"]["kind"] == "EpsOutOfRange"


def test_deterministic_output():
    cmd = [sys.executable, "-m", "lyapgap", "analyze", "example1", "--lyapunov", "[1,3]",
           "--set", "0"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and json.loads(a)["sound"]
