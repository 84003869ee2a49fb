import math

import pytest

import outagekit

PPP = """
[model]
type = ppp
intensity = 1
[mac]
type = aloha
[channel]
theta = 2
[sweep]
eta = 0.1, 0.05
replications = 4000
seed = 3
"""


def test_closed_forms():
    assert outagekit.success_ppp_aloha(1.0, 0.05, 2.0, 4.0) == pytest.approx(0.70544, abs=1e-5)
    assert outagekit.epstein_zeta(1, 4.0) == pytest.approx(math.pi**4 / 45, rel=1e-12)
    b = outagekit.tdma_bounds(1, 2, 2.0, 4.0)
    assert b["lower"] <= b["exact"] <= b["upper"]


def test_asymptotic():
    a = outagekit.asymptotic(PPP)
    assert a["gamma"] == pytest.approx(6.978864, rel=1e-6)
    assert a["kappa"] == 1.0


def test_simulate_matches_closed_form():
    r = outagekit.simulate(PPP)
    assert len(r["points"]) == 2
    for p in r["points"]:
        assert abs(p["p_success"] - p["exact"]) <= 4 * p["std_err"]


def test_errors_map_to_python():
    with pytest.raises(outagekit.ConfigParseError):
        outagekit.simulate("[channel]\ncolour = red\n")
    with pytest.raises(outagekit.ParameterError):
        outagekit.asymptotic("[channel]\nalpha = 2\n")
    with pytest.raises(outagekit.Error):
        outagekit.reproduce_figure("nope", "/tmp/outagekit_py")


def test_figure(tmp_path):
    files = outagekit.reproduce_figure("8", str(tmp_path))
    assert len(files) == 9
    assert "8" in outagekit.figure_ids()
