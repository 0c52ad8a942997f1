import json
import math

import pytest

from nem.mixture import MixtureXi
from nem.theory import build_theory_report


def test_mixed_model_report_fields():
    xi = MixtureXi((1.0, 1.0, 0.0, 1.0))
    rep = build_theory_report(xi, alpha=0.3)
    # the existence bound needs a flat origin, so it is unavailable here
    assert math.isnan(rep.alpha_lb) and "alpha_lb" in rep.notes
    assert math.isnan(rep.alpha_ub2) and "pure" in rep.notes["alpha_ub2"]
    assert rep.alpha_ub1 > 0.0
    assert 0.0 <= rep.eps0 <= 1.0
    assert rep.alpha_hd == pytest.approx(0.9255, abs=2e-3)
    assert rep.alpha_tp > rep.alpha_hd
    assert rep.e_star > 1.0
    assert rep.q_star == min(rep.q_rs, rep.q0)
    assert rep.gamma_star < 0.0
    assert rep.u_rs == 0.0
    assert rep.A_xi == pytest.approx(8.0 / 3.0, abs=1e-7)
    assert rep.u_lb <= rep.ode_u[-1] <= rep.u_ub + 1e-3
    assert len(rep.ode_t) == len(rep.ode_u) == 1001


def test_pure_model_report_fields():
    xi = MixtureXi((1.0, 0.0, 0.0, 1.0))
    rep = build_theory_report(xi, alpha=0.5)
    assert rep.alpha_lb == pytest.approx(1.0076, abs=2e-3)
    assert rep.alpha_ub2 == pytest.approx(1.0477, abs=2e-3)
    assert rep.alpha_lb <= rep.alpha_ub2 <= rep.alpha_ub1
    # overlap quantities need xi'(0) > 0, unavailable on a pure model
    assert math.isnan(rep.q_rs) and "q_rs" in rep.notes
    assert math.isnan(rep.alpha_tp) and "alpha_tp" in rep.notes
    assert rep.alpha_hd == pytest.approx(1.0151, abs=2e-3)


def test_pure_form_detects_scaling():
    plain = build_theory_report(MixtureXi((1.0, 0.0, 0.0, 1.0)), alpha=0.5)
    scaled = build_theory_report(MixtureXi((2.0, 0.0, 0.0, 2.0)), alpha=0.5)
    assert scaled.alpha_ub2 == pytest.approx(plain.alpha_ub2, rel=1e-9)


def test_json_round_trip_and_nan_encoding():
    rep = build_theory_report(MixtureXi((1.0, 1.0, 0.0, 1.0)), alpha=0.3)
    payload = json.loads(rep.to_json())
    assert payload["format"].startswith("nem-theory-report")
    assert payload["alpha_lb"] == "nan"
    assert payload["alpha_hd"] == pytest.approx(rep.alpha_hd)
    assert payload["ode_u"][0] == pytest.approx(0.5)
    assert "alpha_lb" in payload["notes"]


def test_csv_layout():
    rep = build_theory_report(MixtureXi((1.0, 1.0)), alpha=0.2)
    lines = rep.to_csv().splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "field,value"
    assert any(line.startswith("alpha_tp,") for line in lines)
    blank = lines.index("")
    assert lines[blank + 1] == "t,u"
    assert len(lines) - blank - 2 == 1001


def test_linear_model_report():
    rep = build_theory_report(MixtureXi((1.0, 1.0)), alpha=0.2)
    assert rep.alpha_hd == 0.0  # no curvature for the descent to use
    assert rep.alpha_tp == pytest.approx(0.5, abs=2e-3)
    assert math.isnan(rep.alpha_gd) and "alpha_gd" in rep.notes
    assert rep.q0 == pytest.approx(0.25, abs=1e-9)
    assert all(u == 0.5 for u in rep.ode_u)


def test_rejects_bad_alpha():
    with pytest.raises(ValueError):
        build_theory_report(MixtureXi((1.0, 1.0)), alpha=0.0)
