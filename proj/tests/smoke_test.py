"""End-to-end smoke checks for the python bindings."""

import math

import pytest

import blockpole as bp


def test_missile_model_shapes():
    model = bp.missile_model()
    assert model["A"].shape == (6, 6)
    assert model["B"].shape == (6, 3)
    assert model["C"].shape == (3, 6)
    assert model["D"].shape == (3, 3)
    assert len(model["spectrum"]) == 6
    assert model["A"][1][0] == pytest.approx(-1.1462)


def test_design_places_the_spectrum():
    model = bp.missile_model()
    out = bp.design_2dof(model["A"], model["B"], model["C"], model["D"],
                         model["spectrum"], form="diagonal")
    assert out["K_FB"].shape == (3, 6)
    assert out["K_FF"].shape == (3, 3)
    assert out["form"] == "diagonal"
    assert out["placement_error"] < 1e-6


def test_norms_and_measures():
    model = bp.missile_model()
    out = bp.design_2dof(model["A"], model["B"], model["C"], model["D"],
                         model["spectrum"], form="diagonal")
    norms = bp.matrix_norms(out["K_FB"])
    assert norms["two"] == pytest.approx(31.98, rel=0.05)

    acl = model["A"] - model["B"] @ out["K_FB"]
    sens = bp.eigen_sensitivities(acl)
    assert len(sens["s"]) == 6
    assert all(s >= 1.0 - 1e-9 for s in sens["s"])

    stab = bp.stability_measures(acl)
    assert 0.0 < stab["m3"] < 1.0


def test_step_response_and_specs():
    model = bp.missile_model()
    out = bp.design_2dof(model["A"], model["B"], model["C"], model["D"],
                         model["spectrum"], form="diagonal")
    traj = bp.step_response(model["A"], model["B"], model["C"], model["D"],
                            out["K_FB"], out["K_FF"], [1.0, 1.0, 1.0],
                            horizon=3.0, dt=1e-3)
    assert not traj["diverged"]
    assert len(traj["t"]) == 3001
    specs = bp.time_specs(traj["t"], traj["y"], [1.0, 1.0, 1.0], 0)
    assert specs["final_value"] == pytest.approx(1.0, abs=1e-6)
    assert specs["percent_overshoot"] == pytest.approx(17.34, rel=0.05)
    assert math.isclose(specs["settling_time"], 0.671, rel_tol=0.05)


def test_tracking_error_under_perturbation():
    model = bp.missile_model()
    out = bp.design_2dof(model["A"], model["B"], model["C"], model["D"],
                         model["spectrum"], form="diagonal")
    da = bp.reference_perturbation()
    err = bp.tracking_error(model["A"], model["B"], model["C"], model["D"],
                            out["K_FB"], out["K_FF"], da, [1.0, 1.0, 1.0])
    assert abs(err["exact"][0]) == pytest.approx(0.0024, rel=0.15)


def test_latent_roots_of_scalar_quadratic():
    # lambda^2 - 3 lambda + 2 = (lambda - 1)(lambda - 2)
    roots = bp.latent_roots([[[-3.0]], [[2.0]]])
    got = sorted(r.real for r in roots)
    assert got == pytest.approx([1.0, 2.0])


def test_reference_gains_round_trip():
    for form in ("diagonal", "controller", "observer"):
        g = bp.reference_gains(form)
        assert g["K_FB"].shape == (3, 6)
        assert g["K_FF"].shape == (3, 3)


def test_bad_inputs_raise():
    model = bp.missile_model()
    with pytest.raises(ValueError):
        bp.design_2dof(model["A"], model["B"], model["C"], model["D"],
                       model["spectrum"], form="pentagonal")
    with pytest.raises(ValueError):
        bp.reference_gains("pentagonal")
