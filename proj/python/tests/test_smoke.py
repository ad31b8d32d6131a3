import math

import numpy as np
import pytest

import ibcsim


def test_spectrum_and_worst_case():
    s = ibcsim.SingularSpectrum.power_law(1.0, 4)
    assert s.values == pytest.approx([1, 0.5, 1 / 3, 0.25])
    assert ibcsim.worst_case_error(s, 2) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        ibcsim.SingularSpectrum.explicit_values([1, 2])


def test_optimal_algorithm_and_radius():
    p = ibcsim.LinearProblem.diagonal([3, 2, 1])
    f = np.ones(3) / math.sqrt(3)
    assert ibcsim.apply_optimal_algorithm(p, 2, f) == pytest.approx([3 / math.sqrt(3), 2 / math.sqrt(3), 0])
    r = ibcsim.radius_nonadaptive(p, np.array([[1.0, 0, 0]]))
    assert r["radius"] == pytest.approx(2.0)
    assert r["kernel_dim"] == 2
    bf = ibcsim.brute_force_worst_error(p, 1, seed=1, samples=2000)
    assert 2 * (1 - 1e-9) - 1e-15 <= bf <= 2
    assert ibcsim.radius_recombination_check(p, np.eye(3)[:2], np.array([[1.0, 0], [1, 1]]))


def test_weighted_problem_matches_numpy_svd():
    rng = np.random.default_rng(0)
    s = rng.normal(size=(4, 5))
    w = rng.uniform(0.5, 2, size=5)
    p = ibcsim.LinearProblem(s, w)
    ref = np.linalg.svd(s / w, compute_uv=False)
    assert p.spectrum.values[:4] == pytest.approx(ref, rel=1e-12)


def test_randomized_bounds():
    s = ibcsim.SingularSpectrum.explicit_values([1, 1, 1, 1])
    assert ibcsim.avg_case_error_closed_form(s, 2, 4) == pytest.approx(math.sqrt(0.5))
    est = ibcsim.avg_case_error_mc(ibcsim.LinearProblem.from_spectrum(s), 2, 4, seed=3, samples=20000)
    assert abs(est.value - math.sqrt(0.5)) <= 4 * est.standard_error
    assert ibcsim.sandwich_report(ibcsim.SingularSpectrum.power_law(1.0, 4), 1) == pytest.approx((0.125, 0.5))


def test_transform_encoding():
    q = ibcsim.ModelSpace(1.0)
    l1 = ibcsim.SymbolicFunctional([(2.0, 1.0)])
    l2 = ibcsim.SymbolicFunctional([(-1.0, 1.0)])
    l3 = ibcsim.SymbolicFunctional(finite={3: 1.0})
    out, steps = ibcsim.transform_information([l1, l1 + l2, l1 + l3], q)
    assert out[0].is_zero()
    assert out[1] == l2 and out[2] == l3
    assert steps[1]["extension"] == [-1.0]
    ladder = ibcsim.truncated_radius_ladder([l1], q, [16, 64])
    assert ladder[1][2] - ladder[1][1] < ladder[0][2] - ladder[0][1]


def test_l1_case_study():
    value, witness = ibcsim.kernel_polytope_max_l2(np.array([[1.0, -1.0]]))
    assert value == pytest.approx(math.sqrt(0.5))
    assert np.abs(witness) == pytest.approx([0.5, 0.5])
    lo, hi = ibcsim.gelfand_width_bounds(2, 1, 10, 7)
    assert lo == pytest.approx(hi, abs=1e-9)
    assert ibcsim.estimator_exact_variance(np.array([0.5]), 2) == pytest.approx(0.0625)
    rows = ibcsim.rmse_sweep(np.full(4, 0.2), [4, 16], 500, 1)
    assert all(rmse <= env for _, rmse, env in rows)


def test_std_info():
    model = ibcsim.GridModel.random(6, 3, 2)
    e_std, e_all, points = ibcsim.std_vs_all(model, 2)
    assert e_std >= e_all and len(points) == 2
    est = ibcsim.mc_integration(lambda x: 2.0, 50, seed=1)
    assert est.value == 2.0
    proj = ibcsim.project_to_two_point_constraint([0.0, 0.0, 1.0])
    integral = sum(c / (j + 1) for j, c in enumerate(proj))
    assert ibcsim.two_point_exact(proj) == pytest.approx(integral, abs=1e-12)


def test_cli_roundtrip():
    code, out, err = ibcsim.run_cli(["spectrum", "--spectrum", "explicit:3,2,1"])
    assert code == 0, err
    assert out == "n,worst_case_error\n0,3\n1,2\n2,1\n"
    code, _, err = ibcsim.run_cli(["width", "--m", "12", "--n", "1"])
    assert code == 1 and "m ≤ 10" in err
