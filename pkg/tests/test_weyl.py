import math
import os

import numpy as np
import pytest

from src.cli.grid import run_grid_points
from src.model import Singularity
from src.odeflow import DegenerateSamplesError, Growth, GrowthReport, StepCollapseError, log_transform_integrate
from src.settings import OracleSettings
from src.weyl import endpoints
from src.weyl import (
    INCONCLUSIVE,
    NOT_RUN,
    Endpoint,
    RadialProblem,
    SeriesNotConvergedError,
    Verdict,
    WeylOracle,
    estimate_exponent,
    frobenius_exponents,
    seed_solution_near_zero,
)

GRID_ALPHAS = sorted({round(0.05 + 0.1 * k, 2) for k in range(10)} | {0.5})
GRID_PS = (0.0, 0.3, 0.6, 1.5, 2.5)
GRID_QS = (-1.0, 0.0, 1.0, 3.0)
PLANTED_EXPONENTS = (-1.0, -0.48, 0.0, 0.5, 1.0, 2.0)


def _flux(alpha, p=0.0, q=0.0):
    return Singularity("s", (0.0, 0.0), alpha, p, q)


@pytest.mark.parametrize("nu_squared, expected", [
    (0.25, (1.0, 0.0, False)),
    (0.0, (0.5, 0.5, True)),
    (2.25, (2.0, -1.0, False)),
])
def test_frobenius_exponents(nu_squared, expected):
    assert frobenius_exponents(nu_squared) == expected


@pytest.mark.parametrize("mu, expected", [(1.0, (1e-4, 1.0)), (0.0, (1.0, 0.0))])
def test_free_seed(mu, expected):
    u, du = seed_solution_near_zero(RadialProblem(0.25, 0.0, 0j), mu, 1e-4)
    assert u == pytest.approx(expected[0], rel=1e-12)
    assert du == pytest.approx(expected[1], abs=1e-12)


def test_seed_is_consistent_with_integration():
    problem = RadialProblem(2.25, 1.0, 1j)
    seed = seed_solution_near_zero(problem, 2.0, 1e-3)
    traj = log_transform_integrate(problem.to_ode(), 1e-3, seed, 1e-2, 1e-10)
    u, du = seed_solution_near_zero(problem, 2.0, 1e-2)
    assert abs(traj.final_state[0] - u) <= 1e-7 * abs(u)
    assert abs(traj.final_state[1] - du) <= 1e-7 * abs(du)


def test_log_branch_only_for_double_root():
    with pytest.raises(ValueError):
        seed_solution_near_zero(RadialProblem(0.25, 0.0, 1j), 1.0, 1e-4, log_branch=True)
    u, _ = seed_solution_near_zero(RadialProblem(0.0, 0.0, 1j), 0.5, 1e-4, log_branch=True)
    assert u.real == pytest.approx(1e-2 * math.log(1e-4), rel=1e-6)


@pytest.mark.parametrize("problem, mu, r0", [
    # |lambda| r0² = 2500: 60 termos não bastam
    (RadialProblem(0.25, 0.0, 1j), 1.0, 50.0),
    # expoentes 1 e 0 diferem por inteiro e q != 0 exige o termo logarítmico
    (RadialProblem(0.25, 1.0, 1j), 0.0, 1e-3),
])
def test_series_not_converged(problem, mu, r0):
    with pytest.raises(SeriesNotConvergedError) as excinfo:
        seed_solution_near_zero(problem, mu, r0)
    assert excinfo.value.code == "SERIES_NOT_CONVERGED"


def test_seed_rejects_foreign_exponent():
    with pytest.raises(ValueError):
        seed_solution_near_zero(RadialProblem(0.25), 0.3, 1e-4)


@pytest.mark.parametrize("mu", PLANTED_EXPONENTS)
def test_estimate_planted_exponent(mu):
    r = np.logspace(-8, -4, 129)
    mu_hat, residual = estimate_exponent(list(zip(r, 3.0 * r ** mu)))
    assert mu_hat == pytest.approx(mu, abs=0.05)
    assert residual < 1e-9


@pytest.mark.parametrize("samples", [
    [(1e-8 * 10 ** k, 1.0) for k in range(5)],
    [(r, 0.0) for r in np.logspace(-8, -4, 20)],
    [(r, 1.0) for r in np.logspace(-5, -4, 20)],
])
def test_estimate_exponent_degenerate(samples):
    with pytest.raises(DegenerateSamplesError):
        estimate_exponent(samples)


def test_free_harmonic_is_limit_circle_at_zero(oracle):
    report = oracle.count_l2_solutions_at_zero(RadialProblem(0.25, 0.0, 1j))
    assert report.endpoint is Endpoint.ZERO
    assert report.verdict is Verdict.LIMIT_CIRCLE
    assert report.l2_count == 2
    assert all(v["l2"] for v in report.evidence["solutions"])
    assert report.evidence["recessive_mu_hat"] == pytest.approx(1.0, abs=0.05)


def test_strong_coupling_is_limit_point_at_zero(oracle):
    report = oracle.count_l2_solutions_at_zero(RadialProblem(2.25, 0.0, 1j))
    assert report.verdict is Verdict.LIMIT_POINT
    assert report.l2_count == 1
    for vote in report.evidence["solutions"]:
        assert vote["mu_hat"] == pytest.approx(-1.0, abs=0.05)
        assert vote["decade_ratio"] > 1.0


def test_double_root_is_resolved_analytically(oracle):
    report = oracle.count_l2_solutions_at_zero(RadialProblem(0.0, 0.0, -1j))
    assert report.l2_count == 2
    assert report.evidence["log_case"] is True
    assert report.trajectories == ()


@pytest.mark.parametrize("problem", [
    RadialProblem(0.25, 0.0, 1j),
    RadialProblem(0.25, 0.0, -1j),
    RadialProblem(4.0, -1.0, 1j),
])
def test_one_decaying_direction_at_infinity(oracle, problem):
    report = oracle.count_l2_solutions_at_infinity(problem)
    assert report.verdict is Verdict.LIMIT_POINT
    assert report.l2_count == 1
    assert sorted(report.evidence["directions"]) == ["DECAYING", "GROWING"]
    if problem.nu_squared == 0.25:
        # u'' = -lambda u: taxa exata Re sqrt(-lambda) = 1/sqrt(2)
        assert report.evidence["growth_rate"] == pytest.approx(1 / math.sqrt(2), abs=0.05)


@pytest.mark.parametrize("problem, expected", [
    (RadialProblem(0.25, 0.0, 1j), 1),
    (RadialProblem(1.44, 0.0, 1j), 0),
    (RadialProblem(0.25, 7.0, 1j), 1),
    (RadialProblem(1.0, 0.0, 1j), 0),
])
def test_numerical_harmonic_index(oracle, problem, expected):
    assert oracle.numerical_harmonic_index(problem) == expected


def test_boundary_band_is_inconclusive(oracle):
    verdict = oracle.evaluate_harmonic(RadialProblem(1.005, 0.0, 1j), ell=3)
    assert verdict.is_inconclusive
    assert verdict.to_dict() == {"ell": 3, "nu_squared": 1.005, "m0": None, "minf": None,
                                 INCONCLUSIVE: "boundary-band"}
    assert oracle.numerical_harmonic_index(RadialProblem(0.995, 0.0, -1j)) == INCONCLUSIVE


@pytest.mark.parametrize("count", ["count_l2_solutions_at_zero", "count_l2_solutions_at_infinity"])
def test_real_lambda_is_rejected(oracle, count):
    with pytest.raises(ValueError):
        getattr(oracle, count)(RadialProblem(0.25, 0.0, 0.0))


@pytest.mark.parametrize("alpha, p, q, expected", [
    (0.5, 0.0, 0.0, 2),
    (0.5, 0.8, 0.0, 0),
    (0.0, 0.0, 0.0, 1),
    (0.2, 0.5, 1.0, 1),
])
def test_numerical_singularity_index(oracle, alpha, p, q, expected):
    result = oracle.numerical_singularity_index(_flux(alpha, p, q))
    assert result.total == expected
    assert result.agreement is True
    assert result.to_dict()["total"] == expected


def test_comparison_can_be_skipped(oracle):
    result = oracle.numerical_singularity_index(_flux(0.5), -1j, compare=False)
    assert result.lambda_label == "-i"
    assert result.agreement == NOT_RUN


def test_boundary_singularity_is_boundary_inconclusive(oracle):
    # l = 0: nu² = 0.3² + 0.905 = 0.995, dentro da faixa de fronteira
    result = oracle.verify_singularity(_flux(0.3, 0.905))
    assert result.status == "boundary-inconclusive"
    assert result.plus.boundary_only and result.minus.boundary_only
    assert result.to_dict()["results"][0]["total"] == INCONCLUSIVE


def test_conjugation_symmetry(oracle):
    result = oracle.verify_singularity(_flux(0.3, 0.2, 1.0))
    assert result.conjugation_symmetric
    assert result.status == "agree"
    assert [r["lambda"] for r in result.to_dict()["results"]] == ["+i", "-i"]


def test_wronskian_drift_is_small(oracle):
    verdict = oracle.evaluate_harmonic(RadialProblem(0.69, 1.0, 1j))
    for endpoint in verdict.endpoints:
        assert endpoint.evidence["wronskian_initial"] == pytest.approx(1.0)
        assert endpoint.evidence["wronskian_drift"] < 1e-8


def test_trajectory_dump(tmp_path):
    oracle = WeylOracle(OracleSettings(), dump_dir=tmp_path)
    oracle.numerical_singularity_index(_flux(0.5, 0.8), 1j)
    names = {path.name for path in tmp_path.glob("*.csv")}
    assert "s_ell0_plus_zero_0.csv" in names
    assert "s_ell-1_plus_infinity_1.csv" in names


@pytest.mark.slow
def test_agreement_grid():
    points = [(a, p, q) for a in GRID_ALPHAS for p in GRID_PS for q in GRID_QS]
    jobs = max(1, min(4, os.cpu_count() or 1))
    rows = run_grid_points(points, OracleSettings(), jobs)
    evaluated = [row for row in rows if row.agree != "skipped"]
    assert len(evaluated) >= 200
    assert [row.alpha for row in rows] == [a for a, _, _ in points]
    assert all(row.agree == "true" for row in evaluated), [row.as_tuple() for row in evaluated
                                                           if row.agree != "true"]
    assert all(row.oracle_plus == row.oracle_minus for row in evaluated)
    assert max(row.wronskian_drift for row in evaluated) < 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("alpha, p, q", [(0.05, 0.0, 0.0), (0.85, 0.3, 3.0), (0.5, 2.5, -1.0)])
def test_wronskian_drift_on_grid_points(oracle, alpha, p, q):
    for lam in (1j, -1j):
        for _, problem in oracle.radial_problems(_flux(alpha, p, q), lam):
            verdict = oracle.evaluate_harmonic(problem)
            assert not verdict.is_inconclusive
            for endpoint in verdict.endpoints:
                if "wronskian_drift" in endpoint.evidence:
                    assert endpoint.evidence["wronskian_drift"] < 1e-8


@pytest.mark.parametrize("nu_squared, q, expected", [
    (0.25, 0.0, (1.5, 40.5)),
    (0.25, 7.0, (21.0, 60.0)),
    (100.25, 0.0, (3 * math.sqrt(100.25), 3 * math.sqrt(100.25) + 39.0)),
])
def test_tail_window(nu_squared, q, expected):
    start, end = endpoints.tail_window(RadialProblem(nu_squared, q, 1j), OracleSettings())
    assert (start, end) == pytest.approx(expected)


@pytest.mark.parametrize("nu_squared", [80.0, 100.25])
def test_strong_coupling_has_one_decaying_direction(oracle, nu_squared):
    report = oracle.count_l2_solutions_at_infinity(RadialProblem(nu_squared, 0.0, 1j))
    assert report.verdict is Verdict.LIMIT_POINT
    assert report.evidence["directions"][0] == "GROWING"
    assert report.evidence["growth_rate"] == pytest.approx(1 / math.sqrt(2), abs=0.05)


def test_decaying_largest_singular_value_is_not_counted(monkeypatch, oracle):
    def decaying(r, log_abs):
        return GrowthReport(Growth.DECAYING, -0.7, -0.7, -5.0, 1e-6, 1.0)

    monkeypatch.setattr(endpoints, "classify_growth", decaying)
    report = oracle.count_l2_solutions_at_infinity(RadialProblem(0.25, 0.0, 1j))
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.reason == "no-decaying-direction"
    assert report.l2_count is None


def _collapse(*args, **kwargs):
    raise StepCollapseError("passo colapsou")


@pytest.mark.parametrize("count, target", [
    ("count_l2_solutions_at_zero", "log_transform_integrate"),
    ("count_l2_solutions_at_infinity", "integrate"),
])
def test_integration_failure_is_inconclusive(monkeypatch, oracle, count, target):
    monkeypatch.setattr(endpoints, target, _collapse)
    report = getattr(oracle, count)(RadialProblem(2.25, 0.0, 1j))
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.reason == "integration-failure"
    assert report.evidence["error"] == "STEP_COLLAPSE"

    verdict = oracle.evaluate_harmonic(RadialProblem(2.25, 0.0, 1j))
    assert verdict.reason == "integration-failure"
    assert oracle.numerical_harmonic_index(RadialProblem(2.25, 0.0, 1j)) == INCONCLUSIVE


@pytest.mark.parametrize("scale", [1e-40, 1e95])
@pytest.mark.parametrize("nu_squared", [0.25, 2.25])
def test_basis_scale_does_not_change_verdicts(monkeypatch, oracle, nu_squared, scale):
    problem = RadialProblem(nu_squared, 0.0, 1j)
    before = (oracle.count_l2_solutions_at_zero(problem), oracle.count_l2_solutions_at_infinity(problem))
    monkeypatch.setattr(endpoints, "BASIS", ((scale + 0j, 0j), (0j, scale + 0j)))
    after = (oracle.count_l2_solutions_at_zero(problem), oracle.count_l2_solutions_at_infinity(problem))

    for old, new in zip(before, after):
        assert new.verdict is old.verdict
        assert new.l2_count == old.l2_count
    if scale > 1.0:
        assert after[1].evidence["renormalizations"] > 0


@pytest.mark.slow
def test_strong_inverse_square_singularity(oracle):
    result = oracle.numerical_singularity_index(_flux(0.5, 100.0))
    assert all(not h.is_inconclusive for h in result.harmonics)
    assert result.total == 0
    assert result.agreement is True
