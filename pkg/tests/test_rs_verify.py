import numpy as np
import pytest

from koflow import clifford as cl
from koflow.errors import ValidationError
from koflow.rs_verify import (RSProblem, analytic_profiles,
                              assemble_rs_operator, assemble_rs_operator_alt,
                              convergence_study, default_switching,
                              numeric_kernel, switching_direction, verify_rs)

STANDARD = cl.CliffordRep(0, 1, 2, F=(cl.L1,))


def test_default_switching():
    assert default_switching(-3.0) == 1.0
    assert default_switching(2.0) == -1.0
    assert abs(default_switching(0.5)) < 1e-12
    samples = [default_switching(t) for t in np.linspace(-1, 2, 100)]
    assert max(abs(v) for v in samples) <= 1.0


def test_problem_validation():
    with pytest.raises(ValidationError):
        RSProblem(STANDARD, L=1.0, m=300)
    with pytest.raises(ValidationError):
        RSProblem(STANDARD, L=12.0, m=100)
    with pytest.raises(ValidationError):
        RSProblem(cl.irreducible_rep(1, 0, "+"), L=12.0, m=300)
    with pytest.raises(ValidationError):
        RSProblem(STANDARD, L=12.0, m=300, f=lambda t: 2.0 * default_switching(t))


def test_assembly_structure():
    problem = RSProblem(STANDARD, L=12.0, m=200)
    op = assemble_rs_operator(problem)
    assert op.dimension == STANDARD.n * (2 * problem.m - 1)
    assert np.abs(op.matrix + op.matrix.T).max() == 0.0
    for g in op.lifted_E + op.lifted_F:
        assert np.abs(op.matrix @ g + g @ op.matrix).max() == 0.0
        assert np.abs(g @ g.T - np.eye(op.dimension)).max() < 1e-12
    # the module carries signature (r, s+1); the lifted family has s+1
    # skew generators, i.e. as many as the module itself
    assert len(op.lifted_F) == STANDARD.s


def test_constant_coefficient_has_no_kernel():
    problem = RSProblem(STANDARD, L=12.0, m=200, f=lambda t: 1.0)
    assert switching_direction(problem) == 0
    basis, report = numeric_kernel(assemble_rs_operator(problem))
    assert report["kernel_dim"] == 0
    report_full = verify_rs(problem)
    assert report_full.kernel_dim == 0
    assert report_full.flow_class.value == 0
    assert report_full.agrees


def test_standard_problem_small():
    problem = RSProblem(STANDARD, L=12.0, m=300)
    report = verify_rs(problem)
    assert report.kernel_dim == 2
    assert report.gap_ratio >= 100.0
    assert (report.kernel_class.degree, report.kernel_class.value) == (2, 1)
    assert report.kernel_class == report.flow_class
    assert report.profile_error < 1e-2


def test_doubled_module_kernel():
    double = cl.direct_sum(STANDARD, STANDARD)
    report = verify_rs(RSProblem(double, L=12.0, m=300))
    assert report.kernel_dim == 4
    assert report.kernel_class.value == 0 == report.flow_class.value
    assert report.agrees


def test_degree_zero_module():
    module = cl.irreducible_rep(2, 1, "+")
    report = verify_rs(RSProblem(module, L=12.0, m=300))
    assert report.kernel_dim == module.n
    assert report.kernel_class.group.value == "Z"
    assert report.kernel_class.value == 1
    assert report.agrees


def test_alternative_normalization_same_class():
    problem = RSProblem(STANDARD, L=12.0, m=300)
    main = verify_rs(problem)
    alt = verify_rs(problem, assemble=assemble_rs_operator_alt)
    assert alt.kernel_dim == main.kernel_dim
    assert alt.kernel_class == main.kernel_class
    assert alt.flow_class == main.flow_class


def test_convergence_study():
    rows = convergence_study(STANDARD, 12.0, [300, 600])
    assert [row["m"] for row in rows] == [300, 600]
    # the square truncation pairs bound states with transpose ghosts
    assert all(row["kernel_dim"] == 2 * STANDARD.n for row in rows)
    assert rows[1]["zero_cluster_max"] < rows[0]["zero_cluster_max"] / 3.0


def test_analytic_profile_orthonormal():
    problem = RSProblem(STANDARD, L=12.0, m=300)
    op = assemble_rs_operator(problem)
    profiles = analytic_profiles(problem, op)
    gram = profiles.T @ profiles
    assert np.allclose(np.diag(gram), 1.0)
    with pytest.raises(ValidationError):
        analytic_profiles(RSProblem(STANDARD, L=12.0, m=300, f=lambda t: 1.0), op)


def test_memory_guard():
    big = cl.irreducible_rep(0, 7)
    with pytest.raises(ValidationError):
        RSProblem(big, L=12.0, m=70000)
        assemble_rs_operator(RSProblem(big, L=12.0, m=70000))
