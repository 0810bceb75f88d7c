"""Desk-scale verification that the Clifford index of the one-dimensional
operator D = A(t) (x) omega_{1,1} - d/dt (x) K1 equals the spectral flow
of the coefficient path A(t) = f(t) F_{s+1}.

The operator is compressed onto Hermite functions of t/ell.  In that
basis d/dt is an exact bidiagonal antisymmetric matrix and multiplication
by f becomes f evaluated on the spectral decomposition of the
(tridiagonal) position matrix, so the assembly is exactly skew, the
lifted Clifford generators anticommute with it exactly, and the basis
lives on the whole line (no wall, no Brillouin zone).

The compression is rectangular in the grading S = F_{s+1} (x) L1, which
commutes with every lifted generator while D anticommutes with it, so
that D = [[0, -C^T], [C, 0]].  A symmetric truncation would force the
off-diagonal blocks to be mutual transposes with identical singular
values: every bound state then acquires a ghost partner of the opposite
class at the same singular value and the computed kernel class cancels
to zero (local grid stencils suffer the same cancellation through their
sign-alternating doubler branch, whose effective coefficient must switch
sign somewhere).  Keeping one extra basis level in the bound sector
gives C Fredholm index dim(V): the ghost branch leaks into the extra
retained level and is pushed to order-one singular values, leaving
exactly the physical kernel.

The kernel is compared, as a Clifford module, against the flow of the
coefficient path and against the analytic bound-state profile.

Convention note: pairing the same coefficient family against the line's
Dirac class in bivariant K-theory produces the NEGATIVE of the flow; only
the direct (unsigned-convention) equality above is asserted here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .abs_index import KOClass, abs_class
from .clifford import K1, K2, L1, OMEGA_11, CliffordRep, check_relations
from .errors import AmbiguousKernelError, ValidationError
from .flow import SkewPath, spectral_flow
from .numerics import split_zero_cluster

DIM_GUARD = 1_000_000


def default_switching(t: float) -> float:
    """f = 1 on (-inf, 0], -1 on [1, inf), quintic smoothstep between."""
    if t <= 0.0:
        return 1.0
    if t >= 1.0:
        return -1.0
    smooth = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    return 1.0 - 2.0 * smooth


@dataclass(frozen=True)
class RSProblem:
    """A finite module carrying A(t) = f(t) F_{s+1}, with basis parameters.

    `L` sets the Hermite length scale ell = 1.3 / sqrt(L); larger L
    squeezes the basis, which slows the kernel's spectral convergence
    into a cleanly measurable range (the bound profile decays like
    e^-|t|, resolved by a Gaussian-weighted basis of m functions at rate
    e^(-c ell sqrt(2m))).
    """

    module: CliffordRep          # signature (r, s+1)
    L: float = 12.0
    m: int = 1200
    f: Callable[[float], float] = default_switching

    def __post_init__(self):
        if self.module.s < 1:
            raise ValidationError("the module needs at least one skew generator")
        if not self.L > 2:
            raise ValidationError(f"length scale must exceed 2, got {self.L}")
        if self.m < 200:
            raise ValidationError(f"need at least 200 basis functions, got {self.m}")
        self.module.validate(1e-10)
        reach = self.scale * np.sqrt(2.0 * self.m)
        values = np.array([self.f(t) for t in np.linspace(-reach, reach, 801)])
        if np.max(np.abs(values)) > 1.0 + 1e-12:
            raise ValidationError("|f| must be bounded by 1")
        if abs(abs(values[0]) - 1.0) > 1e-12 or abs(abs(values[-1]) - 1.0) > 1e-12:
            raise ValidationError("f must saturate to +1 or -1 at both ends")

    @property
    def scale(self) -> float:
        return 1.3 / np.sqrt(self.L)


@dataclass(frozen=True)
class DiscreteOperator:
    """Dense skew matrix of dimension dim(module) * (2m - 1) with its
    lifted Clifford generators (compressed to the same retained basis)."""

    matrix: np.ndarray
    problem: RSProblem
    boundary: str = "Hermite basis on the line, sector-rectangular truncation"
    lifted_E: tuple = field(default=())
    lifted_F: tuple = field(default=())

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _basis_blocks(problem: RSProblem):
    """(derivative matrix, coefficient matrix) in the scaled Hermite basis.

    The position operator is the exact tridiagonal Jacobi matrix; its
    eigendecomposition gives the collocation points, and multiplication
    by f is f evaluated there, rotated back (exactly symmetric).  The
    derivative is the exact antisymmetric bidiagonal matrix, divided by
    the length scale.
    """
    m = problem.m
    ell = problem.scale
    off = np.sqrt(np.arange(1, m) / 2.0)
    theta, u = sla.eigh_tridiagonal(np.zeros(m), off)
    f_nodes = np.array([problem.f(ell * t) for t in theta])
    coeff = (u * f_nodes) @ u.T
    coeff = (coeff + coeff.T) / 2.0
    deriv = np.zeros((m, m))
    idx = np.arange(m - 1)
    deriv[idx, idx + 1] = off / ell
    deriv[idx + 1, idx] = -off / ell
    return deriv, coeff


def _sector_bases(f_last: np.ndarray):
    """Exact orthonormal bases of the two eigenspaces of F_{s+1} (x) L1
    on the cell V (x) R^2 (entries are exact halves).

    Plus sector: columns interleave(eta - F eta, eta + F eta) / 2;
    minus sector: columns interleave(eta + F eta, eta - F eta) / 2.
    """
    nv = f_last.shape[0]
    plus = np.zeros((2 * nv, nv))
    minus = np.zeros((2 * nv, nv))
    for a in range(nv):
        eta = np.zeros(nv)
        eta[a] = 1.0
        plus[0::2, a] = (eta - f_last @ eta) / 2.0
        plus[1::2, a] = (eta + f_last @ eta) / 2.0
        minus[0::2, a] = (eta + f_last @ eta) / 2.0
        minus[1::2, a] = (eta - f_last @ eta) / 2.0
    return plus, minus


def _rectangular_compression(problem: RSProblem, mat_full: np.ndarray,
                             gens_full, bound_sector: int):
    """Compress the full square assembly onto all m levels of the bound
    sector plus m-1 levels of the other sector."""
    module, m = problem.module, problem.m
    f_last = np.array(module.F[-1])
    plus, minus = _sector_bases(f_last)
    keep_full, keep_cut = (plus, minus) if bound_sector > 0 else (minus, plus)
    eye_full = np.eye(m)
    eye_cut = np.eye(m, m - 1)
    basis = np.concatenate(
        [np.kron(eye_full, keep_full), np.kron(eye_cut, keep_cut)], axis=1)
    mat = basis.T @ mat_full @ basis
    gens = tuple(basis.T @ g @ basis for g in gens_full)
    return mat, gens, basis


def switching_direction(problem: RSProblem) -> int:
    """+1 when f descends from +1 to -1, -1 when it ascends, 0 when it
    keeps one sign (no topological defect, hence no index)."""
    reach = problem.scale * np.sqrt(2.0 * problem.m)
    left = problem.f(-reach)
    right = problem.f(reach)
    if left > 0.0 > right:
        return +1
    if left < 0.0 < right:
        return -1
    return 0


def _assemble(problem: RSProblem, cell_mass: np.ndarray, deriv_sign: float,
              cell_deriv: np.ndarray, cell_even: np.ndarray,
              f_new_cell: np.ndarray, bound_sector: int,
              square: bool) -> DiscreteOperator:
    module, m = problem.module, problem.m
    n_total = 2 * module.n * m
    if n_total > DIM_GUARD:
        raise ValidationError(
            f"discrete dimension {n_total} exceeds the memory guard {DIM_GUARD}")
    deriv, coeff = _basis_blocks(problem)
    mat_full = np.kron(coeff, cell_mass) \
        + deriv_sign * np.kron(deriv, np.kron(np.eye(module.n), cell_deriv))
    eye_grid = np.eye(m)
    gens_full = tuple(np.kron(eye_grid, np.kron(g, cell_even)) for g in module.E) \
        + tuple(np.kron(eye_grid, np.kron(g, cell_even)) for g in module.F[:-1]) \
        + (np.kron(eye_grid, np.kron(np.eye(module.n), f_new_cell)),)
    bound_sector *= switching_direction(problem)
    if square or bound_sector == 0:
        mat, gens = mat_full, gens_full
        basis = np.eye(mat_full.shape[0])
    else:
        mat, gens, basis = _rectangular_compression(problem, mat_full,
                                                    gens_full, bound_sector)
    op = DiscreteOperator(matrix=mat, problem=problem,
                          lifted_E=gens[:module.r],
                          lifted_F=gens[module.r:])
    object.__setattr__(op, "_retained_basis", basis)
    return op


def assemble_rs_operator(problem: RSProblem, square: bool = False) -> DiscreteOperator:
    """D = A(t) (x) omega_{1,1} - d/dt (x) K1 in the Hermite basis.

    Exactly skew, with lifted generators E_i (x) omega_{1,1},
    F_k (x) omega_{1,1}, F_{s+1} = -I (x) L1 anticommuting exactly.  For
    the descending switch the analytic kernel cells satisfy
    (F_{s+1} (x) L1) z = +z, so the plus sector keeps the extra basis
    level; a sign-definite coefficient gets the index-zero (square)
    truncation.  `square=True` forces the square truncation, whose
    kernel cluster pairs each bound state with its transpose ghost; its
    cluster magnitude is the honest spectral-convergence measure of the
    basis, which the rectangular kernel (exact zeros by rank count)
    cannot show.
    """
    module = problem.module
    f_last = np.array(module.F[-1])
    return _assemble(problem,
                     cell_mass=np.kron(f_last, OMEGA_11),
                     deriv_sign=-1.0, cell_deriv=K1,
                     cell_even=OMEGA_11, f_new_cell=-L1,
                     bound_sector=+1, square=square)


def assemble_rs_operator_alt(problem: RSProblem, square: bool = False) -> DiscreteOperator:
    """Alternative normalization D' = A(t) (x) K1 + d/dt (x) K2, with
    lifted generators E_i (x) K1, F_k (x) K1, F_{s+1} = I (x) L1.

    Used as a sign-convention cross-check: the two assemblies carry
    conjugate Clifford normalizations and must produce the same class.
    Its kernel cells sit in the opposite sector of the grading.
    """
    module = problem.module
    f_last = np.array(module.F[-1])
    return _assemble(problem,
                     cell_mass=np.kron(f_last, K1),
                     deriv_sign=+1.0, cell_deriv=K2,
                     cell_even=K1, f_new_cell=L1,
                     bound_sector=-1, square=square)


def numeric_kernel(op: DiscreteOperator, tol: float = 1e-4,
                   gap_ratio: float = 100.0, extra: int = 6):
    """Orthonormal kernel basis and the singular-value gap report.

    The smallest singular values come from a partial symmetric eigensolve
    of D^T D; the zero cluster is sigma < tol * sigma_max with a
    mandatory gap ratio to the first survivor.
    """
    mat = op.matrix
    gram = mat.T @ mat
    n = gram.shape[0]
    expect = op.problem.module.n
    k = min(n - 2, expect + extra)
    vals_small, vecs_small = sla.eigh(gram, subset_by_index=[0, k - 1])
    rng = np.random.default_rng(0)
    vec = rng.standard_normal(n)
    vec /= np.linalg.norm(vec)
    top = 0.0
    for _ in range(30):
        vec = gram @ vec
        top = float(np.linalg.norm(vec))
        vec /= top
    smax = float(np.sqrt(top))
    svals = np.sqrt(np.clip(vals_small, 0.0, None))
    kdim = split_zero_cluster(svals / smax, rel_tol=tol, gap_ratio=gap_ratio,
                              label="discrete kernel", abs_floor=0.0)
    if kdim >= k:
        raise AmbiguousKernelError(
            "kernel cluster fills the whole probed window; increase `extra`")
    report = {
        "sigma_max": smax,
        "smallest_singular_values": svals.tolist(),
        "kernel_dim": int(kdim),
        "zero_cluster_max": float(svals[kdim - 1]) if kdim else 0.0,
        "first_nonzero": float(svals[kdim]),
        "gap_ratio": float(svals[kdim] / max(svals[kdim - 1], 1e-300)) if kdim else np.inf,
    }
    return vecs_small[:, :kdim], report


def hermite_values(m: int, points: np.ndarray) -> np.ndarray:
    """Matrix of the first m normalized Hermite functions at the points
    (stable damped recurrence)."""
    phi = np.zeros((points.size, m))
    phi[:, 0] = np.pi ** -0.25 * np.exp(-points ** 2 / 2.0)
    if m > 1:
        phi[:, 1] = np.sqrt(2.0) * points * phi[:, 0]
    for n in range(1, m - 1):
        phi[:, n + 1] = (points * np.sqrt(2.0 / (n + 1)) * phi[:, n]
                         - np.sqrt(n / (n + 1.0)) * phi[:, n - 1])
    return phi


def analytic_profiles(problem: RSProblem, op: DiscreteOperator) -> np.ndarray:
    """Columns: retained-basis coefficients of the analytic kernel vectors
    eta -> u(t) (eta - F eta, eta + F eta)/sqrt(2), u = exp(int_0^t f)."""
    if switching_direction(problem) != 1:
        raise ValidationError(
            "analytic profiles are defined for the descending switch")
    module = problem.module
    ell = problem.scale
    reach = min(ell * np.sqrt(2.0 * problem.m) + 5.0, 60.0)
    y = np.linspace(-reach, reach, 4001)
    w = np.full(y.size, y[1] - y[0])
    w[0] /= 2.0
    w[-1] /= 2.0
    t_pts = ell * y
    f_vals = np.array([problem.f(t) for t in t_pts])
    steps = np.diff(t_pts)
    integral = np.concatenate(
        [[0.0], np.cumsum((f_vals[1:] + f_vals[:-1]) / 2.0 * steps)])
    anchor = np.interp(0.0, t_pts, integral)
    with np.errstate(under="ignore"):
        u_bar = np.exp(integral - anchor)
    phi = hermite_values(problem.m, y)
    u_coef = phi.T @ (w * u_bar)
    f_last = np.array(module.F[-1])
    retained = op._retained_basis
    cols = []
    for a in range(module.n):
        eta = np.zeros(module.n)
        eta[a] = 1.0
        cell = np.zeros(2 * module.n)
        cell[0::2] = (eta - f_last @ eta) / np.sqrt(2.0)
        cell[1::2] = (eta + f_last @ eta) / np.sqrt(2.0)
        col = retained.T @ np.kron(u_coef, cell)
        cols.append(col / np.linalg.norm(col))
    return np.column_stack(cols)


@dataclass(frozen=True)
class RSReport:
    kernel_dim: int
    kernel_class: KOClass
    flow_class: KOClass
    profile_error: float
    gap_ratio: float
    sigma_max: float
    zero_cluster_max: float
    agrees: bool

    def to_json(self) -> dict:
        return {
            "kernel_dim": self.kernel_dim,
            "kernel_class": self.kernel_class.to_json(),
            "flow_class": self.flow_class.to_json(),
            "profile_error": self.profile_error,
            "gap_ratio": self.gap_ratio,
            "sigma_max": self.sigma_max,
            "zero_cluster_max": self.zero_cluster_max,
            "agrees": self.agrees,
        }


def convergence_study(module: CliffordRep, L: float, m_values,
                      f: Callable[[float], float] = default_switching):
    """Zero-cluster magnitude of the square-truncated assembly over a
    sequence of basis sizes.

    The square truncation pairs the bound states with their transpose
    ghosts at the singular value set by the basis's spectral resolution,
    so the cluster magnitude tracks the discretization error and shrinks
    under refinement.
    """
    out = []
    for m in m_values:
        problem = RSProblem(module, L=L, m=int(m), f=f)
        op = assemble_rs_operator(problem, square=True)
        _, report = numeric_kernel(op)
        out.append({"m": int(m),
                    "kernel_dim": report["kernel_dim"],
                    "zero_cluster_max": report["zero_cluster_max"],
                    "first_nonzero": report["first_nonzero"]})
    return out


def coefficient_path(problem: RSProblem) -> SkewPath:
    """The coefficient family rescaled onto [0, 1] past the switching
    region: u -> f(3u - 1) F_{s+1} on the module."""
    module = problem.module
    ctx = CliffordRep(module.r, module.s - 1, module.n,
                      E=module.E, F=module.F[:-1])
    f_last = np.array(module.F[-1])
    return SkewPath(ctx, lambda u: problem.f(3.0 * u - 1.0) * f_last,
                    label="switching coefficient path")


def verify_rs(problem: RSProblem, assemble=assemble_rs_operator) -> RSReport:
    """Check kernel class = flow class = [module], and the bound-state
    profile, for the basis-compressed operator."""
    op = assemble(problem)
    basis, report = numeric_kernel(op)
    kdim = report["kernel_dim"]
    gens_e = [basis.T @ (g @ basis) for g in op.lifted_E]
    gens_f = [basis.T @ (g @ basis) for g in op.lifted_F]
    module = problem.module
    kernel_rep = CliffordRep(module.r, module.s, kdim,
                             E=tuple(gens_e), F=tuple(gens_f))
    rel = check_relations(kernel_rep, 1e-7)
    if not rel.ok:
        raise ValidationError(
            f"kernel module violates relations (max residual {rel.max_residual:.3e})")
    kernel_class = abs_class(kernel_rep)
    flow_class = spectral_flow(coefficient_path(problem))
    if kdim and switching_direction(problem) == 1:
        profiles = analytic_profiles(problem, op)
        resid = profiles - basis @ (basis.T @ profiles)
        profile_error = float(np.max(np.linalg.norm(resid, axis=0)))
    else:
        profile_error = 0.0
    return RSReport(kernel_dim=kdim,
                    kernel_class=kernel_class,
                    flow_class=flow_class,
                    profile_error=profile_error,
                    gap_ratio=float(report["gap_ratio"]),
                    sigma_max=float(report["sigma_max"]),
                    zero_cluster_max=float(report["zero_cluster_max"]),
                    agrees=kernel_class == flow_class)
