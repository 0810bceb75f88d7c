"""Index theory of pairs of complex structures with Clifford symmetries,
and its dictionary with pairs of orthogonal projections.

The index of a pair (J0, J1) is the class of ker(J0 + J1), viewed as a
module over the context algebra extended by one more skew generator,
namely J0 restricted to the kernel.  At finite dimension every pair is
Fredholm; the operator-norm smallness conditions appear only as the
hypotheses under which additivity is guaranteed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abs_index import KOClass, abs_class
from .clifford import K1, K2, L1, CliffordRep, check_relations
from .errors import AmbiguousKernelError, ValidationError
from .numerics import (GAP_RATIO_GUARD, ZERO_CLUSTER_REL_TOL, op_norm,
                       skew_phase, split_zero_cluster, sym_eigh)

STRUCTURE_TOL = 1e-10


@dataclass(frozen=True)
class ComplexStructure:
    """Skew orthogonal J with J^2 = -I anticommuting with the context
    generators."""

    J: np.ndarray
    context: CliffordRep

    def __post_init__(self):
        j = np.array(self.J, dtype=float)
        j.setflags(write=False)
        object.__setattr__(self, "J", j)
        n = self.context.n
        if j.shape != (n, n):
            raise ValidationError(f"J has shape {j.shape}, context dimension is {n}")
        worst = max(op_norm(j + j.T), op_norm(j.T @ j - np.eye(n)))
        for g in self.context.generators():
            worst = max(worst, op_norm(j @ g + g @ j))
        if worst > STRUCTURE_TOL:
            raise ValidationError(
                f"not a context-anticommuting complex structure (residual {worst:.3e})")


def _same_context(j0: ComplexStructure, j1: ComplexStructure) -> CliffordRep:
    c0, c1 = j0.context, j1.context
    if (c0.r, c0.s, c0.n) != (c1.r, c1.s, c1.n):
        raise ValidationError("complex structures live over different contexts")
    worst = max((op_norm(a - b) for a, b in zip(c0.generators(), c1.generators())),
                default=0.0)
    if worst > STRUCTURE_TOL:
        raise ValidationError("complex structures live over different contexts")
    return c0


def kernel_module(j0: ComplexStructure, j1: ComplexStructure,
                  rel_tol: float = ZERO_CLUSTER_REL_TOL,
                  gap_ratio: float = GAP_RATIO_GUARD) -> CliffordRep:
    """ker(J0 + J1) as a module with one extra skew generator F_{s+1} = J0.

    The kernel is extracted from the symmetric eigendecomposition of
    (J0+J1)^T (J0+J1); the zero cluster must be separated from the rest by
    the gap-ratio guard.
    """
    ctx = _same_context(j0, j1)
    tsum = j0.J + j1.J
    vals, vecs = sym_eigh(tsum.T @ tsum)
    svals = np.sqrt(np.clip(vals, 0.0, None))
    k = split_zero_cluster(svals, rel_tol, gap_ratio, label="pair kernel")
    basis = vecs[:, :k]
    e_sub = tuple(basis.T @ m @ basis for m in ctx.E)
    f_sub = tuple(basis.T @ m @ basis for m in ctx.F) + (basis.T @ j0.J @ basis,)
    module = CliffordRep(ctx.r, ctx.s + 1, k, E=e_sub, F=f_sub)
    report = check_relations(module, 1e-9)
    if not report.ok:
        raise AmbiguousKernelError(
            f"kernel module violates Clifford relations "
            f"(max residual {report.max_residual:.3e})")
    return module


def pair_index(j0: ComplexStructure, j1: ComplexStructure):
    """(KOClass of degree (s+2-r) mod 8, kernel module of signature (r, s+1))."""
    module = kernel_module(j0, j1)
    return abs_class(module), module


@dataclass(frozen=True)
class MidpointPair:
    """T0 = (J0+J1)/2 and T1 = (J0-J1)/2 with their identity residuals."""

    T0: np.ndarray
    T1: np.ndarray
    residuals: tuple  # of (name, residual)

    @property
    def max_residual(self) -> float:
        return max((res for _, res in self.residuals), default=0.0)


def midpoint_operators(j0: ComplexStructure, j1: ComplexStructure,
                       tol: float = 1e-12) -> MidpointPair:
    """The half sum/difference, with all six algebraic identities checked."""
    _same_context(j0, j1)
    t0 = (j0.J + j1.J) / 2.0
    t1 = (j0.J - j1.J) / 2.0
    eye = np.eye(t0.shape[0])
    checks = [
        ("T0^2 + T1^2 = -I", t0 @ t0 + t1 @ t1 + eye),
        ("T0 T1 = -T1 T0", t0 @ t1 + t1 @ t0),
        ("T0 J0 = J1 T0", t0 @ j0.J - j1.J @ t0),
        ("T0 J1 = J0 T0", t0 @ j1.J - j0.J @ t0),
        ("T1 J0 = -J1 T1", t1 @ j0.J + j1.J @ t1),
        ("T1 J1 = -J0 T1", t1 @ j1.J + j0.J @ t1),
    ]
    residuals = tuple((name, op_norm(mat)) for name, mat in checks)
    worst = max(res for _, res in residuals)
    if worst > tol:
        raise ValidationError(f"midpoint identities violated (residual {worst:.3e})")
    return MidpointPair(T0=t0, T1=t1, residuals=residuals)


def spectral_submodule(j0: ComplexStructure, j1: ComplexStructure,
                       lam: float, eig_guard: float = 1e-10) -> CliffordRep:
    """The rank-(r, s+2) module on the spectral subspace of -T0^2 in (0, lam^2).

    Generators: the context ones restricted, then J0, then the phase of
    J0 T1 T0, all restricted to the subspace.
    """
    ctx = _same_context(j0, j1)
    if not 0.0 < lam < 1.0:
        raise ValidationError(f"lambda must lie in (0, 1), got {lam}")
    mid = midpoint_operators(j0, j1)
    vals, vecs = sym_eigh(-(mid.T0 @ mid.T0))
    if np.any(np.abs(vals - lam ** 2) < eig_guard):
        raise ValidationError(
            f"lambda^2 = {lam ** 2} is within {eig_guard} of an eigenvalue of -T0^2")
    zero_floor = max(eig_guard, 1e-12)
    mask = (vals > zero_floor) & (vals < lam ** 2)
    basis = vecs[:, mask]
    k = basis.shape[1]
    m = j0.J @ mid.T1 @ mid.T0
    m_sub = basis.T @ m @ basis
    phase = skew_phase(m_sub)
    e_sub = tuple(basis.T @ g @ basis for g in ctx.E)
    f_sub = tuple(basis.T @ g @ basis for g in ctx.F) \
        + (basis.T @ j0.J @ basis, phase)
    module = CliffordRep(ctx.r, ctx.s + 2, k, E=e_sub, F=f_sub)
    report = check_relations(module, 1e-9)
    if not report.ok:
        raise ValidationError(
            f"spectral submodule violates relations (max residual {report.max_residual:.3e})")
    return module


# ---------------------------------------------------------------------------
# Dictionary with pairs of projections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionPair:
    """Two orthogonal projections on the same space."""

    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        p = np.array(self.P, dtype=float)
        q = np.array(self.Q, dtype=float)
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "P", p)
        object.__setattr__(self, "Q", q)
        if p.shape != q.shape or p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValidationError("P and Q must be square matrices of equal size")
        for name, m in (("P", p), ("Q", q)):
            worst = max(op_norm(m - m.T), op_norm(m @ m - m))
            if worst > 1e-10:
                raise ValidationError(
                    f"{name} is not an orthogonal projection (residual {worst:.3e})")


def projection_pair_index(pp: ProjectionPair) -> int:
    """ind(P,Q) = dim(ran P & ker Q) - dim(ker P & ran Q).

    Both intersections live inside ker(P + Q - I), where P acts with
    eigenvalues 1 and 0 respectively; the index is read off from the
    trace of P compressed to that kernel.
    """
    p, q = pp.P, pp.Q
    n = p.shape[0]
    mid = p + q - np.eye(n)
    vals, vecs = sym_eigh(mid.T @ mid)
    svals = np.sqrt(np.clip(vals, 0.0, None))
    k = split_zero_cluster(svals, label="kernel of P+Q-I")
    if k == 0:
        return 0
    basis = vecs[:, :k]
    comp = basis.T @ p @ basis
    cvals = np.linalg.eigvalsh((comp + comp.T) / 2.0)
    if np.any(np.abs(cvals - np.round(cvals)) > 1e-8):
        raise AmbiguousKernelError(
            "P does not split the kernel of P+Q-I into clean 0/1 eigenspaces")
    ones = int(np.sum(cvals > 0.5))
    return 2 * ones - k


def projections_to_structures(pp: ProjectionPair):
    """Encode (P, Q) as complex structures over a rank-(2,0) context.

    On the doubled space, E1 = K1 (x) I, E2 = K2 (x) I and
    J = [[0, -(2P-I)], [2P-I, 0]]; the degree-0 index of the returned pair
    equals ind(P, Q).
    """
    n = pp.P.shape[0]
    eye = np.eye(n)
    ctx = CliffordRep(2, 0, 2 * n, E=(np.kron(K1, eye), np.kron(K2, eye)))

    def embed(p):
        return np.kron(L1, 2.0 * p - eye)

    return (ComplexStructure(embed(pp.P), ctx), ComplexStructure(embed(pp.Q), ctx))


def orthogonal_pair_parity(u0: np.ndarray, u1: np.ndarray) -> int:
    """dim ker(I + U0^T U1) mod 2, with (-1)^parity = det(U0) det(U1)."""
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    if u0.shape != u1.shape or u0.ndim != 2 or u0.shape[0] != u0.shape[1]:
        raise ValidationError("U0 and U1 must be square matrices of equal size")
    n = u0.shape[0]
    for name, u in (("U0", u0), ("U1", u1)):
        if op_norm(u.T @ u - np.eye(n)) > 1e-10:
            raise ValidationError(f"{name} is not orthogonal")
    w = np.eye(n) + u0.T @ u1
    vals, _ = sym_eigh(w.T @ w)
    svals = np.sqrt(np.clip(vals, 0.0, None))
    k = split_zero_cluster(svals, label="eigenvalue -1 cluster of U0^T U1")
    return k % 2
