"""KO-valued spectral flow of paths of skew matrices with Clifford
symmetries.

The flow of a path with invertible endpoints is computed by the local
formula: complete the phase of the operator at each partition node to a
complex structure, then sum the pair indices of consecutive phases.  In
finite dimension pair-index additivity holds unconditionally (the Calkin
norm smallness hypotheses are vacuous), so the sum telescopes to the pair
index of the endpoint phases; the endpoint computation is kept as an
independent cross-check.

Partition control: 16 uniform segments to start; a segment is accepted
when the node phases are 0.9-close in operator norm (its pair kernel is
then empty and it contributes nothing) or when its pair kernel splits
cleanly; otherwise it is bisected, up to a depth cap.  A hard 0.9 bound
alone cannot terminate: at a kernel crossing the phase genuinely jumps by
norm 2 on the crossing subspace, while the jump's contribution is exactly
the kernel class.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .abs_index import KOClass, abs_class
from .clifford import (CliffordRep, check_relations, direct_sum,
                       intertwiner, irreducible_rep)
from .errors import (AmbiguousKernelError, IllConditionedError,
                     ObstructionError, ValidationError)
from .numerics import (min_singular_value, op_norm, skew_phase,
                       split_zero_cluster, sym_eigh)
from .pairs import ComplexStructure, pair_index

SAMPLE_TOL = 1e-10


@dataclass(frozen=True)
class SkewPath:
    """A family t in [0,1] of skew matrices anticommuting with a context.

    Continuity is the caller's contract; every sample is validated for
    skewness and anticommutation.
    """

    context: CliffordRep
    fn: Callable[[float], np.ndarray]
    label: str = ""

    def at(self, t: float) -> np.ndarray:
        mat = np.asarray(self.fn(t), dtype=float)
        n = self.context.n
        if mat.shape != (n, n):
            raise ValidationError(
                f"path sample at t={t} has shape {mat.shape}, expected ({n}, {n})")
        worst = op_norm(mat + mat.T)
        for g in self.context.generators():
            worst = max(worst, op_norm(mat @ g + g @ mat))
        if worst > SAMPLE_TOL:
            raise ValidationError(
                f"path sample at t={t} violates skewness/anticommutation "
                f"(residual {worst:.3e})")
        return mat


@dataclass(frozen=True)
class FlowOptions:
    inv_tol: float = 1e-8
    max_depth: int = 20
    initial_segments: int = 16
    phase_bound: float = 0.9
    seed: int = 0


# ---------------------------------------------------------------------------
# Phase completion
# ---------------------------------------------------------------------------

def _kernel_completion(kernel_rep: CliffordRep, seed: int,
                       hint: np.ndarray | None) -> np.ndarray:
    """A complex structure on a Clifford module, anticommuting with its
    generators.

    Exists iff the module's class one generator up vanishes; constructed
    by aligning the module with copies of the canonical irreducible that
    carries one more skew generator, and transporting that generator back
    along an orthogonal intertwiner.  A hint (the compression of a nearby
    phase) is tried first so that phases vary as little as possible along
    a path.
    """
    k = kernel_rep.n
    if k == 0:
        return np.zeros((0, 0))
    obstruction = abs_class(kernel_rep)
    if not obstruction.is_zero:
        raise ObstructionError(
            f"kernel module of signature ({kernel_rep.r},{kernel_rep.s}) does not "
            f"extend by a complex structure: obstruction {obstruction.to_json()}",
            ko_class=obstruction)

    def _valid(j: np.ndarray) -> bool:
        worst = max(op_norm(j + j.T), op_norm(j @ j + np.eye(k)))
        for g in kernel_rep.generators():
            worst = max(worst, op_norm(j @ g + g @ j))
        return worst <= 1e-9

    if hint is not None and hint.shape == (k, k):
        skew = (hint - hint.T) / 2.0
        if min_singular_value(skew) > 0.3:
            j = skew_phase(skew)
            if _valid(j):
                return j

    ext = irreducible_rep(kernel_rep.r, kernel_rep.s + 1)
    restr = CliffordRep(ext.r, ext.s - 1, ext.n, E=ext.E, F=ext.F[:-1])
    copies = k // ext.n
    if copies * ext.n != k:
        raise ObstructionError(
            f"kernel dimension {k} is not a multiple of the canonical "
            f"extension dimension {ext.n}")
    w_restr, j_w = restr, np.array(ext.F[-1])
    for _ in range(copies - 1):
        w_restr = direct_sum(w_restr, restr)
        pad = np.zeros((w_restr.n, w_restr.n))
        pad[:j_w.shape[0], :j_w.shape[0]] = j_w
        pad[j_w.shape[0]:, j_w.shape[0]:] = ext.F[-1]
        j_w = pad
    theta = intertwiner(kernel_rep, w_restr, seed=seed)
    if theta is None:
        raise ObstructionError(
            "kernel module is not isomorphic to the canonical extension model")
    j = theta @ j_w @ theta.T
    if not _valid(j):
        raise ObstructionError(
            "transported complex structure failed validation on the kernel module")
    return j


def _split_phase_kernel(svals: np.ndarray) -> int:
    """Kernel-cluster size for phase completion, with a lenient fallback.

    The strict split can be ambiguous right at a crossing; the fallback
    treats the whole sub-gap cluster as kernel, which amounts to the
    finite-rank regularization of the flow (any valid completion on a
    slightly larger subspace leaves the flow unchanged, since the sum of
    segment indices telescopes).
    """
    try:
        return split_zero_cluster(svals, label="phase kernel")
    except AmbiguousKernelError:
        return split_zero_cluster(svals, rel_tol=1e-4, gap_ratio=10.0,
                                  label="phase kernel (regularized)")


def complete_phase(tmat: np.ndarray, context: CliffordRep,
                   align_hint: np.ndarray | None = None,
                   seed: int = 0) -> ComplexStructure:
    """Complete a skew generator-anticommuting matrix to a complex structure.

    Equal to T|T|^-1 on the complement of the kernel cluster; on the
    kernel, any complex structure anticommuting with the restricted
    generators, chosen canonically (or following `align_hint`).  Raises
    ObstructionError when the kernel module does not extend (for example
    an odd-dimensional kernel with empty context).
    """
    tmat = np.asarray(tmat, dtype=float)
    n = context.n
    if tmat.shape != (n, n):
        raise ValidationError(f"matrix shape {tmat.shape} does not match context ({n})")
    vals, vecs = sym_eigh(-(tmat @ tmat))
    svals = np.sqrt(np.clip(vals, 0.0, None))
    k = _split_phase_kernel(svals) if n else 0
    j = skew_phase(tmat, kernel_dim=k)
    if k > 0:
        basis = vecs[:, :k]
        kernel_rep = CliffordRep(
            context.r, context.s, k,
            E=tuple(basis.T @ g @ basis for g in context.E),
            F=tuple(basis.T @ g @ basis for g in context.F))
        report = check_relations(kernel_rep, 1e-8)
        if not report.ok:
            raise AmbiguousKernelError(
                f"kernel cluster is not generator-invariant "
                f"(residual {report.max_residual:.3e})")
        hint = None
        if align_hint is not None:
            hint = basis.T @ align_hint @ basis
        j_ker = _kernel_completion(kernel_rep, seed=seed, hint=hint)
        j = j + basis @ j_ker @ basis.T
    # Near-singular directions amplify rounding in T|T|^-1; re-impose the
    # structure exactly: project onto the anticommutant, take the skew
    # part, and polar-orthogonalize within the skew matrices.
    for g in context.generators():
        j = (j - g @ j @ g.T) / 2.0
    j = (j - j.T) / 2.0
    if n:
        j = skew_phase(j)
    return ComplexStructure(j, context)


# ---------------------------------------------------------------------------
# Spectral flow
# ---------------------------------------------------------------------------

def _flow_degree(context: CliffordRep) -> int:
    return (context.s + 2 - context.r) % 8


def spectral_flow(path: SkewPath, opts: FlowOptions | None = None) -> KOClass:
    """KO-valued spectral flow of a path with invertible endpoints."""
    opts = opts or FlowOptions()
    ctx = path.context
    degree = _flow_degree(ctx)
    for t_end in (0.0, 1.0):
        smin = min_singular_value(path.at(t_end))
        if smin < opts.inv_tol:
            raise ValidationError(
                f"endpoint t={t_end} is not invertible "
                f"(smallest singular value {smin:.3e} < {opts.inv_tol})")
    if ctx.n == 0:
        return KOClass.of(degree, 0)

    phases: dict[float, ComplexStructure] = {}

    def phase_at(t: float) -> ComplexStructure:
        if t not in phases:
            hint = None
            if phases:
                nearest = min(phases, key=lambda u: abs(u - t))
                hint = phases[nearest].J
            phases[t] = complete_phase(path.at(t), ctx, align_hint=hint,
                                       seed=opts.seed)
        return phases[t]

    total = KOClass.of(degree, 0)
    m = max(1, opts.initial_segments)
    stack = [(i / m, (i + 1) / m, 0) for i in range(m)]
    stack.reverse()
    while stack:
        a, b, depth = stack.pop()
        ja, jb = phase_at(a), phase_at(b)
        if op_norm(ja.J - jb.J) <= opts.phase_bound:
            continue  # phases 0.9-close: the pair kernel is empty
        try:
            contribution, _ = pair_index(ja, jb)
        except AmbiguousKernelError:
            if depth >= opts.max_depth:
                raise AmbiguousKernelError(
                    f"partition depth {opts.max_depth} exceeded on segment "
                    f"[{a}, {b}] without a clean pair kernel")
            mid = (a + b) / 2.0
            stack.append((mid, b, depth + 1))
            stack.append((a, mid, depth + 1))
            continue
        total = total + contribution
    return total


def endpoint_flow(path: SkewPath, opts: FlowOptions | None = None) -> KOClass:
    """Pair index of the endpoint phases: the finite-dimensional endpoint
    theorem makes this an independent oracle for spectral_flow."""
    opts = opts or FlowOptions()
    ctx = path.context
    for t_end in (0.0, 1.0):
        smin = min_singular_value(path.at(t_end))
        if smin < opts.inv_tol:
            raise ValidationError(
                f"endpoint t={t_end} is not invertible "
                f"(smallest singular value {smin:.3e} < {opts.inv_tol})")
    if ctx.n == 0:
        return KOClass.of(_flow_degree(ctx), 0)
    j0 = complete_phase(path.at(0.0), ctx, seed=opts.seed)
    j1 = complete_phase(path.at(1.0), ctx, seed=opts.seed)
    value, _ = pair_index(j0, j1)
    return value


# ---------------------------------------------------------------------------
# Cayley transform and the spectral clamp
# ---------------------------------------------------------------------------

def cayley(tmat: np.ndarray, context: CliffordRep,
           cond_limit: float = 1e12) -> np.ndarray:
    """Cayley transform -F_s (I + T F_s)(I - T F_s)^-1.

    Maps skew generator-anticommuting matrices to complex structures
    anticommuting with all context generators except the last skew one;
    invertible T lands strictly inside the distance-2 ball around -F_s.
    """
    if context.s < 1:
        raise ValidationError("the Cayley transform needs a context with s >= 1")
    tmat = np.asarray(tmat, dtype=float)
    f_s = context.F[-1]
    n = context.n
    m = np.eye(n) - tmat @ f_s
    if np.linalg.cond(m) > cond_limit:
        raise IllConditionedError(
            "resolvent I - T F_s is too ill-conditioned for the Cayley transform")
    return -f_s @ (np.eye(n) + tmat @ f_s) @ np.linalg.inv(m)


def clamp_phase(tmat: np.ndarray) -> np.ndarray:
    """Flatten the spectrum of a skew matrix onto the closed unit ball.

    Acts as the identity below norm one and as the phase above; computed
    through the symmetric functional calculus on -T^2, so it commutes with
    everything T commutes with.
    """
    tmat = np.asarray(tmat, dtype=float)
    if tmat.shape[0] == 0:
        return tmat.copy()
    vals, vecs = sym_eigh(-(tmat @ tmat))
    moduli = np.sqrt(np.clip(vals, 0.0, None))
    scale = np.where(moduli > 1.0, 1.0 / np.maximum(moduli, 1e-300), 1.0)
    out = tmat @ (vecs * scale) @ vecs.T
    return (out - out.T) / 2.0


def classical_sf(path_fn: Callable[[float], np.ndarray],
                 inv_tol: float = 1e-8) -> int:
    """Classical spectral flow of a path of symmetric matrices:
    n_minus(start) - n_minus(end), endpoints required invertible."""

    def n_minus(t):
        mat = np.asarray(path_fn(t), dtype=float)
        if op_norm(mat - mat.T) > SAMPLE_TOL:
            raise ValidationError(f"sample at t={t} is not symmetric")
        vals = np.linalg.eigvalsh((mat + mat.T) / 2.0)
        if vals.size and np.min(np.abs(vals)) < inv_tol:
            raise ValidationError(f"endpoint t={t} is singular")
        return int(np.sum(vals < 0.0))

    return n_minus(0.0) - n_minus(1.0)
