"""Physical model builders: particle-hole symmetric lattice Hamiltonians
realified to skew paths.

Complex matrices are carried as pairs of real matrices (real and
imaginary part); no complex dtype enters the numerical core.  An
antiunitary involution C = (conjugation after a real symmetric
orthogonal M) fixes a real subspace of half the real dimension, and
operators commuting with C restrict to real matrices there.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .clifford import K1, K2, L1, CliffordRep
from .errors import ValidationError
from .flow import SkewPath
from .numerics import op_norm

REALIFY_TOL = 1e-10


@dataclass(frozen=True)
class CMat:
    """A complex matrix stored as (real part, imaginary part)."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.array(self.re, dtype=float)
        im = np.array(self.im, dtype=float)
        if re.shape != im.shape:
            raise ValidationError("real and imaginary parts differ in shape")
        re.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @staticmethod
    def real(mat) -> "CMat":
        mat = np.asarray(mat, dtype=float)
        return CMat(mat, np.zeros_like(mat))

    @staticmethod
    def eye(n: int) -> "CMat":
        return CMat.real(np.eye(n))

    @property
    def shape(self):
        return self.re.shape

    def __add__(self, other: "CMat") -> "CMat":
        return CMat(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "CMat") -> "CMat":
        return CMat(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "CMat":
        return CMat(-self.re, -self.im)

    def __matmul__(self, other: "CMat") -> "CMat":
        return CMat(self.re @ other.re - self.im @ other.im,
                    self.re @ other.im + self.im @ other.re)

    def scale(self, a: float, b: float = 0.0) -> "CMat":
        """Multiply by the complex scalar a + ib."""
        return CMat(a * self.re - b * self.im, a * self.im + b * self.re)

    def times_i(self) -> "CMat":
        return CMat(-self.im, self.re)

    def conj(self) -> "CMat":
        return CMat(self.re, -self.im)

    def t(self) -> "CMat":
        return CMat(self.re.T, self.im.T)

    def h(self) -> "CMat":
        return CMat(self.re.T, -self.im.T)

    def kron(self, other: "CMat") -> "CMat":
        return CMat(np.kron(self.re, other.re) - np.kron(self.im, other.im),
                    np.kron(self.re, other.im) + np.kron(self.im, other.re))

    def norm(self) -> float:
        return float(np.hypot(op_norm(self.re), op_norm(self.im)))


@dataclass(frozen=True)
class RealStructure:
    """Antiunitary involution C(v) = M conj(v) and the basis of its fixed
    real subspace.

    M must be real orthogonal symmetric (so that C^2 = I).  The fixed
    subspace has real dimension n; its orthonormal basis is built
    deterministically from the candidates e_j + C e_j and i(e_j - C e_j)
    in order.
    """

    n: int
    M: np.ndarray

    def __post_init__(self):
        m = np.array(self.M, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "M", m)
        if m.shape != (self.n, self.n):
            raise ValidationError(f"M has shape {m.shape}, expected ({self.n}, {self.n})")
        worst = max(op_norm(m - m.T), op_norm(m @ m - np.eye(self.n)))
        if worst > REALIFY_TOL:
            raise ValidationError(
                f"M must be symmetric orthogonal (residual {worst:.3e})")
        object.__setattr__(self, "_basis", self._fixed_basis())

    def _fixed_basis(self) -> CMat:
        n, m = self.n, self.M
        cols_re, cols_im = [], []

        def admit(vr, vi):
            for br, bi in zip(cols_re, cols_im):
                overlap = float(vr @ br + vi @ bi)
                vr = vr - overlap * br
                vi = vi - overlap * bi
            nrm = np.hypot(np.linalg.norm(vr), np.linalg.norm(vi))
            if nrm > 1e-8:
                cols_re.append(vr / nrm)
                cols_im.append(vi / nrm)

        for j in range(n):
            if len(cols_re) == n:
                break
            e = np.zeros(n)
            e[j] = 1.0
            admit(e + m[:, j], np.zeros(n))          # e_j + C e_j
            admit(np.zeros(n), e - m[:, j])          # i (e_j - C e_j)
        if len(cols_re) != n:
            raise ValidationError("fixed subspace basis is incomplete")
        return CMat(np.column_stack(cols_re), np.column_stack(cols_im))

    @property
    def basis(self) -> CMat:
        return self._basis

    def commutes(self, a: CMat) -> float:
        """Residual of C A C = A, i.e. M conj(A) M = A."""
        return (CMat.real(self.M) @ a.conj() @ CMat.real(self.M) - a).norm()


def realify(rs: RealStructure, a: CMat, tol: float = REALIFY_TOL) -> np.ndarray:
    """Real matrix of an operator commuting with C on the fixed subspace."""
    res = rs.commutes(a)
    if res > tol:
        raise ValidationError(
            f"operator does not commute with the real structure (residual {res:.3e})")
    b = rs.basis
    compressed = b.h() @ a @ b
    if op_norm(compressed.im) > 1e-8:
        raise ValidationError(
            "compression onto the fixed subspace is not real "
            f"(residual {op_norm(compressed.im):.3e})")
    return compressed.re


# ---------------------------------------------------------------------------
# Kitaev chain flux insertion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeSpec:
    """Ring length and couplings for the flux-insertion chain."""

    N: int
    mu: float = 0.0
    w: float = -1.0

    def __post_init__(self):
        if self.N < 3:
            raise ValidationError(f"ring length must be at least 3, got {self.N}")


# Pairing block of the hopping term: (1/2) [[1, i], [i, -1]].
_B_BLOCK = CMat(K1 / 2.0, K2 / 2.0)


def _bond_correction(alpha: float) -> CMat:
    """Flux-dependent correction added to the (0 -> 1) bond block.

    (1/2) [[e^{-i pi a} - 1,  i(e^{i pi a} - 1)],
           [i(e^{-i pi a} - 1),  -(e^{i pi a} - 1)]]
    """
    c = np.cos(np.pi * alpha)
    s = np.sin(np.pi * alpha)
    re = 0.5 * np.array([[c - 1.0, -s], [s, -(c - 1.0)]])
    im = 0.5 * np.array([[-s, c - 1.0], [c - 1.0, -s]])
    return CMat(re, im)


def _ring_shift(n: int) -> np.ndarray:
    shift = np.zeros((n, n))
    for j in range(n):
        shift[(j + 1) % n, j] = 1.0
    return shift


def _bond_unit(n: int) -> np.ndarray:
    unit = np.zeros((n, n))
    unit[1, 0] = 1.0
    return unit


def _flux_hamiltonian(alpha: float, shift: CMat, bond: CMat,
                      cell: CMat) -> CMat:
    """H_alpha = S_alpha + S_alpha^* with S_alpha = shift (x) cell (x) B
    plus the flux correction on the (0,1) bond."""
    s_alpha = shift.kron(cell).kron(_B_BLOCK) \
        + bond.kron(cell).kron(_bond_correction(alpha))
    return s_alpha + s_alpha.h()


def kitaev_path(spec: LatticeSpec) -> SkewPath:
    """Flux insertion through one bond of the closed Kitaev chain at the
    sweet spot (mu = 0, w = -1).

    The path alpha -> realify(i H_alpha) lives on a 2N-dimensional real
    space with empty Clifford context; both endpoints have spectrum in
    {-1, +1}, the alpha = 1 endpoint being the sign-flipped-bond
    (antiperiodic) chain.
    """
    if not (spec.mu == 0.0 and spec.w == -1.0):
        raise ValidationError(
            "only the sweet spot mu = 0, w = -1 is implemented")
    n = spec.N
    shift = CMat.real(_ring_shift(n))
    bond = CMat.real(_bond_unit(n))
    cell = CMat.eye(1)
    rs = RealStructure(2 * n, np.kron(np.eye(n), K2))
    ctx = CliffordRep(0, 0, 2 * n)

    def sample(alpha: float) -> np.ndarray:
        h = _flux_hamiltonian(alpha, shift, bond, cell)
        return realify(rs, h.times_i())

    return SkewPath(ctx, sample, label=f"kitaev flux insertion, N={n}")


def flux_path(module: CliffordRep, N: int) -> SkewPath:
    """Localized gap inversion on a ring with a Clifford-module unit cell.

    `module` is a Cl_{r,s+1} module; its last skew generator rides on a
    real ring Hamiltonian T_alpha = h_alpha (x) F_{s+1} whose on-site
    potential at cell 0 sweeps from +2 to -2, dragging exactly one
    localized level through zero.  The remaining generators survive as
    the context, and the flow of the path is the class of the module.

    A genuine U(1) bond flux cannot reproduce the class of a general
    module: complexifying the chain tensors the crossing kernel with an
    extra rank-one complex plane that carries the whole phase action, so
    the kernel class degenerates (the Kitaev chain, whose cell is that
    plane itself, is the exception and keeps its own builder).  The
    single-cell sweep implemented here is the gauge-inequivalent local
    termination of the same flux idea and pins the crossing kernel to one
    copy of the module.
    """
    if module.s < 1:
        raise ValidationError("the unit-cell module needs at least one skew generator")
    if N < 3:
        raise ValidationError(f"ring length must be at least 3, got {N}")
    module.validate(1e-10)
    ring = (_ring_shift(N) + _ring_shift(N).T) / 2.0
    f_last = np.array(module.F[-1])
    ctx = CliffordRep(module.r, module.s - 1, N * module.n,
                      E=tuple(np.kron(np.eye(N), g) for g in module.E),
                      F=tuple(np.kron(np.eye(N), g) for g in module.F[:-1]))

    def sample(alpha: float) -> np.ndarray:
        pot = 2.0 * np.ones(N)
        pot[0] = 2.0 - 4.0 * alpha
        h_alpha = ring + np.diag(pot)
        return np.kron(h_alpha, f_last)

    return SkewPath(ctx, sample,
                    label=f"single-cell gap inversion, N={N}, "
                          f"cell ({module.r},{module.s})")


# ---------------------------------------------------------------------------
# Class AII (quaternionic) paths
# ---------------------------------------------------------------------------

def standard_quaternionic(n: int) -> CMat:
    """Matrix J_q of the antiunitary T(v) = J_q conj(v) with T^2 = -I."""
    if n % 2:
        raise ValidationError("a quaternionic structure needs even complex dimension")
    return CMat.real(np.kron(L1, np.eye(n // 2)))


def hermitian_double(h: CMat) -> np.ndarray:
    """Real symmetric matrix of a hermitian matrix on the realified space
    (each complex eigenvalue appears twice)."""
    return np.block([[h.re, -h.im], [h.im, h.re]])


def aii_path(h_fn: Callable[[float], CMat], n: int,
             jq: CMat | None = None, tol: float = REALIFY_TOL) -> SkewPath:
    """Nambu-doubled, realified path for a time-reversal symmetric family.

    `h_fn` samples a complex self-adjoint n x n matrix commuting with the
    quaternionic structure T = (conjugation after jq); the returned path
    anticommutes with the two skew generators built from C T-hat and
    i C T-hat Q, and its degree-4 flow is one quarter of the classical
    spectral flow of the realified family `hermitian_double(h_fn)`.
    """
    jq = standard_quaternionic(n) if jq is None else jq
    if jq.shape != (n, n):
        raise ValidationError("quaternionic structure has the wrong shape")
    t_sq = jq @ jq.conj()
    if (t_sq + CMat.eye(n)).norm() > tol:
        raise ValidationError("T^2 = -I fails for the supplied structure")
    rs = RealStructure(2 * n, np.kron(K2, np.eye(n)))
    # F1 = C T-hat and F2 = i C T-hat Q, both linear and C-commuting.
    f1 = CMat.real(np.kron(K2, np.eye(n))) @ CMat.real(np.eye(2)).kron(jq)
    f2 = f1.times_i() @ CMat.real(np.kron(K1, np.eye(n)))
    ctx = CliffordRep(0, 2, 2 * n,
                      F=(realify(rs, f1), realify(rs, f2)))

    def sample(t: float) -> np.ndarray:
        h = h_fn(t)
        if (h - h.h()).norm() > tol:
            raise ValidationError(f"sample at t={t} is not self-adjoint")
        tres = (h @ jq - jq @ h.conj()).norm()
        if tres > tol:
            raise ValidationError(
                f"sample at t={t} breaks time reversal (residual {tres:.3e})")
        top = -h
        bot = h.conj()
        re = np.zeros((2 * n, 2 * n))
        im = np.zeros((2 * n, 2 * n))
        re[:n, :n] = top.re
        im[:n, :n] = top.im
        re[n:, n:] = bot.re
        im[n:, n:] = bot.im
        return realify(rs, CMat(re, im).times_i())

    return SkewPath(ctx, sample, label="class AII Nambu path")
