"""Block alignment matrices A_r, their kernels as alignment paths, and rank
certificates.

A_r^i is the rN x (r+1)M block bidiagonal matrix whose k-th block row
(k = 0..r-1) holds ``H_{i+k,+}`` in column block k and ``H_{i+k,-}`` in
column block k+1. A kernel element stacks r+1 transmit vectors; block t sits
at transmitter i+t+1 and consecutive blocks collide at receiver i+t.
"""

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .channels import specialized_blocks, transpose_dual
from .errors import DegeneracyError, DegeneracyWarning, DimensionMismatchError, PreconditionError
from .feasibility import constraint, is_feasible
from .linalg import DEFAULT_TOL, Subspace, kernel_basis, rank, singular_values


@dataclass(frozen=True, eq=False)
class AlignmentMatrix:
    r: int
    start: int
    matrix: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape


def _check_start(start):
    if start not in (1, 2, 3):
        raise PreconditionError(f"start must be 1, 2 or 3, got {start!r}")


def _assemble(plus, minus, r, N, M, dtype):
    a = np.zeros((r * N, (r + 1) * M), dtype=dtype)
    for k in range(r):
        a[k * N:(k + 1) * N, k * M:(k + 1) * M] = plus(k)
        a[k * N:(k + 1) * N, (k + 1) * M:(k + 2) * M] = minus(k)
    return a


def build_Ar(ch, r, start=1):
    """Assemble A_r^start from the cross channels of ``ch``; r = 0 gives a 0 x M matrix."""
    if r < 0:
        raise PreconditionError(f"r must be >= 0, got {r}")
    _check_start(start)
    a = _assemble(
        lambda k: ch.plus(start + k), lambda k: ch.minus(start + k),
        r, ch.N, ch.M, np.complex128,
    )
    a.setflags(write=False)
    return AlignmentMatrix(r, start, a)


def expected_kernel_dim(M, N, r):
    return max(0, (r + 1) * M - r * N)


def kernel_of_Ar(ch, r, start=1, tol=DEFAULT_TOL):
    """Kernel of A_r^start; warns with :class:`DegeneracyWarning` if its
    dimension is not the generic ``max(0, (r+1)M - rN)``."""
    k = kernel_basis(build_Ar(ch, r, start).matrix, tol)
    if ch.N >= ch.M and k.dim != expected_kernel_dim(ch.M, ch.N, r):
        warnings.warn(
            f"ker A_{r}^{start} has dim {k.dim}, generic prediction "
            f"{expected_kernel_dim(ch.M, ch.N, r)} (M={ch.M}, N={ch.N})",
            DegeneracyWarning,
            stacklevel=2,
        )
    return k


@dataclass(frozen=True, eq=False)
class AlignmentPath:
    """Chain of transmit vectors; ``vectors[t]`` lives at transmitter start+t+1."""

    start: int
    vectors: tuple

    @property
    def length(self):
        return len(self.vectors)

    @property
    def is_degenerate(self):
        return all(not np.any(v) for v in self.vectors)

    def transmitter(self, t):
        """1-based transmitter index of block ``t``."""
        return (self.start + t) % 3 + 1

    def stacked(self):
        return np.concatenate(self.vectors)


def to_paths(k, M, start=1):
    """Split each basis vector of a kernel of A_r^start into r+1 blocks of length M."""
    _check_start(start)
    if M < 1 or k.ambient % M != 0:
        raise DimensionMismatchError(f"ambient {k.ambient} is not a whole number of blocks of {M}")
    nblocks = k.ambient // M
    return [
        AlignmentPath(start, tuple(k.basis[t * M:(t + 1) * M, c].copy() for t in range(nblocks)))
        for c in range(k.dim)
    ]


def check_path(ch, p, tol=DEFAULT_TOL):
    """Worst relative chain residual ``|H_+ x_t + H_- x_{t+1}| / (|x_t| + |x_{t+1}|)``.

    An all-zero path returns 0.0 and carries ``is_degenerate``.
    """
    worst = 0.0
    for t in range(p.length - 1):
        a, b = p.vectors[t], p.vectors[t + 1]
        scale = np.linalg.norm(a) + np.linalg.norm(b)
        if scale == 0.0:
            continue
        rx = p.start + t
        res = np.linalg.norm(ch.plus(rx) @ a + ch.minus(rx) @ b) / scale
        worst = max(worst, float(res))
    return worst


def specialized_Ar(M, N, r):
    """Integer A_r built from the 0/1 specialisation B, C."""
    B, C = specialized_blocks(M, N)
    return _assemble(lambda k: B, lambda k: C, r, N, M, np.int64)


def exact_rank_specialized(M, N, r, p=_kernels.MERSENNE_31):
    """Full-rank test of the specialised A_r by exact elimination over GF(p).

    Rank mod p never exceeds the rational rank, so a True result certifies
    full rank over Q (and hence for generic channels).
    """
    if not (N >= M >= 1) or r < 0:
        raise PreconditionError(f"need N >= M >= 1 and r >= 0, got M={M}, N={N}, r={r}")
    a = specialized_Ar(M, N, r)
    return _kernels.rank_mod_p(a, p) == min(a.shape)


@dataclass(frozen=True)
class ConverseCertificate:
    """Rank witness that the r-th feasibility inequality fails."""

    M: int
    N: int
    d: int
    r: int
    rank: int
    expected_rank: int
    sigma_ratio: Optional[float]
    lhs: int
    rhs: int
    dualized: bool = False

    @property
    def inequality(self):
        return (
            f"(2r+1)d = {self.lhs} > {self.rhs} = max(rN, (r+1)M) "
            f"at r={self.r} (M={self.M}, N={self.N}, d={self.d})"
        )

    def to_dict(self):
        return {
            "M": self.M, "N": self.N, "d": self.d, "r": self.r,
            "rank": self.rank, "expected_rank": self.expected_rank,
            "sigma_ratio": self.sigma_ratio, "lhs": self.lhs, "rhs": self.rhs,
            "dualized": self.dualized, "inequality": self.inequality,
        }


def converse_certificate(ch, d, tol=DEFAULT_TOL):
    """Certificate of infeasibility for ``d`` streams on ``ch``, or None if feasible.

    When M > N the dual system is examined instead (``dualized=True``).
    Raises :class:`DegeneracyError` if A_r is numerically rank deficient.
    """
    dualized = ch.M > ch.N
    if dualized:
        ch = transpose_dual(ch)
    M, N = ch.M, ch.N
    verdict = is_feasible(M, N, d)
    if verdict.feasible:
        return None
    r = verdict.violated_r
    a = build_Ar(ch, r, 1).matrix
    s = singular_values(a)
    rk = rank(a, tol)
    expected = min(a.shape)
    if rk != expected:
        raise DegeneracyError(
            f"A_{r} has numeric rank {rk}, expected {expected} (M={M}, N={N}); channels not generic"
        )
    ratio = float(s[-1] / s[0]) if s.size else None
    lhs, rhs = constraint(M, N, d, r)
    return ConverseCertificate(M, N, d, r, rk, expected, ratio, lhs, rhs, dualized)
