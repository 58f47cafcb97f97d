"""Independent check of alignment solutions.

Uses nothing but the channels and the proposed subspaces, so it can serve as
the oracle for the constructors.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .linalg import DEFAULT_TOL, column_span, projection_rank, rank

PAIRS = tuple((i, j) for i in (1, 2, 3) for j in (1, 2, 3) if i != j)


@dataclass(frozen=True)
class VerifyReport:
    passed: bool
    d: int
    residuals: dict  # "i,j" -> ||V_i^H H_ij U_j||_F on orthonormal bases
    dims_U: tuple
    dims_V: tuple
    interference_dims: tuple
    decodability_ranks: tuple

    @property
    def max_residual(self):
        return max(self.residuals.values())

    def to_dict(self):
        return {
            "pass": self.passed,
            "d": self.d,
            "residuals": dict(self.residuals),
            "max_residual": self.max_residual,
            "dims_U": list(self.dims_U),
            "dims_V": list(self.dims_V),
            "interference_dims": list(self.interference_dims),
            "decodability_ranks": list(self.decodability_ranks),
        }


def _orthonormal(subspaces, ambient, label, tol):
    if len(subspaces) != 3:
        raise DimensionMismatchError(f"expected three {label} subspaces, got {len(subspaces)}")
    out = []
    for k, s in enumerate(subspaces, start=1):
        basis = np.asarray(getattr(s, "basis", s))
        if basis.ndim != 2 or basis.shape[0] != ambient:
            raise DimensionMismatchError(
                f"{label}_{k} has shape {basis.shape}, expected ambient dimension {ambient}"
            )
        out.append(column_span(basis, tol))
    return out


def _interference(ch, U, i):
    return np.hstack([ch.plus(i) @ U[i % 3].basis, ch.minus(i) @ U[(i - 2) % 3].basis])


def interference_profile(ch, U, tol=DEFAULT_TOL):
    """Dimension of ``H_{i,+} U_{i+1} + H_{i,-} U_{i-1}`` at each receiver i."""
    U = _orthonormal(U, ch.M, "U", tol)
    return tuple(rank(_interference(ch, U, i), tol) for i in (1, 2, 3))


def signal_plus_interference_dims(ch, U, tol=DEFAULT_TOL):
    """Dimension of desired image plus interference at each receiver."""
    U = _orthonormal(U, ch.M, "U", tol)
    return tuple(
        rank(np.hstack([ch.h(i, i) @ U[i - 1].basis, _interference(ch, U, i)]), tol)
        for i in (1, 2, 3)
    )


def verify(ch, sol, d, tol=DEFAULT_TOL):
    """Check orthogonality, dimensions and decodability of ``sol`` on ``ch``.

    ``sol`` is anything with ``U`` and ``V`` sequences of three subspaces (or
    raw basis matrices). Passing requires every residual within
    ``tol.residual_tol``, every dimension equal to ``d`` and every
    decodability rank equal to ``d``.
    """
    U = _orthonormal(sol.U, ch.M, "U", tol)
    V = _orthonormal(sol.V, ch.N, "V", tol)
    residuals = {}
    for i, j in PAIRS:
        r = V[i - 1].basis.conj().T @ ch.h(i, j) @ U[j - 1].basis
        residuals[f"{i},{j}"] = float(np.linalg.norm(r)) if r.size else 0.0
    dims_U = tuple(u.dim for u in U)
    dims_V = tuple(v.dim for v in V)
    interf = tuple(rank(_interference(ch, U, i), tol) for i in (1, 2, 3))
    decod = tuple(
        projection_rank(V[i - 1], column_span(ch.h(i, i) @ U[i - 1].basis, tol), tol)
        for i in (1, 2, 3)
    )
    ok = (
        all(v <= tol.residual_tol for v in residuals.values())
        and all(k == d for k in dims_U + dims_V + decod)
    )
    return VerifyReport(ok, d, residuals, dims_U, dims_V, interf, decod)
