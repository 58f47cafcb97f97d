"""Tolerance-aware dense complex linear algebra.

Every routine here is a pure function of its inputs. Bases returned as
:class:`Subspace` objects are orthonormal and put in a canonical form (see
:func:`canonical_basis`) so downstream constructions reproduce bit for bit
given the same channels.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, PreconditionError


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by rank decisions and residual checks.

    Parameters
    ----------
    rank_rtol : float
        Singular values at or below ``rank_rtol * sigma_max`` count as zero.
    residual_tol : float
        Bound on orthogonality / alignment residuals deemed exact.
    """

    rank_rtol: float = 1e-9
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rtol", "residual_tol"):
            val = getattr(self, name)
            if not (0.0 < val < 1e-3):
                raise PreconditionError(f"{name} must lie in (0, 1e-3), got {val!r}")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(m):
    """Coerce to a 2-D complex128 array and reject non-finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise PreconditionError("matrix contains NaN or Inf entries")
    return a


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of C^ambient held as an orthonormal column basis."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.complex128)
        if b.ndim != 2:
            raise DimensionMismatchError(f"basis must be 2-D, got shape {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient):
        return cls(np.zeros((ambient, 0), dtype=np.complex128))

    @classmethod
    def full(cls, ambient):
        return cls(np.eye(ambient, dtype=np.complex128))

    @classmethod
    def span(cls, vectors, tol=DEFAULT_TOL):
        """Column span of ``vectors`` (ambient x k), orthonormalised."""
        return column_span(vectors, tol)

    def projector(self):
        return self.basis @ self.basis.conj().T

    def truncate(self, k):
        """Keep the first ``k`` canonical basis vectors."""
        if k > self.dim:
            raise PreconditionError(f"cannot truncate a {self.dim}-dim subspace to {k}")
        return Subspace(self.basis[:, :k])

    def is_orthonormal(self, atol=1e-10):
        g = self.basis.conj().T @ self.basis
        return bool(np.allclose(g, np.eye(self.dim), atol=atol, rtol=0.0))

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


def _phase_fix(v, rel=1e-12):
    """Rotate ``v`` so its first non-negligible entry is real and positive."""
    mags = np.abs(v)
    top = mags.max() if v.size else 0.0
    if top == 0.0:
        return v
    k = int(np.argmax(mags > rel * top))
    return v * (np.conj(v[k]) / mags[k])


def canonical_basis(q):
    """Canonical orthonormal basis for the span of orthonormal columns ``q``.

    Greedy pivoting on coordinate axes: at each step the coordinate with the
    largest remaining projector diagonal is chosen and the normalised
    projection of that unit vector is taken. The result depends only on the
    subspace (up to floating point), not on whichever basis ``q`` happens to
    be. Each vector is then phase-fixed.
    """
    q = np.asarray(q, dtype=np.complex128)
    n, k = q.shape
    out = np.empty((n, k), dtype=np.complex128)
    rest = q
    for step in range(k):
        norms = np.einsum("ij,ij->i", rest, rest.conj()).real
        p = int(np.argmax(norms))
        c = rest[p].conj()
        c = c / np.linalg.norm(c)
        out[:, step] = _phase_fix(rest @ c)
        if step + 1 < k:
            rest = rest @ scipy.linalg.null_space(c[None, :].conj())
    return out


def singular_values(m):
    a = as_matrix(m)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def _numeric_rank(s, tol):
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rtol * s[0]))


def rank(m, tol=DEFAULT_TOL):
    """Number of singular values above ``tol.rank_rtol * sigma_max``.

    Matrices with a zero dimension have rank 0.
    """
    return _numeric_rank(singular_values(m), tol)


def is_full_rank(m, tol=DEFAULT_TOL):
    a = as_matrix(m)
    return rank(a, tol) == min(a.shape)


def kernel_basis(m, tol=DEFAULT_TOL):
    """Orthonormal canonical basis of the right null space of ``m``."""
    a = as_matrix(m)
    rows, cols = a.shape
    if cols == 0:
        return Subspace.zero(0)
    if rows == 0:
        return Subspace.full(cols)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    r = _numeric_rank(s, tol)
    null = vh[r:].conj().T
    return Subspace(canonical_basis(null))


def column_span(m, tol=DEFAULT_TOL):
    """Orthonormal canonical basis of the column space of ``m``."""
    a = as_matrix(m)
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return Subspace.zero(rows)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = _numeric_rank(s, tol)
    return Subspace(canonical_basis(u[:, :r]))


def orth_complement(s, tol=DEFAULT_TOL):
    """Orthogonal complement of ``s`` inside its ambient space."""
    if s.dim == 0:
        return Subspace.full(s.ambient)
    return kernel_basis(s.basis.conj().T, tol)


def subspace_sum(*subspaces, tol=DEFAULT_TOL):
    """Span of the union of several subspaces sharing one ambient space."""
    amb = {s.ambient for s in subspaces}
    if len(amb) != 1:
        raise DimensionMismatchError(f"ambient dimensions differ: {sorted(amb)}")
    return column_span(np.hstack([s.basis for s in subspaces]), tol)


def projection_rank(target, source, tol=DEFAULT_TOL):
    """Dimension of the orthogonal projection of ``source`` onto ``target``.

    Both bases are orthonormal, so the singular values are principal-angle
    cosines in [0, 1]; they are thresholded against ``tol.rank_rtol`` with
    unit scale rather than relative to the largest one.
    """
    if target.ambient != source.ambient:
        raise DimensionMismatchError(
            f"ambient mismatch: target in C^{target.ambient}, source in C^{source.ambient}"
        )
    s = singular_values(target.basis.conj().T @ source.basis)
    return int(np.count_nonzero(s > tol.rank_rtol))


def _tie_key(values, digits=12):
    """Sort keys with ties decided at ~``digits`` significant digits."""
    scale = max(float(np.max(np.abs(values))), 1.0) if len(values) else 1.0
    q = lambda x: round(x / scale, digits)
    return [(-q(abs(v)), -q(v.real), -q(v.imag)) for v in values]


def eigenpairs(m):
    """All eigenpairs of a square matrix in canonical order and phase.

    Ordered by descending ``|lambda|``, then descending real part, then
    descending imaginary part. Eigenvectors are unit norm with the first
    non-negligible entry real and positive.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"eigenpairs needs a square matrix, got {a.shape}")
    if a.size == 0:
        return []
    w, v = np.linalg.eig(a)
    keys = _tie_key(w)
    order = sorted(range(len(w)), key=lambda k: keys[k])
    pairs = []
    for k in order:
        vec = v[:, k] / np.linalg.norm(v[:, k])
        pairs.append((complex(w[k]), _phase_fix(vec)))
    return pairs


def subspace_distance(a, b):
    """Frobenius distance between orthogonal projectors; zero iff equal spans."""
    if a.ambient != b.ambient or a.dim != b.dim:
        raise DimensionMismatchError(
            f"cannot compare {a.dim}-dim subspace of C^{a.ambient} "
            f"with {b.dim}-dim subspace of C^{b.ambient}"
        )
    return float(np.linalg.norm(a.projector() - b.projector()))
