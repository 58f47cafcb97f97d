"""Explicit alignment solutions for every feasible (M, N, d).

Three constructions are provided:

* ``construct_eigen``: M = N = 2d, interference subspaces are invariant
  subspaces of the cycle matrix ``H12 H32^-1 H31 H21^-1 H23 H13^-1``.
* ``construct_critical``: M + N = 4d with (2d - M) dividing d; every transmit
  space is built from the full kernels of A_r^i.
* ``construct_general``: any feasible N > M, using maximal-length alignment
  paths plus shorter or truncated paths for the remainder.

``construct`` dispatches among them and handles M > N through the dual
system. Receive spaces are always the orthogonal complement of the actual
interference at each receiver, truncated to d canonical directions.
"""

import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .alignment import (
    AlignmentPath,
    build_Ar,
    converse_certificate,
    expected_kernel_dim,
    kernel_of_Ar,
    to_paths,
)
from .channels import decode_matrix, encode_matrix, transpose_dual
from .errors import (
    ChannelFileError,
    DegeneracyError,
    DegeneracyWarning,
    InfeasibleError,
    PreconditionError,
)
from .feasibility import longest_path_r, is_feasible
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    column_span,
    eigenpairs,
    orth_complement,
    rank,
)
VARIANTS = ("eigen", "critical", "general-case1", "general-case2")


@dataclass(frozen=True, eq=False)
class PathUse:
    """One alignment path contributing its first ``blocks`` vectors to the U's."""

    role: str  # "W", "X" or "w"
    kernel_r: int
    blocks: int
    path: AlignmentPath


@dataclass(frozen=True, eq=False)
class AlignmentSolution:
    M: int
    N: int
    d: int
    U: tuple
    V: tuple
    variant: str
    r: Optional[int] = None
    inventory: dict = field(default_factory=dict)
    paths: tuple = ()
    u_summands: tuple = ()
    v_dims_before_truncation: tuple = ()
    selection: Optional[tuple] = None
    seed: Optional[int] = None
    dualized: bool = False
    notes: tuple = ()


# ---------------------------------------------------------------------------
# shared assembly
# ---------------------------------------------------------------------------

def _unit(v, what):
    n = np.linalg.norm(v)
    if n == 0.0:
        raise DegeneracyError(f"{what} is a zero vector")
    return v / n


def _interference_matrix(ch, U, j):
    return np.hstack([ch.plus(j) @ U[j % 3].basis, ch.minus(j) @ U[(j - 2) % 3].basis])


def _receive_spaces(ch, U, d, tol):
    """Complement of the interference at each receiver, truncated to d."""
    V, before = [], []
    for j in (1, 2, 3):
        full = orth_complement(column_span(_interference_matrix(ch, U, j), tol), tol)
        before.append(full.dim)
        if full.dim < d:
            raise DegeneracyError(
                f"receiver {j}: interference leaves only {full.dim} free dimensions, need {d}"
            )
        V.append(full.truncate(d))
    return tuple(V), tuple(before)


def _assemble_from_paths(ch, uses, d, tol):
    """Distribute path blocks over transmitters, then form U_j and V_j."""
    pieces = {1: [], 2: [], 3: []}
    for use in uses:
        p = use.path
        for t in range(use.blocks):
            pieces[p.transmitter(t)].append(
                _unit(p.vectors[t], f"{use.role} path from start {p.start}, block {t}")
            )
    U, summands = [], []
    for j in (1, 2, 3):
        if len(pieces[j]) != d:
            raise PreconditionError(f"transmitter {j} received {len(pieces[j])} vectors, need {d}")
        mat = np.column_stack(pieces[j])
        u = column_span(mat, tol)
        if u.dim != d:
            raise DegeneracyError(f"U_{j} summands are dependent: rank {u.dim} < {d}")
        U.append(u)
        summands.append(mat)
    U = tuple(U)
    V, before = _receive_spaces(ch, U, d, tol)
    return U, V, tuple(summands), before


def _kernels(ch, r, tol, expected=None):
    expected = expected_kernel_dim(ch.M, ch.N, r) if expected is None else expected
    out = []
    for s in (1, 2, 3):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegeneracyWarning)
            k = kernel_of_Ar(ch, r, s, tol)
        if k.dim != expected:
            raise DegeneracyError(
                f"ker A_{r}^{s} has dim {k.dim}, generic prediction {expected}"
            )
        out.append(k)
    return out


def _refuse(ch, d, tol):
    cert = converse_certificate(ch, d, tol)
    text = cert.inequality if cert is not None else "parameters infeasible"
    raise InfeasibleError(f"alignment infeasible: {text}", cert)


# ---------------------------------------------------------------------------
# eigen construction, M = N = 2d
# ---------------------------------------------------------------------------

def _rdiv(x, y):
    """x @ inv(y) without forming the inverse."""
    return np.linalg.solve(y.T, x.T).T


def cycle_matrix(ch):
    """``H12 H32^-1 H31 H21^-1 H23 H13^-1``; its invariant subspaces are the
    admissible interference spaces at receiver 1."""
    h = ch.h
    b = _rdiv(h(1, 2), h(3, 2))
    b = _rdiv(b @ h(3, 1), h(2, 1))
    return _rdiv(b @ h(2, 3), h(1, 3))


def construct_eigen(ch, d, selection=None, tol=DEFAULT_TOL):
    """Solution for M = N = 2d from ``d`` eigenvectors of the cycle matrix.

    ``selection`` holds 0-based positions in the canonical eigen order
    (default: the first d). Each of the binomial(2d, d) choices gives a
    distinct solution.
    """
    M, N = ch.M, ch.N
    if not (M == N == 2 * d):
        raise PreconditionError(f"eigen construction needs M = N = 2d, got M={M}, N={N}, d={d}")
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j and rank(ch.h(i, j), tol) != M:
                raise DegeneracyError(f"H_{i}{j} is singular")
    sel = tuple(range(d)) if selection is None else tuple(sorted(int(k) for k in selection))
    if len(sel) != d or len(set(sel)) != d or sel[0] < 0 or sel[-1] >= 2 * d:
        raise PreconditionError(f"selection must be {d} distinct indices in [0, {2 * d}), got {selection!r}")

    pairs = eigenpairs(cycle_matrix(ch))
    lam = np.array([p[0] for p in pairs])
    gaps = np.abs(lam[:, None] - lam[None, :])
    np.fill_diagonal(gaps, np.inf)
    if gaps.min() <= tol.residual_tol * max(np.abs(lam).max(), 1.0):
        raise DegeneracyError("cycle matrix has repeated eigenvalues")

    h = ch.h
    s1 = column_span(np.column_stack([pairs[k][1] for k in sel]), tol)
    u3 = column_span(np.linalg.solve(h(1, 3), s1.basis), tol)
    s2 = column_span(h(2, 3) @ u3.basis, tol)
    u1 = column_span(np.linalg.solve(h(2, 1), s2.basis), tol)
    s3 = column_span(h(3, 1) @ u1.basis, tol)
    u2 = column_span(np.linalg.solve(h(3, 2), s3.basis), tol)
    U = (u1, u2, u3)
    if any(u.dim != d for u in U):
        raise DegeneracyError("eigen chain lost dimension")
    V, before = _receive_spaces(ch, U, d, tol)
    return AlignmentSolution(
        M, N, d, U, V, "eigen",
        inventory={"eigenvalues": [complex(l) for l in lam]},
        u_summands=tuple(u.basis for u in U),
        v_dims_before_truncation=before,
        selection=sel,
    )


# ---------------------------------------------------------------------------
# critical construction, M + N = 4d
# ---------------------------------------------------------------------------

def construct_critical(ch, d, tol=DEFAULT_TOL):
    """Solution on the critical line from the full kernels of A_r^i,
    ``r = d / (2d - M) - 1``."""
    M, N = ch.M, ch.N
    gap = 2 * d - M
    if not (N >= M and M + N == 4 * d and gap > 0 and d % gap == 0):
        raise PreconditionError(
            f"critical construction needs N >= M, M + N = 4d and (2d - M) | d; got M={M}, N={N}, d={d}"
        )
    r = d // gap - 1
    ks = _kernels(ch, r, tol, expected=d // (r + 1))
    uses = [
        PathUse("W", r, r + 1, p)
        for s, k in zip((1, 2, 3), ks)
        for p in to_paths(k, M, s)
    ]
    U, V, summands, before = _assemble_from_paths(ch, uses, d, tol)
    return AlignmentSolution(
        M, N, d, U, V, "critical", r=r,
        inventory={"W": {"kernel_r": r, "dim": d // (r + 1), "blocks": r + 1}},
        paths=tuple(uses), u_summands=summands, v_dims_before_truncation=before,
    )


# ---------------------------------------------------------------------------
# general construction, N > M
# ---------------------------------------------------------------------------

def _pad_rows(s, rows):
    b = np.zeros((rows, s.dim), dtype=np.complex128)
    b[: s.ambient] = s.basis
    return Subspace(b)


def _with_reduced_transmitters(ch, d, tol):
    """M = N > 2d: drop the last transmit antenna, solve, and zero-pad U."""
    sub = ch.restrict(m=ch.M - 1)
    if not is_feasible(sub.M, sub.N, d).feasible:
        raise PreconditionError(f"reduced system ({sub.M}, {sub.N}, {d}) is infeasible")
    s = construct_general(sub, d, tol)
    U = tuple(_pad_rows(u, ch.M) for u in s.U)
    V, before = _receive_spaces(ch, U, d, tol)
    return replace(
        s, M=ch.M, U=U, V=V, v_dims_before_truncation=before,
        notes=s.notes + (f"transmit antennas reduced {ch.M} -> {sub.M}",),
    )


def _outside(k, sub, tol):
    """Canonical basis of the part of subspace ``k`` orthogonal to ``sub``."""
    c = k.basis - sub.basis @ (sub.basis.conj().T @ k.basis)
    return column_span(c, tol)


def construct_general(ch, d, tol=DEFAULT_TOL):
    """Solution for feasible N >= M (M = N = 2d excluded: use the eigen route)."""
    M, N = ch.M, ch.N
    if M > N:
        raise PreconditionError("construct_general needs N >= M; dualise first")
    if not is_feasible(M, N, d).feasible:
        _refuse(ch, d, tol)
    if M == N:
        if M == 2 * d:
            raise PreconditionError("M = N = 2d is handled by construct_eigen")
        return _with_reduced_transmitters(ch, d, tol)

    r = longest_path_r(M, N)
    k = (r + 1) * M - r * N
    ks = _kernels(ch, r, tol, expected=k)
    uses = []

    if d <= (r + 1) * k:
        q = d // (r + 1)
        dp = d - (r + 1) * q
        for s, ker in zip((1, 2, 3), ks):
            paths = to_paths(ker, M, s)
            uses += [PathUse("W", r, r + 1, p) for p in paths[:q]]
            if dp > 0:
                uses.append(PathUse("w", r, dp, paths[q]))
        variant = "general-case1"
        inventory = {
            "case": 1, "d_prime": dp,
            "W": {"kernel_r": r, "dim": q, "blocks": r + 1},
            "w": {"kernel_r": r, "dim": int(dp > 0), "blocks": dp},
        }
    else:
        dp = d - (r + 1) * k
        q2 = dp // r
        dpp = dp - r * q2
        short = _kernels(ch, r - 1, tol, expected=expected_kernel_dim(M, N, r - 1))
        for s, ker, ker_short in zip((1, 2, 3), ks, short):
            uses += [PathUse("W", r, r + 1, p) for p in to_paths(ker, M, s)]
            pi_w = ker.basis[: r * M]
            a_short = build_Ar(ch, r - 1, s).matrix
            if a_short.size and np.linalg.norm(a_short @ pi_w) > tol.residual_tol * max(
                1.0, np.linalg.norm(a_short)
            ):
                raise DegeneracyError(f"truncated ker A_{r}^{s} is not inside ker A_{r - 1}^{s}")
            pi_span = column_span(pi_w, tol)
            if pi_span.dim != k:
                raise DegeneracyError(f"truncation of ker A_{r}^{s} lost dimension")
            extra = _outside(ker_short, pi_span, tol)
            need = q2 + int(dpp > 0)
            if extra.dim < need:
                raise DegeneracyError(
                    f"ker A_{r - 1}^{s} offers {extra.dim} directions outside pi(W), need {need}"
                )
            paths = to_paths(extra, M, s)
            uses += [PathUse("X", r - 1, r, p) for p in paths[:q2]]
            if dpp > 0:
                uses.append(PathUse("w", r - 1, dpp, paths[q2]))
        variant = "general-case2"
        inventory = {
            "case": 2, "d_prime": dp, "d_double_prime": dpp,
            "W": {"kernel_r": r, "dim": k, "blocks": r + 1},
            "X": {"kernel_r": r - 1, "dim": q2, "blocks": r},
            "w": {"kernel_r": r - 1, "dim": int(dpp > 0), "blocks": dpp},
        }

    U, V, summands, before = _assemble_from_paths(ch, uses, d, tol)
    return AlignmentSolution(
        M, N, d, U, V, variant, r=r, inventory=inventory,
        paths=tuple(uses), u_summands=summands, v_dims_before_truncation=before,
    )


# ---------------------------------------------------------------------------
# dispatch and duality
# ---------------------------------------------------------------------------

def dual_solution(sol):
    """Map a solution on ``ch`` to one on ``transpose_dual(ch)``: U' = conj(V), V' = conj(U)."""
    return replace(
        sol,
        M=sol.N, N=sol.M,
        U=tuple(Subspace(v.basis.conj()) for v in sol.V),
        V=tuple(Subspace(u.basis.conj()) for u in sol.U),
        dualized=not sol.dualized,
    )


def construct(ch, d, tol=DEFAULT_TOL, selection=None):
    """Aligned transmit/receive subspaces for ``d`` streams on ``ch``.

    Raises :class:`InfeasibleError` (with certificate) for infeasible
    parameters.
    """
    M, N = ch.M, ch.N
    if d < 1:
        raise PreconditionError(f"d must be >= 1, got {d}")
    if not is_feasible(M, N, d).feasible:
        _refuse(ch, d, tol)
    if M > N:
        return dual_solution(construct(transpose_dual(ch), d, tol, selection))
    if M == N == 2 * d:
        return construct_eigen(ch, d, selection, tol)
    return construct_general(ch, d, tol)


# ---------------------------------------------------------------------------
# solution files
# ---------------------------------------------------------------------------

def solution_to_dict(sol):
    doc = {
        "M": int(sol.M),
        "N": int(sol.N),
        "d": int(sol.d),
        "variant": sol.variant,
        "U": [encode_matrix(u.basis) for u in sol.U],
        "V": [encode_matrix(v.basis) for v in sol.V],
    }
    if sol.r is not None:
        doc["r"] = int(sol.r)
    if sol.seed is not None:
        doc["seed"] = int(sol.seed)
    if sol.selection is not None:
        doc["selection"] = list(sol.selection)
    return doc


def solution_from_dict(doc):
    """Load a solution; bases are kept exactly as written (not orthonormalised)."""
    if not isinstance(doc, dict):
        raise ChannelFileError("solution file must hold a JSON object")
    for key in ("M", "N", "d", "variant", "U", "V"):
        if key not in doc:
            raise ChannelFileError(f"missing key {key!r}")
    M, N, d = doc["M"], doc["N"], doc["d"]
    for key, v in (("M", M), ("N", N), ("d", d)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ChannelFileError(f"key {key!r} must be a positive integer, got {v!r}")
    if doc["variant"] not in VARIANTS:
        raise ChannelFileError(f"unknown variant {doc['variant']!r}")

    def load(key, rows):
        mats = doc[key]
        if not isinstance(mats, list) or len(mats) != 3:
            raise ChannelFileError(f"key {key!r} must list three basis matrices")
        out = []
        for k, m in enumerate(mats, start=1):
            cols = len(m[0]) if isinstance(m, list) and m and isinstance(m[0], list) else 0
            out.append(Subspace(decode_matrix(m, rows, cols, f"{key}[{k}]")))
        return tuple(out)

    return AlignmentSolution(
        M, N, d, load("U", M), load("V", N), doc["variant"],
        r=doc.get("r"), seed=doc.get("seed"),
        selection=tuple(doc["selection"]) if doc.get("selection") is not None else None,
    )
