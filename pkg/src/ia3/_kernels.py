"""Hot integer kernels with a numba path and a pure-numpy fallback.

Set ``IA3_DISABLE_NUMBA=1`` in the environment (before import) to force the
numpy implementations. The numba path is also skipped when numba is not
importable.
"""

import os

import numpy as np

MERSENNE_31 = 2147483647  # 2**31 - 1

_DISABLED = os.environ.get("IA3_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by IA3_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def rank_mod_p_numpy(a, p=MERSENNE_31):
    """Rank of an integer matrix over GF(p) by row-reduction, vectorised per pivot."""
    work = np.mod(np.asarray(a, dtype=np.int64), p)
    rows, cols = work.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(work[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            work[[rank, piv]] = work[[piv, rank]]
        inv = pow(int(work[rank, c]), p - 2, p)
        work[rank] = (work[rank] * inv) % p
        below = work[rank + 1:]
        f = below[:, c].copy()
        hit = f != 0
        if hit.any():
            # f < p and entries < p, so the product stays below 2**62
            below[hit] = (below[hit] - (f[hit, None] * work[rank][None, :]) % p) % p
        rank += 1
    return rank


def first_violation_numpy(m, n, d, r_max):
    """Smallest r in [0, r_max] with (2r+1)d > max(rn, (r+1)m), or -1."""
    r = np.arange(r_max + 1, dtype=np.int64)
    bad = (2 * r + 1) * d > np.maximum(r * n, (r + 1) * m)
    idx = np.flatnonzero(bad)
    return int(idx[0]) if idx.size else -1


def feasibility_grid_numpy(d, m_max, n_max, slack):
    """Boolean grid ``out[M-1, N-1]`` of feasibility for all 1 <= M, N <= bounds.

    ``slack`` multiplies the per-point check horizon ``M + N + 2d``.
    """
    out = np.zeros((m_max, n_max), dtype=np.bool_)
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            lo, hi = min(m, n), max(m, n)
            out[m - 1, n - 1] = first_violation_numpy(lo, hi, d, slack * (m + n + 2 * d)) < 0
    return out


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _rank_mod_p_jit(work, p):
        rows, cols = work.shape
        for i in range(rows):
            for j in range(cols):
                work[i, j] = work[i, j] % p
                if work[i, j] < 0:
                    work[i, j] += p
        rank = 0
        for c in range(cols):
            if rank == rows:
                break
            piv = -1
            for i in range(rank, rows):
                if work[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(cols):
                    t = work[rank, j]
                    work[rank, j] = work[piv, j]
                    work[piv, j] = t
            # Fermat inverse by square-and-multiply
            base = work[rank, c]
            e = p - 2
            inv = 1
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for j in range(c, cols):
                work[rank, j] = (work[rank, j] * inv) % p
            for i in range(rank + 1, rows):
                f = work[i, c]
                if f == 0:
                    continue
                for j in range(c, cols):
                    work[i, j] = (work[i, j] + p - (f * work[rank, j]) % p) % p
            rank += 1
        return rank

    @njit(cache=True, nogil=True)
    def _first_violation_jit(m, n, d, r_max):
        for r in range(r_max + 1):
            rhs = max(r * n, (r + 1) * m)
            if (2 * r + 1) * d > rhs:
                return r
        return -1

    @njit(cache=True, nogil=True)
    def _feasibility_grid_jit(d, m_max, n_max, slack):
        out = np.zeros((m_max, n_max), dtype=np.bool_)
        for m in range(1, m_max + 1):
            for n in range(1, n_max + 1):
                lo = min(m, n)
                hi = max(m, n)
                out[m - 1, n - 1] = _first_violation_jit(lo, hi, d, slack * (m + n + 2 * d)) < 0
        return out

    def rank_mod_p(a, p=MERSENNE_31):
        work = np.array(a, dtype=np.int64, copy=True)
        if work.ndim != 2 or work.size == 0:
            return 0
        return int(_rank_mod_p_jit(work, np.int64(p)))

    def first_violation(m, n, d, r_max):
        return int(_first_violation_jit(m, n, d, r_max))

    def feasibility_grid(d, m_max, n_max, slack=1):
        return _feasibility_grid_jit(d, m_max, n_max, slack)

else:

    def rank_mod_p(a, p=MERSENNE_31):
        a = np.asarray(a)
        if a.ndim != 2 or a.size == 0:
            return 0
        return rank_mod_p_numpy(a, p)

    def first_violation(m, n, d, r_max):
        return first_violation_numpy(m, n, d, r_max)

    def feasibility_grid(d, m_max, n_max, slack=1):
        return feasibility_grid_numpy(d, m_max, n_max, slack)


rank_mod_p.__doc__ = "Exact rank of an integer matrix over GF(p); empty shapes give 0."
first_violation.__doc__ = first_violation_numpy.__doc__
feasibility_grid.__doc__ = feasibility_grid_numpy.__doc__
