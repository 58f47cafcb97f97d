"""Closed-form feasibility decisions and the (M, N) region sweep.

For N >= M, alignment with d streams per user is feasible iff
``(2r+1) d <= max(r N, (r+1) M)`` for every integer ``r >= 0``; the roles of
M and N swap when M > N.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from . import _kernels
from .errors import PreconditionError

UNBOUNDED = math.inf


def _normalize(M, N):
    return (M, N) if N >= M else (N, M)


def check_horizon(M, N, d):
    """Largest r that needs checking; larger r never flips the verdict."""
    return M + N + 2 * d


def constraint(M, N, d, r):
    """Return ``(lhs, rhs)`` of the r-th feasibility inequality (N >= M assumed)."""
    return (2 * r + 1) * d, max(r * N, (r + 1) * M)


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    violated_r: Optional[int] = None
    binding_r: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            "feasible": self.feasible,
            "violated_r": self.violated_r,
            "binding_r": list(self.binding_r),
        }


def is_feasible(M, N, d):
    for name, v in (("M", M), ("N", N), ("d", d)):
        if v < 1:
            raise PreconditionError(f"{name} must be >= 1, got {v}")
    lo, hi = _normalize(M, N)
    R = check_horizon(M, N, d)
    violated = _kernels.first_violation(lo, hi, d, R)
    binding = []
    for r in range(R + 1):
        lhs, rhs = constraint(lo, hi, d, r)
        if lhs == rhs:
            binding.append(r)
    binding = tuple(binding)
    if violated >= 0:
        return FeasibilityVerdict(False, violated, binding)
    return FeasibilityVerdict(True, None, binding)


def equation_count_bound(M, N, d):
    """Variables-versus-equations necessary condition ``4d <= M + N``."""
    if d > min(M, N):
        raise PreconditionError(f"d={d} exceeds min(M, N)={min(M, N)}")
    return 4 * d <= M + N


def longest_path_r(M, N):
    """The unique r >= 0 with ``rN < (r+1)M`` and ``(r+1)N >= (r+2)M`` (N > M).

    Returns None when M == N (no such r exists).
    """
    lo, hi = _normalize(M, N)
    if lo == hi:
        return None
    # r = ceil(lo / (hi - lo)) - 1
    return -(-lo // (hi - lo)) - 1


def max_path_length(M, N) -> Union[int, float]:
    """Longest alignment path available; :data:`UNBOUNDED` on the diagonal."""
    if M < 1 or N < 1:
        raise PreconditionError(f"M and N must be >= 1, got M={M}, N={N}")
    r = longest_path_r(M, N)
    return UNBOUNDED if r is None else r + 1


def critical_feasible(M, N, d):
    """Feasibility on the critical line ``M + N = 4d``.

    True iff ``M = N = 2d`` or ``2d - M`` (after putting N >= M) divides d.
    """
    if M + N != 4 * d:
        raise PreconditionError(f"critical line requires M + N = 4d, got {M} + {N} != {4 * d}")
    lo, hi = _normalize(M, N)
    gap = 2 * d - lo
    if gap == 0:
        return True
    return d % gap == 0


@dataclass(frozen=True)
class RegionCell:
    M: int
    N: int
    d: int
    feasible: bool
    path_label: Union[int, float]

    @property
    def label_text(self):
        return "inf" if self.path_label == UNBOUNDED else str(self.path_label)


def region_sweep(d, M_max, N_max):
    """Cells for ``d <= M <= M_max``, ``d <= N <= N_max`` in row-major (M outer) order."""
    if M_max < d or N_max < d:
        raise PreconditionError(f"grid bounds must be >= d={d}")
    mask = _kernels.feasibility_grid(d, M_max, N_max)
    return [
        RegionCell(M, N, d, bool(mask[M - 1, N - 1]), max_path_length(M, N))
        for M in range(d, M_max + 1)
        for N in range(d, N_max + 1)
    ]


def region_csv(cells):
    lines = ["M,N,d,feasible,path_label"]
    for c in cells:
        lines.append(f"{c.M},{c.N},{c.d},{'true' if c.feasible else 'false'},{c.label_text}")
    return "\n".join(lines) + "\n"


def region_svg(cells, unit=24):
    """Unit-square grid: white = feasible, #cccccc = infeasible, text = path label.

    M runs along x, N along y with larger N towards the top.
    """
    if not cells:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0"></svg>\n'
    ms = sorted({c.M for c in cells})
    ns = sorted({c.N for c in cells})
    w, h = len(ms) * unit, len(ns) * unit
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">'
    ]
    font = max(unit // 2, 6)
    for c in cells:
        x = (c.M - ms[0]) * unit
        y = (ns[-1] - c.N) * unit
        fill = "#ffffff" if c.feasible else "#cccccc"
        out.append(
            f'<rect x="{x}" y="{y}" width="{unit}" height="{unit}" fill="{fill}" '
            f'stroke="#000000" stroke-width="0.5"><title>M={c.M} N={c.N}</title></rect>'
        )
        out.append(
            f'<text x="{x + unit / 2:g}" y="{y + unit / 2:g}" font-size="{font}" '
            f'text-anchor="middle" dominant-baseline="central">{c.label_text}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
