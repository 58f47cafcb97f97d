import itertools

import numpy as np
import pytest

from ia3 import (
    InfeasibleError,
    PreconditionError,
    check_path,
    construct,
    construct_critical,
    construct_eigen,
    construct_general,
    generate_channels,
    is_feasible,
    rank,
    subspace_distance,
    verify,
)
from ia3.construct import cycle_matrix, solution_from_dict, solution_to_dict


def _dist(a, b):
    return max(subspace_distance(x, y) for x, y in zip(a.U + a.V, b.U + b.V))


def test_dispatch_eigen():
    ch = generate_channels(2, 2, 0)
    sol = construct(ch, 1)
    assert sol.variant == "eigen"
    assert verify(ch, sol, 1).passed


def test_dispatch_general_critical_point(ch_3_5):
    sol = construct(ch_3_5, 2)
    assert sol.variant == "general-case1" and sol.r == 1
    assert sol.inventory["d_prime"] == 0
    assert all(u.blocks == 2 for u in sol.paths)


def test_refusal_carries_certificate():
    with pytest.raises(InfeasibleError) as info:
        construct(generate_channels(1, 2, 0), 1)
    assert info.value.certificate.r == 1


def test_eigen_two_solutions_for_d1():
    ch = generate_channels(2, 2, 3)
    a = construct_eigen(ch, 1, (0,))
    b = construct_eigen(ch, 1, (1,))
    assert verify(ch, a, 1).passed and verify(ch, b, 1).passed
    assert _dist(a, b) > 1e-4


def test_eigen_all_selections_d2():
    ch = generate_channels(4, 4, 1)
    sols = [construct_eigen(ch, 2, sel) for sel in itertools.combinations(range(4), 2)]
    assert len(sols) == 6
    assert all(verify(ch, s, 2).passed for s in sols)
    for a, b in itertools.combinations(sols, 2):
        assert _dist(a, b) > 1e-4


def test_eigen_preconditions():
    with pytest.raises(PreconditionError):
        construct_eigen(generate_channels(3, 3, 0), 1)
    with pytest.raises(PreconditionError):
        construct_eigen(generate_channels(2, 2, 0), 1, (0, 1))


def test_cycle_matrix_definition():
    ch = generate_channels(2, 2, 8)
    h, inv = ch.h, np.linalg.inv
    direct = h(1, 2) @ inv(h(3, 2)) @ h(3, 1) @ inv(h(2, 1)) @ h(2, 3) @ inv(h(1, 3))
    assert np.allclose(cycle_matrix(ch), direct, atol=1e-10)


@pytest.mark.parametrize("M, N, d, r, kdim", [(3, 5, 2, 1, 1), (9, 15, 6, 1, 3), (10, 14, 6, 2, 2)])
def test_critical_construction(M, N, d, r, kdim):
    ch = generate_channels(M, N, 2)
    sol = construct_critical(ch, d)
    assert sol.r == r and sol.inventory["W"]["dim"] == kdim
    rep = verify(ch, sol, d)
    assert rep.passed
    assert rep.dims_U == (d, d, d) and rep.dims_V == (d, d, d)


def test_critical_preconditions():
    with pytest.raises(PreconditionError):
        construct_critical(generate_channels(4, 8, 0), 3)


@pytest.mark.parametrize("M, N, d", [(3, 5, 2), (9, 15, 6), (10, 14, 6)])
def test_case1_matches_critical(M, N, d):
    ch = generate_channels(M, N, 6)
    assert _dist(construct_general(ch, d), construct_critical(ch, d)) <= 1e-8


def test_case2_mixed_paths(ch_7_10):
    sol = construct_general(ch_7_10, 4)
    assert sol.variant == "general-case2" and sol.r == 2
    inv = sol.inventory
    assert inv["d_prime"] == 1 and inv["d_double_prime"] == 1
    assert inv["W"] == {"kernel_r": 2, "dim": 1, "blocks": 3}
    assert inv["w"] == {"kernel_r": 1, "dim": 1, "blocks": 1}
    assert {u.path.length for u in sol.paths if u.role == "W"} == {3}
    assert {u.path.length for u in sol.paths if u.role == "w"} == {2}
    assert verify(ch_7_10, sol, 4).passed


def test_case1_remainder_only():
    ch = generate_channels(5, 6, 0)
    sol = construct_general(ch, 2)
    assert sol.variant == "general-case1" and sol.r == 4
    assert sol.inventory["W"]["dim"] == 0 and sol.inventory["d_prime"] == 2
    assert all(u.role == "w" for u in sol.paths)
    assert verify(ch, sol, 2).passed


def test_square_above_half_uses_reduction():
    ch = generate_channels(5, 5, 0)
    sol = construct(ch, 2)
    assert sol.variant.startswith("general")
    assert verify(ch, sol, 2).passed


def test_wide_system_via_dual():
    ch = generate_channels(5, 3, 0)
    sol = construct(ch, 2)
    assert sol.dualized and (sol.M, sol.N) == (5, 3)
    assert verify(ch, sol, 2).passed


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("M, N, d", [(3, 5, 2), (7, 10, 4), (2, 7, 2), (6, 10, 4), (5, 9, 3), (4, 6, 2), (11, 14, 6)])
def test_dimension_audit(M, N, d, seed):
    assert is_feasible(M, N, d).feasible
    ch = generate_channels(M, N, seed)
    sol = construct(ch, d)
    for mat in sol.u_summands:
        assert mat.shape[1] == d
        assert rank(mat) == d
    assert all(k >= d for k in sol.v_dims_before_truncation)
    for use in sol.paths:
        assert check_path(ch, use.path) <= 1e-8


def test_reproducible(ch_7_10):
    a = construct(ch_7_10, 4)
    b = construct(ch_7_10, 4)
    for x, y in zip(a.U + a.V, b.U + b.V):
        assert np.array_equal(x.basis, y.basis)


def test_solution_round_trip(ch_3_5):
    sol = construct(ch_3_5, 2)
    back = solution_from_dict(solution_to_dict(sol))
    assert back.variant == sol.variant and back.r == 1
    assert verify(ch_3_5, back, 2).passed
    for x, y in zip(sol.U, back.U):
        assert np.array_equal(x.basis, y.basis)
