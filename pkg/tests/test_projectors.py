"""Structural matrices, the group inverse routes, and the projector bundle."""

import threading
from fractions import Fraction
from itertools import chain, combinations

import pytest

from gamedecomp.games import GameSpace
from gamedecomp.linalg import (
    Matrix,
    block_diag,
    group_inverse_via_solve,
    hstack,
    kron,
    mp_inverse,
    rank,
    vstack,
)
from gamedecomp.projectors import (
    SubspaceKind,
    build_B_N,
    build_B_P,
    build_E,
    build_P_N,
    build_e,
    build_e_set,
    build_projectors,
    closed_form_coefficients,
    group_inverse_closed_form,
    group_inverse_solve_route,
    subspace_dimension,
)

SMALL_SPACES = [GameSpace(c) for c in [(2, 2), (2, 3), (3, 2), (2, 2, 2)]]


def strategy_residual(space):
    """A = sum of I - e_i/k_i, the matrix whose group inverse is X."""
    total = Matrix.zeros(space.k, space.k)
    for i, count in enumerate(space.strategy_counts, start=1):
        total = total + Matrix.identity(space.k) - build_e(space, i) * Fraction(1, count)
    return total


def test_build_E_shape_and_content():
    space = GameSpace((2, 2))
    assert build_E(space, 1) == kron(Matrix.ones(2, 1), Matrix.identity(2))
    assert build_E(space, 2) == kron(Matrix.identity(2), Matrix.ones(2, 1))
    for sp in SMALL_SPACES:
        for i, count in enumerate(sp.strategy_counts, start=1):
            e_i = build_E(sp, i)
            assert e_i.shape == (sp.k, sp.k // count)
            assert e_i.T @ e_i == count * Matrix.identity(sp.k // count)
    with pytest.raises(ValueError):
        build_E(space, 3)


def test_mp_inverse_of_E_is_scaled_transpose():
    space = GameSpace((2, 3))
    for i, count in enumerate(space.strategy_counts, start=1):
        e_i = build_E(space, i)
        assert mp_inverse(e_i) == e_i.T * Fraction(1, count)


def test_averaging_blocks():
    for space in SMALL_SPACES:
        for i, count in enumerate(space.strategy_counts, start=1):
            e_i = build_E(space, i)
            block = build_e(space, i)
            assert block == e_i @ e_i.T
            assert block.is_symmetric()
            assert block @ block == count * block


def test_e_set_extremes_and_product_form():
    space = GameSpace((2, 3, 2))
    assert build_e_set(space, ()) == Matrix.identity(space.k)
    assert build_e_set(space, (1, 2, 3)) == Matrix.ones(space.k, space.k)
    players = (1, 2, 3)
    for subset in chain.from_iterable(
        combinations(players, size) for size in range(4)
    ):
        product = Matrix.identity(space.k)
        for i in subset:
            product = product @ build_e(space, i)
        assert build_e_set(space, subset) == product


def test_B_N_rank():
    assert rank(build_B_N(GameSpace((2, 2)))) == 4
    assert rank(build_B_N(GameSpace((3, 3)))) == 6
    space = GameSpace((2, 3, 2))
    assert rank(build_B_N(space)) == sum(space.k // c for c in space.strategy_counts)


def test_B_P_rank_and_containment():
    space = GameSpace((2, 2))
    b_p = build_B_P(space)
    assert rank(b_p) == 7
    # the block-diagonal lift columns sit inside B_P's column space
    assert rank(hstack([b_p, build_B_N(space)])) == 7


def test_single_player_space_degenerates():
    space = GameSpace((4,))
    assert build_B_N(space) == build_E(space, 1)
    bundle = build_projectors(space)
    assert bundle.potential == Matrix.identity(4)


def test_P_N_columns_orthogonal_to_B_N():
    space = GameSpace((2, 2, 2))
    assert (build_B_N(space).T @ build_P_N(space)).is_zero()


def test_P_N_rank():
    assert rank(build_P_N(GameSpace((3, 3)))) == 8  # k - 1


def test_P_N_B_N_factorization_through_B_P():
    # [P_N | B_N] equals B_P times the unit lower-triangular elimination factor
    for space in SMALL_SPACES:
        k = space.k
        widths = [k // c for c in space.strategy_counts]
        top = hstack([Matrix.identity(k)] + [Matrix.zeros(k, w) for w in widths])
        rows = [top]
        for i, count in enumerate(space.strategy_counts, start=1):
            blocks = [build_E(space, i).T * Fraction(-1, count)]
            for j, width in enumerate(widths, start=1):
                blocks.append(
                    Matrix.identity(width) if i == j else Matrix.zeros(widths[i - 1], width)
                )
            rows.append(hstack(blocks))
        factor = vstack(rows)
        assert build_B_P(space) @ factor == hstack(
            [build_P_N(space), build_B_N(space)]
        )


def test_closed_form_coefficients_two_players():
    coeffs = closed_form_coefficients(2)
    assert coeffs[frozenset()] == Fraction(1, 2)
    assert coeffs[frozenset((1,))] == Fraction(1, 2)
    assert coeffs[frozenset((2,))] == Fraction(1, 2)
    assert coeffs[frozenset((1, 2))] == Fraction(-3, 2)


def test_closed_form_coefficients_three_players():
    coeffs = closed_form_coefficients(3)
    assert coeffs[frozenset()] == Fraction(1, 3)
    for single in ((1,), (2,), (3,)):
        assert coeffs[frozenset(single)] == Fraction(1, 6)
    for pair in ((1, 2), (1, 3), (2, 3)):
        assert coeffs[frozenset(pair)] == Fraction(1, 3)
    assert coeffs[frozenset((1, 2, 3))] == Fraction(-11, 6)


def test_closed_form_expanded_for_two_players():
    # X = I/2 + e_1/(2 k_1) + e_2/(2 k_2) - 3 e_1 e_2 / (2 k_1 k_2)
    space = GameSpace((2, 3))
    k1, k2 = space.strategy_counts
    expected = (
        Matrix.identity(space.k) * Fraction(1, 2)
        + build_e(space, 1) * Fraction(1, 2 * k1)
        + build_e(space, 2) * Fraction(1, 2 * k2)
        + build_e_set(space, (1, 2)) * Fraction(-3, 2 * k1 * k2)
    )
    assert group_inverse_closed_form(space) == expected


def test_group_inverse_routes_agree():
    for space in SMALL_SPACES:
        closed = group_inverse_closed_form(space)
        assert closed == group_inverse_solve_route(space)
        assert closed == group_inverse_via_solve(strategy_residual(space))


def test_group_inverse_satisfies_group_axioms():
    for space in SMALL_SPACES:
        a = strategy_residual(space)
        x = group_inverse_closed_form(space)
        assert a @ x @ a == a
        assert x @ a @ x == x
        assert a @ x == x @ a


def test_group_inverse_times_P_N_transpose_is_pseudoinverse():
    space = GameSpace((2, 3))
    p_n = build_P_N(space)
    assert group_inverse_closed_form(space) @ p_n.T == mp_inverse(p_n)


def test_projector_bundle_algebra():
    space = GameSpace((3, 2))
    bundle = build_projectors(space)
    parts = (bundle.pure_potential, bundle.nonstrategic, bundle.pure_harmonic)
    identity = Matrix.identity(space.payoff_cells)
    assert parts[0] + parts[1] + parts[2] == identity
    for kind in SubspaceKind:
        p = bundle.projection(kind)
        assert p.is_symmetric()
        assert p @ p == p
        assert p.trace() == subspace_dimension(space, kind)
    for i in range(3):
        for j in range(3):
            if i != j:
                assert (parts[i] @ parts[j]).is_zero()
    assert bundle.potential == parts[0] + parts[1]
    assert bundle.harmonic == identity - parts[0]


def test_nonstrategic_projection_is_averaging_blockdiag():
    space = GameSpace((2, 2, 2))
    bundle = build_projectors(space)
    expected = block_diag(
        [
            build_e(space, i) * Fraction(1, count)
            for i, count in enumerate(space.strategy_counts, start=1)
        ]
    )
    assert bundle.nonstrategic == expected


def test_bundle_is_cached_per_signature():
    a = build_projectors(GameSpace((2, 2)))
    b = build_projectors(GameSpace((2, 2), cell_cap=512))
    assert a is b


def test_concurrent_builds_share_one_bundle():
    space = GameSpace((2, 5))
    results = []

    def worker():
        results.append(build_projectors(space))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(results) == 8
    assert all(r is results[0] for r in results)


def test_subspace_dimensions_sum():
    for space in SMALL_SPACES:
        total = sum(
            subspace_dimension(space, kind)
            for kind in (
                SubspaceKind.PURE_POTENTIAL,
                SubspaceKind.NONSTRATEGIC,
                SubspaceKind.PURE_HARMONIC,
            )
        )
        assert total == space.payoff_cells
