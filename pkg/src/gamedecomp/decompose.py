"""Splitting games into components and extracting potential functions.

decompose() applies the cached projections to a game's stacked payoff
column and returns the three component games, whose sum reproduces the
input exactly.  Potential functions are extracted two independent ways:
a closed-form product of structural matrices, and a direct solve of the
block linear system whose consistency characterizes potentiality.  The
two results agree up to an additive constant whenever both exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gamedecomp.games import Game, GameSpace
from gamedecomp.linalg import Matrix, hstack, solve_linear, vstack
from gamedecomp.projectors import SubspaceKind, build_E, build_P_N, build_projectors


@dataclass(frozen=True)
class Decomposition:
    """The three mutually orthogonal parts of a game."""

    pure_potential: Game
    nonstrategic: Game
    pure_harmonic: Game

    def total(self) -> Game:
        return self.pure_potential + self.nonstrategic + self.pure_harmonic


@dataclass(frozen=True)
class PotentialFunction:
    """A potential's values over profiles, in profile-index order.

    A potential is only determined up to an additive constant; the
    extraction routines fix the representative their formula produces
    and comparisons are made modulo constants.  The per-player offset
    blocks that accompany the extraction are kept for inspection.
    """

    values: tuple[Fraction, ...]
    player_offsets: tuple[tuple[Fraction, ...], ...] = ()

    def shifted(self, constant: Fraction | int) -> "PotentialFunction":
        c = Fraction(constant)
        return PotentialFunction(
            tuple(v + c for v in self.values), self.player_offsets
        )

    def value_at(self, space: GameSpace, profile: Sequence[int]) -> Fraction:
        return self.values[space.profile_index(profile) - 1]


def differs_by_constant(
    a: Sequence[Fraction], b: Sequence[Fraction]
) -> bool:
    """Whether two value vectors differ by one shared constant."""
    if len(a) != len(b) or not a:
        return False
    delta = a[0] - b[0]
    return all(x - y == delta for x, y in zip(a, b))


def decompose(game: Game) -> Decomposition:
    """Split a game into pure potential, nonstrategic, and pure harmonic parts."""
    bundle = build_projectors(game.space)
    u = game.structure_vector()
    return Decomposition(
        pure_potential=Game.from_vector(game.space, bundle.pure_potential @ u),
        nonstrategic=Game.from_vector(game.space, bundle.nonstrategic @ u),
        pure_harmonic=Game.from_vector(game.space, bundle.pure_harmonic @ u),
    )


def is_member(game: Game, kind: SubspaceKind) -> bool:
    """Whether the game lies in a canonical subspace: P @ u == u exactly."""
    bundle = build_projectors(game.space)
    u = game.structure_vector()
    return (bundle.projection(kind) @ u) == u


def raw_potential_vector(game: Game) -> tuple[Fraction, ...]:
    """First block of the closed-form potential expression, for any game.

    For potential games this is the canonical potential's value vector.
    For anything else its meaning is an open question; it is exposed for
    experimentation only.
    """
    bundle = build_projectors(game.space)
    u = game.structure_vector()
    phi = bundle.group_inverse @ (build_P_N(game.space).T @ u)
    return phi.column_tuple(0)


def potential_function(game: Game) -> PotentialFunction | None:
    """Canonical potential of a potential game, else None.

    The value vector is the first block of the closed-form expression
    (the group inverse applied to the pure-potential lift of the payoff
    column, no constant added); the per-player offsets are the
    remaining blocks.
    """
    if not is_member(game, SubspaceKind.POTENTIAL):
        return None
    space = game.space
    values = raw_potential_vector(game)
    phi = Matrix.column(values)
    offsets = []
    for i, count in enumerate(space.strategy_counts, start=1):
        u_i = Matrix.column(game.payoff_rows[i - 1])
        block = build_E(space, i).T @ (u_i - phi) * Fraction(1, count)
        offsets.append(block.column_tuple(0))
    return PotentialFunction(values=tuple(values), player_offsets=tuple(offsets))


def solve_potential_equation(game: Game) -> PotentialFunction | None:
    """Potential extraction by solving the deviation-difference system.

    Unknowns are the per-player offset blocks; the equations say that
    all players' payoff rows differ from a shared potential only
    through their own offset lift.  Inconsistency means the game is not
    potential.  Free variables are zeroed, so the output is
    deterministic (and generally differs from potential_function by a
    constant, not entrywise).
    """
    space = game.space
    lifts = [build_E(space, i) for i in range(1, space.n + 1)]
    widths = [space.k // c for c in space.strategy_counts]
    if space.n == 1:
        # no cross-player constraints; the potential is the payoff row
        offsets = (tuple([Fraction(0)] * widths[0]),)
        return PotentialFunction(values=game.payoff_rows[0], player_offsets=offsets)
    block_rows = []
    rhs_blocks = []
    for j in range(2, space.n + 1):
        blocks = []
        for i in range(1, space.n + 1):
            if i == 1:
                blocks.append(-lifts[0])
            elif i == j:
                blocks.append(lifts[j - 1])
            else:
                blocks.append(Matrix.zeros(space.k, widths[i - 1]))
        block_rows.append(hstack(blocks))
        rhs_blocks.append(
            Matrix.column(game.payoff_rows[j - 1]) - Matrix.column(game.payoff_rows[0])
        )
    system = vstack(block_rows)
    rhs = vstack(rhs_blocks)
    solution = solve_linear(system, rhs)
    if solution is None:
        return None
    offsets = []
    start = 0
    for width in widths:
        offsets.append(solution.column_tuple(0)[start : start + width])
        start += width
    xi_1 = Matrix.column(offsets[0])
    phi = Matrix.column(game.payoff_rows[0]) - lifts[0] @ xi_1
    return PotentialFunction(
        values=phi.column_tuple(0), player_offsets=tuple(offsets)
    )


def nonstrategic_component_direct(game: Game) -> Game:
    """Nonstrategic part by per-profile averaging, no matrices involved.

    Replaces each payoff with the mean of that player's payoffs over
    the player's own strategies, holding everyone else fixed.  Serves
    as an independent cross-check of the projection route.
    """
    space = game.space
    rows = []
    for i, count in enumerate(space.strategy_counts, start=1):
        row = list(game.payoff_rows[i - 1])
        averaged = [Fraction(0)] * space.k
        for profile in space.profiles():
            idx = space.profile_index(profile)
            total = Fraction(0)
            for choice in range(1, count + 1):
                varied = list(profile)
                varied[i - 1] = choice
                total += row[space.profile_index(varied) - 1]
            averaged[idx - 1] = total / count
        rows.append(tuple(averaged))
    return Game(space, tuple(rows))
