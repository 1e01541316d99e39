"""Definition-level game checks and Nash-equilibrium analysis.

The membership checks here work straight from the defining payoff
equations, with no projection matrices, so they can confirm the
projection route independently.  The Nash side covers exhaustive pure
equilibrium enumeration, the uniformly-mixed equilibrium test, the
zero-payoff characterization of pure equilibria in pure harmonic
games, and the dimension of the pure-harmonic games having a chosen
profile as a pure equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gamedecomp.decompose import PotentialFunction
from gamedecomp.games import Game, GameSpace, MixedProfile
from gamedecomp.linalg import Matrix, block_diag, hstack, kron, rank, vstack
from gamedecomp.projectors import build_E


@dataclass(frozen=True)
class NashReport:
    """Pure equilibria plus the uniformly-mixed equilibrium verdict."""

    pure_equilibria: tuple[tuple[int, ...], ...]
    uniform_mixed_is_nash: bool


def _own_strategy_variants(space: GameSpace, profile: Sequence[int], player: int):
    """All profiles that differ from the given one only in player's choice."""
    for choice in range(1, space.strategy_counts[player - 1] + 1):
        varied = list(profile)
        varied[player - 1] = choice
        yield tuple(varied)


def check_nonstrategic_defn(game: Game) -> bool:
    """Whether every player's payoff ignores that player's own strategy."""
    space = game.space
    for i in range(1, space.n + 1):
        row = game.payoff_rows[i - 1]
        for profile in space.profiles():
            if profile[i - 1] != 1:
                continue
            anchor = row[space.profile_index(profile) - 1]
            for varied in _own_strategy_variants(space, profile, i):
                if row[space.profile_index(varied) - 1] != anchor:
                    return False
    return True


def check_pure_harmonic_defn(game: Game) -> bool:
    """Payoffs sum to zero across players at every profile, and each
    player's payoffs sum to zero along that player's own strategy axis."""
    space = game.space
    for profile in space.profiles():
        idx = space.profile_index(profile) - 1
        if sum((row[idx] for row in game.payoff_rows), Fraction(0)) != 0:
            return False
    for i in range(1, space.n + 1):
        row = game.payoff_rows[i - 1]
        for profile in space.profiles():
            if profile[i - 1] != 1:
                continue
            total = Fraction(0)
            for varied in _own_strategy_variants(space, profile, i):
                total += row[space.profile_index(varied) - 1]
            if total != 0:
                return False
    return True


def check_harmonic_defn(game: Game) -> bool:
    """At every profile the players' own-strategy averaging residuals cancel."""
    space = game.space
    for profile in space.profiles():
        idx = space.profile_index(profile) - 1
        residual = Fraction(0)
        for i, count in enumerate(space.strategy_counts, start=1):
            row = game.payoff_rows[i - 1]
            own_sum = Fraction(0)
            for varied in _own_strategy_variants(space, profile, i):
                own_sum += row[space.profile_index(varied) - 1]
            residual += own_sum / count - row[idx]
        if residual != 0:
            return False
    return True


def check_potential_defn(game: Game, phi: PotentialFunction) -> bool:
    """Exhaustively verify the deviation identity for a claimed potential.

    For every player and every unilateral deviation, the payoff change
    must equal the potential change.
    """
    space = game.space
    if len(phi.values) != space.k:
        raise ValueError(f"potential has {len(phi.values)} values, expected {space.k}")
    for i in range(1, space.n + 1):
        row = game.payoff_rows[i - 1]
        for profile in space.profiles():
            idx = space.profile_index(profile) - 1
            for varied in _own_strategy_variants(space, profile, i):
                jdx = space.profile_index(varied) - 1
                if row[jdx] - row[idx] != phi.values[jdx] - phi.values[idx]:
                    return False
    return True


def pure_nash(game: Game) -> list[tuple[int, ...]]:
    """All pure Nash equilibria: no unilateral deviation strictly improves."""
    space = game.space
    out = []
    for profile in space.profiles():
        idx = space.profile_index(profile) - 1
        good = True
        for i in range(1, space.n + 1):
            row = game.payoff_rows[i - 1]
            if any(
                row[space.profile_index(varied) - 1] > row[idx]
                for varied in _own_strategy_variants(space, profile, i)
            ):
                good = False
                break
        if good:
            out.append(profile)
    return out


def uniform_mixed_nash_check(game: Game) -> bool:
    """Whether the uniformly mixed profile is a mixed Nash equilibrium.

    Pure deviations suffice: expected payoff is linear in one player's
    mixture, so the maximum over deviations is attained at a vertex.
    """
    space = game.space
    uniform = MixedProfile.uniform(space)
    for i, count in enumerate(space.strategy_counts, start=1):
        base = game.expected_payoff(i, uniform)
        for choice in range(1, count + 1):
            if game.expected_payoff(i, uniform.with_pure(i, choice)) > base:
                return False
    return True


def harmonic_pure_nash_zero_check(game: Game, profile: Sequence[int]) -> bool:
    """For a pure harmonic game: is the profile an equilibrium of the
    all-payoffs-zero kind (the only kind such games admit)?

    True iff every player's payoff is zero at the profile and at every
    own-strategy variant of it.  Raises ValueError when the game is not
    pure harmonic.
    """
    if not check_pure_harmonic_defn(game):
        raise ValueError("game is not pure harmonic")
    space = game.space
    s = space.check_profile(profile)
    for i in range(1, space.n + 1):
        row = game.payoff_rows[i - 1]
        for varied in _own_strategy_variants(space, s, i):
            if row[space.profile_index(varied) - 1] != 0:
                return False
    return True


def harmonic_nash_kernel_dim(space: GameSpace, profile: Sequence[int]) -> int:
    """Dimension of the pure-harmonic games with the profile as pure Nash.

    Stacks three constraint blocks on payoff space: the row of n
    identities (payoffs sum to zero per profile), the block diagonal of
    the E_i transposes (own-axis sums zero), and the block diagonal of
    profile selectors (player i's payoffs vanish on the own-strategy
    line through the profile).  The games in question form the kernel,
    so the dimension is n*k minus the stack's rank.
    """
    s = space.check_profile(profile)
    identity_row = hstack([Matrix.identity(space.k)] * space.n)
    lift_block = block_diag([build_E(space, i).T for i in range(1, space.n + 1)])
    selectors = []
    for i, count in enumerate(space.strategy_counts, start=1):
        before = space.k_between(1, i - 1)
        after = space.k_between(i + 1, space.n)
        prefix = _subprofile_selector(space, s, 1, i - 1, before)
        suffix = _subprofile_selector(space, s, i + 1, space.n, after)
        selectors.append(kron(kron(prefix, Matrix.identity(count)), suffix))
    selector_block = block_diag(selectors)
    stacked = vstack([identity_row, lift_block, selector_block])
    return space.payoff_cells - rank(stacked)


def _subprofile_selector(
    space: GameSpace, profile: tuple[int, ...], p: int, q: int, width: int
) -> Matrix:
    """Row that picks out the profile's coordinates for players p..q."""
    if q < p:
        return Matrix.identity(1)
    index = 0
    for i in range(p, q + 1):
        index = index * space.strategy_counts[i - 1] + (profile[i - 1] - 1)
    return Matrix.basis_column(width, index + 1).T


def nash_report(game: Game) -> NashReport:
    """Bundle the pure enumeration and the uniform-mixing verdict."""
    return NashReport(
        pure_equilibria=tuple(pure_nash(game)),
        uniform_mixed_is_nash=uniform_mixed_nash_check(game),
    )
