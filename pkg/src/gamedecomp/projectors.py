"""Closed-form orthogonal projections onto the canonical game subspaces.

The payoff space of a signature [n; k_1..k_n] splits orthogonally into
pure potential, nonstrategic, and pure harmonic parts.  The projections
onto all five canonical subspaces (those three plus their two natural
sums, the potential and harmonic subspaces) have closed-form rational
entries built from a handful of structural matrices:

  E_i   averaging lift for player i          (k x k/k_i)
  e_i   = E_i @ E_i.T, the within-player-i averaging block (k x k)
  B_N   block diagonal of the E_i            (nk x sum k/k_i)
  B_P   [stacked I_k | block diag E_i]       (nk x (k + sum k/k_i))
  P_N   stacked I_k - e_i/k_i blocks         (nk x k)

plus the group inverse X of sum_i (I_k - e_i/k_i), which this module
computes two independent ways: a closed-form weighted sum over subsets
of players, and a literal solve of the defining equation in the
commutative algebra generated by the e_i.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from gamedecomp.games import GameSpace
from gamedecomp.linalg import Matrix, block_diag, hstack, kron, solve_linear, vstack


class SubspaceKind(Enum):
    """The five canonical subspaces of a payoff space."""

    PURE_POTENTIAL = "pure-potential"
    NONSTRATEGIC = "nonstrategic"
    PURE_HARMONIC = "pure-harmonic"
    POTENTIAL = "potential"
    HARMONIC = "harmonic"


def build_E(space: GameSpace, player: int) -> Matrix:
    """Lift matrix E_i: identity on other players, all-ones column on i.

    E_i.T averages nothing; it sums player i's strategy axis.  Shape is
    k x (k/k_i), and E_i.T @ E_i = k_i * I.
    """
    _check_player(space, player)
    before = Matrix.identity(space.k_between(1, player - 1))
    ones = Matrix.ones(space.strategy_counts[player - 1], 1)
    after = Matrix.identity(space.k_between(player + 1, space.n))
    return kron(kron(before, ones), after)


def build_e(space: GameSpace, player: int) -> Matrix:
    """Averaging block e_i = E_i @ E_i.T (k x k, symmetric, e_i^2 = k_i e_i)."""
    _check_player(space, player)
    return build_e_set(space, (player,))


def build_e_set(space: GameSpace, players: Iterable[int]) -> Matrix:
    """Product of the commuting e_i over a subset of players.

    Computed in one pass as a Kronecker product with an all-ones block
    on each listed player's axis and identity elsewhere.  The empty
    subset gives I_k, the full subset the all-ones k x k matrix.
    """
    chosen = set(players)
    for player in chosen:
        _check_player(space, player)
    out = Matrix.identity(1)
    for i, count in enumerate(space.strategy_counts, start=1):
        factor = Matrix.ones(count, count) if i in chosen else Matrix.identity(count)
        out = kron(out, factor)
    return out


def build_B_N(space: GameSpace) -> Matrix:
    """Block diagonal of the E_i; its column space is the nonstrategic part."""
    return block_diag([build_E(space, i) for i in range(1, space.n + 1)])


def build_B_P(space: GameSpace) -> Matrix:
    """[stacked identities | block diag E_i]; spans the potential subspace."""
    stacked = vstack([Matrix.identity(space.k)] * space.n)
    return hstack([stacked, build_B_N(space)])


def build_P_N(space: GameSpace) -> Matrix:
    """Stacked normalization blocks I_k - e_i/k_i; spans the pure potential part."""
    blocks = []
    identity = Matrix.identity(space.k)
    for i, count in enumerate(space.strategy_counts, start=1):
        blocks.append(identity - build_e(space, i) * Fraction(1, count))
    return vstack(blocks)


# -- the group inverse X of sum_i (I - e_i/k_i) -------------------------


def closed_form_coefficients(n: int) -> dict[frozenset[int], Fraction]:
    """Subset weights of the closed-form group inverse.

    The group inverse of sum_i (I - e_i/k_i) equals

        sum over proper subsets S of {1..n} of
            1 / ((n - |S|) * C(n, |S|)) * prod_{i in S} e_i/k_i
      - (1 + 1/2 + ... + 1/n) * prod over all i of e_i/k_i

    and this returns the weight attached to each subset's normalized
    product (the empty subset weighs the identity).
    """
    if n < 1:
        raise ValueError("need at least one player")
    coeffs: dict[frozenset[int], Fraction] = {}
    for size in range(n):
        weight = Fraction(1, (n - size) * math.comb(n, size))
        for subset in combinations(range(1, n + 1), size):
            coeffs[frozenset(subset)] = weight
    harmonic_number = sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))
    coeffs[frozenset(range(1, n + 1))] = -harmonic_number
    return coeffs


def group_inverse_closed_form(space: GameSpace) -> Matrix:
    """The k x k group inverse X via the closed-form subset sum."""
    element = {
        subset: weight * _normalizer(space, subset)
        for subset, weight in closed_form_coefficients(space.n).items()
    }
    return _expand_e_element(space, element)


def group_inverse_solve_route(space: GameSpace) -> Matrix:
    """The same X, found by solving A @ A @ X = A inside the e-algebra.

    A = sum_i (I - e_i/k_i) lives in the commutative algebra spanned by
    the subset products e_S, which is closed under multiplication
    (e_S @ e_T = prod_{i in S&T} k_i * e_{S|T}).  The defining equation
    becomes a 2^n x 2^n rational solve; the group inverse is then
    A @ X @ X.  Raises RuntimeError if the solve fails, which no
    well-formed space produces.
    """
    n = space.n
    subsets = _ordered_subsets(n)
    a_elem: dict[frozenset[int], Fraction] = {frozenset(): Fraction(n)}
    for i, count in enumerate(space.strategy_counts, start=1):
        a_elem[frozenset((i,))] = Fraction(-1, count)
    a_squared = _e_multiply(space, a_elem, a_elem)

    columns = []
    for subset in subsets:
        image = _e_multiply(space, a_squared, {subset: Fraction(1)})
        columns.append([image.get(s, Fraction(0)) for s in subsets])
    coefficient_matrix = Matrix(zip(*columns))
    rhs = Matrix.column([a_elem.get(s, Fraction(0)) for s in subsets])
    solved = solve_linear(coefficient_matrix, rhs)
    if solved is None:
        raise RuntimeError("group-inverse equation is inconsistent in the e-algebra")
    x_elem = {
        subsets[idx]: solved[idx, 0] for idx in range(len(subsets)) if solved[idx, 0] != 0
    }
    sharp = _e_multiply(space, a_elem, _e_multiply(space, x_elem, x_elem))
    return _expand_e_element(space, sharp)


def _ordered_subsets(n: int) -> list[frozenset[int]]:
    out = []
    for size in range(n + 1):
        for subset in combinations(range(1, n + 1), size):
            out.append(frozenset(subset))
    return out


def _normalizer(space: GameSpace, subset: frozenset[int]) -> Fraction:
    return Fraction(1, math.prod(space.strategy_counts[i - 1] for i in subset))


def _e_multiply(
    space: GameSpace,
    left: dict[frozenset[int], Fraction],
    right: dict[frozenset[int], Fraction],
) -> dict[frozenset[int], Fraction]:
    """Multiply two elements written in the e-subset basis."""
    out: dict[frozenset[int], Fraction] = {}
    for s, a in left.items():
        for t, b in right.items():
            scale = math.prod(space.strategy_counts[i - 1] for i in s & t)
            key = s | t
            value = out.get(key, Fraction(0)) + a * b * scale
            out[key] = value
    return {key: value for key, value in out.items() if value != 0}


def _expand_e_element(space: GameSpace, element: dict[frozenset[int], Fraction]) -> Matrix:
    out = Matrix.zeros(space.k, space.k)
    for subset, weight in element.items():
        if weight != 0:
            out = out + build_e_set(space, subset) * weight
    return out


# -- the projector bundle ------------------------------------------------


@dataclass(frozen=True)
class ProjectorSet:
    """All five projections for one space, plus the group inverse X."""

    space: GameSpace
    group_inverse: Matrix
    pure_potential: Matrix
    nonstrategic: Matrix
    pure_harmonic: Matrix
    potential: Matrix
    harmonic: Matrix

    def projection(self, kind: SubspaceKind) -> Matrix:
        return {
            SubspaceKind.PURE_POTENTIAL: self.pure_potential,
            SubspaceKind.NONSTRATEGIC: self.nonstrategic,
            SubspaceKind.PURE_HARMONIC: self.pure_harmonic,
            SubspaceKind.POTENTIAL: self.potential,
            SubspaceKind.HARMONIC: self.harmonic,
        }[kind]


def subspace_dimension(space: GameSpace, kind: SubspaceKind) -> int:
    """Dimension of a canonical subspace (equals the projection's trace)."""
    n, k = space.n, space.k
    lifted = sum(k // c for c in space.strategy_counts)
    return {
        SubspaceKind.PURE_POTENTIAL: k - 1,
        SubspaceKind.NONSTRATEGIC: lifted,
        SubspaceKind.PURE_HARMONIC: (n - 1) * k - lifted + 1,
        SubspaceKind.POTENTIAL: k + lifted - 1,
        SubspaceKind.HARMONIC: (n - 1) * k + 1,
    }[kind]


_cache: dict[tuple[int, ...], ProjectorSet] = {}
_cache_lock = threading.Lock()


def build_projectors(space: GameSpace) -> ProjectorSet:
    """Build (or fetch) the projector bundle for a space.

    Results are cached per strategy-count signature; the lock makes the
    cache safe under concurrent readers and guarantees each signature
    is constructed at most once.
    """
    key = space.strategy_counts
    with _cache_lock:
        bundle = _cache.get(key)
        if bundle is None:
            bundle = _build_projector_set(space)
            _cache[key] = bundle
    return bundle


def _build_projector_set(space: GameSpace) -> ProjectorSet:
    x = group_inverse_closed_form(space)
    p_n = build_P_N(space)
    pure_potential = p_n @ x @ p_n.T
    nonstrategic = block_diag(
        [
            build_e(space, i) * Fraction(1, count)
            for i, count in enumerate(space.strategy_counts, start=1)
        ]
    )
    identity = Matrix.identity(space.payoff_cells)
    pure_harmonic = identity - pure_potential - nonstrategic
    return ProjectorSet(
        space=space,
        group_inverse=x,
        pure_potential=pure_potential,
        nonstrategic=nonstrategic,
        pure_harmonic=pure_harmonic,
        potential=pure_potential + nonstrategic,
        harmonic=identity - pure_potential,
    )


def _check_player(space: GameSpace, player: int) -> None:
    if not 1 <= player <= space.n:
        raise ValueError(f"player {player} out of range 1..{space.n}")
