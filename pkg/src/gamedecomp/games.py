"""Finite normal-form games with exact rational payoffs.

A game here is a point in the payoff space of its strategy-count
signature: for n players with k_i strategies each, the space has one
rational coordinate per (player, strategy profile) pair.  Payoff rows
are stored per player, ordered so that later players vary fastest,
which is the ordering induced by stacking semitensor products of
standard basis columns.

The JSON document format, its parsing diagnostics, and the exact
serialization round trip live here as well.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from gamedecomp.linalg import Matrix

DEFAULT_CELL_CAP = 4096


class GameFormatError(ValueError):
    """A game document that cannot be accepted."""


class MalformedDocumentError(GameFormatError):
    """The document is not valid JSON or lacks the required fields."""


class PayoffCountError(GameFormatError):
    """The payoff arrays do not match the declared space."""


class SpaceCapError(GameFormatError):
    """The declared space exceeds the configured size cap."""


def as_rational(value: object) -> Fraction:
    """Normalize a payoff entry to an exact rational.

    Accepts integers, "p/q" strings, and decimal strings with a finite
    expansion.  A Unicode minus sign is treated as ASCII "-".  Floats
    and booleans are refused: binary floats are not the number the user
    wrote, and exactness is the whole contract.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise GameFormatError("payoff entries must be numbers, not booleans")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise GameFormatError(
            f"non-integer numeric payoff {value!r}: quote it as a string "
            '(e.g. "3/4" or "0.75") to keep arithmetic exact'
        )
    if isinstance(value, str):
        text = value.replace("−", "-").strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise GameFormatError(f"cannot parse payoff string {value!r}: {exc}") from None
    raise GameFormatError(f"unsupported payoff type {type(value).__name__}")


@dataclass(frozen=True)
class GameSpace:
    """Player count and per-player strategy counts.

    The signature [n; k_1, ..., k_n] fixes the payoff space dimension
    n*k with k = prod(k_i).  Construction enforces k_i >= 1, n >= 1,
    and the payoff-cell cap n*k <= cell_cap; the cap is a memory guard
    and does not take part in equality.
    """

    strategy_counts: tuple[int, ...]
    cell_cap: int = field(default=DEFAULT_CELL_CAP, compare=False, repr=False)

    def __post_init__(self) -> None:
        counts = tuple(self.strategy_counts)
        object.__setattr__(self, "strategy_counts", counts)
        if len(counts) < 1:
            raise ValueError("a game space needs at least one player")
        if any(not isinstance(c, int) or isinstance(c, bool) or c < 1 for c in counts):
            raise ValueError(f"strategy counts must be integers >= 1, got {counts}")
        if self.n * self.k > self.cell_cap:
            raise SpaceCapError(
                f"space [{self.n}; {','.join(map(str, counts))}] has "
                f"{self.n * self.k} payoff cells, exceeding the cap of {self.cell_cap}"
            )

    @property
    def n(self) -> int:
        """Number of players."""
        return len(self.strategy_counts)

    @property
    def k(self) -> int:
        """Number of pure strategy profiles."""
        return math.prod(self.strategy_counts)

    @property
    def payoff_cells(self) -> int:
        return self.n * self.k

    def k_between(self, p: int, q: int) -> int:
        """Product of strategy counts for players p..q (1-based, inclusive).

        Empty ranges (q < p) give 1.
        """
        return math.prod(self.strategy_counts[p - 1 : q])

    def profiles(self) -> Iterator[tuple[int, ...]]:
        """All pure profiles, in index order (player 1 most significant)."""
        return product(*(range(1, c + 1) for c in self.strategy_counts))

    def check_profile(self, profile: Sequence[int]) -> tuple[int, ...]:
        s = tuple(profile)
        if len(s) != self.n:
            raise ValueError(f"profile {s} has {len(s)} entries, expected {self.n}")
        for i, (choice, count) in enumerate(zip(s, self.strategy_counts), start=1):
            if not 1 <= choice <= count:
                raise ValueError(f"player {i} strategy {choice} out of range 1..{count}")
        return s

    def profile_index(self, profile: Sequence[int]) -> int:
        """1-based position of a profile in index order.

        The index is 1 + sum over players of (s_i - 1) times the number
        of profiles of the players after i, i.e. the mixed-radix value
        of the profile with player 1 as the most significant digit.
        """
        s = self.check_profile(profile)
        index = 0
        for i, choice in enumerate(s, start=1):
            index += (choice - 1) * self.k_between(i + 1, self.n)
        return index + 1

    def index_profile(self, index: int) -> tuple[int, ...]:
        """Inverse of profile_index."""
        if not 1 <= index <= self.k:
            raise ValueError(f"profile index {index} out of range 1..{self.k}")
        rem = index - 1
        digits = []
        for i in range(1, self.n + 1):
            base = self.k_between(i + 1, self.n)
            digits.append(rem // base + 1)
            rem %= base
        return tuple(digits)


@dataclass(frozen=True)
class MixedProfile:
    """One probability vector per player; entries >= 0 summing to 1."""

    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        weights = tuple(tuple(as_rational(w) for w in row) for row in self.weights)
        object.__setattr__(self, "weights", weights)
        if not weights:
            raise ValueError("a mixed profile needs at least one player")
        for i, row in enumerate(weights, start=1):
            if any(w < 0 for w in row):
                raise ValueError(f"player {i} has a negative weight")
            if sum(row) != 1:
                raise ValueError(f"player {i} weights sum to {sum(row)}, not 1")

    @classmethod
    def uniform(cls, space: GameSpace) -> "MixedProfile":
        return cls(tuple(tuple([Fraction(1, c)] * c) for c in space.strategy_counts))

    @classmethod
    def pure(cls, space: GameSpace, profile: Sequence[int]) -> "MixedProfile":
        s = space.check_profile(profile)
        return cls(
            tuple(
                tuple(Fraction(int(j == choice)) for j in range(1, c + 1))
                for choice, c in zip(s, space.strategy_counts)
            )
        )

    def with_pure(self, player: int, strategy: int) -> "MixedProfile":
        """Copy with one player's weights replaced by a pure strategy."""
        count = len(self.weights[player - 1])
        if not 1 <= strategy <= count:
            raise ValueError(f"strategy {strategy} out of range 1..{count}")
        rows = list(self.weights)
        rows[player - 1] = tuple(Fraction(int(j == strategy)) for j in range(1, count + 1))
        return MixedProfile(tuple(rows))


@dataclass(frozen=True)
class Game:
    """A finite game: a space plus one payoff row per player.

    Row i lists player i's payoff at every profile, in profile index
    order.  Equality is exact entrywise equality of the payoff data;
    the optional name is carried for display only.
    """

    space: GameSpace
    payoff_rows: tuple[tuple[Fraction, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        rows = tuple(tuple(as_rational(x) for x in row) for row in self.payoff_rows)
        object.__setattr__(self, "payoff_rows", rows)
        if len(rows) != self.space.n:
            raise PayoffCountError(
                f"expected {self.space.n} payoff rows, got {len(rows)}"
            )
        for i, row in enumerate(rows, start=1):
            if len(row) != self.space.k:
                raise PayoffCountError(
                    f"player {i} payoff row has {len(row)} entries, expected {self.space.k}"
                )

    @classmethod
    def zero(cls, space: GameSpace) -> "Game":
        return cls(space, tuple((Fraction(0),) * space.k for _ in range(space.n)))

    @classmethod
    def from_vector(cls, space: GameSpace, vector: Matrix | Sequence[object]) -> "Game":
        """Build a game from the stacked payoff column (rows concatenated)."""
        entries: Sequence[object]
        if isinstance(vector, Matrix):
            if vector.ncols != 1:
                raise ValueError("expected a column vector")
            entries = vector.column_tuple(0)
        else:
            entries = vector
        if len(entries) != space.payoff_cells:
            raise PayoffCountError(
                f"expected {space.payoff_cells} entries, got {len(entries)}"
            )
        k = space.k
        return cls(
            space,
            tuple(tuple(entries[i * k : (i + 1) * k]) for i in range(space.n)),
        )

    def structure_vector(self) -> Matrix:
        """The stacked payoff column: rows concatenated player by player."""
        return Matrix.column([x for row in self.payoff_rows for x in row])

    def payoff(self, player: int, profile: Sequence[int]) -> Fraction:
        """Player's payoff at a pure profile (both 1-based)."""
        if not 1 <= player <= self.space.n:
            raise ValueError(f"player {player} out of range 1..{self.space.n}")
        return self.payoff_rows[player - 1][self.space.profile_index(profile) - 1]

    def expected_payoff(self, player: int, mixed: MixedProfile) -> Fraction:
        """Expected payoff under independent mixing, computed exactly."""
        if len(mixed.weights) != self.space.n:
            raise ValueError("mixed profile does not match the space")
        for row, count in zip(mixed.weights, self.space.strategy_counts):
            if len(row) != count:
                raise ValueError("mixed profile does not match the space")
        total = Fraction(0)
        row = self.payoff_rows[player - 1]
        for idx, profile in enumerate(self.space.profiles()):
            weight = math.prod(
                (mixed.weights[i][choice - 1] for i, choice in enumerate(profile)),
                start=Fraction(1),
            )
            if weight:
                total += weight * row[idx]
        return total

    def _combine(self, other: "Game", sign: int) -> "Game":
        if not isinstance(other, Game):
            return NotImplemented
        if self.space != other.space:
            raise ValueError("games live in different spaces")
        return Game(
            self.space,
            tuple(
                tuple(a + sign * b for a, b in zip(ra, rb))
                for ra, rb in zip(self.payoff_rows, other.payoff_rows)
            ),
        )

    def __add__(self, other: "Game") -> "Game":
        return self._combine(other, 1)

    def __sub__(self, other: "Game") -> "Game":
        return self._combine(other, -1)


# -- document format ----------------------------------------------------


def _format_rational(x: Fraction) -> object:
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_game(text: str, cell_cap: int = DEFAULT_CELL_CAP) -> Game:
    """Parse a game document.

    The document is a JSON object with "players" (int), "strategies"
    (list of ints, one per player), "payoffs" (one array per player,
    each with one entry per profile in index order), and an optional
    "name".  Distinct failure modes raise distinct errors, all of them
    GameFormatError subclasses.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedDocumentError("malformed document: top level must be an object")
    for key in ("players", "strategies", "payoffs"):
        if key not in doc:
            raise MalformedDocumentError(f"malformed document: missing field {key!r}")
    players = doc["players"]
    strategies = doc["strategies"]
    if not isinstance(players, int) or isinstance(players, bool) or players < 1:
        raise MalformedDocumentError('malformed document: "players" must be an integer >= 1')
    if not isinstance(strategies, list) or len(strategies) != players:
        raise MalformedDocumentError(
            'malformed document: "strategies" must list one count per player'
        )
    if any(not isinstance(c, int) or isinstance(c, bool) or c < 1 for c in strategies):
        raise MalformedDocumentError(
            'malformed document: strategy counts must be integers >= 1'
        )
    space = GameSpace(tuple(strategies), cell_cap=cell_cap)
    payoffs = doc["payoffs"]
    if not isinstance(payoffs, list) or len(payoffs) != players:
        raise PayoffCountError(
            f"payoff count mismatch: expected {players} payoff arrays, "
            f"got {len(payoffs) if isinstance(payoffs, list) else type(payoffs).__name__}"
        )
    rows = []
    for i, row in enumerate(payoffs, start=1):
        if not isinstance(row, list) or len(row) != space.k:
            raise PayoffCountError(
                f"payoff count mismatch: player {i} needs {space.k} entries, "
                f"got {len(row) if isinstance(row, list) else type(row).__name__}"
            )
        parsed = []
        for j, cell in enumerate(row, start=1):
            try:
                parsed.append(as_rational(cell))
            except GameFormatError as exc:
                raise MalformedDocumentError(
                    f"malformed document: payoffs[{i}][{j}]: {exc}"
                ) from None
        rows.append(tuple(parsed))
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise MalformedDocumentError('malformed document: "name" must be a string')
    return Game(space, tuple(rows), name=name)


def serialize_game(game: Game) -> str:
    """Serialize a game to its document form.

    Integers are emitted as JSON numbers, everything else as "p/q"
    strings, so parse_game(serialize_game(g)) == g exactly.
    """
    doc: dict[str, object] = {
        "players": game.space.n,
        "strategies": list(game.space.strategy_counts),
        "payoffs": [[_format_rational(x) for x in row] for row in game.payoff_rows],
    }
    if game.name is not None:
        doc["name"] = game.name
    return json.dumps(doc, indent=2) + "\n"
