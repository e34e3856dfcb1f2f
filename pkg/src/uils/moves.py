"""Block moves, neighborhood descriptors and move application."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional


class MoveKind(IntEnum):
    INSERT_FWD = 0
    INSERT_BWD = 1
    SWAP_INTRA = 2
    INSERT_INTER = 3
    SWAP_INTER = 4


class NeighborhoodType(IntEnum):
    INSERT_INTRA = 0
    SWAP_INTRA = 1
    INSERT_INTER = 2
    SWAP_INTER = 3


@dataclass(frozen=True)
class Neighborhood:
    type: NeighborhoodType
    l: int
    l2: int = 0

    def __str__(self):
        if self.type in (NeighborhoodType.SWAP_INTRA, NeighborhoodType.SWAP_INTER):
            return f"{self.type.name.lower()}({self.l},{self.l2})"
        return f"{self.type.name.lower()}({self.l})"


@dataclass(frozen=True, order=True)
class Move:
    """A block move.

    Positions refer to the sequences *before* the move:

    * ``INSERT_FWD``: block ``[i, i+l)`` of machine ``k`` goes after
      position ``j >= i+l``.
    * ``INSERT_BWD``: block ``[i, i+l)`` goes after position ``j <= i-2``.
    * ``SWAP_INTRA``: blocks ``[i, i+l)`` and ``[j, j+l2)`` of machine ``k``
      (``j >= i+l``) trade places.
    * ``INSERT_INTER``: block ``[i, i+l)`` of ``k`` goes before position
      ``j`` of ``k2`` (``1 <= j <= n_k2 + 1``).
    * ``SWAP_INTER``: block ``[i, i+l)`` of ``k`` trades places with block
      ``[j, j+l2)`` of ``k2``.

    ``cost`` is the total objective of the resulting schedule. Ordering is
    the scan tie rule: cost first, then the move tuple.
    """

    cost: int
    kind: MoveKind
    k: int
    k2: int
    i: int
    j: int
    l: int
    l2: int = 0

    def key(self) -> tuple:
        return (self.kind, self.k, self.k2, self.i, self.j, self.l, self.l2)


@dataclass
class NeighborhoodConfig:
    l_intra: tuple = (1, 2)
    l_swap_intra: tuple = ((1, 1),)
    l_inter: tuple = (1, 2)
    l_swap_inter: tuple = ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4))

    @classmethod
    def parallel(cls) -> "NeighborhoodConfig":
        return cls()

    @classmethod
    def single_machine(cls) -> "NeighborhoodConfig":
        return cls(l_intra=(1, 2, 3), l_swap_intra=((1, 1),), l_inter=(), l_swap_inter=())

    @classmethod
    def for_machines(cls, m: int) -> "NeighborhoodConfig":
        return cls.single_machine() if m == 1 else cls.parallel()

    def neighborhoods(self, m: Optional[int] = None) -> list:
        out = [Neighborhood(NeighborhoodType.INSERT_INTRA, l) for l in self.l_intra]
        out += [Neighborhood(NeighborhoodType.SWAP_INTRA, a, b) for a, b in self.l_swap_intra]
        if m is None or m > 1:
            out += [Neighborhood(NeighborhoodType.INSERT_INTER, l) for l in self.l_inter]
            out += [Neighborhood(NeighborhoodType.SWAP_INTER, a, b) for a, b in self.l_swap_inter]
        return out


def apply_to_sequences(seqs: list, move: Move) -> list:
    """Return new sequence lists with ``move`` applied (inputs untouched)."""
    out = list(seqs)
    i, j, l, l2 = move.i, move.j, move.l, move.l2
    s = seqs[move.k]
    if move.kind == MoveKind.INSERT_FWD:
        out[move.k] = s[:i] + s[i + l:j + 1] + s[i:i + l] + s[j + 1:]
    elif move.kind == MoveKind.INSERT_BWD:
        out[move.k] = s[:j + 1] + s[i:i + l] + s[j + 1:i] + s[i + l:]
    elif move.kind == MoveKind.SWAP_INTRA:
        out[move.k] = s[:i] + s[j:j + l2] + s[i + l:j] + s[i:i + l] + s[j + l2:]
    elif move.kind == MoveKind.INSERT_INTER:
        t = seqs[move.k2]
        out[move.k] = s[:i] + s[i + l:]
        out[move.k2] = t[:j] + s[i:i + l] + t[j:]
    elif move.kind == MoveKind.SWAP_INTER:
        t = seqs[move.k2]
        out[move.k] = s[:i] + t[j:j + l2] + s[i + l:]
        out[move.k2] = t[:j] + s[i:i + l] + t[j + l2:]
    else:
        raise ValueError(f"unknown move kind {move.kind}")
    return out


def touched_machines(move: Move) -> tuple:
    if move.kind in (MoveKind.INSERT_INTER, MoveKind.SWAP_INTER):
        return (move.k, move.k2)
    return (move.k,)


def legal_moves(seqs: list, nbh: Neighborhood):
    """Yield every move of ``nbh`` as ``(kind, k, k2, i, j, l, l2)`` tuples.

    This is the single definition of the move ranges; scans and the
    enumeration oracle must agree with it.
    """
    m = len(seqs)
    sizes = [len(s) - 1 for s in seqs]
    T = NeighborhoodType
    if nbh.type == T.INSERT_INTRA:
        l = nbh.l
        for k in range(m):
            n = sizes[k]
            for i in range(1, n - l + 1):
                for j in range(i + l, n + 1):
                    yield (MoveKind.INSERT_FWD, k, k, i, j, l, 0)
            for i in range(2, n - l + 2):
                for j in range(0, i - 1):
                    yield (MoveKind.INSERT_BWD, k, k, i, j, l, 0)
    elif nbh.type == T.SWAP_INTRA:
        for l, l2 in _orientations(nbh.l, nbh.l2):
            for k in range(m):
                n = sizes[k]
                for i in range(1, n - l - l2 + 2):
                    for j in range(i + l, n - l2 + 2):
                        yield (MoveKind.SWAP_INTRA, k, k, i, j, l, l2)
    elif nbh.type == T.INSERT_INTER:
        l = nbh.l
        for k in range(m):
            for k2 in range(m):
                if k == k2:
                    continue
                for i in range(1, sizes[k] - l + 2):
                    for j in range(1, sizes[k2] + 2):
                        yield (MoveKind.INSERT_INTER, k, k2, i, j, l, 0)
    elif nbh.type == T.SWAP_INTER:
        for l, l2 in _orientations(nbh.l, nbh.l2):
            for k in range(m):
                for k2 in range(k + 1, m):
                    for i in range(1, sizes[k] - l + 2):
                        for j in range(1, sizes[k2] - l2 + 2):
                            yield (MoveKind.SWAP_INTER, k, k2, i, j, l, l2)
    else:
        raise ValueError(f"unknown neighborhood {nbh}")


def _orientations(l: int, l2: int) -> list:
    return [(l, l2)] if l == l2 else [(l, l2), (l2, l)]
