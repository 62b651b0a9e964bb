"""Finite complete lattices built from Hasse data.

Subsets of a lattice are plain Python ints used as bitsets (bit ``i`` set
means element ``i`` is present), so they grow past one machine word
without any special handling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_MAX_SIZE = 64


class LatticeError(ValueError):
    """Base class for lattice construction errors."""


class NotAPoset(LatticeError):
    pass


class NotALattice(LatticeError):
    pass


class NoTopOrBottom(LatticeError):
    pass


class NotHeyting(LatticeError):
    pass


class LatticeTooLarge(LatticeError):
    pass


def bits(s: int) -> Iterator[int]:
    """Yield the indices set in bitset ``s`` in increasing order."""
    while s:
        low = s & -s
        yield low.bit_length() - 1
        s ^= low


def to_bits(items: Iterable[int]) -> int:
    s = 0
    for i in items:
        s |= 1 << i
    return s


def popcount(s: int) -> int:
    return bin(s).count("1")


@dataclass(frozen=True, eq=False)
class Lattice:
    names: tuple
    leq: np.ndarray
    meet_table: np.ndarray
    join_table: np.ndarray
    bottom: int
    top: int
    # plain-list mirrors, much faster than numpy scalar indexing in loops
    _meet: tuple = field(repr=False, default=())
    _join: tuple = field(repr=False, default=())
    _up: tuple = field(repr=False, default=())
    _down: tuple = field(repr=False, default=())

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(self.n)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def index(self, name) -> int:
        if isinstance(name, (int, np.integer)) and not isinstance(name, bool):
            if 0 <= name < self.n:
                return int(name)
        try:
            return self.names.index(name)
        except ValueError:
            pass
        for i, nm in enumerate(self.names):
            if str(nm) == str(name):
                return i
        raise KeyError(f"unknown element {name!r}")

    def name(self, i: int) -> str:
        return str(self.names[i])

    def le(self, a: int, b: int) -> bool:
        return bool((self._up[a] >> b) & 1)

    def meet(self, a: int, b: int) -> int:
        return self._meet[a][b]

    def join(self, a: int, b: int) -> int:
        return self._join[a][b]

    def up(self, a: int) -> int:
        """Bitset of elements above ``a``."""
        return self._up[a]

    def down(self, a: int) -> int:
        return self._down[a]

    def is_up_closed(self, s: int) -> bool:
        return all((self._up[a] & ~s) == 0 for a in bits(s))

    def up_closure(self, s: int) -> int:
        out = 0
        for a in bits(s):
            out |= self._up[a]
        return out

    def atoms(self) -> list[int]:
        return [a for a in self.elements
                if a != self.bottom and self._down[a] == (1 << a) | (1 << self.bottom)]

    def is_distributive(self) -> bool:
        m, j = self._meet, self._join
        r = self.elements
        return all(m[a][j[b][c]] == j[m[a][b]][m[a][c]] for a in r for b in r for c in r)

    def __repr__(self) -> str:
        return f"Lattice(n={self.n}, names={list(self.names)})"


def _finish(names: tuple, leq: np.ndarray) -> Lattice:
    n = len(names)
    up = tuple(to_bits(np.nonzero(leq[a])[0].tolist()) for a in range(n))
    down = tuple(to_bits(np.nonzero(leq[:, a])[0].tolist()) for a in range(n))

    tops = [a for a in range(n) if down[a] == (1 << n) - 1]
    bots = [a for a in range(n) if up[a] == (1 << n) - 1]
    if not tops or not bots:
        raise NoTopOrBottom("lattice needs a greatest and a least element")

    def extremum(cands: int, rel) -> int | None:
        for c in bits(cands):
            if (rel[c] & cands) == cands:
                return c
        return None

    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a, n):
            g = extremum(down[a] & down[b], down)
            if g is None:
                raise NotALattice(f"{names[a]} and {names[b]} have no greatest lower bound")
            l = extremum(up[a] & up[b], up)
            if l is None:
                raise NotALattice(f"{names[a]} and {names[b]} have no least upper bound")
            meet[a, b] = meet[b, a] = g
            join[a, b] = join[b, a] = l
    meet.setflags(write=False)
    join.setflags(write=False)
    leq.setflags(write=False)
    return Lattice(
        names=names, leq=leq, meet_table=meet, join_table=join,
        bottom=bots[0], top=tops[0],
        _meet=tuple(tuple(int(x) for x in row) for row in meet),
        _join=tuple(tuple(int(x) for x in row) for row in join),
        _up=up, _down=down,
    )


def build_lattice(names: Sequence, covers: Iterable[tuple], max_size: int = DEFAULT_MAX_SIZE) -> Lattice:
    """Build a lattice from element names and cover pairs ``(lower, upper)``."""
    names = tuple(names)
    n = len(names)
    if n == 0:
        raise NotAPoset("a lattice needs at least one element")
    if len(set(names)) != n:
        raise NotAPoset("element names must be distinct")
    if n > max_size:
        raise LatticeTooLarge(f"{n} elements exceeds the cap of {max_size}")
    pos = {nm: i for i, nm in enumerate(names)}
    rel = np.eye(n, dtype=bool)
    for lo, hi in covers:
        if lo not in pos or hi not in pos:
            raise NotAPoset(f"cover ({lo!r}, {hi!r}) references an unknown element")
        rel[pos[lo], pos[hi]] = True
    # transitive closure by repeated squaring
    while True:
        nxt = rel | ((rel.astype(np.int64) @ rel.astype(np.int64)) > 0)
        if (nxt == rel).all():
            break
        rel = nxt
    sym = rel & rel.T
    np.fill_diagonal(sym, False)
    if sym.any():
        a, b = map(int, np.argwhere(sym)[0])
        raise NotAPoset(f"cycle through {names[a]!r} and {names[b]!r}")
    return _finish(names, rel)


def lattice_from_order(names: Sequence, leq, max_size: int = DEFAULT_MAX_SIZE) -> Lattice:
    """Build a lattice from an already transitive order matrix."""
    names = tuple(names)
    if len(names) > max_size:
        raise LatticeTooLarge(f"{len(names)} elements exceeds the cap of {max_size}")
    leq = np.array(leq, dtype=bool)
    return _finish(names, leq)


def meet_all(L: Lattice, s: int | Iterable[int]) -> int:
    if not isinstance(s, int):
        s = to_bits(s)
    r = L.top
    m = L._meet
    for a in bits(s):
        r = m[r][a]
    return r


def join_all(L: Lattice, s: int | Iterable[int]) -> int:
    if not isinstance(s, int):
        s = to_bits(s)
    r = L.bottom
    j = L._join
    for a in bits(s):
        r = j[r][a]
    return r


def heyting_implication(L: Lattice, a: int, b: int) -> int:
    cands = to_bits(c for c in L.elements if L.le(L.meet(c, a), b))
    for c in bits(cands):
        if (L.down(c) & cands) == cands:
            return c
    raise NotHeyting(f"{L.name(a)} -> {L.name(b)} has no largest candidate")


def heyting_table(L: Lattice) -> np.ndarray:
    n = L.n
    t = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            t[a, b] = heyting_implication(L, a, b)
    return t


def chain(n: int) -> Lattice:
    names = [str(i) for i in range(n)]
    return build_lattice(names, [(names[i], names[i + 1]) for i in range(n - 1)])


def boolean_lattice(atoms: Sequence[str]) -> Lattice:
    """Powerset of ``atoms`` ordered by inclusion; names are joined atom strings."""
    m = len(atoms)

    def nm(x: int) -> str:
        return "".join(atoms[i] for i in range(m) if x >> i & 1) or "0"

    names = [nm(x) for x in range(1 << m)]
    names[-1] = "1" if m else "0"
    covers = [(names[x], names[x | 1 << i]) for x in range(1 << m) for i in range(m) if not x >> i & 1]
    return build_lattice(names, covers)
