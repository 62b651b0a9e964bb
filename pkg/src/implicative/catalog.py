"""Constructors for the standard families of implicative algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import (ImplicativeAlgebra, ImplicativeStructure, Separator, check_separator,
                   separator_closure)
from .lattice import (DEFAULT_MAX_SIZE, Lattice, bits, heyting_table, lattice_from_order, meet_all,
                      to_bits)


class CarrierTooLarge(ValueError):
    pass


class StarNotAbsorbing(ValueError):
    pass


@dataclass(frozen=True)
class ApplicativeStructure:
    """A finite set with a partial binary application; ``None`` marks undefined."""

    carrier: tuple
    table: tuple  # table[r][s] -> index or None

    @classmethod
    def from_pairs(cls, carrier: Sequence, app: Mapping | Sequence) -> "ApplicativeStructure":
        """``app`` is a mapping ``(r, s) -> t`` or a list of ``[r, s, t]`` triples, by name."""
        carrier = tuple(carrier)
        pos = {c: i for i, c in enumerate(carrier)}
        table = [[None] * len(carrier) for _ in carrier]
        items = app.items() if isinstance(app, Mapping) else (((r, s), t) for r, s, t in app)
        for (r, s), t in items:
            for x in (r, s, t):
                if x not in pos:
                    raise ValueError(f"application entry references unknown element {x!r}")
            table[pos[r]][pos[s]] = pos[t]
        return cls(carrier, tuple(tuple(row) for row in table))

    @classmethod
    def from_function(cls, carrier: Sequence, fn) -> "ApplicativeStructure":
        carrier = tuple(carrier)
        return cls(carrier, tuple(tuple(fn(r, s) for s in range(len(carrier)))
                                  for r in range(len(carrier))))

    @property
    def size(self) -> int:
        return len(self.carrier)

    def is_total(self) -> bool:
        return all(v is not None for row in self.table for v in row)

    def closed(self, sub: int) -> bool:
        """Is the subset (bitset) closed under defined applications?"""
        return all(self.table[r][s] is None or (sub >> self.table[r][s]) & 1
                   for r in bits(sub) for s in bits(sub))

    def arrow_set(self, X: int, Y: int, realizers: int | None = None) -> int:
        """``{r in realizers | r.x defined and in Y for every x in X}``."""
        m = self.size
        rs = (1 << m) - 1 if realizers is None else realizers
        out = 0
        for r in bits(rs):
            row = self.table[r]
            if all(row[x] is not None and (Y >> row[x]) & 1 for x in bits(X)):
                out |= 1 << r
        return out

    def to_json(self) -> dict:
        return {"carrier": list(self.carrier),
                "app": [[self.carrier[r], self.carrier[s], self.carrier[t]]
                        for r, row in enumerate(self.table) for s, t in enumerate(row)
                        if t is not None]}


def _subset_name(R: ApplicativeStructure, X: int) -> str:
    return "{" + ",".join(str(R.carrier[i]) for i in bits(X)) + "}"


def _powerset_lattice(R: ApplicativeStructure) -> Lattice:
    m = R.size
    size = 1 << m
    names = [_subset_name(R, X) for X in range(size)]
    leq = [[(X & ~Y) == 0 for Y in range(size)] for X in range(size)]
    return lattice_from_order(names, leq)


def from_heyting(L: Lattice, name: str = "") -> ImplicativeAlgebra:
    S = ImplicativeStructure(L, heyting_table(L))
    sigma = Separator(1 << L.top, 1 << L.top, L.top == L.bottom)
    return ImplicativeAlgebra(S, sigma, {"kind": "heyting"}, name)


def from_table(L: Lattice, imp, generators=(), members=None, name: str = "") -> ImplicativeAlgebra:
    """A custom structure; the separator is the closure of ``generators`` unless given."""
    S = ImplicativeStructure(L, imp)
    if members is None:
        sigma = separator_closure(S, to_bits(generators))
    else:
        mem = to_bits(members)
        sigma = Separator(mem, to_bits(generators), bool((mem >> L.bottom) & 1))
    return ImplicativeAlgebra(S, sigma, {"kind": "custom"}, name)


def _check_cap(m: int, cap: int) -> None:
    if m > cap:
        raise CarrierTooLarge(f"carrier of size {m} exceeds the cap of {cap}")


def _powerset_structure(R: ApplicativeStructure) -> ImplicativeStructure:
    L = _powerset_lattice(R)
    size = L.n
    imp = np.zeros((size, size), dtype=np.int64)
    for X in range(size):
        for Y in range(size):
            imp[X, Y] = R.arrow_set(X, Y)
    return ImplicativeStructure(L, imp)


def from_applicative(R: ApplicativeStructure, cap: int = 5, name: str = "") -> ImplicativeAlgebra:
    """Powerset algebra of an applicative structure with the generated separator.

    Undefined applications count as failures of ``r . x in Y``. The report
    flag ``textbook_sigma`` records whether the generated separator is
    exactly the nonempty subsets.
    """
    _check_cap(R.size, cap)
    S = _powerset_structure(R)
    sigma = separator_closure(S, 0)
    nonempty = S.lattice.full & ~1
    prov = {"kind": "realizability", "carrier": list(R.carrier), "total": R.is_total(),
            "textbook_sigma": sigma.members == nonempty, "application": R.to_json()["app"]}
    return ImplicativeAlgebra(S, sigma, prov, name)


def relative(R: ApplicativeStructure, Rsharp: Sequence | int, cap: int = 5,
             name: str = "") -> ImplicativeAlgebra:
    """Powerset algebra with the separator of subsets meeting ``Rsharp``."""
    _check_cap(R.size, cap)
    sub = _as_subset(R, Rsharp)
    S = _powerset_structure(R)
    mem = to_bits(X for X in range(S.n) if X & sub)
    sigma = Separator(mem, mem, bool(mem & 1))
    A = ImplicativeAlgebra(S, sigma, {}, name)
    rep = check_separator(A)
    A.provenance.update({"kind": "relative", "carrier": list(R.carrier),
                         "sharp": [R.carrier[i] for i in bits(sub)],
                         "sharp_closed": R.closed(sub), "separator_valid": rep.passed,
                         "separator_report": rep.to_json()})
    return A


def _as_subset(R: ApplicativeStructure, items) -> int:
    if isinstance(items, int):
        return items
    return to_bits(R.carrier.index(x) if x in R.carrier else int(x) for x in items)


def _nested_carrier(R: ApplicativeStructure, sub: int, star: int | None = None) -> list:
    m = R.size
    out = []
    for Xp in range(1 << m):
        if star is not None and not (Xp >> star) & 1:
            continue
        for Xa in range(1 << m):
            if (Xa & ~sub) == 0 and (Xa & ~Xp) == 0:
                out.append((Xa, Xp))
    return out


def _nested_structure(R: ApplicativeStructure, sub: int, pairs: list) -> ImplicativeStructure:
    pos = {p: i for i, p in enumerate(pairs)}
    names = [f"({_subset_name(R, a)},{_subset_name(R, p)})" for a, p in pairs]
    leq = [[(xa & ~ya) == 0 and (xp & ~yp) == 0 for ya, yp in pairs] for xa, xp in pairs]
    L = lattice_from_order(names, leq)
    size = len(pairs)
    imp = np.zeros((size, size), dtype=np.int64)
    for i, (xa, xp) in enumerate(pairs):
        for j, (ya, yp) in enumerate(pairs):
            p = R.arrow_set(xp, yp)
            a = R.arrow_set(xa, ya, realizers=sub) & p
            if (a, p) not in pos:
                raise ValueError("carrier is not closed under implication")
            imp[i, j] = pos[(a, p)]
    return ImplicativeStructure(L, imp)


def nested(R: ApplicativeStructure, Rsharp: Sequence | int, cap: int = 3,
           name: str = "") -> ImplicativeAlgebra:
    """Pairs (actual, potential) of realizer sets; true when the actual part is nonempty."""
    _check_cap(R.size, cap)
    sub = _as_subset(R, Rsharp)
    pairs = _nested_carrier(R, sub)
    S = _nested_structure(R, sub, pairs)
    mem = to_bits(i for i, (xa, _) in enumerate(pairs) if xa)
    sigma = Separator(mem, mem, bool((mem >> S.lattice.bottom) & 1))
    A = ImplicativeAlgebra(S, sigma, {}, name)
    rep = check_separator(A)
    A.provenance.update({"kind": "nested", "carrier": list(R.carrier),
                         "sharp": [R.carrier[i] for i in bits(sub)],
                         "sharp_closed": R.closed(sub), "separator_valid": rep.passed,
                         "separator_report": rep.to_json()})
    return A


def modified(R: ApplicativeStructure, Rsharp: Sequence | int, star, cap: int = 3,
             name: str = "") -> ImplicativeAlgebra:
    """Nested pairs whose potential part contains the absorbing element ``star``."""
    _check_cap(R.size, cap)
    sub = _as_subset(R, Rsharp)
    st = R.carrier.index(star) if star in R.carrier else int(star)
    if not (sub >> st) & 1:
        raise StarNotAbsorbing(f"{R.carrier[st]!r} is not in the sub-structure")
    for x, v in enumerate(R.table[st]):
        if v != st:
            raise StarNotAbsorbing(
                f"{R.carrier[st]!r} applied to {R.carrier[x]!r} is "
                + ("undefined" if v is None else repr(R.carrier[v])))
    pairs = _nested_carrier(R, sub, star=st)
    S = _nested_structure(R, sub, pairs)
    mem = to_bits(i for i, (xa, _) in enumerate(pairs) if xa)
    sigma = Separator(mem, mem, bool((mem >> S.lattice.bottom) & 1))
    A = ImplicativeAlgebra(S, sigma, {}, name)
    rep = check_separator(A)
    A.provenance.update({"kind": "modified", "carrier": list(R.carrier),
                         "sharp": [R.carrier[i] for i in bits(sub)], "star": R.carrier[st],
                         "sharp_closed": R.closed(sub), "separator_valid": rep.passed,
                         "separator_report": rep.to_json()})
    return A


def power(A: ImplicativeAlgebra, index: Sequence, cap: int = DEFAULT_MAX_SIZE,
          name: str = "") -> ImplicativeAlgebra:
    """Pointwise algebra on A^I with the uniform separator (meet lies in the base separator)."""
    index = tuple(index)
    n, m = A.n, len(index)
    if n ** m > cap:
        raise CarrierTooLarge(f"{n}^{m} elements exceeds the cap of {cap}")
    tuples = list(itertools.product(range(n), repeat=m))
    pos = {t: i for i, t in enumerate(tuples)}
    names = ["(" + ",".join(A.name_of(x) for x in t) + ")" for t in tuples]
    L0 = A.lattice
    leq = [[all(L0.le(x, y) for x, y in zip(s, t)) for t in tuples] for s in tuples]
    L = lattice_from_order(names, leq, max_size=cap)
    imp = np.array([[pos[tuple(A.arrow(x, y) for x, y in zip(s, t))] for t in tuples]
                    for s in tuples], dtype=np.int64).reshape(len(tuples), len(tuples))
    S = ImplicativeStructure(L, imp)
    mem = to_bits(i for i, t in enumerate(tuples) if A.in_sigma(meet_all(L0, to_bits(t))))
    sigma = Separator(mem, mem, bool((mem >> L.bottom) & 1))
    prov = {"kind": "power", "base": A.name, "index": [str(i) for i in index]}
    return ImplicativeAlgebra(S, sigma, prov, name)
