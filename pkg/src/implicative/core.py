"""Implicative structures, separators and the encoded connectives."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .lattice import Lattice, bits, join_all, meet_all, to_bits


class UnboundVariable(KeyError):
    pass


class MalformedSequent(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Report:
    """Outcome of a structural check; ``witness`` names the first failure."""

    passed: bool
    check: str
    failed_axiom: str | None = None
    witness: dict | None = None
    notes: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        d = {"check": self.check, "passed": self.passed}
        if self.failed_axiom:
            d["failed_axiom"] = self.failed_axiom
        if self.witness is not None:
            d["witness"] = self.witness
        if self.notes:
            d["notes"] = list(self.notes)
        return d


class ImplicativeStructure:
    def __init__(self, lattice: Lattice, imp):
        imp = np.array(imp, dtype=np.int64)
        n = lattice.n
        if imp.shape != (n, n) or imp.min(initial=0) < 0 or imp.max(initial=0) >= n:
            raise ValueError("implication table must be n x n with valid element indices")
        imp.setflags(write=False)
        self.lattice = lattice
        self.imp = imp
        self._imp = tuple(tuple(int(x) for x in row) for row in imp)

    @property
    def n(self) -> int:
        return self.lattice.n

    def arrow(self, a: int, b: int) -> int:
        return self._imp[a][b]

    @cached_property
    def app_table(self) -> tuple:
        """``app_table[a][b]`` is the application ``a . b``."""
        L = self.lattice
        out = []
        for a in range(self.n):
            row = []
            for b in range(self.n):
                s = 0
                for x in range(self.n):
                    if L.le(a, self._imp[b][x]):
                        s |= 1 << x
                row.append(meet_all(L, s))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def k(self) -> int:
        L, imp = self.lattice, self._imp
        r = L.top
        for a in range(self.n):
            for b in range(self.n):
                r = L.meet(r, imp[a][imp[b][a]])
        return r

    @cached_property
    def s(self) -> int:
        L, imp = self.lattice, self._imp
        r = L.top
        for a in range(self.n):
            for b in range(self.n):
                ab = imp[a][b]
                for c in range(self.n):
                    t = imp[imp[a][imp[b][c]]][imp[ab][imp[a][c]]]
                    r = L.meet(r, t)
        return r


@dataclass(frozen=True)
class Separator:
    members: int
    generators: int = 0
    degenerate: bool = False


def check_implicative_axioms(S: ImplicativeStructure) -> Report:
    """Check variance and distribution of implication over meets.

    Distribution over arbitrary subsets reduces to the empty meet
    (``a -> top = top``) plus the binary case, since every meet in a finite
    lattice is an iterated binary meet.
    """
    L, imp, n = S.lattice, S._imp, S.n
    nm = L.name
    for a in range(n):
        if imp[a][L.top] != L.top:
            return Report(False, "implicative_axioms", "meet_distribution",
                          {"a": nm(a), "B": []})
    for a in range(n):
        for a2 in bits(L.down(a)):
            for b in range(n):
                if not L.le(imp[a][b], imp[a2][b]):
                    return Report(False, "implicative_axioms", "variance",
                                  {"a": nm(a), "b": nm(b), "a'": nm(a2), "b'": nm(b)})
        for b in range(n):
            for b2 in bits(L.up(b)):
                if not L.le(imp[a][b], imp[a][b2]):
                    return Report(False, "implicative_axioms", "variance",
                                  {"a": nm(a), "b": nm(b), "a'": nm(a), "b'": nm(b2)})
    for a in range(n):
        for b in range(n):
            for c in range(b + 1, n):
                if imp[a][L.meet(b, c)] != L.meet(imp[a][b], imp[a][c]):
                    return Report(False, "implicative_axioms", "meet_distribution",
                                  {"a": nm(a), "B": [nm(b), nm(c)]})
    return Report(True, "implicative_axioms")


def apply(S: ImplicativeStructure, a: int, b: int) -> int:
    return S.app_table[a][b]


# -- lambda terms -----------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    elem: int

    def __str__(self) -> str:
        return f"#{self.elem}"


@dataclass(frozen=True)
class App:
    fun: object
    arg: object

    def __str__(self) -> str:
        f = f"({self.fun})" if isinstance(self.fun, Lam) else str(self.fun)
        a = f"({self.arg})" if isinstance(self.arg, (App, Lam)) else str(self.arg)
        return f"{f} {a}"


@dataclass(frozen=True)
class Lam:
    var: str
    body: object

    def __str__(self) -> str:
        return f"\\{self.var}. {self.body}"


Term = Var | Const | App | Lam


def free_vars(t) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return free_vars(t.body) - {t.var}


def all_vars(t) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, App):
        return all_vars(t.fun) | all_vars(t.arg)
    return all_vars(t.body) | {t.var}


def is_pure(t) -> bool:
    if isinstance(t, Const):
        return False
    if isinstance(t, Var):
        return True
    if isinstance(t, App):
        return is_pure(t.fun) and is_pure(t.arg)
    return is_pure(t.body)


def lam(*args):
    """``lam("x", "y", body)`` builds nested abstractions."""
    *vs, body = args
    for v in reversed(vs):
        body = Lam(v, body)
    return body


def app(*ts):
    t = ts[0]
    for u in ts[1:]:
        t = App(t, u)
    return t


K_TERM = lam("x", "y", Var("x"))
S_TERM = lam("x", "y", "z", app(Var("x"), Var("z"), App(Var("y"), Var("z"))))
I_TERM = lam("x", Var("x"))


def interpret(S: ImplicativeStructure, t, env: Mapping[str, int] | None = None) -> int:
    """Evaluate a term in the lattice; abstraction becomes a meet of implications."""
    env = dict(env or {})
    missing = free_vars(t) - env.keys()
    if missing:
        raise UnboundVariable(sorted(missing)[0])
    memo: dict = {}
    return _interp(S, t, env, memo)


def _interp(S: ImplicativeStructure, t, env: dict, memo: dict) -> int:
    if isinstance(t, Const):
        return t.elem
    if isinstance(t, Var):
        return env[t.name]
    fv = free_vars(t)
    key = (t, tuple(sorted((v, env[v]) for v in fv)))
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(t, App):
        r = S.app_table[_interp(S, t.fun, env, memo)][_interp(S, t.arg, env, memo)]
    else:
        L, imp = S.lattice, S._imp
        r = L.top
        saved = env.get(t.var, None)
        had = t.var in env
        for a in range(S.n):
            env[t.var] = a
            r = L.meet(r, imp[a][_interp(S, t.body, env, memo)])
        if had:
            env[t.var] = saved
        else:
            del env[t.var]
    memo[key] = r
    return r


def _fresh(base: str, avoid: frozenset) -> str:
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def substitute(t, x: str, u):
    """Capture-avoiding ``t[u/x]``; fresh names are ``x1, x2, ...`` by first free slot."""
    if isinstance(t, Var):
        return u if t.name == x else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(substitute(t.fun, x, u), substitute(t.arg, x, u))
    if t.var == x or x not in free_vars(t.body):
        return t
    fu = free_vars(u)
    if t.var in fu:
        y = _fresh(t.var.rstrip("0123456789") or t.var, fu | all_vars(t.body) | {x})
        return Lam(y, substitute(substitute(t.body, t.var, Var(y)), x, u))
    return Lam(t.var, substitute(t.body, x, u))


def beta_step(t):
    """One leftmost-outermost beta step, or ``None`` for a normal form."""
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return substitute(t.fun.body, t.fun.var, t.arg)
        r = beta_step(t.fun)
        if r is not None:
            return App(r, t.arg)
        r = beta_step(t.arg)
        if r is not None:
            return App(t.fun, r)
        return None
    if isinstance(t, Lam):
        r = beta_step(t.body)
        return None if r is None else Lam(t.var, r)
    return None


@dataclass(frozen=True)
class Sequent:
    context: tuple  # ((var, element), ...)
    term: object
    target: int


def check_sequent(A, seq: Sequent) -> bool:
    S = A.structure if isinstance(A, ImplicativeAlgebra) else A
    names = [v for v, _ in seq.context]
    if len(set(names)) != len(names):
        raise MalformedSequent("context variables must be distinct")
    extra = free_vars(seq.term) - set(names)
    if extra:
        raise MalformedSequent(f"free variable {sorted(extra)[0]} not declared")
    for _, a in seq.context:
        if not 0 <= a < S.n:
            raise MalformedSequent(f"context element {a} out of range")
    val = interpret(S, seq.term, dict(seq.context))
    return S.lattice.le(val, seq.target)


# -- separators -------------------------------------------------------------

def separator_closure(S: ImplicativeStructure, gens: int | Iterable[int] = 0) -> Separator:
    """Least separator containing ``gens``."""
    if not isinstance(gens, int):
        gens = to_bits(gens)
    L, imp, n = S.lattice, S._imp, S.n
    mem = L.up_closure(gens | (1 << S.k) | (1 << S.s))
    changed = True
    while changed:
        changed = False
        for a in bits(mem):
            for b in range(n):
                if not (mem >> b) & 1 and (mem >> imp[a][b]) & 1:
                    mem |= L.up(b)
                    changed = True
    return Separator(mem, gens, bool((mem >> L.bottom) & 1))


def _separator_report(S: ImplicativeStructure, mem: int) -> Report:
    L, imp, nm = S.lattice, S._imp, S.lattice.name
    for a in bits(mem):
        bad = L.up(a) & ~mem
        if bad:
            b = next(bits(bad))
            return Report(False, "separator", "upward_closed", {"a": nm(a), "b": nm(b)})
    if not (mem >> S.k) & 1:
        return Report(False, "separator", "contains_k", {"k": nm(S.k)})
    if not (mem >> S.s) & 1:
        return Report(False, "separator", "contains_s", {"s": nm(S.s)})
    for a in bits(mem):
        for b in range(S.n):
            if (mem >> imp[a][b]) & 1 and not (mem >> b) & 1:
                return Report(False, "separator", "modus_ponens",
                              {"a": nm(a), "a->b": nm(imp[a][b]), "b": nm(b)})
    return Report(True, "separator")


class ImplicativeAlgebra:
    """An implicative structure together with a separator.

    The separator is not validated on construction; use
    :func:`check_separator`. Derived tables are computed lazily and cached.
    """

    def __init__(self, structure: ImplicativeStructure, sigma: Separator,
                 provenance: dict | None = None, name: str = ""):
        self.structure = structure
        self.sigma = sigma
        self.provenance = dict(provenance or {"kind": "custom"})
        self.name = name or self.provenance.get("kind", "algebra")
        self._exists_memo: dict = {}

    def __repr__(self) -> str:
        return f"ImplicativeAlgebra({self.name!r}, n={self.n})"

    @property
    def lattice(self) -> Lattice:
        return self.structure.lattice

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def top(self) -> int:
        return self.lattice.top

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    @property
    def imp(self) -> tuple:
        return self.structure._imp

    @property
    def k(self) -> int:
        return self.structure.k

    @property
    def s(self) -> int:
        return self.structure.s

    def arrow(self, a: int, b: int) -> int:
        return self.structure._imp[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.lattice._meet[a][b]

    def in_sigma(self, x: int) -> bool:
        return bool((self.sigma.members >> x) & 1)

    def entails(self, a: int, b: int) -> bool:
        return bool((self.sigma.members >> self.structure._imp[a][b]) & 1)

    def name_of(self, x: int) -> str:
        return self.lattice.name(x)

    @cached_property
    def is_degenerate(self) -> bool:
        return self.in_sigma(self.bottom)

    @cached_property
    def sigma_is_everything(self) -> bool:
        return self.sigma.members == self.lattice.full

    @cached_property
    def entailed_by(self) -> tuple:
        """``entailed_by[a]`` is the bitset of ``b`` with ``a |- b``."""
        imp, mem = self.structure._imp, self.sigma.members
        return tuple(to_bits(b for b in range(self.n) if (mem >> imp[a][b]) & 1)
                     for a in range(self.n))

    @cached_property
    def sigma_meet(self) -> int:
        return meet_all(self.lattice, self.sigma.members)

    @cached_property
    def sigma_principal(self) -> bool:
        return self.in_sigma(self.sigma_meet)

    @cached_property
    def times_table(self) -> tuple:
        L, imp, n = self.lattice, self.structure._imp, self.n
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                r = L.top
                for x in range(n):
                    r = L.meet(r, imp[imp[a][imp[b][x]]][x])
                row.append(r)
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def plus_table(self) -> tuple:
        L, imp, n = self.lattice, self.structure._imp, self.n
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                r = L.top
                for x in range(n):
                    r = L.meet(r, imp[imp[a][x]][imp[imp[b][x]][x]])
                row.append(r)
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def delta_diag(self) -> int:
        L, imp = self.lattice, self.structure._imp
        return meet_all(L, to_bits(imp[imp[L.top][x]][x] for x in range(self.n)))

    @cached_property
    def delta_off(self) -> int:
        return self.structure._imp[self.top][self.bottom]

    def bigexists(self, s: int) -> int:
        """The encoded existential of any family whose value-set is ``s``."""
        r = self._exists_memo.get(s)
        if r is None:
            L, imp = self.lattice, self.structure._imp
            r = L.top
            for x in range(self.n):
                inner = L.top
                for c in bits(s):
                    inner = L.meet(inner, imp[c][x])
                r = L.meet(r, imp[inner][x])
            self._exists_memo[s] = r
        return r

    @cached_property
    def exists_array(self) -> np.ndarray:
        """Encoded existential of every value-set, indexed by bitset."""
        n = self.n
        if n > 22:
            raise BudgetExceeded(f"2^{n} value-sets is too many to tabulate")
        L = self.lattice
        imp = self.structure.imp
        meet_np = L.meet_table
        size = 1 << n
        # inner[x][S] = meet over c in S of c -> x
        out = np.full(size, L.top, dtype=np.int64)
        for x in range(n):
            inner = np.empty(size, dtype=np.int64)
            inner[0] = L.top
            for i in range(n):
                lo = 1 << i
                inner[lo:2 * lo] = meet_np[inner[:lo], imp[i, x]]
            out = meet_np[out, imp[inner, x]]
        out.setflags(write=False)
        return out


def check_separator(A: ImplicativeAlgebra) -> Report:
    return _separator_report(A.structure, A.sigma.members)


def make_algebra(S: ImplicativeStructure, gens=0, provenance=None, name="") -> ImplicativeAlgebra:
    return ImplicativeAlgebra(S, separator_closure(S, gens), provenance, name)


def k_element(S) -> int:
    return _struct(S).k


def s_element(S) -> int:
    return _struct(S).s


def _struct(S) -> ImplicativeStructure:
    return S.structure if isinstance(S, ImplicativeAlgebra) else S


def entails(A: ImplicativeAlgebra, a: int, b: int) -> bool:
    return A.entails(a, b)


def equiv(A: ImplicativeAlgebra, a: int, b: int) -> bool:
    return A.entails(a, b) and A.entails(b, a)


def times(A: ImplicativeAlgebra, a: int, b: int) -> int:
    return A.times_table[a][b]


def plus(A: ImplicativeAlgebra, a: int, b: int) -> int:
    return A.plus_table[a][b]


def bigexists(A: ImplicativeAlgebra, family: int | Iterable[int]) -> int:
    if not isinstance(family, int):
        family = to_bits(family)
    return A.bigexists(family)


def delta(A: ImplicativeAlgebra, j, jp) -> int:
    return A.delta_diag if j == jp else A.delta_off


def dflat(A: ImplicativeAlgebra, j, jp) -> int:
    return A.top if j == jp else A.bottom


def meet_in_sigma(A: ImplicativeAlgebra, values: Iterable[int]) -> bool:
    L = A.lattice
    r = L.top
    for v in values:
        r = L._meet[r][v]
    return A.in_sigma(r)


def prop_existentialgen(A: ImplicativeAlgebra) -> bool:
    """Meet over all value-sets S of (exists S -> join S) lies in the separator."""
    if A.sigma_is_everything:
        return True
    E = A.exists_array
    L = A.lattice
    r = L.top
    imp = A.structure._imp
    for s in range(1 << A.n):
        r = L._meet[r][imp[int(E[s])][join_all(L, s)]]
    return A.in_sigma(r)


def prop_equalitygen(A: ImplicativeAlgebra, max_J: int = 2) -> bool:
    """Meet over j, j' in J of (delta(j, j') -> d(j, j')) lies in the separator."""
    imp = A.structure._imp
    terms = [imp[A.delta_diag][A.top]] if max_J >= 1 else []
    if max_J >= 2:
        terms.append(imp[A.delta_off][A.bottom])
    return meet_in_sigma(A, terms)


def lemma_existentialcwj(A: ImplicativeAlgebra) -> bool:
    """Meet over value-sets S of (join S -> exists S) lies in the separator."""
    if A.sigma_is_everything:
        return True
    E = A.exists_array
    L = A.lattice
    imp = A.structure._imp
    r = L.top
    for s in range(1 << A.n):
        r = L._meet[r][imp[join_all(L, s)][int(E[s])]]
    return A.in_sigma(r)


def lemma_equalitycwj(A: ImplicativeAlgebra, max_J: int = 2) -> bool:
    imp = A.structure._imp
    terms = [imp[A.top][A.delta_diag]] if max_J >= 1 else []
    if max_J >= 2:
        terms.append(imp[A.bottom][A.delta_off])
    return meet_in_sigma(A, terms)
