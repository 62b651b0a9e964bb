"""Element, family and algebra level classifications.

Families are sequences of element indices (the index set is their
position range). Every FAILS verdict carries a witness that
:func:`replay_witness` re-checks from scratch.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .core import BudgetExceeded, ImplicativeAlgebra, meet_in_sigma
from .lattice import bits, join_all, to_bits

DEFAULT_BUDGET = 3_000_000


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNKNOWN = "UNKNOWN"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Bounds:
    """Search bounds; ``None`` means the per-call default."""

    K: int | None = None
    J: int | None = None
    I: int = 3
    budget: int = DEFAULT_BUDGET

    def j_for(self, A: ImplicativeAlgebra) -> int:
        return self.J if self.J is not None else A.n + 1

    def k_for(self, m: int) -> int:
        return self.K if self.K is not None else m + 2

    def to_json(self) -> dict:
        return {"K": self.K, "J": self.J, "I": self.I, "budget": self.budget}

    @classmethod
    def parse(cls, text: str | None) -> "Bounds":
        if not text:
            return cls()
        kw = {}
        for part in text.split(","):
            key, _, val = part.partition("=")
            key = key.strip()
            if key not in ("K", "J", "I", "budget"):
                raise ValueError(f"unknown bound {key!r}")
            kw[key] = int(val)
        return cls(**kw)


@dataclass
class ClassificationResult:
    verdict: Verdict
    witness: dict | None = None
    bound_used: dict | None = None
    shortcut: str | None = None
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict is Verdict.FAILS

    @property
    def decided(self) -> bool:
        return self.verdict is not Verdict.UNKNOWN

    def to_json(self) -> dict:
        d = {"verdict": self.verdict.value}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.bound_used is not None:
            d["bound_used"] = self.bound_used
        if self.shortcut:
            d["shortcut"] = self.shortcut
        if self.detail:
            d["detail"] = self.detail
        return d


def _holds(**kw) -> ClassificationResult:
    return ClassificationResult(Verdict.HOLDS, **kw)


def _fails(witness, **kw) -> ClassificationResult:
    return ClassificationResult(Verdict.FAILS, witness=witness, **kw)


def _unknown(**kw) -> ClassificationResult:
    return ClassificationResult(Verdict.UNKNOWN, **kw)


def from_bool(b: bool, **kw) -> ClassificationResult:
    return ClassificationResult(Verdict.HOLDS if b else Verdict.FAILS, **kw)


@dataclass(frozen=True)
class IndexedFamily:
    values: tuple
    index: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.index is None:
            object.__setattr__(self, "index", tuple(range(len(self.values))))
        elif len(self.index) != len(self.values):
            raise ValueError("index and values must have the same length")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def reindex(self, f: Sequence[int]) -> "IndexedFamily":
        return IndexedFamily(tuple(self.values[i] for i in f))


@dataclass(frozen=True)
class FamilyMatrix:
    """Rows indexed by I, columns by J; ``rows[i][j]`` is an element."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("all rows need the same number of columns")
        object.__setattr__(self, "rows", rows)

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0


def _vals(fam) -> tuple:
    if isinstance(fam, IndexedFamily):
        return fam.values
    return tuple(int(v) for v in fam)


# -- disjointness and functionality ------------------------------------------

def _disjoint(A: ImplicativeAlgebra, vals, table) -> bool:
    imp = A.imp
    terms = []
    for i, a in enumerate(vals):
        for i2, a2 in enumerate(vals):
            terms.append(imp[table[a][a2]][A.delta_diag if i == i2 else A.delta_off])
    return meet_in_sigma(A, terms)


def is_wedge_disjoint(A: ImplicativeAlgebra, fam) -> bool:
    return _disjoint(A, _vals(fam), A.lattice._meet)


def is_times_disjoint(A: ImplicativeAlgebra, fam) -> bool:
    return _disjoint(A, _vals(fam), A.times_table)


def _functional_terms(A: ImplicativeAlgebra, rows) -> list:
    imp, T = A.imp, A.times_table
    out = []
    for row in rows:
        for j, b in enumerate(row):
            for j2, b2 in enumerate(row):
                out.append(imp[T[b][b2]][A.delta_diag if j == j2 else A.delta_off])
    return out


def is_times_functional(A: ImplicativeAlgebra, m) -> bool:
    rows = m.rows if isinstance(m, FamilyMatrix) else m
    return meet_in_sigma(A, _functional_terms(A, rows))


# -- elements ------------------------------------------------------------------

def _non_entailed(A: ImplicativeAlgebra, a: int) -> int:
    return A.lattice.full & ~A.entailed_by[a]


def supercompact_witness(A: ImplicativeAlgebra, a: int) -> list | None:
    """A value-set refuting supercompactness of ``a``, or None.

    Existentials grow with their value-set, so it suffices to test the set
    of all elements not entailed by ``a``.
    """
    c = _non_entailed(A, a)
    if A.entails(a, A.bigexists(c)):
        return list(bits(c))
    return None


def is_supercompact(A: ImplicativeAlgebra, a: int) -> bool:
    return supercompact_witness(A, a) is None


def times_disjoint_sets(A: ImplicativeAlgebra, cand: int, budget: int = DEFAULT_BUDGET):
    """Yield every distinct-value ×-disjoint set inside ``cand`` (as a bitset)."""
    imp, T, L = A.imp, A.times_table, A.lattice
    dg, off = A.delta_diag, A.delta_off
    elems = list(bits(cand))
    count = 0
    diag_term = {b: imp[T[b][b]][dg] for b in elems}
    stack = [(0, 0, L.top)]
    while stack:
        start, cur, m = stack.pop()
        count += 1
        if count > budget:
            raise BudgetExceeded("too many ×-disjoint candidate sets")
        yield cur
        for idx in range(len(elems) - 1, start - 1, -1):
            c = elems[idx]
            m2 = L._meet[m][diag_term[c]]
            for b in bits(cur):
                m2 = L._meet[m2][imp[T[b][c]][off]]
                m2 = L._meet[m2][imp[T[c][b]][off]]
            if A.in_sigma(m2):
                stack.append((idx + 1, cur | (1 << c), m2))


def indecomposable_witness(A: ImplicativeAlgebra, a: int, budget: int = DEFAULT_BUDGET):
    """A ×-disjoint family refuting indecomposability of ``a``, or None."""
    c = _non_entailed(A, a)
    for s in times_disjoint_sets(A, c, budget):
        if A.entails(a, A.bigexists(s)):
            return list(bits(s))
    # duplicated-value pairs: equal values at distinct indices
    for b in bits(c):
        if is_times_disjoint(A, (b, b)) and A.entails(a, A.bigexists(1 << b)):
            return [b, b]
    return None


def is_indecomposable(A: ImplicativeAlgebra, a: int) -> bool:
    return indecomposable_witness(A, a) is None


def supercompact_elements(A: ImplicativeAlgebra) -> list:
    return [a for a in range(A.n) if is_supercompact(A, a)]


def indecomposable_elements(A: ImplicativeAlgebra) -> list:
    return [a for a in range(A.n) if is_indecomposable(A, a)]


def is_equiv_bottom(A: ImplicativeAlgebra, a: int) -> bool:
    return A.entails(a, A.bottom)


# -- SK and cSK ------------------------------------------------------------------

def _choice_meets(A: ImplicativeAlgebra, vals, value_sets) -> bool:
    """Is there a choice f in prod J_i with meet_i (a_i -> b_f(i)) in the separator?"""
    imp, L = A.imp, A.lattice
    V = {L.top}
    for a, J in zip(vals, value_sets):
        V = {L._meet[v][imp[a][b]] for v in V for b in J}
        if not V:
            return False
    return any(A.in_sigma(v) for v in V)


def _sk_hypothesis(A: ImplicativeAlgebra, vals, value_sets) -> bool:
    imp = A.imp
    return meet_in_sigma(A, (imp[a][A.bigexists(to_bits(J))] for a, J in zip(vals, value_sets)))


def classify_cSK(A: ImplicativeAlgebra, fam) -> bool:
    return all(is_supercompact(A, a) for a in _vals(fam))


def classify_cInd(A: ImplicativeAlgebra, fam) -> bool:
    return all(is_indecomposable(A, a) for a in _vals(fam))


def _sk_witness_principal(A: ImplicativeAlgebra, vals) -> list | None:
    for k, a in enumerate(vals):
        w = supercompact_witness(A, a)
        if w is not None:
            return [[v] if i != k else w for i, v in enumerate(vals)]
    return None


def sk_search(A: ImplicativeAlgebra, fam, budget: int = DEFAULT_BUDGET) -> list | None:
    """Exhaustive search for value-sets (J_i) refuting SK; None if there are none.

    Index sets are canonicalised to value-sets. The last value-set is
    taken maximal (everything compatible with no choice), and earlier
    levels are deduplicated by the pair (set of prefix meets, hypothesis meet).
    """
    vals = _vals(fam)
    m = len(vals)
    if m == 0:
        return None
    n, imp, L = A.n, A.imp, A.lattice
    size = 1 << n
    work = 0
    last = vals[-1]

    def close(V: int, H: int):
        Jm = 0
        for b in range(n):
            t = imp[last][b]
            if all(not A.in_sigma(L._meet[v][t]) for v in bits(V)):
                Jm |= 1 << b
        h = L._meet[H][imp[last][A.bigexists(Jm)]]
        return Jm if A.in_sigma(h) else None

    frontier = {(1 << L.top, L.top): []}
    for i in range(m - 1):
        a = vals[i]
        nxt = {}
        work += len(frontier) * size
        if work > budget:
            raise BudgetExceeded(f"SK search exceeded {budget} steps")
        row = [imp[a][b] for b in range(n)]
        for (V, H), path in frontier.items():
            for J in range(size):
                H2 = L._meet[H][imp[a][A.bigexists(J)]]
                if not A.in_sigma(H2):
                    continue
                V2 = 0
                for v in bits(V):
                    mv = L._meet[v]
                    for b in bits(J):
                        V2 |= 1 << mv[row[b]]
                key = (V2, H2)
                if key not in nxt:
                    nxt[key] = path + [J]
        frontier = nxt
    for (V, H), path in sorted(frontier.items()):
        Jm = close(V, H)
        if Jm is not None:
            return [list(bits(J)) for J in path + [Jm]]
    return None


def classify_SK(A: ImplicativeAlgebra, fam, bounds: Bounds | None = None,
                method: str = "auto") -> ClassificationResult:
    bounds = bounds or Bounds()
    vals = _vals(fam)
    if not vals:
        return _holds(shortcut="empty family")
    if method == "auto" and A.sigma_principal:
        w = _sk_witness_principal(A, vals)
        sc = "separator closed under meets: SK iff cSK"
        if w is None:
            return _holds(shortcut=sc)
        return _fails({"kind": "SK", "family": list(vals), "value_sets": w}, shortcut=sc)
    try:
        w = sk_search(A, vals, bounds.budget)
    except BudgetExceeded as e:
        return _unknown(bound_used={"budget": bounds.budget}, detail=str(e))
    if w is None:
        return _holds(detail="exhaustive value-set search")
    return _fails({"kind": "SK", "family": list(vals), "value_sets": w})


# -- wfSK and fSK ------------------------------------------------------------------

def matrix_profile(A: ImplicativeAlgebra, vals, rows) -> tuple:
    """(×-functional, hypothesis, number of valid choice functions)."""
    imp, L = A.imp, A.lattice
    func = is_times_functional(A, rows)
    hyp = meet_in_sigma(A, (imp[a][A.bigexists(to_bits(r))] for a, r in zip(vals, rows)))
    counts = Counter({L.top: 1})
    for a, r in zip(vals, rows):
        nxt = Counter()
        for v, c in counts.items():
            for b in r:
                nxt[L._meet[v][imp[a][b]]] += c
        counts = nxt
    valid = sum(c for v, c in counts.items() if A.in_sigma(v))
    return func, hyp, valid


def _refutes(kind: str, profile: tuple) -> bool:
    func, hyp, valid = profile
    if not (func and hyp):
        return False
    return valid == 0 if kind == "wfSK" else valid != 1


def _matrix_witness(kind, vals, rows, valid) -> dict:
    return {"kind": kind, "family": list(vals), "matrix": [list(r) for r in rows],
            "valid_choices": valid}


def _row_families(A: ImplicativeAlgebra, bound: int, budget: int):
    """Yield nondecreasing ×-disjoint sequences of length <= bound (separator principal)."""
    imp, T, n = A.imp, A.times_table, A.n
    dg, off = A.delta_diag, A.delta_off
    diag_ok = [A.in_sigma(imp[T[b][b]][dg]) for b in range(n)]
    off_ok = [[A.in_sigma(imp[T[b][c]][off]) and A.in_sigma(imp[T[c][b]][off])
               for c in range(n)] for b in range(n)]
    count = 0
    stack = [()]
    while stack:
        seq = stack.pop()
        count += 1
        if count > budget:
            raise BudgetExceeded("too many candidate rows")
        yield seq
        if len(seq) == bound:
            continue
        lo = seq[-1] if seq else 0
        for c in range(n - 1, lo - 1, -1):
            if diag_ok[c] and all(off_ok[b][c] for b in seq):
                stack.append(seq + (c,))


def _rows_route(A: ImplicativeAlgebra, vals, kind: str, bound: int, budget: int):
    """Exact per-row decomposition, valid when the separator is closed under meets.

    Returns a refuting matrix or None.
    """
    distinct = sorted(set(vals))
    # per (element, length): example rows for each profile class
    ex = {}
    for seq in _row_families(A, bound, budget):
        p = len(seq)
        e = A.bigexists(to_bits(seq))
        for a in distinct:
            if not A.entails(a, e):
                continue
            good = sum(1 for b in seq if A.entails(a, b))
            cls = "bad" if good == 0 else ("multi" if good >= 2 else "one")
            ex.setdefault((a, p, cls), seq)
            ex.setdefault((a, p, "cov"), seq)
            if good >= 1:
                ex.setdefault((a, p, "ge1"), seq)
    for p in range(bound + 1):
        for pivot, need in (("bad", "cov"), ("multi", "ge1")):
            if kind == "wfSK" and pivot == "multi":
                continue
            for i0, a0 in enumerate(vals):
                if (a0, p, pivot) not in ex:
                    continue
                rows = []
                for i, a in enumerate(vals):
                    key = (a, p, pivot) if i == i0 else (a, p, need)
                    if key not in ex:
                        break
                    rows.append(ex[key])
                else:
                    return rows
    return None


def _column_search(A: ImplicativeAlgebra, vals, kind: str, bound: int, budget: int):
    """General search over multisets of columns, pruning on ×-functionality."""
    m = len(vals)
    imp, T, L = A.imp, A.times_table, A.lattice
    dg, off = A.delta_diag, A.delta_off
    cols = list(itertools.product(range(A.n), repeat=m))
    diag_term = [L.top] * len(cols)
    for ci, c in enumerate(cols):
        t = L.top
        for b in c:
            t = L._meet[t][imp[T[b][b]][dg]]
        diag_term[ci] = t
    pair_cache: dict = {}

    def pair_term(x, y):
        key = (x, y)
        r = pair_cache.get(key)
        if r is None:
            r = L.top
            for b, b2 in zip(cols[x], cols[y]):
                r = L._meet[r][imp[T[b][b2]][off]]
                r = L._meet[r][imp[T[b2][b]][off]]
            pair_cache[key] = r
        return r

    count = 0
    stack = [((), L.top)]
    while stack:
        chosen, F = stack.pop()
        count += 1
        if count > budget:
            raise BudgetExceeded(f"column search exceeded {budget} nodes")
        rows = [tuple(cols[c][i] for c in chosen) for i in range(m)]
        prof = matrix_profile(A, vals, rows)
        if _refutes(kind, prof):
            return rows
        if len(chosen) == bound:
            continue
        lo = chosen[-1] if chosen else 0
        for ci in range(len(cols) - 1, lo - 1, -1):
            F2 = L._meet[F][diag_term[ci]]
            if not A.in_sigma(F2):
                continue
            for c in chosen:
                F2 = L._meet[F2][pair_term(c, ci)]
                if not A.in_sigma(F2):
                    break
            else:
                stack.append((chosen + (ci,), F2))
    return None


def _constructive_fsk_witnesses(A: ImplicativeAlgebra, vals, cwj: bool):
    """Candidate refuting matrices from the joins-compatible arguments."""
    top, bot = A.top, A.bottom
    if not cwj:
        return
    if any(is_equiv_bottom(A, a) for a in vals):
        yield "fSK", [(bot, top) for _ in vals], "joins-compatible: fSK forces no member equivalent to bottom"
    for k, a in enumerate(vals):
        w = indecomposable_witness(A, a)
        if w is not None:
            width = len(w)
            rows = [tuple(w) if i == k else (top,) + (bot,) * (width - 1) for i in range(len(vals))]
            if width == 0:
                rows = [() for _ in vals]
            yield "wfSK", rows, "joins-compatible: fSK implies cInd"


def _classify_matrix_kind(A: ImplicativeAlgebra, fam, kind: str, bound_J: int | None,
                          bounds: Bounds | None, method: str) -> ClassificationResult:
    bounds = bounds or Bounds()
    vals = _vals(fam)
    bound = bound_J if bound_J is not None else bounds.j_for(A)
    bu = {"J": bound}
    if not vals:
        return _holds(shortcut="empty family")
    if method == "auto":
        sk = classify_SK(A, vals, bounds)
        if sk.holds:
            return _holds(shortcut="SK implies fSK" + (" implies wfSK" if kind == "wfSK" else ""))
        if kind == "fSK":
            w = classify_matrix(A, vals, "wfSK", bound, bounds, method)
            if w.fails:
                return _fails(dict(w.witness, kind="fSK"), shortcut="fSK implies wfSK",
                              bound_used=w.bound_used)
            if w.holds and not any(is_equiv_bottom(A, a) for a in vals):
                return _holds(shortcut="wfSK with no member equivalent to bottom implies fSK",
                              bound_used=w.bound_used)
        cwj = is_compatible_with_joins(A)
        for wkind, rows, sc in _constructive_fsk_witnesses(A, vals, cwj):
            if kind == "wfSK" and wkind != "wfSK":
                continue
            prof = matrix_profile(A, vals, rows)
            if _refutes(kind, prof):
                return _fails(_matrix_witness(kind, vals, rows, prof[2]), shortcut=sc)
    try:
        if method in ("auto", "rows") and A.sigma_principal:
            rows = _rows_route(A, vals, kind, bound, bounds.budget)
            how = "row decomposition (separator closed under meets)"
        elif method == "rows":
            raise ValueError("row decomposition needs a separator closed under meets")
        else:
            rows = _column_search(A, vals, kind, bound, bounds.budget)
            how = "column search"
    except BudgetExceeded as e:
        return _unknown(bound_used=dict(bu, budget=bounds.budget), detail=str(e))
    if rows is None:
        return _holds(bound_used=bu, detail=how)
    prof = matrix_profile(A, vals, rows)
    return _fails(_matrix_witness(kind, vals, rows, prof[2]), bound_used=bu, detail=how)


def classify_matrix(A, fam, kind, bound_J=None, bounds=None, method="auto"):
    return _classify_matrix_kind(A, fam, kind, bound_J, bounds, method)


def classify_wfSK(A: ImplicativeAlgebra, fam, bound_J: int | None = None,
                  bounds: Bounds | None = None, method: str = "auto") -> ClassificationResult:
    return _classify_matrix_kind(A, fam, "wfSK", bound_J, bounds, method)


def classify_fSK(A: ImplicativeAlgebra, fam, bound_J: int | None = None,
                 bounds: Bounds | None = None, method: str = "auto") -> ClassificationResult:
    return _classify_matrix_kind(A, fam, "fSK", bound_J, bounds, method)


# -- uniform classes ------------------------------------------------------------------

UNIFORM_KINDS = ("U-SK", "U-fSK", "U-wfSK")


def _multiset_maps(m: int, K: int):
    """Reindexings K -> I up to permutation of K, as nondecreasing index tuples."""
    for k in range(K + 1):
        yield from itertools.combinations_with_replacement(range(m), k)


def classify_uniform(A: ImplicativeAlgebra, fam, kind: str, bounds: Bounds | None = None,
                     method: str = "auto") -> ClassificationResult:
    if kind not in UNIFORM_KINDS:
        raise ValueError(f"unknown uniform class {kind!r}")
    bounds = bounds or Bounds()
    vals = _vals(fam)
    m = len(vals)
    if m == 0:
        return _holds(shortcut="empty family")
    base = "SK" if kind == "U-SK" else "fSK"
    # necessary conditions through singleton reindexings
    for i, a in enumerate(vals):
        if base == "SK":
            w = supercompact_witness(A, a)
            if w is not None:
                return _fails({"kind": kind, "family": list(vals), "reindexing": [i],
                               "inner": {"kind": "SK", "family": [a], "value_sets": [w]}},
                              shortcut="U-SK implies cSK")
        else:
            w = indecomposable_witness(A, a)
            if w is not None:
                inner = {"kind": "wfSK", "family": [a], "matrix": [w], "valid_choices": 0}
                return _fails({"kind": kind, "family": list(vals), "reindexing": [i],
                               "inner": inner}, shortcut="U-wfSK implies cInd")
    if method == "auto" and A.sigma_principal:
        sc = ("separator closed under meets: cSK implies U-SK" if base == "SK"
              else "separator closed under meets: cInd implies U-fSK")
        return _holds(shortcut=sc)
    # the identity reindexing
    own = classify_SK(A, vals, bounds, method) if base == "SK" else \
        classify_fSK(A, vals, None, bounds, method)
    if own.fails:
        return _fails({"kind": kind, "family": list(vals), "reindexing": list(range(m)),
                       "inner": own.witness}, shortcut=f"{kind} implies {base}")
    if method == "auto":
        ed = is_exists_distributive(A, bounds)
        if ed.holds and own.holds:
            return _holds(shortcut=f"exists-distributive ({ed.bound_used}): {base} implies {kind}",
                          bound_used=ed.bound_used)
    K = bounds.k_for(m)
    try:
        for f in _multiset_maps(m, K):
            sub = tuple(vals[i] for i in f)
            r = classify_SK(A, sub, bounds, method) if base == "SK" else \
                classify_fSK(A, sub, None, bounds, method)
            if r.fails:
                return _fails({"kind": kind, "family": list(vals), "reindexing": list(f),
                               "inner": r.witness}, bound_used={"K": K})
            if not r.decided:
                raise BudgetExceeded(r.detail)
    except BudgetExceeded as e:
        return _unknown(bound_used={"K": K, "budget": bounds.budget}, detail=str(e))
    return _unknown(bound_used={"K": K}, detail="no counterexample among bounded reindexings")


def carusk_counterexample(A: ImplicativeAlgebra, fam, K: int, budget: int = DEFAULT_BUDGET):
    """Bounded search with disjoint blocks K_i, per the block characterisation of U-SK.

    For block sizes (k_i) with sum <= K and value-sets (J_k), test whether
    meet_i(a_i -> meet_{k in K_i} exists J_k) is in the separator while no
    choice g makes meet_i(a_i -> meet_{k in K_i} b_g(k)) true.
    """
    vals = _vals(fam)
    m = len(vals)
    L, imp, n = A.lattice, A.imp, A.n
    size = 1 << n
    work = 0
    for sizes in itertools.product(range(K + 1), repeat=m):
        total = sum(sizes)
        if total > K:
            continue
        owners = [i for i, s in enumerate(sizes) for _ in range(s)]
        work += size ** total
        if work > budget:
            raise BudgetExceeded("block search over budget")
        for Js in itertools.product(range(size), repeat=total):
            hyp = L.top
            inner = [L.top] * m
            for k, J in enumerate(Js):
                inner[owners[k]] = L._meet[inner[owners[k]]][A.bigexists(J)]
            for i in range(m):
                hyp = L._meet[hyp][imp[vals[i]][inner[i]]]
            if not A.in_sigma(hyp):
                continue
            found = False
            for g in itertools.product(*[list(bits(J)) for J in Js]):
                blk = [L.top] * m
                for k, b in enumerate(g):
                    blk[owners[k]] = L._meet[blk[owners[k]]][b]
                if meet_in_sigma(A, (imp[vals[i]][blk[i]] for i in range(m))):
                    found = True
                    break
            if not found:
                return {"blocks": list(sizes), "value_sets": [list(bits(J)) for J in Js]}
    return None


# -- algebra-level properties ------------------------------------------------------------

def is_compatible_with_joins(A: ImplicativeAlgebra) -> bool:
    """Exact: the empty join plus binary joins generate every finite join."""
    L, imp, n = A.lattice, A.imp, A.n
    for b in range(n):
        if imp[L.bottom][b] != L.top:
            return False
    for a in range(n):
        for a2 in range(a + 1, n):
            j = L._join[a][a2]
            for b in range(n):
                if imp[j][b] != L._meet[imp[a][b]][imp[a2][b]]:
                    return False
    return True


def compatible_with_joins_brute(A: ImplicativeAlgebra) -> bool:
    L, imp = A.lattice, A.imp
    for S in range(1 << A.n):
        j = join_all(L, S)
        for b in range(A.n):
            r = L.top
            for a in bits(S):
                r = L._meet[r][imp[a][b]]
            if r != imp[j][b]:
                return False
    return True


def is_sigma_meet_closed(A: ImplicativeAlgebra) -> bool:
    return A.sigma_principal


def _pointwise_meet_image(A: ImplicativeAlgebra) -> np.ndarray:
    """PM[X][S] = {x meet s | x in X, s in S} as bitsets."""
    n = A.n
    size = 1 << n
    M = A.lattice.meet_table
    single = np.zeros((n, size), dtype=np.int64)
    for b in range(n):
        for i in range(n):
            lo = 1 << i
            single[b, lo:2 * lo] = single[b, :lo] | (1 << int(M[b, i]))
    pm = np.zeros((size, size), dtype=np.int64)
    for i in range(n):
        lo = 1 << i
        pm[lo:2 * lo] = pm[:lo] | single[i][None, :]
    return pm


def exists_distributive_counterexample(A: ImplicativeAlgebra, K: int):
    """Bounded check of exists-distributivity for K index positions; None if it holds."""
    n = A.n
    E = A.exists_array
    M = A.lattice.meet_table
    imp = A.structure.imp
    size = 1 << n
    if K == 0:
        # empty product: top -> exists{top}
        t = A.arrow(A.top, A.bigexists(1 << A.top))
        return None if A.in_sigma(t) else []
    pm = _pointwise_meet_image(A)
    sets = np.arange(size)
    terms_seen = set()
    first_bad = {}
    for prefix in itertools.product(range(size), repeat=K - 1):
        ante = A.top
        P = 1 << A.top
        for J in prefix:
            ante = int(M[ante, E[J]])
            P = int(pm[P, J])
        antes = M[ante, E[sets]]
        cons = E[pm[P, sets]]
        terms = imp[antes, cons]
        for t in np.unique(terms):
            t = int(t)
            if t not in terms_seen:
                terms_seen.add(t)
                idx = int(np.nonzero(terms == t)[0][0])
                first_bad[t] = list(prefix) + [idx]
    if meet_in_sigma(A, terms_seen):
        return None
    L = A.lattice
    acc = L.top
    for t in sorted(terms_seen):
        acc = L._meet[acc][t]
        if not A.in_sigma(acc):
            return [list(bits(J)) for J in first_bad[t]]
    return [list(bits(J)) for J in first_bad[min(terms_seen)]]


def is_exists_distributive(A: ImplicativeAlgebra, bounds: Bounds | None = None) -> ClassificationResult:
    bounds = bounds or Bounds()
    K = bounds.K if bounds.K is not None else 3
    if A.sigma_is_everything:
        return _holds(shortcut="separator is everything", bound_used={"K": K})
    done = 0
    for k in range(K + 1):
        if (1 << A.n) ** max(k, 1) > 1 << 27:
            break
        w = exists_distributive_counterexample(A, k)
        if w is not None:
            return _fails({"kind": "exists-distributive", "value_sets": w}, bound_used={"K": k})
        done = k
    det = "" if done == K else f"bound reduced from {K} by budget"
    return _holds(bound_used={"K": done}, detail=det)


def satisfies_choice_rule(A: ImplicativeAlgebra, bounds: Bounds | None = None,
                          method: str = "auto") -> ClassificationResult:
    """Choice rule, tested as: the top-constant family is U-SK."""
    bounds = bounds or Bounds()
    top = A.top
    if method == "auto" and A.sigma_principal:
        w = supercompact_witness(A, top)
        sc = "separator closed under meets: choice rule iff top supercompact"
        if w is None:
            return _holds(shortcut=sc)
        return _fails({"kind": "choice-rule", "value_sets": [w]}, shortcut=sc)
    for size in range(1, bounds.I + 1):
        r = classify_uniform(A, (top,) * size, "U-SK", bounds, method)
        if r.fails:
            inner = r.witness.get("inner", {})
            return _fails({"kind": "choice-rule", "value_sets": inner.get("value_sets", [])})
        if not r.decided:
            return _unknown(bound_used={"I": bounds.I}, detail=r.detail)
    return _holds(bound_used={"I": bounds.I})


def choice_rule_direct(A: ImplicativeAlgebra, K: int, budget: int = DEFAULT_BUDGET):
    """Direct bounded check: meet_k exists J_k true implies some choice is true."""
    size = 1 << A.n
    if size ** K > budget:
        raise BudgetExceeded("choice-rule search over budget")
    for Js in itertools.product(range(size), repeat=K):
        if not meet_in_sigma(A, (A.bigexists(J) for J in Js)):
            continue
        if not any(meet_in_sigma(A, g) for g in itertools.product(*[list(bits(J)) for J in Js])):
            return [list(bits(J)) for J in Js]
    return None


def _cover_principal(A: ImplicativeAlgebra, sc: list) -> list:
    """Elements not covered by the existential of the supercompacts below them."""
    bad = []
    for a in range(A.n):
        below = to_bits(s for s in sc if A.entails(s, a))
        if not A.entails(a, A.bigexists(below)):
            bad.append(a)
    return bad


def _supercoherent(A: ImplicativeAlgebra, bounds: Bounds, functional: bool) -> ClassificationResult:
    legs = {}
    cr = satisfies_choice_rule(A, bounds)
    legs["choice_rule"] = cr.verdict.value
    sc = supercompact_elements(A)
    scb = to_bits(sc)
    closure = _holds()
    if A.sigma_principal:
        T = A.times_table
        for s in sc:
            for t in sc:
                if not (scb >> T[s][t]) & 1:
                    closure = _fails({"kind": "times-closure", "pair": [s, t]})
                    break
            if closure.fails:
                break
        legs["times_closure"] = closure.verdict.value
        targets = [a for a in range(A.n)
                   if not functional or is_indecomposable(A, a)]
        bad = [a for a in _cover_principal(A, sc) if a in targets]
        cover = _fails({"kind": "cover", "elements": bad}) if bad else _holds()
        legs["cover"] = cover.verdict.value
        sc_name = "separator closed under meets: legs decided per element"
    else:
        for size in range(1, bounds.I + 1):
            for f in itertools.combinations_with_replacement(range(A.n), size):
                if classify_uniform(A, f, "U-SK", bounds).holds:
                    for g in itertools.combinations_with_replacement(range(A.n), size):
                        if not classify_uniform(A, g, "U-SK", bounds).holds:
                            continue
                        prod = [A.times_table[x][y] for x, y in zip(f, g)]
                        r = classify_uniform(A, prod, "U-SK", bounds)
                        if r.fails:
                            closure = _fails({"kind": "times-closure", "pair": [list(f), list(g)]})
                        elif not r.decided and closure.holds:
                            closure = _unknown(bound_used={"I": bounds.I})
        legs["times_closure"] = closure.verdict.value
        bad = _cover_principal(A, sc)
        cover = _unknown(bound_used={"I": bounds.I},
                         detail="cover refutation needs a meet-closed separator") if bad else _holds()
        legs["cover"] = cover.verdict.value
        sc_name = None
    parts = [cr, closure, cover]
    if any(p.fails for p in parts):
        first = next(p for p in parts if p.fails)
        return ClassificationResult(Verdict.FAILS, witness=dict(first.witness, legs=legs),
                                    shortcut=sc_name, bound_used={"I": bounds.I})
    if all(p.holds for p in parts):
        return _holds(shortcut=sc_name, bound_used={"I": bounds.I}, detail=str(legs))
    return _unknown(bound_used={"I": bounds.I}, detail=str(legs))


def is_uniformly_supercoherent(A: ImplicativeAlgebra, bounds: Bounds | None = None) -> ClassificationResult:
    return _supercoherent(A, bounds or Bounds(), functional=False)


def is_uniformly_functional_supercoherent(A: ImplicativeAlgebra,
                                          bounds: Bounds | None = None) -> ClassificationResult:
    return _supercoherent(A, bounds or Bounds(), functional=True)


MODEST_KINDS = ("∧-modest", "×-modest", "∧-core", "×-core")


def classify_modest(A: ImplicativeAlgebra, fam, kind: str,
                    bounds: Bounds | None = None) -> ClassificationResult:
    if kind not in MODEST_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    vals = _vals(fam)
    uk = "U-fSK" if kind.endswith("modest") else "U-SK"
    disj = is_wedge_disjoint(A, vals) if kind.startswith("∧") else is_times_disjoint(A, vals)
    if not disj:
        return _fails({"kind": kind, "family": list(vals), "reason": "not disjoint"})
    u = classify_uniform(A, vals, uk, bounds)
    if u.fails:
        return _fails({"kind": kind, "family": list(vals), "reason": uk, "inner": u.witness},
                      shortcut=u.shortcut)
    return ClassificationResult(u.verdict, bound_used=u.bound_used, shortcut=u.shortcut)


# -- profiles and the implication diagram --------------------------------------------------

@dataclass
class AlgebraProfile:
    compatible_with_joins: bool
    sigma_meet_closed: bool
    exists_distributive: ClassificationResult
    choice_rule: ClassificationResult
    uniformly_supercoherent: ClassificationResult
    uniformly_functional_supercoherent: ClassificationResult

    def to_json(self) -> dict:
        return {"compatible_with_joins": self.compatible_with_joins,
                "sigma_meet_closed": self.sigma_meet_closed,
                "exists_distributive": self.exists_distributive.to_json(),
                "choice_rule": self.choice_rule.to_json(),
                "uniformly_supercoherent": self.uniformly_supercoherent.to_json(),
                "uniformly_functional_supercoherent":
                    self.uniformly_functional_supercoherent.to_json()}


def profile(A: ImplicativeAlgebra, bounds: Bounds | None = None) -> AlgebraProfile:
    bounds = bounds or Bounds()
    return AlgebraProfile(is_compatible_with_joins(A), is_sigma_meet_closed(A),
                          is_exists_distributive(A, bounds), satisfies_choice_rule(A, bounds),
                          is_uniformly_supercoherent(A, bounds),
                          is_uniformly_functional_supercoherent(A, bounds))


FAMILY_CLASSES = ("U-SK", "cSK", "SK", "U-fSK", "U-wfSK", "cInd", "fSK", "wfSK")


def classify_all(A: ImplicativeAlgebra, fam, bounds: Bounds | None = None,
                 method: str = "auto") -> dict:
    bounds = bounds or Bounds()
    vals = _vals(fam)
    return {
        "U-SK": classify_uniform(A, vals, "U-SK", bounds, method),
        "cSK": from_bool(classify_cSK(A, vals)),
        "SK": classify_SK(A, vals, bounds, method),
        "U-fSK": classify_uniform(A, vals, "U-fSK", bounds, method),
        "U-wfSK": classify_uniform(A, vals, "U-wfSK", bounds, method),
        "cInd": from_bool(classify_cInd(A, vals)),
        "fSK": classify_fSK(A, vals, None, bounds, method),
        "wfSK": classify_wfSK(A, vals, None, bounds, method),
        "nonbot": from_bool(not any(is_equiv_bottom(A, a) for a in vals)),
    }


GENERAL_ARROWS = [
    ("U-SK", "cSK"), ("U-SK", "SK"), ("U-SK", "U-fSK"),
    ("U-fSK", "U-wfSK"), ("U-wfSK", "U-fSK"),
    ("U-fSK", "cInd"), ("U-wfSK", "cInd"), ("U-fSK", "fSK"), ("U-wfSK", "wfSK"),
    ("SK", "fSK"), ("fSK", "wfSK"), ("cSK", "cInd"),
]
CWJ_ARROWS = [("SK", "cSK"), ("fSK", "cInd"), ("fSK", "nonbot")]
MEET_CLOSED_ARROWS = [("cSK", "U-SK"), ("cInd", "U-fSK")]
DISTRIBUTIVE_ARROWS = [("SK", "U-SK"), ("fSK", "U-fSK")]


def diagram_arrows(A: ImplicativeAlgebra, prof: AlgebraProfile | None = None) -> dict:
    prof = prof or profile(A)
    out = {"general": GENERAL_ARROWS}
    if prof.compatible_with_joins:
        out["compatible_with_joins"] = CWJ_ARROWS
    if prof.sigma_meet_closed:
        out["sigma_meet_closed"] = MEET_CLOSED_ARROWS
    if prof.exists_distributive.holds:
        out["exists_distributive"] = DISTRIBUTIVE_ARROWS
    return out


@dataclass
class DagReport:
    samples: int
    decided: int
    violations: list = field(default_factory=list)
    diagrams: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"samples": self.samples, "decided": self.decided, "diagrams": self.diagrams,
                "violations": self.violations, "passed": self.passed}


def verify_implication_dag(A: ImplicativeAlgebra, samples: Iterable, prof: AlgebraProfile | None = None) -> DagReport:
    """Check every applicable arrow on samples given as (family, {class: verdict})."""
    arrows = diagram_arrows(A, prof)
    rep = DagReport(0, 0, diagrams=sorted(arrows))
    for fam, verdicts in samples:
        rep.samples += 1
        v = {k: (r.verdict if isinstance(r, ClassificationResult) else Verdict(r))
             for k, r in verdicts.items()}
        if all(x is not Verdict.UNKNOWN for x in v.values()):
            rep.decided += 1
        for name, arr in arrows.items():
            for p, q in arr:
                if v.get(p) is Verdict.HOLDS and v.get(q) is Verdict.FAILS:
                    rep.violations.append({"family": list(_vals(fam)), "diagram": name,
                                           "arrow": f"{p} => {q}"})
    return rep


# -- replay ------------------------------------------------------------------------------

def replay_witness(A: ImplicativeAlgebra, w: dict) -> bool:
    """Re-check a stored witness; True when it still refutes its property."""
    kind = w.get("kind")
    if kind == "SK":
        vals, Js = w["family"], w["value_sets"]
        return (len(vals) == len(Js) and _sk_hypothesis(A, vals, Js)
                and not _choice_meets(A, vals, Js))
    if kind in ("wfSK", "fSK"):
        prof = matrix_profile(A, w["family"], w["matrix"])
        return _refutes(kind, prof) and prof[2] == w.get("valid_choices", prof[2])
    if kind in UNIFORM_KINDS:
        vals = w["family"]
        sub = [vals[i] for i in w["reindexing"]]
        inner = dict(w["inner"])
        if inner.get("family") != sub:
            return False
        return replay_witness(A, inner)
    if kind == "supercompact":
        a, B = w["element"], w["value_set"]
        return A.entails(a, A.bigexists(to_bits(B))) and not any(A.entails(a, b) for b in B)
    if kind == "indecomposable":
        a, B = w["element"], w["family"]
        return (is_times_disjoint(A, B) and A.entails(a, A.bigexists(to_bits(B)))
                and not any(A.entails(a, b) for b in B))
    if kind == "choice-rule":
        Js = w["value_sets"]
        return (meet_in_sigma(A, (A.bigexists(to_bits(J)) for J in Js))
                and not any(meet_in_sigma(A, g) for g in itertools.product(*Js)))
    if kind == "exists-distributive":
        Js = [to_bits(J) for J in w["value_sets"]]
        L = A.lattice
        ante = L.top
        P = 1 << L.top
        pm = _pointwise_meet_image(A)
        for J in Js:
            ante = L._meet[ante][A.bigexists(J)]
            P = int(pm[P, J])
        return not A.in_sigma(A.arrow(ante, A.bigexists(P)))
    if kind == "times-closure":
        s, t = w["pair"]
        if isinstance(s, list):
            return not classify_uniform(A, [A.times_table[x][y] for x, y in zip(s, t)], "U-SK").holds
        return (is_supercompact(A, s) and is_supercompact(A, t)
                and not is_supercompact(A, A.times_table[s][t]))
    if kind == "cover":
        sc = supercompact_elements(A)
        return all(a in _cover_principal(A, sc) for a in w["elements"]) and bool(w["elements"])
    raise ValueError(f"no replay rule for witness kind {kind!r}")
