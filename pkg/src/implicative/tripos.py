"""The implicative tripos over finite index sets.

A predicate on a finite set ``I`` is a tuple of algebra elements indexed by
``I``; two predicates are identified when they entail each other in the
uniform power separator. Fiber conjunction is the encoded product ``×``,
not the pointwise lattice meet.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .analysis import (Bounds, ClassificationResult, Verdict, classify_fSK, classify_SK,
                       classify_uniform, classify_wfSK)
from .core import BudgetExceeded, ImplicativeAlgebra, Report, meet_in_sigma
from .lattice import meet_all


class BaseMismatch(ValueError):
    pass


class NotAPullback(ValueError):
    pass


class TriposDisagreement(AssertionError):
    """Family-level and tripos-level classifications disagree."""


# -- base sets and maps -------------------------------------------------------------

def finite_set(n_or_labels) -> tuple:
    if isinstance(n_or_labels, int):
        return tuple(range(n_or_labels))
    return tuple(n_or_labels)


def product_set(X: Sequence, Y: Sequence) -> tuple:
    """Labels of X×Y in row-major order: index ``i*|Y| + j``."""
    return tuple((x, y) for x in X for y in Y)


@dataclass(frozen=True)
class BaseMap:
    domain: tuple
    codomain: tuple
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "codomain", tuple(self.codomain))
        object.__setattr__(self, "table", tuple(int(t) for t in self.table))
        if len(self.table) != len(self.domain):
            raise ValueError("map table must cover the whole domain")
        if any(not 0 <= t < len(self.codomain) for t in self.table):
            raise ValueError("map value outside the codomain")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def fiber(self, j: int) -> list:
        return [i for i, t in enumerate(self.table) if t == j]

    def is_surjective(self) -> bool:
        return len(set(self.table)) == len(self.codomain)

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def to_json(self) -> dict:
        return {"domain": len(self.domain), "codomain": len(self.codomain), "table": list(self.table)}


def identity_map(X: Sequence) -> BaseMap:
    X = tuple(X)
    return BaseMap(X, X, range(len(X)))


def compose(g: BaseMap, f: BaseMap) -> BaseMap:
    """``g ∘ f``."""
    if f.codomain != g.domain:
        raise BaseMismatch("codomain of the first map differs from the domain of the second")
    return BaseMap(f.domain, g.codomain, [g.table[t] for t in f.table])


def constant_map(X: Sequence, Y: Sequence, y: int) -> BaseMap:
    return BaseMap(X, Y, [y] * len(tuple(X)))


def projection(X: Sequence, Y: Sequence, which: int) -> BaseMap:
    X, Y = tuple(X), tuple(Y)
    m = len(Y)
    if which == 0:
        return BaseMap(product_set(X, Y), X, [k // m for k in range(len(X) * m)])
    return BaseMap(product_set(X, Y), Y, [k % m for k in range(len(X) * m)])


def pairing(f: BaseMap, g: BaseMap) -> BaseMap:
    """``⟨f, g⟩ : Z → X×Y``."""
    if f.domain != g.domain:
        raise BaseMismatch("pairing needs a common domain")
    m = len(g.codomain)
    return BaseMap(f.domain, product_set(f.codomain, g.codomain),
                   [a * m + b for a, b in zip(f.table, g.table)])


def diagonal(X: Sequence) -> BaseMap:
    X = tuple(X)
    return pairing(identity_map(X), identity_map(X))


def all_maps(X: Sequence, Y: Sequence) -> Iterable[BaseMap]:
    X, Y = tuple(X), tuple(Y)
    for t in itertools.product(range(len(Y)), repeat=len(X)):
        yield BaseMap(X, Y, t)


# -- predicates ---------------------------------------------------------------------

@dataclass(frozen=True)
class FiberPredicate:
    base: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != len(self.base):
            raise ValueError("predicate must be total on its base")

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def to_json(self, A: ImplicativeAlgebra | None = None) -> dict:
        vals = [A.name_of(v) for v in self.values] if A is not None else list(self.values)
        return {"base": len(self.base), "values": vals}


def predicate(base, values) -> FiberPredicate:
    return FiberPredicate(finite_set(base), values)


def constant(A: ImplicativeAlgebra, X: Sequence, value: int) -> FiberPredicate:
    X = tuple(X)
    return FiberPredicate(X, [value] * len(X))


def top(A: ImplicativeAlgebra, X: Sequence) -> FiberPredicate:
    return constant(A, X, A.top)


def bottom(A: ImplicativeAlgebra, X: Sequence) -> FiberPredicate:
    return constant(A, X, A.bottom)


def _same_base(phi: FiberPredicate, psi: FiberPredicate) -> None:
    if phi.base != psi.base:
        raise BaseMismatch(f"predicates live on different bases ({len(phi.base)} vs {len(psi.base)})")


def fiber_entails(A: ImplicativeAlgebra, phi: FiberPredicate, psi: FiberPredicate) -> bool:
    _same_base(phi, psi)
    imp = A.imp
    return meet_in_sigma(A, (imp[a][b] for a, b in zip(phi.values, psi.values)))


def fiber_equiv(A: ImplicativeAlgebra, phi: FiberPredicate, psi: FiberPredicate) -> bool:
    return fiber_entails(A, phi, psi) and fiber_entails(A, psi, phi)


def _pointwise(table, phi: FiberPredicate, psi: FiberPredicate) -> FiberPredicate:
    _same_base(phi, psi)
    return FiberPredicate(phi.base, [table[a][b] for a, b in zip(phi.values, psi.values)])


def conj(A: ImplicativeAlgebra, phi: FiberPredicate, psi: FiberPredicate) -> FiberPredicate:
    return _pointwise(A.times_table, phi, psi)


def disj(A: ImplicativeAlgebra, phi: FiberPredicate, psi: FiberPredicate) -> FiberPredicate:
    return _pointwise(A.plus_table, phi, psi)


def implies(A: ImplicativeAlgebra, phi: FiberPredicate, psi: FiberPredicate) -> FiberPredicate:
    return _pointwise(A.imp, phi, psi)


def reindex(phi: FiberPredicate, f: BaseMap) -> FiberPredicate:
    if f.codomain != phi.base:
        raise BaseMismatch("map codomain differs from the predicate's base")
    return FiberPredicate(f.domain, [phi.values[t] for t in f.table])


def exists_along(A: ImplicativeAlgebra, phi: FiberPredicate, f: BaseMap) -> FiberPredicate:
    if f.domain != phi.base:
        raise BaseMismatch("map domain differs from the predicate's base")
    fib = [0] * len(f.codomain)
    for i, t in enumerate(f.table):
        fib[t] |= 1 << phi.values[i]
    return FiberPredicate(f.codomain, [A.bigexists(s) for s in fib])


def forall_along(A: ImplicativeAlgebra, phi: FiberPredicate, f: BaseMap) -> FiberPredicate:
    if f.domain != phi.base:
        raise BaseMismatch("map domain differs from the predicate's base")
    fib = [0] * len(f.codomain)
    for i, t in enumerate(f.table):
        fib[t] |= 1 << phi.values[i]
    return FiberPredicate(f.codomain, [meet_all(A.lattice, s) for s in fib])


def equality_predicate(A: ImplicativeAlgebra, X: Sequence) -> FiberPredicate:
    X = tuple(X)
    return exists_along(A, top(A, X), diagonal(X))


def generic_predicate(A: ImplicativeAlgebra) -> tuple:
    carrier = tuple(A.lattice.names)
    return carrier, FiberPredicate(carrier, range(A.n))


def name_map(A: ImplicativeAlgebra, phi: FiberPredicate) -> BaseMap:
    """The map ``i ↦ φ(i)`` along which the generic predicate reindexes to φ."""
    return BaseMap(phi.base, tuple(A.lattice.names), phi.values)


def all_predicates(A: ImplicativeAlgebra, X: Sequence) -> Iterable[FiberPredicate]:
    X = tuple(X)
    for t in itertools.product(range(A.n), repeat=len(X)):
        yield FiberPredicate(X, t)


def sample_predicates(A: ImplicativeAlgebra, X: Sequence, limit: int, rng) -> list:
    """All predicates on X when there are at most ``limit``, else a seeded sample."""
    X = tuple(X)
    if A.n ** len(X) <= limit:
        return list(all_predicates(A, X))
    return [FiberPredicate(X, rng.integers(0, A.n, size=len(X)).tolist()) for _ in range(limit)]


# -- structural law checks ------------------------------------------------------------

def _report(check: str, failure, count: int, notes: str = "") -> Report:
    if failure is None:
        return Report(True, check, notes=f"{count} instances" + (f"; {notes}" if notes else ""))
    axiom, witness = failure
    return Report(False, check, axiom, witness, notes)


def _maps_up_to(size: int):
    for nx in range(size + 1):
        for ny in range(size + 1):
            yield from all_maps(range(nx), range(ny))


def check_adjunctions(A: ImplicativeAlgebra, sizes: int = 2, limit: int = 256,
                      seed: int = 0) -> Report:
    """Both adjunctions for every map between bases of size <= ``sizes``."""
    rng = np.random.default_rng(seed)
    count = 0
    for f in _maps_up_to(sizes):
        phis = sample_predicates(A, f.domain, limit, rng)
        psis = sample_predicates(A, f.codomain, limit, rng)
        for phi in phis:
            ex, fa = exists_along(A, phi, f), forall_along(A, phi, f)
            for psi in psis:
                count += 1
                pf = reindex(psi, f)
                if fiber_entails(A, ex, psi) != fiber_entails(A, phi, pf):
                    return _report("adjunctions", ("exists", _adj_witness(A, f, phi, psi)), count)
                if fiber_entails(A, pf, phi) != fiber_entails(A, psi, fa):
                    return _report("adjunctions", ("forall", _adj_witness(A, f, phi, psi)), count)
    return _report("adjunctions", None, count)


def _adj_witness(A, f, phi, psi) -> dict:
    return {"map": f.to_json(), "phi": phi.to_json(A), "psi": psi.to_json(A)}


def pullback(f: BaseMap, g: BaseMap) -> tuple:
    """The canonical pullback ``(P, p1: P→X, p2: P→Y)`` of ``f: X→Z`` and ``g: Y→Z``."""
    if f.codomain != g.codomain:
        raise BaseMismatch("a pullback needs a common codomain")
    pairs = [(x, y) for x in range(len(f.domain)) for y in range(len(g.domain))
             if f.table[x] == g.table[y]]
    P = tuple((f.domain[x], g.domain[y]) for x, y in pairs)
    return P, BaseMap(P, f.domain, [x for x, _ in pairs]), BaseMap(P, g.domain, [y for _, y in pairs])


def _check_is_pullback(f: BaseMap, g: BaseMap, p1: BaseMap, p2: BaseMap) -> None:
    if p1.domain != p2.domain or p1.codomain != f.domain or p2.codomain != g.domain:
        raise NotAPullback("legs do not fit the cospan")
    if any(f.table[a] != g.table[b] for a, b in zip(p1.table, p2.table)):
        raise NotAPullback("square does not commute")
    got = list(zip(p1.table, p2.table))
    want = {(x, y) for x in range(len(f.domain)) for y in range(len(g.domain))
            if f.table[x] == g.table[y]}
    if len(set(got)) != len(got) or set(got) != want:
        raise NotAPullback("induced map to the canonical pullback is not a bijection")


def check_bcc(A: ImplicativeAlgebra, f: BaseMap, g: BaseMap, legs: tuple | None = None,
              limit: int = 64, seed: int = 0) -> Report:
    """Beck-Chevalley for the square over ``f: X→Z`` and ``g: Y→Z``.

    ``legs = (p1, p2)`` gives a user pullback; it is validated first.
    """
    if legs is None:
        _, p1, p2 = pullback(f, g)
    else:
        p1, p2 = legs
        _check_is_pullback(f, g, p1, p2)
    rng = np.random.default_rng(seed)
    count = 0
    for phi in sample_predicates(A, f.domain, limit, rng):
        count += 1
        lhs = reindex(exists_along(A, phi, f), g)
        rhs = exists_along(A, reindex(phi, p1), p2)
        if not fiber_equiv(A, lhs, rhs):
            return _report("bcc", ("exists", {"f": f.to_json(), "g": g.to_json(),
                                              "phi": phi.to_json(A)}), count)
        lhs = reindex(forall_along(A, phi, f), g)
        rhs = forall_along(A, reindex(phi, p1), p2)
        if not fiber_equiv(A, lhs, rhs):
            return _report("bcc", ("forall", {"f": f.to_json(), "g": g.to_json(),
                                              "phi": phi.to_json(A)}), count)
    return _report("bcc", None, count)


def check_bcc_grid(A: ImplicativeAlgebra, max_size: int = 3, limit: int = 16,
                   seed: int = 0) -> Report:
    """Every pullback square with all three bases of size <= ``max_size``."""
    count = 0
    for nz in range(max_size + 1):
        Z = tuple(range(nz))
        for nx in range(max_size + 1):
            for f in all_maps(range(nx), Z):
                for ny in range(max_size + 1):
                    for g in all_maps(range(ny), Z):
                        r = check_bcc(A, f, g, limit=limit, seed=seed + count)
                        count += 1
                        if not r.passed:
                            return r
    return _report("bcc", None, count, "squares")


def check_frobenius(A: ImplicativeAlgebra, f: BaseMap, alpha: FiberPredicate,
                    beta: FiberPredicate) -> Report:
    """``∃_f(P_f(α) × β) ≡ α × ∃_f(β)`` with α on the codomain, β on the domain."""
    lhs = exists_along(A, conj(A, reindex(alpha, f), beta), f)
    rhs = conj(A, alpha, exists_along(A, beta, f))
    if fiber_equiv(A, lhs, rhs):
        return _report("frobenius", None, 1)
    return _report("frobenius", ("frobenius", {"map": f.to_json(), "alpha": alpha.to_json(A),
                                               "beta": beta.to_json(A)}), 1)


def check_frobenius_grid(A: ImplicativeAlgebra, sizes: int = 2, limit: int = 64,
                         seed: int = 0) -> Report:
    rng = np.random.default_rng(seed)
    count = 0
    for f in _maps_up_to(sizes):
        for alpha in sample_predicates(A, f.codomain, limit, rng):
            for beta in sample_predicates(A, f.domain, limit, rng):
                count += 1
                r = check_frobenius(A, f, alpha, beta)
                if not r.passed:
                    return r
    return _report("frobenius", None, count)


def check_functoriality(A: ImplicativeAlgebra, sizes: int = 2, limit: int = 16,
                        seed: int = 0) -> Report:
    """``P_{g∘f} = P_f P_g`` exactly and both quantifiers compose up to equivalence."""
    rng = np.random.default_rng(seed)
    count = 0
    for nx, ny, nz in itertools.product(range(sizes + 1), repeat=3):
        for f in all_maps(range(nx), range(ny)):
            for g in all_maps(range(ny), range(nz)):
                gf = compose(g, f)
                for chi in sample_predicates(A, g.codomain, limit, rng):
                    count += 1
                    if reindex(chi, gf) != reindex(reindex(chi, g), f):
                        return _report("functoriality", ("reindex", _ff(A, f, g, chi)), count)
                for phi in sample_predicates(A, f.domain, limit, rng):
                    count += 1
                    if not fiber_equiv(A, exists_along(A, phi, gf),
                                       exists_along(A, exists_along(A, phi, f), g)):
                        return _report("functoriality", ("exists", _ff(A, f, g, phi)), count)
                    if not fiber_equiv(A, forall_along(A, phi, gf),
                                       forall_along(A, forall_along(A, phi, f), g)):
                        return _report("functoriality", ("forall", _ff(A, f, g, phi)), count)
    return _report("functoriality", None, count)


def _ff(A, f, g, p) -> dict:
    return {"f": f.to_json(), "g": g.to_json(), "predicate": p.to_json(A)}


def check_fiber_product(A: ImplicativeAlgebra, size: int = 1, limit: int = 4096,
                        seed: int = 0) -> Report:
    """``×`` is a meet in the fiber: projections plus the pairing property."""
    rng = np.random.default_rng(seed)
    X = tuple(range(size))
    preds = sample_predicates(A, X, limit, rng)
    count = 0
    for phi in preds:
        for psi in preds:
            t = conj(A, phi, psi)
            if not (fiber_entails(A, t, phi) and fiber_entails(A, t, psi)):
                return _report("fiber-product", ("projection", {"phi": phi.to_json(A),
                                                                "psi": psi.to_json(A)}), count)
            for chi in preds:
                count += 1
                if fiber_entails(A, chi, phi) and fiber_entails(A, chi, psi) \
                        and not fiber_entails(A, chi, t):
                    return _report("fiber-product", ("pairing", {
                        "phi": phi.to_json(A), "psi": psi.to_json(A), "chi": chi.to_json(A)}), count)
    return _report("fiber-product", None, count)


# -- predicate classification -------------------------------------------------------

PREDICATE_CLASSES = ("SK_p", "fSK_p", "wfSK_p", "U-SK_p", "U-fSK_p", "U-wfSK_p")


def direct_sk_counterexample(A: ImplicativeAlgebra, phi: FiberPredicate, max_J: int = 3,
                             budget: int = 200_000):
    """Search maps ``f: J→I`` and ψ on J with φ ⊢ ∃_f ψ but no section g of f with φ ⊢ P_g ψ."""
    I = phi.base
    work = 0
    for nj in range(max_J + 1):
        J = tuple(range(nj))
        work += len(I) ** nj * A.n ** nj
        if work > budget:
            raise BudgetExceeded(f"direct SK search over budget at |J|={nj}")
        for f in all_maps(J, I):
            sections = [g for g in all_maps(I, J) if compose(f, g) == identity_map(I)]
            for psi in all_predicates(A, J):
                if not fiber_entails(A, phi, exists_along(A, psi, f)):
                    continue
                if not any(fiber_entails(A, phi, reindex(psi, g)) for g in sections):
                    return {"map": f.to_json(), "psi": list(psi.values)}
    return None


def _matrix_predicate(I: tuple, rows) -> FiberPredicate:
    nj = len(rows[0]) if rows else 0
    return FiberPredicate(product_set(I, range(nj)), [b for r in rows for b in r])


@lru_cache(maxsize=256)
def _functional_maps(I: tuple, nj: int) -> tuple:
    """Projections of I×J×J onto I×J (twice) and J×J, the projection I×J → I, and all graphs."""
    J = tuple(range(nj))
    IJ = product_set(I, J)
    IJJ = product_set(IJ, J)
    # coordinates of I×J×J are ((i, j), j')
    p12 = BaseMap(IJJ, IJ, [k // nj for k in range(len(IJJ))])
    p13 = BaseMap(IJJ, IJ, [(k // nj // nj) * nj + k % nj for k in range(len(IJJ))])
    p23 = BaseMap(IJJ, product_set(J, J), [(k // nj % nj) * nj + k % nj for k in range(len(IJJ))])
    graphs = tuple(BaseMap(I, IJ, [i * nj + g.table[i] for i in range(len(I))])
                   for g in all_maps(I, J))
    return p12, p13, p23, projection(I, J, 0), graphs


def _equality(A: ImplicativeAlgebra, nj: int) -> FiberPredicate:
    cache = A.__dict__.setdefault("_equality_cache", {})
    if nj not in cache:
        cache[nj] = equality_predicate(A, range(nj))
    return cache[nj]


def direct_functional_outcome(A: ImplicativeAlgebra, phi: FiberPredicate, rel: FiberPredicate,
                              nj: int) -> tuple:
    """(functional, hypothesis, number of g: I→J with φ ⊢ P_⟨id,g⟩ ρ) for ρ on I×J."""
    p12, p13, p23, pi, graphs = _functional_maps(phi.base, nj)
    func = fiber_entails(A, conj(A, reindex(rel, p12), reindex(rel, p13)),
                         reindex(_equality(A, nj), p23))
    hyp = fiber_entails(A, phi, exists_along(A, rel, pi))
    valid = sum(1 for g in graphs if fiber_entails(A, phi, reindex(rel, g)))
    return func, hyp, valid


def direct_functional_counterexample(A: ImplicativeAlgebra, phi: FiberPredicate, kind: str,
                                     max_J: int = 2, budget: int = 50_000):
    """Search functional predicates on I×J refuting (w)fSK_p, by the tripos definition."""
    I = phi.base
    work = 0
    for nj in range(max_J + 1):
        work += A.n ** (len(I) * nj)
        if work > budget:
            raise BudgetExceeded(f"direct functional search over budget at |J|={nj}")
        for rel in all_predicates(A, product_set(I, range(nj))):
            func, hyp, valid = direct_functional_outcome(A, phi, rel, nj)
            if func and hyp and (valid == 0 if kind == "wfSK" else valid != 1):
                return {"width": nj, "relation": list(rel.values), "valid_choices": valid}
    return None


def _translate_sk(A, phi, w) -> bool:
    """Does the family-level SK witness refute the tripos definition?"""
    Js = w["value_sets"]
    owners = [i for i, J in enumerate(Js) for _ in J]
    vals = [b for J in Js for b in J]
    J = tuple(range(len(vals)))
    f = BaseMap(J, phi.base, owners)
    psi = FiberPredicate(J, vals)
    if not fiber_entails(A, phi, exists_along(A, psi, f)):
        return False
    sections = [g for g in itertools.product(*[[k for k, o in enumerate(owners) if o == i]
                                              for i in range(len(phi.base))])]
    return not any(fiber_entails(A, phi, reindex(psi, BaseMap(phi.base, J, g))) for g in sections)


def _translate_matrix(A, phi, w, kind) -> bool:
    rows = w["matrix"]
    nj = len(rows[0]) if rows else 0
    rel = _matrix_predicate(phi.base, rows)
    func, hyp, valid = direct_functional_outcome(A, phi, rel, nj)
    return func and hyp and (valid == 0 if kind == "wfSK" else valid != 1)


def _translate(A, phi, w) -> bool:
    kind = w.get("kind")
    if kind == "SK":
        return _translate_sk(A, phi, w)
    if kind in ("fSK", "wfSK"):
        return _translate_matrix(A, phi, w, kind)
    if kind in ("U-SK", "U-fSK", "U-wfSK"):
        f = w["reindexing"]
        sub = reindex(phi, BaseMap(range(len(f)), phi.base, f))
        return _translate(A, sub, w["inner"])
    return False


def _direct(A, phi, base_kind, bounds: Bounds):
    if base_kind == "SK":
        return direct_sk_counterexample(A, phi, max_J=min(3, bounds.j_for(A)))
    return direct_functional_counterexample(A, phi, base_kind, max_J=2)


def classify_predicate(A: ImplicativeAlgebra, phi: FiberPredicate, cls: str,
                       bounds: Bounds | None = None, direct: bool = True) -> ClassificationResult:
    """Classify through the family ``(φ(i))_i``, cross-checked against the tripos definition."""
    if cls not in PREDICATE_CLASSES:
        raise ValueError(f"unknown predicate class {cls!r}")
    bounds = bounds or Bounds()
    cache = A.__dict__.setdefault("_predicate_cache", {})
    key = (phi.values, cls, bounds, direct)
    if key not in cache:
        cache[key] = _classify_predicate(A, phi, cls, bounds, direct)
    return copy.deepcopy(cache[key])


def _classify_predicate(A: ImplicativeAlgebra, phi: FiberPredicate, cls: str, bounds: Bounds,
                        direct: bool) -> ClassificationResult:
    fam = phi.values
    fam_cls = cls[:-2]
    if fam_cls == "SK":
        res = classify_SK(A, fam, bounds)
    elif fam_cls == "fSK":
        res = classify_fSK(A, fam, None, bounds)
    elif fam_cls == "wfSK":
        res = classify_wfSK(A, fam, None, bounds)
    else:
        res = classify_uniform(A, fam, fam_cls, bounds)
    if not direct:
        return res
    if res.fails and not _translate(A, phi, res.witness):
        raise TriposDisagreement(f"{cls}: family witness does not refute the predicate")
    base_kind = fam_cls.removeprefix("U-")
    try:
        if fam_cls.startswith("U-"):
            # reindexings K→I with |K| <= 2 exercise the uniform clause directly
            for k in range(3):
                for g in all_maps(range(k), phi.base):
                    w = _direct(A, reindex(phi, g), base_kind, bounds)
                    if w is not None:
                        _direct_disagrees(res, cls, dict(w, reindexing=list(g.table)))
        else:
            w = _direct(A, phi, base_kind, bounds)
            if w is not None:
                _direct_disagrees(res, cls, w)
    except BudgetExceeded:
        pass
    return res


def _direct_disagrees(res: ClassificationResult, cls: str, w: dict) -> None:
    if res.verdict is Verdict.HOLDS:
        raise TriposDisagreement(f"{cls}: family verdict HOLDS but the tripos definition fails ({w})")
