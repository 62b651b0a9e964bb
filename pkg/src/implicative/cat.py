"""Finite fragments of the Grothendieck category and of the regular completion.

Objects are pairs ``(X, α)`` of a finite carrier and a predicate on it.
Morphisms of the Grothendieck category are base maps preserving the
predicate; morphisms of the regular completion are functional relations
taken up to equivalence in the fiber. Searches over "all objects" are
scoped to an explicit :class:`ObjectUniverse`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .analysis import (Bounds, ClassificationResult, Verdict, classify_modest,
                       is_uniformly_supercoherent, _holds, _fails, _unknown)
from .catalog import from_heyting
from .core import BudgetExceeded, ImplicativeAlgebra, Report
from .lattice import chain
from .tripos import (BaseMap, FiberPredicate, all_maps, classify_predicate, compose, conj,
                     equality_predicate, exists_along, fiber_entails, fiber_equiv, identity_map,
                     pairing, product_set, projection, pullback, reindex, top)


class NotAMorphism(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class SourceTargetMismatch(ValueError):
    pass


class CategoryDisagreement(AssertionError):
    """Two routes to the same categorical property disagree."""


DEFAULT_HOM_BUDGET = 200_000


# -- objects and Grothendieck morphisms -----------------------------------------------

@dataclass(frozen=True)
class GrothObject:
    carrier: tuple
    pred: FiberPredicate

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        if self.pred.base != self.carrier:
            raise ValueError("predicate must live on the object's carrier")

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def values(self) -> tuple:
        return self.pred.values

    def to_json(self, A: ImplicativeAlgebra | None = None) -> dict:
        return self.pred.to_json(A)


def make_object(values, carrier=None) -> GrothObject:
    values = tuple(values)
    carrier = tuple(range(len(values))) if carrier is None else tuple(carrier)
    return GrothObject(carrier, FiberPredicate(carrier, values))


@dataclass(frozen=True)
class GrothMorphism:
    source: GrothObject
    target: GrothObject
    map: BaseMap


def groth_is_morphism(A: ImplicativeAlgebra, m: GrothMorphism) -> bool:
    return fiber_entails(A, m.source.pred, reindex(m.target.pred, m.map))


def groth_morphism(A: ImplicativeAlgebra, source: GrothObject, target: GrothObject,
                   table) -> GrothMorphism:
    m = GrothMorphism(source, target, BaseMap(source.carrier, target.carrier, table))
    if not groth_is_morphism(A, m):
        raise NotAMorphism("source predicate does not entail the reindexed target",
                           {"source": list(source.values), "target": list(target.values),
                            "map": list(m.map.table)})
    return m


def groth_identity(obj: GrothObject) -> GrothMorphism:
    return GrothMorphism(obj, obj, identity_map(obj.carrier))


def groth_compose(g: GrothMorphism, f: GrothMorphism) -> GrothMorphism:
    """``g ∘ f``."""
    if f.target != g.source:
        raise SourceTargetMismatch("target of the first morphism is not the source of the second")
    return GrothMorphism(f.source, g.target, compose(g.map, f.map))


def groth_homs(A: ImplicativeAlgebra, source: GrothObject, target: GrothObject) -> list:
    out = []
    for f in all_maps(source.carrier, target.carrier):
        m = GrothMorphism(source, target, f)
        if groth_is_morphism(A, m):
            out.append(m)
    return out


def groth_terminal(A: ImplicativeAlgebra) -> GrothObject:
    return GrothObject((0,), top(A, (0,)))


def groth_product(A: ImplicativeAlgebra, a: GrothObject, b: GrothObject) -> tuple:
    """``(a×b, π1, π2)`` with predicate ``P_π1(α) × P_π2(β)``."""
    p1, p2 = projection(a.carrier, b.carrier, 0), projection(a.carrier, b.carrier, 1)
    pred = conj(A, reindex(a.pred, p1), reindex(b.pred, p2))
    P = GrothObject(p1.domain, pred)
    return P, GrothMorphism(P, a, p1), GrothMorphism(P, b, p2)


def check_groth_product(A: ImplicativeAlgebra, a: GrothObject, b: GrothObject,
                        universe: "ObjectUniverse") -> Report:
    """Projections are morphisms and every competing cone factors through the product."""
    P, p1, p2 = groth_product(A, a, b)
    if not (groth_is_morphism(A, p1) and groth_is_morphism(A, p2)):
        return Report(False, "product", "projection", {"a": list(a.values), "b": list(b.values)})
    count = 0
    for Z in universe.objects:
        for f in groth_homs(A, Z, a):
            for g in groth_homs(A, Z, b):
                count += 1
                pair = pairing(f.map, g.map)
                med = GrothMorphism(Z, P, BaseMap(Z.carrier, P.carrier, pair.table))
                if not groth_is_morphism(A, med):
                    return Report(False, "product", "pairing",
                                  {"Z": list(Z.values), "f": list(f.map.table),
                                   "g": list(g.map.table)})
    return Report(True, "product", notes=f"{count} cones")


def groth_equalizer(A: ImplicativeAlgebra, f: GrothMorphism, g: GrothMorphism) -> tuple:
    """``(E, e)`` with E the subset where the maps agree and the restricted predicate."""
    if f.source != g.source or f.target != g.target:
        raise SourceTargetMismatch("equalizer needs a parallel pair")
    keep = [x for x in range(f.source.size) if f.map.table[x] == g.map.table[x]]
    carrier = tuple(f.source.carrier[x] for x in keep)
    inc = BaseMap(carrier, f.source.carrier, keep)
    E = GrothObject(carrier, reindex(f.source.pred, inc))
    return E, GrothMorphism(E, f.source, inc)


def check_groth_equalizer(A: ImplicativeAlgebra, f: GrothMorphism, g: GrothMorphism,
                          universe: "ObjectUniverse") -> Report:
    E, e = groth_equalizer(A, f, g)
    if not groth_is_morphism(A, e):
        return Report(False, "equalizer", "inclusion")
    count = 0
    for Z in universe.objects:
        for h in groth_homs(A, Z, f.source):
            if compose(f.map, h.map) != compose(g.map, h.map):
                continue
            count += 1
            pos = {x: k for k, x in enumerate(e.map.table)}
            med = GrothMorphism(Z, E, BaseMap(Z.carrier, E.carrier, [pos[t] for t in h.map.table]))
            if not groth_is_morphism(A, med):
                return Report(False, "equalizer", "factorization",
                              {"Z": list(Z.values), "h": list(h.map.table)})
    return Report(True, "equalizer", notes=f"{count} competitors")


def groth_is_regular_epi(A: ImplicativeAlgebra, m: GrothMorphism) -> bool:
    """Surjective on carriers and the target predicate is the existential image."""
    return m.map.is_surjective() and fiber_equiv(A, m.target.pred,
                                                  exists_along(A, m.source.pred, m.map))


def groth_coequalizer_probe(A: ImplicativeAlgebra, m: GrothMorphism,
                            universe: "ObjectUniverse | None" = None) -> bool:
    """Is ``m`` the coequalizer of its kernel pair, tested against the universe?"""
    f = m.map
    _, k1, k2 = pullback(f, f)
    if universe is None:
        universe = default_universe(A, max(2, m.target.size))
    for Z in universe.objects:
        for h in groth_homs(A, m.source, Z):
            if compose(h.map, k1) != compose(h.map, k2):
                continue
            factors = [u for u in groth_homs(A, m.target, Z) if compose(u.map, f) == h.map]
            if len(factors) != 1:
                return False
    return True


def groth_factorize(A: ImplicativeAlgebra, m: GrothMorphism) -> tuple:
    """Image factorization ``(X,α) → (R, ∃_r α) → (Y,β)``."""
    image = sorted(set(m.map.table))
    pos = {y: k for k, y in enumerate(image)}
    R = tuple(m.target.carrier[y] for y in image)
    r = BaseMap(m.source.carrier, R, [pos[t] for t in m.map.table])
    mid = GrothObject(R, exists_along(A, m.source.pred, r))
    inc = BaseMap(R, m.target.carrier, image)
    return GrothMorphism(m.source, mid, r), GrothMorphism(mid, m.target, inc)


# -- the regular completion ---------------------------------------------------------------

@dataclass(frozen=True)
class FunctionalRelation:
    source: GrothObject
    target: GrothObject
    phi: FiberPredicate

    def __post_init__(self):
        if self.phi.base != product_set(self.source.carrier, self.target.carrier):
            raise ValueError("relation must live on source × target")

    def to_json(self, A: ImplicativeAlgebra | None = None) -> dict:
        return {"source": self.source.to_json(A), "target": self.target.to_json(A),
                "phi": self.phi.to_json(A)}


def relation(source: GrothObject, target: GrothObject, values) -> FunctionalRelation:
    return FunctionalRelation(source, target,
                              FiberPredicate(product_set(source.carrier, target.carrier), values))


def _triple_projections(X: tuple, Y: tuple, Z: tuple) -> tuple:
    """Maps out of X×Y×Z (row-major) onto X×Y, Y×Z and X×Z."""
    ny, nz = len(Y), len(Z)
    XYZ = tuple((x, y, z) for x in X for y in Y for z in Z)
    idx = [(k // (ny * nz), (k // nz) % ny, k % nz) for k in range(len(XYZ))]
    p12 = BaseMap(XYZ, product_set(X, Y), [x * ny + y for x, y, _ in idx])
    p23 = BaseMap(XYZ, product_set(Y, Z), [y * nz + z for _, y, z in idx])
    p13 = BaseMap(XYZ, product_set(X, Z), [x * nz + z for x, _, z in idx])
    return p12, p23, p13


def reg_conditions(A: ImplicativeAlgebra, r: FunctionalRelation) -> dict:
    X, Y = r.source.carrier, r.target.carrier
    pi1, pi2 = projection(X, Y, 0), projection(X, Y, 1)
    bound = conj(A, reindex(r.source.pred, pi1), reindex(r.target.pred, pi2))
    c1 = fiber_entails(A, r.phi, bound)
    ex = exists_along(A, r.phi, pi1)
    c2 = fiber_entails(A, r.source.pred, ex)
    # functionality on X×Y×Y: (x,y),(x,y') related forces y = y'
    p12, p23, p13 = _triple_projections(X, Y, Y)
    c3 = fiber_entails(A, conj(A, reindex(r.phi, p12), reindex(r.phi, p13)),
                       reindex(equality_predicate(A, Y), p23))
    probe = fiber_equiv(A, r.source.pred, ex)
    return {"bounded": c1, "total": c2, "functional": c3, "source_is_domain": probe}


def reg_is_morphism(A: ImplicativeAlgebra, r: FunctionalRelation) -> Report:
    c = reg_conditions(A, r)
    failed = [k for k in ("bounded", "total", "functional") if not c[k]]
    if failed:
        return Report(False, "functional-relation", failed[0], {"conditions": c})
    if not c["source_is_domain"]:
        # a morphism always has its source predicate as domain; failing here is a bug
        raise CategoryDisagreement("morphism whose source is not equivalent to its domain")
    return Report(True, "functional-relation", witness={"conditions": c})


def reg_identity(A: ImplicativeAlgebra, obj: GrothObject) -> FunctionalRelation:
    d = exists_along(A, obj.pred, BaseMap(obj.carrier, product_set(obj.carrier, obj.carrier),
                                          [x * obj.size + x for x in range(obj.size)]))
    return FunctionalRelation(obj, obj, d)


def reg_compose(A: ImplicativeAlgebra, r1: FunctionalRelation,
                r2: FunctionalRelation) -> FunctionalRelation:
    """``r2 ∘ r1``: first r1, then r2."""
    if r1.target != r2.source:
        raise SourceTargetMismatch("target of the first relation is not the source of the second")
    X, Y, Z = r1.source.carrier, r1.target.carrier, r2.target.carrier
    p12, p23, p13 = _triple_projections(X, Y, Z)
    both = conj(A, reindex(r1.phi, p12), reindex(r2.phi, p23))
    return FunctionalRelation(r1.source, r2.target, exists_along(A, both, p13))


def reg_equiv(A: ImplicativeAlgebra, r1: FunctionalRelation, r2: FunctionalRelation) -> bool:
    if (r1.source, r1.target) != (r2.source, r2.target):
        raise SourceTargetMismatch("relations are not parallel")
    return fiber_equiv(A, r1.phi, r2.phi)


def reg_is_regular_epi(A: ImplicativeAlgebra, r: FunctionalRelation) -> bool:
    pi2 = projection(r.source.carrier, r.target.carrier, 1)
    return fiber_equiv(A, r.target.pred, exists_along(A, r.phi, pi2))


def reg_cover_probe(A: ImplicativeAlgebra, r: FunctionalRelation) -> bool:
    """Does ``r`` fail to factor through every proper subobject of its target?

    Subobjects of ``(Y,β)`` are the predicates γ ⊢ β; ``r`` factors through
    γ exactly when φ ⊢ P_π2(γ).
    """
    from .tripos import all_predicates
    Y = r.target.carrier
    pi2 = projection(r.source.carrier, Y, 1)
    for gamma in all_predicates(A, Y):
        if not fiber_entails(A, gamma, r.target.pred):
            continue
        if fiber_entails(A, r.phi, reindex(gamma, pi2)) and \
                not fiber_entails(A, r.target.pred, gamma):
            return False
    return True


def _graph(obj: GrothObject, f: BaseMap) -> BaseMap:
    g = pairing(identity_map(obj.carrier), f)
    return BaseMap(obj.carrier, product_set(obj.carrier, f.codomain), g.table)


def functor_F(A: ImplicativeAlgebra, m: GrothMorphism) -> FunctionalRelation:
    """The graph relation ``∃_⟨id,f⟩(α)``."""
    return FunctionalRelation(m.source, m.target, exists_along(A, m.source.pred, _graph(m.source, m.map)))


def find_trackers(A: ImplicativeAlgebra, r: FunctionalRelation, cap: int = 4096) -> list:
    """All maps f with ``α ⊢ P_⟨id,f⟩(φ)``; each one is checked to reproduce ``r``."""
    nx, ny = r.source.size, r.target.size
    if ny ** nx > cap:
        raise BudgetExceeded(f"{ny}^{nx} candidate trackers exceeds the cap of {cap}")
    out = []
    for f in all_maps(r.source.carrier, r.target.carrier):
        back = reindex(r.phi, _graph(r.source, f))
        if not fiber_entails(A, r.source.pred, back):
            continue
        if not fiber_equiv(A, r.source.pred, back):
            raise CategoryDisagreement("tracker whose graph is not equivalent to the source predicate")
        m = GrothMorphism(r.source, r.target, f)
        if not groth_is_morphism(A, m) or not reg_equiv(A, functor_F(A, m), r):
            raise CategoryDisagreement("tracker whose graph relation differs from the relation")
        out.append(f)
    return out


def is_trackable(A: ImplicativeAlgebra, r: FunctionalRelation) -> bool:
    return bool(find_trackers(A, r))


def is_strongly_trackable(A: ImplicativeAlgebra, r: FunctionalRelation) -> bool:
    return len(find_trackers(A, r)) == 1


def factorize(A: ImplicativeAlgebra, r: FunctionalRelation) -> tuple:
    """``(e, m)`` through the image ``(Y, ∃_π2 φ)``, with ``m ∘ e ≡ r``."""
    Y = r.target.carrier
    img = exists_along(A, r.phi, projection(r.source.carrier, Y, 1))
    mid = GrothObject(Y, img)
    e = FunctionalRelation(r.source, mid, r.phi)
    diag = BaseMap(Y, product_set(Y, Y), [y * len(Y) + y for y in range(len(Y))])
    m = FunctionalRelation(mid, r.target, exists_along(A, img, diag))
    return e, m


def reg_is_mono(A: ImplicativeAlgebra, m: FunctionalRelation) -> bool:
    """Injectivity in the internal logic: related points with a common image are equal."""
    X, Y = m.source.carrier, m.target.carrier
    # on X×X×Y: φ(x,y) × φ(x',y) ⊢ δ(x,x')
    XXY = tuple((x, x2, y) for x in X for x2 in X for y in Y)
    ny, nx = len(Y), len(X)
    idx = [(k // (nx * ny), (k // ny) % nx, k % ny) for k in range(len(XXY))]
    XY = product_set(X, Y)
    a = BaseMap(XXY, XY, [x * ny + y for x, _, y in idx])
    b = BaseMap(XXY, XY, [x2 * ny + y for _, x2, y in idx])
    c = BaseMap(XXY, product_set(X, X), [x * nx + x2 for x, x2, _ in idx])
    return fiber_entails(A, conj(A, reindex(m.phi, a), reindex(m.phi, b)),
                         reindex(equality_predicate(A, X), c))


def parallel_collapse_check(A: ImplicativeAlgebra, r1: FunctionalRelation,
                            r2: FunctionalRelation) -> bool:
    """Between parallel morphisms, one-way entailment already forces equivalence."""
    if (r1.source, r1.target) != (r2.source, r2.target):
        raise SourceTargetMismatch("relations are not parallel")
    for a, b in ((r1, r2), (r2, r1)):
        if fiber_entails(A, a.phi, b.phi) and not fiber_entails(A, b.phi, a.phi):
            return False
    return True


# -- hom enumeration -----------------------------------------------------------------

def _canon_table(A: ImplicativeAlgebra) -> list | None:
    """Per-element canonical representative when entailment is cellwise, else None."""
    if not A.sigma_principal:
        return None
    return [min(b for b in range(A.n) if A.entails(a, b) and A.entails(b, a)) for a in range(A.n)]


class HomCache:
    """Hom-sets of the regular completion, up to equivalence, with canonical representatives.

    The representative of a class is its lexicographically least value tuple.
    """

    def __init__(self, A: ImplicativeAlgebra, budget: int = DEFAULT_HOM_BUDGET):
        self.A = A
        self.budget = budget
        self.canon = _canon_table(A)
        self._homs: dict = {}

    def canonical(self, r: FunctionalRelation) -> FunctionalRelation:
        if self.canon is not None:
            return relation(r.source, r.target, [self.canon[v] for v in r.phi.values])
        for h in self.homs(r.source, r.target):
            if fiber_equiv(self.A, h.phi, r.phi):
                return h
        raise ValueError("relation is not a morphism")

    def homs(self, source: GrothObject, target: GrothObject) -> list:
        key = (source, target)
        if key not in self._homs:
            self._homs[key] = self._enumerate(source, target)
        return self._homs[key]

    def _enumerate(self, source: GrothObject, target: GrothObject) -> list:
        A = self.A
        X, Y = source.carrier, target.carrier
        cells = [(x, y) for x in range(len(X)) for y in range(len(Y))]
        T = A.times_table
        if self.canon is not None:
            # entailment is cellwise: prune the boundedness condition per cell
            reps = sorted(set(self.canon))
            choices = [[v for v in reps if A.entails(v, T[source.values[x]][target.values[y]])]
                       for x, y in cells]
        else:
            choices = [list(range(A.n)) for _ in cells]
        total = 1
        for c in choices:
            total *= len(c)
        if total > self.budget:
            raise BudgetExceeded(f"{total} candidate relations exceeds the budget of {self.budget}")
        out = []
        for vals in itertools.product(*choices):
            r = relation(source, target, vals)
            if not reg_is_morphism(A, r).passed:
                continue
            if self.canon is None and any(fiber_equiv(A, h.phi, r.phi) for h in out):
                continue
            out.append(r)
        return out

    def compose_set(self, first: list, then: FunctionalRelation) -> list:
        return [reg_compose(self.A, r, then) for r in first]

    def contains(self, rels: list, r: FunctionalRelation) -> bool:
        if self.canon is not None:
            c = self.canonical(r).phi.values
            return any(self.canonical(h).phi.values == c for h in rels)
        return any(fiber_equiv(self.A, h.phi, r.phi) for h in rels)


def reg_homs(A: ImplicativeAlgebra, source: GrothObject, target: GrothObject,
             budget: int = DEFAULT_HOM_BUDGET) -> list:
    return HomCache(A, budget).homs(source, target)


# -- object universes -----------------------------------------------------------------

@dataclass(frozen=True)
class ObjectUniverse:
    objects: tuple

    def __post_init__(self):
        if not self.objects:
            raise ValueError("a universe needs at least one object")

    def with_objects(self, extra) -> "ObjectUniverse":
        seen = list(self.objects)
        for o in extra:
            if o not in seen:
                seen.append(o)
        return ObjectUniverse(tuple(seen))


def default_universe(A: ImplicativeAlgebra, max_carrier: int = 2) -> ObjectUniverse:
    """Every object with carrier size <= ``max_carrier``, one per permutation class.

    When entailment is cellwise, values are also taken up to equivalence.
    """
    canon = _canon_table(A)
    reps = sorted(set(canon)) if canon is not None else list(range(A.n))
    objs = []
    for k in range(max_carrier + 1):
        for vals in itertools.combinations_with_replacement(reps, k):
            objs.append(make_object(vals))
    return ObjectUniverse(tuple(objs))


# -- object classes -------------------------------------------------------------------

def is_assembly(A: ImplicativeAlgebra, obj: GrothObject,
                bounds: Bounds | None = None) -> ClassificationResult:
    return classify_predicate(A, obj.pred, "U-fSK_p", bounds)


def is_partitioned_assembly(A: ImplicativeAlgebra, obj: GrothObject,
                            bounds: Bounds | None = None) -> ClassificationResult:
    return classify_predicate(A, obj.pred, "U-SK_p", bounds)


def _witness_relation(A: ImplicativeAlgebra, obj: GrothObject, rows) -> FunctionalRelation:
    """The relation ``(x, j) ↦ α(x) × M[x][j]`` built from a refuting matrix."""
    width = len(rows[0]) if rows else 0
    target = make_object([A.top] * width)
    T = A.times_table
    vals = [T[obj.values[x]][rows[x][j]] for x in range(obj.size) for j in range(width)]
    return relation(obj, target, vals)


def _trackability(A: ImplicativeAlgebra, obj: GrothObject, strong: bool, bounds: Bounds | None,
                  max_target: int, hc: HomCache | None) -> ClassificationResult:
    bounds = bounds or Bounds()
    cls = "fSK_p" if strong else "wfSK_p"
    res = classify_predicate(A, obj.pred, cls, bounds)
    ok = is_strongly_trackable if strong else is_trackable
    hc = hc or HomCache(A)
    found = None
    try:
        for k in range(max_target + 1):
            tgt = make_object([A.top] * k)
            for r in hc.homs(obj, tgt):
                if not ok(A, r):
                    found = r
                    break
            if found:
                break
    except BudgetExceeded as e:
        return res if res.decided else _unknown(detail=str(e))
    if found is not None and res.holds:
        raise CategoryDisagreement(f"{cls} holds but a relation out of the object is not tracked")
    if res.fails:
        w = res.witness
        if w.get("kind") in ("fSK", "wfSK"):
            r = _witness_relation(A, obj, w["matrix"])
            if not reg_is_morphism(A, r).passed or ok(A, r):
                raise CategoryDisagreement(f"{cls} witness does not give an untracked relation")
            res.witness = dict(w, relation=list(r.phi.values))
    elif found is not None:
        return _fails({"kind": "trackable", "relation": found.to_json(A)},
                      detail="relation enumeration")
    return res


def is_trackable_object(A: ImplicativeAlgebra, obj: GrothObject, bounds: Bounds | None = None,
                        max_target: int = 2, hc: HomCache | None = None) -> ClassificationResult:
    """Every relation out of the object is tracked by a function."""
    return _trackability(A, obj, False, bounds, max_target, hc)


def is_strongly_trackable_object(A: ImplicativeAlgebra, obj: GrothObject,
                                 bounds: Bounds | None = None, max_target: int = 2,
                                 hc: HomCache | None = None) -> ClassificationResult:
    """Every relation out of the object is tracked by exactly one function."""
    return _trackability(A, obj, True, bounds, max_target, hc)


def lifting_counterexample(A: ImplicativeAlgebra, obj: GrothObject, universe: ObjectUniverse,
                           hc: HomCache | None = None):
    """A regular epi ``e: W → Y`` and ``r: obj → Y`` in the universe with no lift."""
    hc = hc or HomCache(A)
    for src in universe.objects:
        lifts_cache = None
        for tgt in universe.objects:
            epis = [e for e in hc.homs(src, tgt) if reg_is_regular_epi(A, e)]
            if not epis:
                continue
            targets = hc.homs(obj, tgt)
            if not targets:
                continue
            if lifts_cache is None:
                lifts_cache = hc.homs(obj, src)
            for e in epis:
                comps = hc.compose_set(lifts_cache, e)
                for r in targets:
                    if not hc.contains(comps, r):
                        return {"cover": e.to_json(A), "map": r.to_json(A)}
    return None


def _sk_cover(A: ImplicativeAlgebra, obj: GrothObject, w: dict, hc: HomCache):
    """Cover ``F(f): (J,ψ) → (I, ∃_f ψ)`` built from an SK witness; returns a failed lift or None."""
    Js = w["value_sets"]
    owners = [i for i, J in enumerate(Js) for _ in J]
    src = make_object([b for J in Js for b in J])
    f = BaseMap(src.carrier, obj.carrier, owners)
    tgt = GrothObject(obj.carrier, exists_along(A, src.pred, f))
    e = functor_F(A, GrothMorphism(src, tgt, f))
    r = reg_identity(A, obj)
    r = FunctionalRelation(obj, tgt, r.phi)
    if not (reg_is_morphism(A, e).passed and reg_is_regular_epi(A, e)
            and reg_is_morphism(A, r).passed):
        return None
    comps = hc.compose_set(hc.homs(obj, src), e)
    if hc.contains(comps, r):
        return None
    return {"cover": e.to_json(A), "map": r.to_json(A)}


def is_regular_projective(A: ImplicativeAlgebra, obj: GrothObject,
                          universe: ObjectUniverse | None = None, bounds: Bounds | None = None,
                          hc: HomCache | None = None) -> ClassificationResult:
    """Lifting search against every regular epi in the universe.

    For strongly trackable objects the result is checked against SK_p.
    """
    bounds = bounds or Bounds()
    universe = universe or default_universe(A)
    hc = hc or HomCache(A)
    try:
        w = lifting_counterexample(A, obj, universe, hc)
    except BudgetExceeded as e:
        return _unknown(detail=str(e), bound_used={"universe": len(universe.objects)})
    strong = is_strongly_trackable_object(A, obj, bounds, hc=hc)
    if not strong.holds:
        if w is not None:
            return _fails(w, detail="lifting search in the universe")
        return _holds(detail="no failed lift in the universe",
                      bound_used={"universe": len(universe.objects)})
    sk = classify_predicate(A, obj.pred, "SK_p", bounds)
    if w is not None:
        if sk.holds:
            raise CategoryDisagreement("SK_p holds but a lift is missing")
        return _fails(w, detail="lifting search in the universe")
    if sk.fails:
        try:
            w2 = _sk_cover(A, obj, sk.witness, hc)
        except BudgetExceeded as e:
            return _unknown(detail=str(e))
        if w2 is None:
            raise CategoryDisagreement("SK_p fails but its witness cover lifts")
        return _fails(w2, detail="cover built from the SK_p witness")
    return _holds(detail="no failed lift in the universe; SK_p agrees",
                  bound_used={"universe": len(universe.objects)})


MODEST_NAMES = {"Mod∧": "∧-modest", "Mod×": "×-modest", "R∧": "∧-core", "R×": "×-core"}


def modest_membership(A: ImplicativeAlgebra, obj: GrothObject, kind: str,
                      bounds: Bounds | None = None, budget: int = 4096) -> ClassificationResult:
    """Can the object's predicate be chosen, up to equivalence, as a modest/core family?"""
    if kind not in MODEST_NAMES:
        raise ValueError(f"unknown kind {kind!r}")
    fk = MODEST_NAMES[kind]
    res = classify_modest(A, obj.values, fk, bounds)
    if res.decided and not (res.fails and res.witness.get("reason") == "not disjoint"):
        return res
    # ∧-disjointness is not stable under equivalence: try pointwise-equivalent choices
    if kind.endswith("∧") and A.sigma_principal:
        classes = [[b for b in range(A.n) if A.entails(a, b) and A.entails(b, a)]
                   for a in obj.values]
        total = 1
        for c in classes:
            total *= len(c)
        if total <= budget:
            for alt in itertools.product(*classes):
                r = classify_modest(A, alt, fk, bounds)
                if r.holds:
                    return ClassificationResult(Verdict.HOLDS, shortcut=r.shortcut,
                                                detail=f"equivalent family {list(alt)}")
    return res


def check_modest_preorder(A: ImplicativeAlgebra, universe: ObjectUniverse | None = None,
                          bounds: Bounds | None = None, kind: str = "Mod×",
                          hc: HomCache | None = None) -> Report:
    """Every hom-set between members of ``kind`` has at most one element."""
    universe = universe or default_universe(A)
    hc = hc or HomCache(A)
    members = [o for o in universe.objects if modest_membership(A, o, kind, bounds).holds]
    pairs = 0
    for a in members:
        for b in members:
            pairs += 1
            hs = hc.homs(a, b)
            if len(hs) > 1:
                return Report(False, "modest-preorder", kind,
                              {"source": list(a.values), "target": list(b.values),
                               "homs": [list(h.phi.values) for h in hs]})
    return Report(True, "modest-preorder", notes=f"{len(members)} objects, {pairs} hom-sets")


# -- theorem suite --------------------------------------------------------------------

THEOREMS = ("main_1", "corcor", "PAsm_lex_iff", "Asm_regular_iff")


@dataclass
class TheoremReport:
    theorem: str
    passed: bool
    legs: dict = field(default_factory=dict)
    notes: str = ""

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "passed": self.passed, "legs": self.legs,
                "notes": self.notes}


def _class_members(A, universe, cls, bounds) -> list:
    fn = is_partitioned_assembly if cls == "U-SK_p" else is_assembly
    out = []
    for o in universe.objects:
        r = fn(A, o, bounds)
        if not r.decided:
            raise BudgetExceeded(f"{cls} undecided for {list(o.values)}")
        if r.holds:
            out.append(o)
    return out


def lex_leg(A: ImplicativeAlgebra, universe: ObjectUniverse, cls: str = "U-SK_p",
            bounds: Bounds | None = None) -> dict:
    """Terminal object, binary products and equalizers of members stay members."""
    fn = is_partitioned_assembly if cls == "U-SK_p" else is_assembly
    members = _class_members(A, universe, cls, bounds)
    term = groth_terminal(A)
    if not fn(A, term, bounds).holds:
        return {"passed": False, "failure": "terminal", "witness": list(term.values)}
    for a in members:
        for b in members:
            P, _, _ = groth_product(A, a, b)
            if not fn(A, P, bounds).holds:
                return {"passed": False, "failure": "product",
                        "witness": [list(a.values), list(b.values)]}
    for a in members:
        for b in members:
            if a.size > 2 or b.size > 2:
                continue
            hs = groth_homs(A, a, b)
            for f in hs:
                for g in hs:
                    E, _ = groth_equalizer(A, f, g)
                    if not fn(A, E, bounds).holds:
                        return {"passed": False, "failure": "equalizer",
                                "witness": [list(a.values), list(b.values)]}
    return {"passed": True, "members": len(members)}


def _constructive_cover(A: ImplicativeAlgebra, obj: GrothObject, bounds):
    """Cover by the singletons below each value whose existential recovers it."""
    pieces = []
    for v in obj.values:
        below = [b for b in range(A.n)
                 if A.entails(b, v) and is_partitioned_assembly(A, make_object([b]), bounds).holds]
        pieces.append(below)
    src = make_object([b for p in pieces for b in p])
    owners = [x for x, p in enumerate(pieces) for _ in p]
    if not is_partitioned_assembly(A, src, bounds).holds:
        return None
    f = BaseMap(src.carrier, obj.carrier, owners)
    m = GrothMorphism(src, obj, f)
    if not groth_is_morphism(A, m):
        return None
    e = functor_F(A, m)
    return e if reg_is_regular_epi(A, e) else None


def cover_leg(A: ImplicativeAlgebra, universe: ObjectUniverse, bounds: Bounds | None = None,
              hc: HomCache | None = None) -> dict:
    """Every universe object receives a regular epi from a partitioned assembly."""
    hc = hc or HomCache(A)
    members = _class_members(A, universe, "U-SK_p", bounds)
    for o in universe.objects:
        if _constructive_cover(A, o, bounds) is not None:
            continue
        if any(reg_is_regular_epi(A, e) for p in members for e in hc.homs(p, o)):
            continue
        return {"passed": False, "failure": "no cover", "witness": list(o.values)}
    return {"passed": True}


def _families_closed_under_times(A, universe, cls, bounds) -> dict:
    fn = is_partitioned_assembly if cls == "U-SK_p" else is_assembly
    if not fn(A, groth_terminal(A), bounds).holds:
        return {"passed": False, "failure": "top", "witness": [A.top]}
    members = _class_members(A, universe, cls, bounds)
    T = A.times_table
    for a in members:
        for b in members:
            if a.size != b.size:
                continue
            prod = make_object([T[x][y] for x, y in zip(a.values, b.values)])
            if not fn(A, prod, bounds).holds:
                return {"passed": False, "failure": "times",
                        "witness": [list(a.values), list(b.values)]}
    return {"passed": True}


def _exists_stable(A, universe, bounds) -> dict:
    members = _class_members(A, universe, "U-fSK_p", bounds)
    for a in members:
        for k in range(1, a.size + 1):
            for r in all_maps(a.carrier, range(k)):
                if not r.is_surjective():
                    continue
                img = GrothObject(r.codomain, exists_along(A, a.pred, r))
                if not is_assembly(A, img, bounds).holds:
                    return {"passed": False, "failure": "exists",
                            "witness": [list(a.values), list(r.table)]}
    return {"passed": True}


def _image_leg(A, universe, bounds) -> dict:
    members = _class_members(A, universe, "U-fSK_p", bounds)
    for a in members:
        for b in members:
            for m in groth_homs(A, a, b):
                epi, _ = groth_factorize(A, m)
                if not is_assembly(A, epi.target, bounds).holds:
                    return {"passed": False, "failure": "image",
                            "witness": [list(a.values), list(b.values), list(m.map.table)]}
    return {"passed": True}


def _find_iso(A, obj, candidates, hc) -> bool:
    idx = reg_identity(A, obj)
    for c in candidates:
        for r in hc.homs(obj, c):
            for s in hc.homs(c, obj):
                if reg_equiv(A, reg_compose(A, r, s), idx) and \
                        reg_equiv(A, reg_compose(A, s, r), reg_identity(A, c)):
                    return True
    return False


def pasm_chain_probe(n: int = 3, max_carrier: int = 2) -> Report:
    """Partitioned assemblies over the n-chain against the Grothendieck category over the (n-1)-chain.

    Compares object counts up to isomorphism and the hom-set cardinalities.
    """
    big = from_heyting(chain(n), f"C{n}")
    small = from_heyting(chain(n - 1), f"C{n - 1}")

    def census(A, objs):
        out = []
        for a in objs:
            row = tuple(len(groth_homs(A, a, b)) for b in objs)
            out.append(row)
        return out
    ub = [o for o in default_universe(big, max_carrier).objects
          if is_partitioned_assembly(big, o).holds]
    us = list(default_universe(small, max_carrier).objects)
    by_size = lambda objs: sorted(o.size for o in objs)
    same_objects = by_size(ub) == by_size(us)
    same_homs = census(big, ub) == census(small, us)
    notes = f"{len(ub)} vs {len(us)} objects up to isomorphism"
    if same_objects and same_homs:
        return Report(True, "pasm-chain-probe", notes=notes)
    return Report(False, "pasm-chain-probe", "objects" if not same_objects else "homs", notes=notes)


def verify_theorem(A: ImplicativeAlgebra, name: str, universe: ObjectUniverse | None = None,
                   bounds: Bounds | None = None) -> TheoremReport:
    if name not in THEOREMS:
        raise ValueError(f"unknown theorem {name!r}")
    bounds = bounds or Bounds()
    universe = universe or default_universe(A)
    hc = HomCache(A)
    if name == "main_1":
        sc = is_uniformly_supercoherent(A, bounds)
        lex = lex_leg(A, universe, "U-SK_p", bounds)
        cov = cover_leg(A, universe, bounds, hc)
        legs = {"supercoherent": sc.to_json(), "lex": lex, "cover": cov}
        if not sc.decided:
            return TheoremReport(name, False, legs, "supercoherence undecided")
        ok = sc.holds == (lex["passed"] and cov["passed"])
        return TheoremReport(name, ok, legs)
    if name == "PAsm_lex_iff":
        lex = lex_leg(A, universe, "U-SK_p", bounds)
        meets = _families_closed_under_times(A, universe, "U-SK_p", bounds)
        return TheoremReport(name, lex["passed"] == meets["passed"],
                             {"lex": lex, "closed_under_meets": meets})
    if name == "Asm_regular_iff":
        lex = lex_leg(A, universe, "U-fSK_p", bounds)
        img = _image_leg(A, universe, bounds)
        meets = _families_closed_under_times(A, universe, "U-fSK_p", bounds)
        ex = _exists_stable(A, universe, bounds)
        direct = lex["passed"] and img["passed"]
        conds = meets["passed"] and ex["passed"]
        return TheoremReport(name, direct == conds,
                             {"lex": lex, "images": img, "closed_under_meets": meets,
                              "exists_stable": ex})
    # corcor: under its hypotheses every object is isomorphic to an assembly
    sc = is_uniformly_supercoherent(A, bounds)
    lex = lex_leg(A, universe, "U-fSK_p", bounds)
    img = _image_leg(A, universe, bounds)
    legs = {"supercoherent": sc.to_json(), "asm_regular": lex["passed"] and img["passed"]}
    if not (sc.holds and legs["asm_regular"]):
        return TheoremReport(name, True, legs, "hypotheses not met")
    asm = _class_members(A, universe, "U-fSK_p", bounds)
    missing = [list(o.values) for o in universe.objects if o not in asm
               and not _find_iso(A, o, asm, hc)]
    legs["iso_to_assembly"] = {"passed": not missing, "missing": missing}
    legs["cover"] = cover_leg(A, universe, bounds, hc)
    return TheoremReport(name, not missing and legs["cover"]["passed"], legs)
