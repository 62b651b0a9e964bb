import itertools
import random

import pytest

from implicative import cat as C
from implicative.analysis import Verdict
from implicative.catalog import from_heyting
from implicative.lattice import build_lattice
from implicative.tripos import BaseMap, classify_predicate, fiber_entails, identity_map
from conftest import BOOLEAN, alg

H, F = Verdict.HOLDS, Verdict.FAILS
LAW_ALGEBRAS = ["C2", "C3", "B4", "N5", "R1", "NEST", "MOD"]


def d5():
    """0 < d < a, b < c: a Heyting algebra whose top is an indecomposable join."""
    L = build_lattice(["0", "d", "a", "b", "c"],
                      [("0", "d"), ("d", "a"), ("d", "b"), ("a", "c"), ("b", "c")])
    return from_heyting(L, "D5")


def composable_triples(A, n, seed=0, max_carrier=2):
    hc = C.HomCache(A)
    objs = C.default_universe(A, max_carrier).objects
    rng = random.Random(seed)
    out, tries = [], 0
    while len(out) < n and tries < 50 * n:
        tries += 1
        w, x, y, z = (rng.choice(objs) for _ in range(4))
        hs = [hc.homs(w, x), hc.homs(x, y), hc.homs(y, z)]
        if all(hs):
            out.append(tuple(rng.choice(h) for h in hs))
    return out


# -- the Grothendieck category ----------------------------------------------------------

def test_groth_morphism_examples():
    A = alg("C3")
    X = C.make_object([1, 2])
    assert C.groth_is_morphism(A, C.groth_identity(X))
    bot, top = C.make_object([0, 0]), C.make_object([2, 2, 2])
    for f in itertools.product(range(3), repeat=2):
        C.groth_morphism(A, bot, top, f)
    with pytest.raises(C.NotAMorphism) as e:
        C.groth_morphism(A, C.make_object([2]), C.make_object([0]), [0])
    assert e.value.witness["map"] == [0]
    with pytest.raises(C.SourceTargetMismatch):
        C.groth_compose(C.groth_identity(X), C.groth_identity(top))


def test_groth_limits():
    A = alg("B4")
    u = C.default_universe(A, 2)
    term = C.groth_terminal(A)
    assert term.values == (A.top,)
    X, Y = C.make_object([A.top, A.top]), C.make_object([A.top])
    P, _, _ = C.groth_product(A, X, Y)
    assert all(A.entails(A.top, v) for v in P.values)
    assert C.check_groth_product(A, X, Y, u).passed
    f = C.groth_identity(X)
    E, e = C.groth_equalizer(A, f, f)
    assert E == X and e.map.table == (0, 1)
    a, b = A.lattice.index("a"), A.lattice.index("b")
    Z = C.make_object([a, b])
    for g in C.groth_homs(A, Z, X):
        assert C.check_groth_equalizer(A, g, C.groth_morphism(A, Z, X, [0, 0]), u).passed


def test_groth_regular_epis():
    A = alg("C3")
    X = C.make_object([1, 2])
    assert C.groth_is_regular_epi(A, C.groth_identity(X))
    f = BaseMap(X.carrier, (0,), [0, 0])
    from implicative.tripos import exists_along
    tgt = C.GrothObject((0,), exists_along(A, X.pred, f))
    m = C.GrothMorphism(X, tgt, f)
    assert C.groth_is_regular_epi(A, m) and C.groth_coequalizer_probe(A, m)
    inc = C.groth_morphism(A, C.make_object([2]), X, [1])
    assert not C.groth_is_regular_epi(A, inc)


@pytest.mark.parametrize("name", ["C3", "B4", "R1"])
def test_groth_regular_epis_match_coequalizer_probe(name):
    A = alg(name)
    u = C.default_universe(A, 2)
    for X, Y in itertools.product(u.objects, repeat=2):
        for m in C.groth_homs(A, X, Y):
            assert C.groth_is_regular_epi(A, m) == C.groth_coequalizer_probe(A, m, u)


# -- the regular completion ----------------------------------------------------------------

def test_functional_relation_examples():
    B4 = alg("B4")
    a, b = B4.lattice.index("a"), B4.lattice.index("b")
    one, two = C.make_object([B4.top]), C.make_object([B4.top, B4.top])
    r = C.relation(one, two, [a, b])
    assert C.reg_is_morphism(B4, r).passed
    bad = C.relation(one, two, [B4.bottom, B4.bottom])
    rep = C.reg_is_morphism(B4, bad)
    assert not rep.passed and rep.failed_axiom == "total"
    with pytest.raises(ValueError):
        C.relation(one, two, [a])


def test_boolean_arrow_is_not_tracked():
    B4 = alg("B4")
    a = B4.lattice.index("a")
    r = C.relation(C.make_object([B4.top]), C.make_object([B4.top, B4.top]), [a, B4.arrow(a, B4.bottom)])
    assert C.reg_is_morphism(B4, r).passed
    assert C.find_trackers(B4, r) == []
    assert not C.is_trackable(B4, r)


@pytest.mark.parametrize("name", ["C3", "B4", "R1"])
def test_bottom_source_is_not_faithful(name):
    A = alg(name)
    src, tgt = C.make_object([A.bottom] * 2), C.make_object([A.top] * 2)
    groth = C.groth_homs(A, src, tgt)
    reg = C.reg_homs(A, src, tgt)
    assert (len(groth), len(reg)) == (4, 1)
    images = [C.functor_F(A, m) for m in groth]
    assert all(C.reg_equiv(A, images[0], r) for r in images)
    r = reg[0]
    assert len(C.find_trackers(A, r)) == 4 and not C.is_strongly_trackable(A, r)


@pytest.mark.parametrize("name", LAW_ALGEBRAS)
def test_reg_category_laws(name):
    A = alg(name)
    for f, g, h in composable_triples(A, 30, seed=1):
        assert C.reg_equiv(A, C.reg_compose(A, C.reg_compose(A, f, g), h),
                           C.reg_compose(A, f, C.reg_compose(A, g, h)))
        assert C.reg_equiv(A, C.reg_compose(A, C.reg_identity(A, f.source), f), f)
        assert C.reg_equiv(A, C.reg_compose(A, f, C.reg_identity(A, f.target)), f)
        assert C.reg_is_morphism(A, C.reg_compose(A, f, g)).passed


def test_compose_rejects_mismatch():
    A = alg("C3")
    i1, i2 = C.reg_identity(A, C.make_object([2])), C.reg_identity(A, C.make_object([1]))
    with pytest.raises(C.SourceTargetMismatch):
        C.reg_compose(A, i1, i2)
    with pytest.raises(C.SourceTargetMismatch):
        C.reg_equiv(A, i1, i2)


@pytest.mark.parametrize("name", LAW_ALGEBRAS)
def test_functor_F(name):
    A = alg(name)
    u = C.default_universe(A, 2)
    objs = [o for o in u.objects if o.size > 0]
    rng = random.Random(7)
    for _ in range(40):
        X, Y, Z = (rng.choice(objs) for _ in range(3))
        fs, gs = C.groth_homs(A, X, Y), C.groth_homs(A, Y, Z)
        if not fs or not gs:
            continue
        f, g = rng.choice(fs), rng.choice(gs)
        Ff = C.functor_F(A, f)
        assert C.reg_is_morphism(A, Ff).passed
        assert f.map in C.find_trackers(A, Ff)
        assert C.reg_equiv(A, C.functor_F(A, C.groth_compose(g, f)), C.reg_compose(A, Ff, C.functor_F(A, g)))
        assert C.reg_equiv(A, C.functor_F(A, C.groth_identity(X)), C.reg_identity(A, X))
        assert C.groth_is_regular_epi(A, f) <= C.reg_is_regular_epi(A, Ff)


@pytest.mark.parametrize("name", ["C2", "C3", "B4", "R1", "MOD"])
def test_regular_epis_match_cover_probe(name):
    A = alg(name)
    hc = C.HomCache(A)
    objs = C.default_universe(A, 2).objects
    for X, Y in itertools.product(objs, repeat=2):
        for r in hc.homs(X, Y):
            assert C.reg_is_regular_epi(A, r) == C.reg_cover_probe(A, r)


def test_regular_epi_examples():
    A = alg("C3")
    X = C.make_object([1, 2])
    assert C.reg_is_regular_epi(A, C.reg_identity(A, X))
    tgt = C.make_object([2, 2])
    inc = C.functor_F(A, C.groth_morphism(A, C.make_object([2]), tgt, [0]))
    assert not C.reg_is_regular_epi(A, inc)


@pytest.mark.parametrize("name", LAW_ALGEBRAS)
def test_factorization_recomposes(name):
    A = alg(name)
    for f, g, _ in composable_triples(A, 15, seed=2):
        for r in (f, C.reg_compose(A, f, g)):
            e, m = C.factorize(A, r)
            assert C.reg_is_regular_epi(A, e) and C.reg_is_mono(A, m)
            assert C.reg_equiv(A, C.reg_compose(A, e, m), r)


@pytest.mark.parametrize("name", LAW_ALGEBRAS)
def test_parallel_morphisms_collapse(name):
    A = alg(name)
    hc = C.HomCache(A)
    objs = C.default_universe(A, 2).objects
    pairs = 0
    for X, Y in itertools.product(objs, repeat=2):
        hs = hc.homs(X, Y)
        for r1, r2 in itertools.product(hs, repeat=2):
            pairs += 1
            assert C.parallel_collapse_check(A, r1, r2)
            # a pointwise weakening that stays a morphism is still equivalent
            up = C.relation(X, Y, [A.lattice.join(v, w) for v, w in zip(r1.phi.values, r2.phi.values)])
            if C.reg_is_morphism(A, up).passed and fiber_entails(A, r1.phi, up.phi):
                assert C.reg_equiv(A, r1, up)
    assert pairs > 0


# -- object classes ----------------------------------------------------------------------

def test_realizability_assemblies():
    R1 = alg("R1")
    e = R1.lattice.index("{e}")
    assert C.is_assembly(R1, C.make_object([e, e])).holds
    assert C.is_partitioned_assembly(R1, C.make_object([e])).holds
    assert C.is_assembly(R1, C.make_object([e, R1.bottom])).fails


@pytest.mark.parametrize("name", BOOLEAN)
def test_boolean_assemblies_are_partitioned(name):
    A = alg(name)
    for o in C.default_universe(A, 2).objects:
        assert C.is_assembly(A, o).verdict is C.is_partitioned_assembly(A, o).verdict


@pytest.mark.parametrize("name", ["C2", "C3", "B4", "N5", "R1", "NEST", "MOD"])
def test_trackability_matches_predicate_classes(name):
    A = alg(name)
    hc = C.HomCache(A)
    for o in C.default_universe(A, 2).objects:
        t = C.is_trackable_object(A, o, hc=hc)
        s = C.is_strongly_trackable_object(A, o, hc=hc)
        assert t.verdict is classify_predicate(A, o.pred, "wfSK_p").verdict
        assert s.verdict is classify_predicate(A, o.pred, "fSK_p").verdict


def test_trackability_refutations_carry_relations():
    R1 = alg("R1")
    e = R1.lattice.index("{e}")
    r = C.is_strongly_trackable_object(R1, C.make_object([R1.bottom]))
    assert r.fails
    r = C.is_trackable_object(R1, C.make_object([e]))
    assert r.holds


def test_bottom_object_relations():
    A = alg("C3")
    src = C.make_object([0])
    r = C.relation(src, C.make_object([2, 2]), [0, 0])
    assert C.reg_is_morphism(A, r).passed
    assert len(C.find_trackers(A, r)) == 2
    with pytest.raises(C.BudgetExceeded):
        C.find_trackers(A, C.relation(C.make_object([0] * 3), C.make_object([2] * 3), [0] * 9), cap=8)


def test_projectivity_examples():
    C3 = alg("C3")
    assert C.is_regular_projective(C3, C.make_object([1])).holds
    D5 = d5()
    top = C.make_object([D5.lattice.index("c")])
    assert C.is_strongly_trackable_object(D5, top).holds
    res = C.is_regular_projective(D5, top)
    assert res.fails and classify_predicate(D5, top.pred, "SK_p").fails


def test_boolean_top_is_projective():
    # the splitting (a, b) of the top lifts every cover in the universe
    B4 = alg("B4")
    a, b = B4.lattice.index("a"), B4.lattice.index("b")
    one = C.make_object([B4.top])
    assert C.is_regular_projective(B4, one).holds
    cover = C.functor_F(B4, C.groth_morphism(B4, C.make_object([a, b]), one, [0, 0]))
    assert C.reg_is_regular_epi(B4, cover)
    lift = C.relation(one, C.make_object([a, b]), [a, b])
    assert C.reg_is_morphism(B4, lift).passed
    assert C.reg_equiv(B4, C.reg_compose(B4, lift, cover), C.reg_identity(B4, one))
    assert not C.is_strongly_trackable_object(B4, one).holds


@pytest.mark.parametrize("name", ["C2", "C3", "B4", "R1", "NEST"])
def test_projectivity_matches_sk_on_strongly_trackable_objects(name):
    A = alg(name)
    hc = C.HomCache(A)
    u = C.default_universe(A, 2)
    for o in u.objects:
        if not C.is_strongly_trackable_object(A, o, hc=hc).holds:
            continue
        p = C.is_regular_projective(A, o, u, hc=hc)
        assert p.verdict is classify_predicate(A, o.pred, "SK_p").verdict


def test_modest_examples():
    R1 = alg("R1")
    e = R1.lattice.index("{e}")
    assert C.modest_membership(R1, C.make_object([e]), "Mod∧").holds
    assert C.modest_membership(R1, C.make_object([e, e]), "Mod∧").fails
    with pytest.raises(ValueError):
        C.modest_membership(R1, C.make_object([e]), "Mod?")


@pytest.mark.parametrize("name", ["C3", "B4", "R1", "MOD"])
def test_modest_preorder(name):
    assert C.check_modest_preorder(alg(name)).passed


@pytest.mark.parametrize("name", BOOLEAN)
def test_boolean_modest_kinds_coincide(name):
    A = alg(name)
    for o in C.default_universe(A, 2).objects:
        vs = {C.modest_membership(A, o, k).verdict for k in C.MODEST_NAMES}
        assert len(vs) == 1, o


# -- theorems --------------------------------------------------------------------------

def test_main_theorem_examples():
    for name in ["C3", "R1"]:
        rep = C.verify_theorem(alg(name), "main_1")
        assert rep.passed and rep.legs["lex"]["passed"] and rep.legs["cover"]["passed"]
    B4 = C.verify_theorem(alg("B4"), "main_1")
    assert B4.passed and not B4.legs["lex"]["passed"]
    meets = C.verify_theorem(alg("B4"), "PAsm_lex_iff")
    assert meets.passed and not meets.legs["closed_under_meets"]["passed"]
    with pytest.raises(ValueError):
        C.verify_theorem(alg("C3"), "nope")


@pytest.mark.parametrize("name", ["C3", "R1"])
def test_other_theorems(name):
    A = alg(name)
    for t in ("corcor", "Asm_regular_iff"):
        assert C.verify_theorem(A, t).passed


def test_three_chain_probe():
    assert C.pasm_chain_probe(3).passed


def test_universe_plumbing():
    with pytest.raises(ValueError):
        C.ObjectUniverse(())
    u = C.default_universe(alg("C3"), 1)
    assert u.with_objects([u.objects[0]]) == u
    assert len(u.with_objects([C.make_object([1, 2, 2])]).objects) == len(u.objects) + 1
    assert C.reg_homs(alg("C3"), u.objects[0], u.objects[0])
    assert identity_map((0,)).table == (0,)
