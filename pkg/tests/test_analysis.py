import itertools

import pytest
from hypothesis import given, strategies as st

from implicative import analysis as an
from implicative.analysis import Bounds, FamilyMatrix, IndexedFamily, Verdict
from implicative.catalog import ApplicativeStructure, relative
from conftest import BOOLEAN, HEYTING, SMALL, ZOO, alg
import oracles as O

H, F, U = Verdict.HOLDS, Verdict.FAILS, Verdict.UNKNOWN
SMALL4 = [n for n in SMALL if alg(n).n <= 4]


def fams(A, max_I):
    for m in range(max_I + 1):
        yield from itertools.product(range(A.n), repeat=m)


# -- disjointness ----------------------------------------------------------------------

def test_realizability_disjointness():
    R1 = alg("R1")
    e = R1.lattice.index("{e}")
    assert an.is_wedge_disjoint(R1, [e, R1.bottom])
    assert not an.is_times_disjoint(R1, [e, e])
    assert an.is_times_disjoint(R1, [e, R1.bottom])


@pytest.mark.parametrize("name", ZOO)
def test_singletons_are_disjoint(name):
    A = alg(name)
    for a in range(A.n):
        assert an.is_wedge_disjoint(A, [a]) and an.is_times_disjoint(A, [a])


@pytest.mark.parametrize("name", SMALL4)
def test_disjointness_matches_literal_definition(name):
    A = alg(name)
    for fam in fams(A, 3):
        assert an.is_times_disjoint(A, fam) == O.times_disjoint(A, fam)
        if an.is_times_disjoint(A, fam):
            assert an.is_wedge_disjoint(A, fam)


def test_functional_matrices():
    C2 = alg("C2")
    assert an.is_times_functional(C2, FamilyMatrix(((1,), (0,))))
    assert not an.is_times_functional(C2, FamilyMatrix(((1, 1),)))


@pytest.mark.parametrize("name", ["C3", "B4", "R1", "NEST"])
def test_functional_rows_are_disjoint(name):
    A = alg(name)
    for flat in itertools.product(range(A.n), repeat=4):
        rows = (flat[:2], flat[2:])
        if an.is_times_functional(A, rows):
            assert all(an.is_times_disjoint(A, r) for r in rows)
        assert an.is_times_functional(A, rows) == O.times_functional(A, rows)


def test_family_types():
    fam = IndexedFamily([2, 1])
    assert fam.reindex([1, 1, 0]).values == (1, 1, 2)
    with pytest.raises(ValueError):
        IndexedFamily([1], index=(0, 1))
    with pytest.raises(ValueError):
        FamilyMatrix(((1, 2), (3,)))


# -- elements ---------------------------------------------------------------------------

def test_element_examples():
    C3, B4 = alg("C3"), alg("B4")
    assert an.supercompact_elements(C3) == [1, 2]
    a, top = B4.lattice.index("a"), B4.top
    assert an.is_supercompact(B4, a) and not an.is_supercompact(B4, top)
    assert not an.is_indecomposable(B4, top)


@pytest.mark.parametrize("name", ZOO)
def test_bottom_is_never_supercompact_or_indecomposable(name):
    A = alg(name)
    assert not an.is_supercompact(A, A.bottom)
    assert not an.is_indecomposable(A, A.bottom)


@pytest.mark.parametrize("name", ZOO)
def test_supercompact_implies_indecomposable(name):
    A = alg(name)
    assert set(an.supercompact_elements(A)) <= set(an.indecomposable_elements(A))


@pytest.mark.parametrize("name", SMALL4)
def test_elements_match_bruteforce(name):
    A = alg(name)
    for a in range(A.n):
        assert an.is_supercompact(A, a) == O.supercompact(A, a)
        assert an.is_indecomposable(A, a) == O.indecomposable(A, a)


@pytest.mark.parametrize("name", ZOO)
def test_element_witnesses_replay(name):
    A = alg(name)
    for a in range(A.n):
        w = an.supercompact_witness(A, a)
        if w is not None:
            assert an.replay_witness(A, {"kind": "supercompact", "element": a, "value_set": w})
        w = an.indecomposable_witness(A, a)
        if w is not None:
            assert an.replay_witness(A, {"kind": "indecomposable", "element": a, "family": w})


# -- families -------------------------------------------------------------------------

def test_family_examples():
    C3 = alg("C3")
    assert an.classify_SK(C3, (1, 2)).verdict is H
    assert an.classify_cSK(C3, ()) and an.classify_cSK(C3, (1, 1, 2))
    assert not an.classify_cSK(C3, (0,))
    assert an.classify_wfSK(C3, (0, 1)).verdict is H
    assert an.classify_fSK(alg("R1"), (0,)).verdict is F


@pytest.mark.parametrize("name", SMALL4)
def test_sk_matches_literal_definition(name):
    A = alg(name)
    for fam in fams(A, 2):
        assert (an.classify_SK(A, fam).verdict is H) == O.sk(A, fam), fam


@pytest.mark.parametrize("name", ["C2", "C3", "B4", "R1", "REL", "NEST"])
def test_functional_classes_match_literal_definition(name):
    A = alg(name)
    for fam in fams(A, 2):
        assert (an.classify_fSK(A, fam).verdict is H) == O.fsk(A, fam), fam
        assert (an.classify_wfSK(A, fam).verdict is H) == O.wfsk(A, fam), fam


@pytest.mark.parametrize("name", HEYTING)
def test_heyting_characterizations(name):
    A = alg(name)
    sc = set(an.supercompact_elements(A))
    ind = set(an.indecomposable_elements(A))
    for fam in fams(A, 2):
        res = an.classify_all(A, fam)
        cind = all(a in ind for a in fam)
        assert res["wfSK"].verdict is (H if O.heyting_wfsk(A, fam) else F), fam
        for cls in ("U-SK", "SK", "cSK"):
            assert res[cls].verdict is (H if all(a in sc for a in fam) else F)
        for cls in ("U-fSK", "U-wfSK", "fSK", "cInd"):
            assert res[cls].verdict is (H if cind else F)


@pytest.mark.parametrize("name", BOOLEAN)
def test_boolean_atoms(name):
    A = alg(name)
    atoms = O.atoms(A)
    assert an.supercompact_elements(A) == atoms == an.indecomposable_elements(A)
    for fam in fams(A, 2):
        expect = all(a in atoms or a == A.bottom for a in fam) and (not fam or any(a != A.bottom for a in fam))
        assert (an.classify_wfSK(A, fam).verdict is H) == expect


def test_realizability_elements():
    for name in ["R1", "REL"]:
        A = alg(name)
        assert an.supercompact_elements(A) == [x for x in range(A.n) if x != A.bottom]


def test_bottom_family_is_not_functional_in_join_compatible_algebras():
    for name in ["C3", "B4", "R1"]:
        A = alg(name)
        assert an.is_compatible_with_joins(A)
        assert an.classify_fSK(A, (A.bottom,)).verdict is F


@pytest.mark.parametrize("name", ZOO)
def test_family_witnesses_replay(name):
    A = alg(name)
    for fam in fams(A, 2):
        for cls, res in an.classify_all(A, fam).items():
            if res.verdict is F and isinstance(res.witness, dict) and "kind" in res.witness:
                assert an.replay_witness(A, res.witness), (fam, cls)


def test_uniform_examples():
    C3, B4 = alg("C3"), alg("B4")
    assert an.classify_uniform(C3, (2, 2, 2), "U-SK").verdict is H  # choice rule holds
    assert an.classify_uniform(B4, (B4.top,), "U-SK").verdict is F
    # bounded search route, without the principal-separator shortcut
    r = an.classify_uniform(C3, (1, 2), "U-fSK", Bounds(K=3))
    assert r.verdict is H
    with pytest.raises(ValueError):
        an.classify_uniform(C3, (1,), "U-nope")


@pytest.mark.parametrize("name", SMALL4)
def test_carusk_direct_search_agrees(name):
    A = alg(name)
    for fam in fams(A, 2):
        direct = an.carusk_counterexample(A, fam, K=len(fam) + 1)
        v = an.classify_uniform(A, fam, "U-SK").verdict
        if v is H:
            assert direct is None, fam
        elif direct is not None:
            assert v is F


# -- profiles --------------------------------------------------------------------------

def test_profile_examples():
    assert an.is_compatible_with_joins(alg("C3"))
    assert an.is_compatible_with_joins(alg("R1"))
    assert not an.is_compatible_with_joins(alg("MOD"))
    assert an.is_sigma_meet_closed(alg("C3"))
    assert an.is_sigma_meet_closed(alg("R2"))  # improper separator
    R = ApplicativeStructure.from_function(["x", "y"], lambda r, s: r)
    assert not an.is_sigma_meet_closed(relative(R, ["x", "y"]))
    assert an.satisfies_choice_rule(alg("C3")).verdict is H
    assert an.satisfies_choice_rule(alg("R1")).verdict is H
    cr = an.satisfies_choice_rule(alg("B4"))
    assert cr.verdict is F and an.replay_witness(alg("B4"), cr.witness)


@pytest.mark.parametrize("name", ZOO)
def test_join_compatibility_brute(name):
    A = alg(name)
    assert an.is_compatible_with_joins(A) == an.compatible_with_joins_brute(A)


@pytest.mark.parametrize("name", ["C2", "C3", "C4", "B4", "R1"])
def test_exists_distributive_examples(name):
    A = alg(name)
    assert an.is_exists_distributive(A).verdict is H
    assert an.exists_distributive_counterexample(A, 2) is None


def test_supercoherence_examples():
    assert an.is_uniformly_supercoherent(alg("C3")).verdict is H
    assert an.is_uniformly_supercoherent(alg("R1")).verdict is H
    assert an.is_uniformly_supercoherent(alg("B4")).verdict is F


def test_modest_examples():
    C3, B4, R1 = alg("C3"), alg("B4"), alg("R1")
    a, b = B4.lattice.index("a"), B4.lattice.index("b")
    assert an.classify_modest(B4, (a, b), "∧-modest").verdict is H
    e = R1.lattice.index("{e}")
    assert an.classify_modest(R1, (e, e), "×-modest").verdict is F
    assert an.classify_modest(R1, (e,), "×-modest").verdict is H
    for kind in an.MODEST_KINDS:
        assert an.classify_modest(C3, (), kind).verdict is H


# -- implication diagrams ----------------------------------------------------------------

@pytest.mark.parametrize("name", ZOO)
def test_implication_dag(name):
    A = alg(name)
    samples = [(f, an.classify_all(A, f)) for f in fams(A, 2)]
    rep = an.verify_implication_dag(A, samples)
    assert rep.passed, rep.violations
    assert rep.decided == rep.samples


def test_dag_reports_corrupted_verdicts():
    A = alg("C3")
    verdicts = {k: v.verdict for k, v in an.classify_all(A, (1,)).items()}
    verdicts["SK"], verdicts["wfSK"] = H, F
    rep = an.verify_implication_dag(A, [((1,), verdicts)])
    assert not rep.passed


@given(st.sampled_from(ZOO), st.lists(st.integers(0, 7), max_size=3))
def test_class_arrows_on_random_families(name, raw):
    A = alg(name)
    fam = tuple(x % A.n for x in raw)
    v = {k: r.verdict for k, r in an.classify_all(A, fam).items()}
    arrows = [("U-SK", "SK"), ("U-SK", "cSK"), ("SK", "fSK"), ("fSK", "wfSK"),
              ("U-SK", "U-fSK"), ("U-fSK", "U-wfSK"), ("U-wfSK", "wfSK"), ("cSK", "cInd"),
              ("U-fSK", "fSK")]
    for p, q in arrows:
        assert not (v[p] is H and v[q] is F), (p, q)
    assert (v["U-fSK"] is H) == (v["U-wfSK"] is H)
