import itertools

import pytest
from hypothesis import given, strategies as st

from implicative import analysis as an
from implicative.catalog import (ApplicativeStructure, CarrierTooLarge, StarNotAbsorbing, from_applicative,
                                 from_heyting, modified, nested, power, relative)
from implicative.core import check_implicative_axioms, check_separator
from implicative.lattice import NotHeyting, boolean_lattice, build_lattice, chain
from conftest import alg

ONE = ApplicativeStructure.from_pairs(["e"], {("e", "e"): "e"})
CYCLIC3 = ApplicativeStructure.from_function(["x", "y", "z"], lambda r, s: (r + s) % 3)


def test_heyting_chain_has_top_separator():
    A = from_heyting(chain(3))
    assert A.sigma.members == 1 << 2
    assert check_separator(A).passed


def test_diamond_is_boolean():
    A = from_heyting(boolean_lattice("ab"))
    a, b = A.lattice.index("a"), A.lattice.index("b")
    assert A.arrow(a, A.bottom) == b  # negation is the complement
    assert A.arrow(a, b) == b


def test_non_heyting_lattice_rejected():
    M3 = build_lattice(["0", "a", "b", "c", "1"],
                       [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])
    with pytest.raises(NotHeyting):
        from_heyting(M3)


def test_one_point_realizability():
    A = from_applicative(ONE)
    assert A.sigma.members == 0b10
    assert A.provenance["textbook_sigma"]
    assert an.supercompact_elements(A) == [1]


def test_empty_application_is_degenerate():
    A = from_applicative(ApplicativeStructure.from_pairs(["p", "q"], []))
    assert A.is_degenerate


def test_carrier_cap():
    big = ApplicativeStructure.from_function("abcdef", lambda r, s: r)
    with pytest.raises(CarrierTooLarge):
        from_applicative(big)
    with pytest.raises(CarrierTooLarge):
        nested(big, [0])
    with pytest.raises(CarrierTooLarge):
        power(alg("C3"), range(5), cap=64)


@st.composite
def partial_tables(draw):
    m = draw(st.integers(1, 3))
    cells = draw(st.lists(st.one_of(st.none(), st.integers(0, m - 1)), min_size=m * m, max_size=m * m))
    return ApplicativeStructure.from_function([f"r{i}" for i in range(m)], lambda r, s: cells[r * m + s])


@given(partial_tables())
def test_total_tables_give_implicative_structures(R):
    R = ApplicativeStructure(R.carrier, tuple(tuple(0 if v is None else v for v in row)
                                              for row in R.table))
    A = from_applicative(R)
    assert check_implicative_axioms(A.structure).passed
    assert check_separator(A).passed


@given(partial_tables())
def test_partial_tables_only_break_the_empty_meet(R):
    # undefined applications make X => R smaller than R: a quasi-implicative structure
    A = from_applicative(R)
    rep = check_implicative_axioms(A.structure)
    top = A.lattice.top
    defect = any(A.arrow(X, top) != top for X in range(A.n))
    assert rep.passed == (not defect)
    if defect:
        assert rep.failed_axiom == "meet_distribution" and rep.witness["B"] == []
    L = A.lattice
    for X, Y, Z in itertools.product(range(A.n), repeat=3):
        assert A.arrow(X, L.meet(Y, Z)) == L.meet(A.arrow(X, Y), A.arrow(X, Z))


def test_relative_trio():
    full = relative(CYCLIC3, ["x", "y", "z"])
    assert full.sigma.members == full.lattice.full & ~1  # subsets meeting the carrier
    assert full.provenance["separator_valid"] is check_separator(full).passed
    empty = relative(CYCLIC3, [])
    assert empty.sigma.members == 0
    assert not check_separator(empty).passed
    part = relative(CYCLIC3, ["x"])
    assert part.provenance["sharp_closed"]  # x + x = x
    assert part.provenance["separator_valid"] == check_separator(part).passed


def test_nested_diagonal_is_realizability():
    N = nested(ONE, ["e"])
    R = from_applicative(ONE)
    diag = {X: N.lattice.index(f"({nm},{nm})") for X, nm in enumerate(R.lattice.names)}
    for X, Y in itertools.product(range(R.n), repeat=2):
        assert N.lattice.le(diag[X], diag[Y]) == R.lattice.le(X, Y)
        assert N.arrow(diag[X], diag[Y]) == diag[R.arrow(X, Y)]


def test_nested_truth_needs_actual_realizer():
    N = alg("NEST")
    for i, nm in enumerate(N.lattice.names):
        actual = nm.split(",")[0].strip("(")
        assert N.in_sigma(i) == (actual != "{}")
    assert check_implicative_axioms(N.structure).passed


def test_modified_star_checks():
    R = ApplicativeStructure.from_pairs(["*", "r"], [["*", "*", "*"], ["*", "r", "r"],
                                                     ["r", "*", "r"], ["r", "r", "*"]])
    with pytest.raises(StarNotAbsorbing):
        modified(R, ["*"], "*")
    # star must lie in the sub-structure
    with pytest.raises(StarNotAbsorbing):
        modified(ApplicativeStructure.from_pairs(["*"], {("*", "*"): "*"}), [], "*")


def test_modified_is_not_join_compatible():
    M = alg("MOD")
    assert all("*" in nm.split(",", 1)[1] for nm in M.lattice.names)
    assert not an.is_compatible_with_joins(M)
    assert check_implicative_axioms(M.structure).passed


def test_power_examples():
    C2 = from_heyting(chain(2))
    P = power(C2, [0, 1])
    assert P.n == 4
    assert [P.name_of(i) for i in range(4) if P.in_sigma(i)] == ["(1,1)"]
    assert power(C2, []).n == 1
    C3 = alg("C3")
    P1 = power(C3, ["*"])
    assert (P1.structure.imp == C3.structure.imp).all()
    assert P1.sigma.members == C3.sigma.members


@given(st.sampled_from(["C2", "C3", "B4", "R1"]), st.integers(0, 10**6))
def test_power_is_pointwise(name, seed):
    A = alg(name)
    P = power(A, [0, 1])
    tuples = list(itertools.product(range(A.n), repeat=2))
    s, t = tuples[seed % len(tuples)], tuples[(seed // 7) % len(tuples)]
    i, j = tuples.index(s), tuples.index(t)
    assert P.arrow(i, j) == tuples.index(tuple(A.arrow(x, y) for x, y in zip(s, t)))
    assert P.lattice.le(i, j) == all(A.lattice.le(x, y) for x, y in zip(s, t))
    assert check_separator(P).passed
