"""Objects of the regular completion: trackability, projectivity, assemblies.

The Boolean arrow (a, not a) is a morphism no function tracks. Covering the
top of a five-element Heyting algebra by two incomparable elements gives an
object that is strongly trackable but not projective. The last part runs
the main theorem on three algebras.
"""

from implicative import cat as C
from implicative.catalog import from_heyting
from implicative.lattice import build_lattice
from implicative.workspace import load_zoo

ws = load_zoo()
B4 = ws.algebra("B4")
a = B4.lattice.index("a")
one, two = C.make_object([B4.top]), C.make_object([B4.top, B4.top])
r = C.relation(one, two, [a, B4.arrow(a, B4.bottom)])
print("B4 (a, not a):  morphism", C.reg_is_morphism(B4, r).passed, " trackers", C.find_trackers(B4, r))

C3 = ws.algebra("C3")
src, tgt = C.make_object([0, 0]), C.make_object([2, 2])
print("C3 bottom->top:", len(C.groth_homs(C3, src, tgt)), "maps but",
      len(C.reg_homs(C3, src, tgt)), "relation")

L = build_lattice(["0", "d", "a", "b", "c"], [("0", "d"), ("d", "a"), ("d", "b"), ("a", "c"), ("b", "c")])
D5 = from_heyting(L, "D5")
top = C.make_object([D5.lattice.index("c")])
print("D5 top: strongly trackable", C.is_strongly_trackable_object(D5, top).verdict.value,
      " projective", C.is_regular_projective(D5, top).verdict.value)

for name in ["C3", "R1", "B4"]:
    rep = C.verify_theorem(ws.algebra(name), "main_1")
    legs = {k: (v["passed"] if "passed" in v else v["verdict"]) for k, v in rep.legs.items()}
    print(f"main theorem on {name}: {'PASS' if rep.passed else 'FAIL'}  {legs}")
