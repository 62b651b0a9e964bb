"""Quantifiers of the implicative tripos on tiny base sets.

Existential and universal quantification along a map are computed fiberwise,
then checked against reindexing by the adjunctions, Beck-Chevalley and
Frobenius on every small base.
"""

from implicative import tripos as tp
from implicative.workspace import load_zoo

ws = load_zoo()
A = ws.algebra("C3")

f = tp.constant_map(range(2), (0,), 0)
phi = tp.predicate(2, [1, 2])
print("phi            ", phi.values)
print("exists along f ", tp.exists_along(A, phi, f).values)
print("forall along f ", tp.forall_along(A, phi, f).values)

eq = tp.equality_predicate(A, range(2))
print("equality on 2  ", [A.name_of(v) for v in eq.values])

for name in ["C3", "B4", "R1"]:
    B = ws.algebra(name)
    print(f"\n{name}")
    for rep in (tp.check_adjunctions(B), tp.check_bcc_grid(B, max_size=2),
                tp.check_frobenius_grid(B), tp.check_functoriality(B)):
        print(f"  {rep.check:14} {'PASS' if rep.passed else 'FAIL'}  {rep.notes}")

# predicate classes reduce to the family classes of the value tuple
B4 = ws.algebra("B4")
top = tp.top(B4, (0,))
print("\nB4 top as SK_p:", tp.classify_predicate(B4, top, "SK_p").verdict.value)
print("counterexample:", tp.direct_sk_counterexample(B4, top))
