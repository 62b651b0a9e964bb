"""Which elements of a few small algebras are supercompact?

A Heyting chain, a Boolean algebra and the powerset of a one-point
applicative structure behave quite differently. We print each element with
its verdicts and, for refuted elements, the value set that defeats it.
"""

from implicative import analysis as an
from implicative.workspace import load_zoo

ws = load_zoo()

for name in ["C3", "B4", "N5", "R1"]:
    A = ws.algebra(name)
    print(f"\n{name}: {A.n} elements, separator {[A.name_of(x) for x in range(A.n) if A.in_sigma(x)]}")
    for a in range(A.n):
        sc = an.is_supercompact(A, a)
        ind = an.is_indecomposable(A, a)
        line = f"  {A.name_of(a):>6}  supercompact={sc!s:5}  indecomposable={ind!s:5}"
        w = an.supercompact_witness(A, a)
        if w is not None:
            line += f"  defeated by {[A.name_of(b) for b in w]}"
        print(line)

# In a Boolean algebra the supercompacts are exactly the atoms.
B4 = ws.algebra("B4")
print("\nB4 atoms:", [B4.name_of(a) for a in an.supercompact_elements(B4)])
