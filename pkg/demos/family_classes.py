"""Family-level supercompactness and the implications between the classes.

For a handful of families we print all eight class verdicts, then check
the arrows of the implication diagram that the algebra's profile enables.
"""

import itertools

from implicative import analysis as an
from implicative.workspace import load_zoo

ws = load_zoo()


def show(A, fam):
    res = an.classify_all(A, fam)
    names = [A.name_of(a) for a in fam]
    cells = " ".join(f"{c}={'+' if res[c].holds else '-' if res[c].fails else '?'}"
                     for c in an.FAMILY_CLASSES)
    print(f"  {str(names):24} {cells}")
    return res


for name in ["C3", "B4", "R1", "MOD"]:
    A = ws.algebra(name)
    prof = an.profile(A)
    print(f"\n{name}: join-compatible={prof.compatible_with_joins} "
          f"choice rule={prof.choice_rule.verdict.value}")
    samples = []
    for fam in itertools.chain([()], itertools.product(range(A.n), repeat=2)):
        samples.append((fam, show(A, fam) if len(samples) < 6 else an.classify_all(A, fam)))
    rep = an.verify_implication_dag(A, samples, prof)
    print(f"  diagrams {rep.diagrams}: {rep.decided} decided samples, "
          f"{len(rep.violations)} violations")
