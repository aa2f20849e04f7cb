"""
When cylindrifications fail to commute
======================================

Under the default copy rule the two cylindrifications c0 and c1 do not
commute on the one-node edgeless graph. The clique copy rule repairs this.
"""

from qeagraph import (CopyRule, Strategy, build_eta, build_standard, check_axiom_suite,
                      check_equation, complex_algebra, parse_equation)

e1 = build_standard("edgeless", 1)
a = complex_algebra(build_eta(e1, 3))

x = a.atom(1)
print("x          =", x.indices(), a.structure.atom(1))
print("c0 c1 x    =", a.cyl(0, a.cyl(1, x)).indices())
print("c1 c0 x    =", a.cyl(1, a.cyl(0, x)).indices())

# the exhaustive checker finds a counterexample of its own
res = check_equation(parse_equation("c0(c1(x)) = c1(c0(x))"), a, Strategy("exhaustive"))
print("exhaustive:", "pass" if res.passed else f"fail {res.counterexample}")

# which schema instances of the full suite break
failing = [r.check_id for r in check_axiom_suite(a, "qea", Strategy("exhaustive")) if r.failed]
print(len(failing), "failing instances:", failing)

# with distinct copies of a node adjacent, every instance survives random testing
b = complex_algebra(build_eta(e1, 3, CopyRule.CLIQUE))
reports = check_axiom_suite(b, "qea", Strategy("random", 500, 42))
print("clique rule,", len(b.atoms()), "atoms: failures =", sum(r.failed for r in reports))

# larger graphs have no isolated node and pass under the default rule
c5 = complex_algebra(build_eta(build_standard("cycle", 5), 3))
reports = check_axiom_suite(c5, "qea", Strategy("random", 200, 42))
print("C5 default rule: failures =", sum(r.failed for r in reports))
