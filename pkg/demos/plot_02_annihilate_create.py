"""
When revealing the subensemble changes nonlocality
==================================================

Two four-state ensembles of separable two-qubit states.  In the first,
telling Bob which half of the label set the state came from removes the
advantage of global measurements; in the second, the same kind of hint
creates one.
"""

# %%
from pinonlocal import (
    bell_fixtures,
    build_example3,
    build_example4,
    check_theorem3_premises,
    check_theorem4_premises,
    classify,
    solve_me,
)

e3, e4 = build_example3(), build_example4()
print("priors", [round(p, 4) for p in e3.priors], [round(p, 4) for p in e4.priors])

# %%
# The witness directions behind both ensembles.
phi_minus, psi_minus = bell_fixtures()["phi-"], bell_fixtures()["psi-"]
print("<Phi-|eta1 rho1 - eta3 rho3|Phi-> =", e3.difference(1, 3).expectation(phi_minus))
print("<Psi-|eta3 rho3 - eta4 rho4|Psi-> =", e4.difference(3, 4).expectation(psi_minus))

# %%
# Pairwise differences match the premise patterns checked below.
for name, e, check in (("first", e3, check_theorem3_premises), ("second", e4, check_theorem4_premises)):
    cert = check(e)
    print(f"{name}: {cert.theorem.value} {cert.conclusion.value} [{cert.confidence.value}]")
    for c in cert.checks:
        kind = "PSD" if c.is_psd else "witness" if c.is_ew else "not block positive"
        print(f"   {c.label}: {kind}")

# %%
# Optimal guessing without any hint.
print("p_G without PI:", round(solve_me(e3).value, 6), round(solve_me(e4).value, 6))

# %%
# Classify the two partitions discussed for each ensemble.
for e in (e3, e4):
    for s in ([1, 2], [1, 3]):
        r = classify(e, s)
        print(f"S={set(r.s)}: {r.classification.value:<22} p_G^PI = {r.values['p_G_PI']:.6f}  ({r.confidence.value})")
        for step in r.pi.derivation:
            print("    ", step)
