# Weak values of path projectors between the filtered state and each
# detector outcome, and the identity <P> = sum_n p(n) wv_n(P).

from photon_mediation import analysis as an
from photon_mediation.postselect import run_protocol

run = run_protocol()
posts = [(o.probability, o.postselected) for o in run.outcomes.rows.values()]

for label in ("D2", "D1"):
    e = an.PrePostEnsemble(run.register, run.outcomes[label].postselected, label)
    singles = an.weak_value_table(e)
    joints = an.joint_weak_values(e)
    print(f"\npostselection {label} (probability {singles.postselection_probability:.4f})")
    print("  single:", {k: round(v.real, 6) for k, v in singles.by_label().items()})
    print("  joint: ", {k: round(v.real, 6) for k, v in joints.by_label().items() if abs(v) > 1e-12})

# The weak value of a product is not the product of weak values.
m = an.PrePostEnsemble(run.register, run.outcomes["D1"].postselected)
prod = 1
for photon, letter in ((1, "A"), (2, "B"), (3, "B")):
    prod *= an.weak_value(m, an.PathProjector.single(photon, letter))
print("\nwv(A1,B2,B3) =", an.weak_value(m, an.PathProjector.word("ABB")).real, " product =", prod.real)

print("\nexpectation vs weighted weak values")
for p in an.single_projectors():
    lhs, rhs = an.expectation_decomposition(run.register, posts, p)
    print(f"  {p.label}: {lhs:.6f}  {rhs:.6f}")
