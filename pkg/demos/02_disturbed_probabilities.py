# Outer-photon path probabilities with and without the middle photon.

from photon_mediation.network import build_fig1
from photon_mediation.postselect import path_probabilities, run_protocol, two_photon_baseline

net = build_fig1()

# Without photon 2: each outer photon stays in its own apparatus.
product, baseline = two_photon_baseline(net)
print("two-photon state (photons 1 and 3):", product)

# With photon 2: marginals of the filtered three-photon state, computed
# directly and as the detector-outcome-weighted average.
run = run_protocol(net)
for photon, (a, b) in ((1, ("A1", "B1")), (3, ("A3", "B3"))):
    direct = path_probabilities(run.register, photon)
    weighted = path_probabilities(run.outcomes, photon)
    print(f"\nphoton {photon}")
    print(f"  without mediator: p({a}) = {baseline[a]:.4f}  p({b}) = {baseline[b]:.4f}")
    print(f"  with mediator:    P({a}) = {direct[0]:.4f}  P({b}) = {direct[1]:.4f}")
    print(f"  weighted route:   P({a}) = {weighted[0]:.4f}  P({b}) = {weighted[1]:.4f}")
