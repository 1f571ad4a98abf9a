# Building networks from JSON documents, and two sanity checks:
# Hong-Ou-Mandel bunching and the mirrors-only variant of the network.

import json

from photon_mediation.elements import BeamSplitter
from photon_mediation.fock import PureState
from photon_mediation.network import dump_network, build_fig1, load_network, mirrors_variant, staged_evolution

doc = {
    "rails": ["a", "b"],
    "source": {"a": 1, "b": 1},
    "stages": [{"name": "primary", "elements": [
        {"kind": "beamsplitter", "name": "BS", "in_a": "a", "in_b": "b",
         "routing": {"a": {"transmit": "a", "reflect": "b"}, "b": {"transmit": "b", "reflect": "a"}}}]}],
    "partition": {"left": ["a"], "right": ["b"]},
}
hom = load_network(json.dumps(doc))
out = staged_evolution(hom)["primary"]
print("two photons on one splitter:", out)
print("coincidence amplitude:", out.amplitude((1, 1)))

# One photon in, 50/50 out.
print(BeamSplitter.straight("BS", "a", "b").apply(PureState(("a", "b"), {(1, 0): 1})))

# Swapping BS4/BS5 for mirrors: every photon meets exactly one reflecting
# element after the source splitters, so the state just picks up i^3 = -i.
net = build_fig1()
snaps = staged_evolution(mirrors_variant(net))
print("\nmirrors variant equals -i |I>:", snaps["secondary"].allclose(-1j * snaps["primary"]))

# The built-in network as a document.
print()
print(dump_network(net)[:400], "...")
