"""Few-photon linear-optics simulator: Fock-state evolution through beam
splitters and mirrors, post-selection, weak values and two-photon
entanglement measures."""

from .analysis import (PathProjector, PrePostEnsemble, UndefinedWeakValueError, concurrence,
                       entanglement_of_formation, expectation_decomposition, joint_weak_values, weak_value,
                       weak_value_table)
from .elements import BeamSplitter, ElementSequence, Mirror, Stage, apply_beam_splitter, apply_mirror, evolve
from .fock import (ApparatusCount, DegenerateStateError, DetectorState, OccupancyPattern, PureState,
                   StructureError, apply_projector, inner, normalize, tensor)
from .network import (ApparatusPartition, NetworkDescription, NetworkFormatError, build_fig1, load_network,
                      load_network_file, staged_evolution)
from .postselect import (ImpossibleEventError, RegisterState, measure_photon2, no_crossing_filter,
                         path_probabilities, run_protocol, to_register, two_photon_baseline)

__version__ = "0.1.0"
