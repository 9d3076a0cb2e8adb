"""rvbkit: exact spin-1/2 valence-bond toolkit for maximally entangled
resonating-valence-bond states.

Builds sector-compressed states over singlet coverings, measures pair
entanglement (entropy, i-concurrence, Wootters concurrence, Werner analysis),
constructs the maximal pair-entropy states of 4 and 6 qubits exactly and of
8-10 qubits numerically, and certifies them as ground states of the isotropic
infinite-range Heisenberg model.
"""

__version__ = "0.1.0"

from .basis import (
    PureState,
    SectorBasis,
    sector_basis,
    state_from_amplitudes,
    state_from_dict,
    state_from_json,
    state_to_dict,
    state_to_json,
)
from .entanglement import (
    EntanglementReport,
    PairMeasure,
    bound_comparison,
    e2v,
    e2v_max,
    entropy,
    entropy_closed_form,
    iconcurrence,
    iconcurrence_max,
    measure_state,
    verify_homogeneity_optimal,
    werner_p,
    wootters_concurrence,
)
from .homogenizer import (
    MaximalityCertificate,
    PhasorSystem,
    SolutionFamily,
    homogenize_isotropic,
    isotropize_homogeneous,
    solve_phasor_system,
    torus_search,
    verify_maximal,
)
from .linalg import Spectrum, hermitian_eig
from .models import (
    HamiltonianSpec,
    SpectrumReport,
    build_hamiltonian,
    four_site_identity_check,
    is_ground_state,
    ring_baseline,
    spectrum,
)
from .ops import (
    TwoQubitRDM,
    apply_sm_total,
    apply_sp_total,
    rdm1,
    rdm2,
    s2_total,
    sdots,
    spsm,
    szsz,
)
from .states import named_state
from .vb import (
    Matching,
    RumerMap,
    crossing_identity_check,
    enumerate_all_matchings,
    enumerate_rumer,
    rumer_map,
    vb_state,
)

__all__ = [
    "__version__",
    "PureState",
    "SectorBasis",
    "sector_basis",
    "state_from_amplitudes",
    "state_from_dict",
    "state_from_json",
    "state_to_dict",
    "state_to_json",
    "EntanglementReport",
    "PairMeasure",
    "bound_comparison",
    "e2v",
    "e2v_max",
    "entropy",
    "entropy_closed_form",
    "iconcurrence",
    "iconcurrence_max",
    "measure_state",
    "verify_homogeneity_optimal",
    "werner_p",
    "wootters_concurrence",
    "MaximalityCertificate",
    "PhasorSystem",
    "SolutionFamily",
    "homogenize_isotropic",
    "isotropize_homogeneous",
    "solve_phasor_system",
    "torus_search",
    "verify_maximal",
    "Spectrum",
    "hermitian_eig",
    "HamiltonianSpec",
    "SpectrumReport",
    "build_hamiltonian",
    "four_site_identity_check",
    "is_ground_state",
    "ring_baseline",
    "spectrum",
    "TwoQubitRDM",
    "apply_sm_total",
    "apply_sp_total",
    "rdm1",
    "rdm2",
    "s2_total",
    "sdots",
    "spsm",
    "szsz",
    "named_state",
    "Matching",
    "RumerMap",
    "crossing_identity_check",
    "enumerate_all_matchings",
    "enumerate_rumer",
    "rumer_map",
    "vb_state",
]
