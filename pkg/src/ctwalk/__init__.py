"""Continuous-time classical and quantum walks on finite graphs.

Builders for gasket duals, Cayley trees, hypercubic tori and simple
reference graphs; exact spectral propagation for both dynamics;
transport and localization observables; closed-form infinite-lattice
baselines; and a CLI with canned, self-checking experiment bundles.
"""
from ._backend import BACKEND_ENV, backend_name
from .dynamics import (
    MemoryGuardError,
    TimeGrid,
    TransitionField,
    classical_column,
    classical_field,
    compose_check,
    quantum_column,
    quantum_field,
)
from .graphs import (
    Graph,
    build_cayley_tree,
    build_chain,
    build_complete,
    build_dual_sierpinski,
    build_family,
    build_hypercubic_torus,
    build_ring,
    cayley_node_count,
    dsg_corner_nodes,
    dsg_left_corner_chain,
    dsg_node_count,
    torus_coordinates,
    torus_euclidean_distances,
)
from .lattice import (
    BesselConfig,
    bessel_j,
    chain_displacement_exact,
    chain_pi_infinite,
    hypercubic_displacement,
    hypercubic_pi_factorized,
)
from .observables import (
    crossing_time,
    displacement_series,
    dsg_lta_lb_closed_form,
    envelope_exponent,
    eta_ratio,
    lta_lower_bound,
    lta_matrix,
    lta_mean,
    return_prob_classical,
    return_prob_lower_bound,
    return_prob_quantum,
    site_averaged_displacement,
    stationary_quantum_displacement,
)
from .spectral import (
    Eigensystem,
    degenerate_classes,
    dsg_distinct_count,
    dsg_spectrum,
    laplacian_eigensystem,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
