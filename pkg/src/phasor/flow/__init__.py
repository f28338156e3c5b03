"""Phase flow: orbits, fixed points, unstable manifolds and Blaschke basins."""

from .basins import (
    Arc,
    BasinDecomposition,
    basin_decomposition,
    blaschke_saddles,
    boundary_phase_measure,
    label_points,
    separating_angles,
    structure_sequence,
)
from .field import BlaschkeProduct, PhaseFlow, flow_field
from .integrate import (
    FixedPoint,
    Orbit,
    classify_fixed_points,
    integrate_orbit,
    unstable_manifolds,
)

__all__ = [
    "Arc",
    "BasinDecomposition",
    "BlaschkeProduct",
    "FixedPoint",
    "Orbit",
    "PhaseFlow",
    "basin_decomposition",
    "blaschke_saddles",
    "boundary_phase_measure",
    "classify_fixed_points",
    "flow_field",
    "integrate_orbit",
    "label_points",
    "separating_angles",
    "structure_sequence",
    "unstable_manifolds",
]
