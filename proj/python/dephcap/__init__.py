"""Capacity bounds for the bosonic dephasing channel in truncated Fock space."""

from ._core import (
    BoundsRow,
    CapacityResult,
    OptimizerConfig,
    OptimizerDiagnostics,
    QubitSquashResult,
    beamsplitter_bound,
    capacity_objective,
    dephasing_apply,
    dephasing_kraus,
    entropy_of_pure_mixture,
    gap_sweep,
    locc_bounds,
    optimize_capacity,
    qubit_squash_bound,
    reverse_coherent_information,
    von_neumann_entropy,
)

__all__ = [
    "BoundsRow",
    "CapacityResult",
    "OptimizerConfig",
    "OptimizerDiagnostics",
    "QubitSquashResult",
    "beamsplitter_bound",
    "capacity_objective",
    "dephasing_apply",
    "dephasing_kraus",
    "entropy_of_pure_mixture",
    "gap_sweep",
    "locc_bounds",
    "optimize_capacity",
    "qubit_squash_bound",
    "reverse_coherent_information",
    "von_neumann_entropy",
]
