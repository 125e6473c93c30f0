"""Energetic fluctuation relations for open quantum processes.

Thin Python layer over the C++ core: thermal states, Kraus channels,
two-point-measurement energy distributions and the full thermodynamic
report with identity residuals.
"""

from ._core import (
    OpenfluctError,
    Hamiltonian,
    ThermalState,
    KrausChannel,
    EnergyDistribution,
    Report,
    hermitian_eig,
    gibbs_state,
    von_neumann_entropy,
    relative_entropy,
    nonequilibrium_entropy,
    validate_channel,
    preset,
    dilate,
    forward_distribution,
    backward_distribution,
    gamma_of,
    renormalize_backward,
    exp_average,
    crooks_residual,
    kl_divergence,
    report_from_json,
    cli,
)

__all__ = [name for name in dir() if not name.startswith("_")]
