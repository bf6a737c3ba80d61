"""Envy-free and EFX orientations of edge-weighted multigraphs.

Solvers for the existence of envy-free (EF) and envy-free-up-to-any-good
(EFX) edge orientations, and for the minimum number of edges that must be
left unoriented (minimum charity), together with exhaustive oracles,
tree-decomposition machinery, and hardness-construction instance generators.
"""

from .core import (
    CHARITY,
    EF,
    EFX,
    TO_U,
    TO_V,
    CapExceededError,
    InputError,
    Instance,
    InternalError,
    PartialOrientation,
    SolveReport,
    UnsupportedInstanceError,
    VerifyResult,
    bundle_value,
    bundles,
    envies,
    strongly_envies,
    verify,
)

__all__ = [
    "CHARITY",
    "EF",
    "EFX",
    "TO_U",
    "TO_V",
    "CapExceededError",
    "InputError",
    "Instance",
    "InternalError",
    "PartialOrientation",
    "SolveReport",
    "UnsupportedInstanceError",
    "VerifyResult",
    "bundle_value",
    "bundles",
    "envies",
    "strongly_envies",
    "verify",
]

__version__ = "0.1.0"
