"""Python access to the morpho simulation and analysis core."""

from ._core import (
    BodyDesign,
    Policy,
    Pose,
    SimProfile,
    TrialResult,
    DesignMetrics,
    LossValue,
    OptRunRecord,
    StatResult,
    __version__,
    aggregate_dtw,
    design_grid,
    design_metrics,
    diagonal_environments,
    dtw,
    evaluate_designs,
    hill_climb_metrics,
    loss,
    mann_whitney,
    mirror_design,
    pearson,
    run_coopt,
    run_command,
    simulate,
    spearman,
    success_matrices,
    train_policy,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
