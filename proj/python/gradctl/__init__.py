"""Near-optimal controller synthesis via value-gradient policy iteration."""

from ._core import (  # noqa: F401
    Controller,
    DivergedError,
    FeatureBasis,
    GradientSample,
    IntegrationConfig,
    LossModel,
    Method,
    PlantModel,
    Problem,
    RoundReport,
    SampleWarp,
    SweepDivergedError,
    SweepResult,
    Trajectory,
    TrainingConfig,
    __version__,
    feature_linear,
    feature_tanh,
    ghjb_project,
    improved_controller,
    integrate_closed_loop,
    logcosh_basis,
    make_integrator_loss,
    make_integrator_plant,
    make_integrator_problem,
    make_oscillator_loss,
    make_oscillator_plant,
    make_oscillator_problem,
    monomial_basis,
    rollout_to_target,
    run_policy_iteration,
    sample_feature_matrix,
    saturated_linear,
    sweep,
)
