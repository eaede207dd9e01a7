"""Post-burn wound contraction simulator with an operator-network surrogate.

The heavy lifting lives in the C++ extension module; this package re-exports
its public surface.
"""

from woundsim._core import (  # noqa: F401
    Dataset,
    DeepONetModel,
    KineticParams,
    TrainHistory,
    VariableParams,
    boundary_curve,
    domain_extent,
    evaluate,
    generate_convex_test_set,
    generate_training_set,
    load_model,
    predict_field,
    read_dataset_csv,
    run_simulation,
    sample_variable_params,
    save_model,
    shape_quadruple,
    sine_augment,
    train_surrogate,
)

__version__ = "1.0.0"
