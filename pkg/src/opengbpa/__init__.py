"""Open-world evidence theory: GBPA generation from triangular fuzzy numbers and fusion."""

from .classification import Decision, classify_sample, decide
from .combination import (
    Combination,
    ConflictReport,
    Rule,
    TotalConflictError,
    combine,
    combine_all,
    dempster_combine,
    gcr_combine,
    mgcr_combine,
    negate_bayesian,
    order_spread,
)
from .datasets import Dataset, load_dataset, load_haberman, load_iris
from .evidence import Frame, FrameMismatchError, MassFunction, World, gbel, gpl, make_frame, validate_mass
from .experiments import (
    ExperimentReport,
    SplitPlan,
    corrected_accuracy,
    run_cross_validation,
    run_open_world,
    run_robustness,
    split_leave_out,
    stratified_kfold,
)
from .fuzzy import ModelTable, TriangularFuzzyNumber, fit_models, fit_tfn, membership
from .generation import generate_for_attribute, generate_gbpa, ordinate_stack, to_closed_world

__version__ = "0.1.0"
