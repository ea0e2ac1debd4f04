"""Online least squares with exponential forgetting and a Hessian-norm regularizer."""

__version__ = "0.1.0"

from .learner import LearnerState, learner_init, predict, update  # noqa: E402
from .linalg import PinvState, pinv_oracle, pinv_rank1_update_baseline, pinv_rank1_update_proposed  # noqa: E402
from .loss import FeatureVector, Observation  # noqa: E402
