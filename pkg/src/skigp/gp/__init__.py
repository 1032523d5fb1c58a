"""GP regression engines: exact, SoR, FITC and SKI."""

from .base import GpModel
from .exact import ExactGP
from .factory import Scheme, make_model
from .inducing import (
    FITCGP,
    SoRGP,
    fitc_cov,
    fitc_matrix,
    global_gp_weights,
    jittered_kuu,
    sor_cov,
    sor_matrix,
)
from .learning import LearningResult, learn_hypers
from .manifest import dumps, load_model, loads, save_model
from .sampling import sample_prior
from .ski import (
    CrossCovariance,
    KuuStructure,
    LogdetMethod,
    SkiGP,
    SkiOperator,
    build_kuu,
    ski_apply,
)


def predict_mean(model: GpModel, X_test):
    """Posterior mean of a fitted model."""
    return model.predict_mean(X_test)


def predict_variance(model: GpModel, X_test):
    """Posterior latent variance of a fitted model."""
    return model.predict_variance(X_test)


def log_marginal_likelihood(model: GpModel) -> float:
    """Log marginal likelihood of a fitted model."""
    return model.log_marginal_likelihood()


__all__ = [
    "GpModel",
    "ExactGP",
    "SoRGP",
    "FITCGP",
    "SkiGP",
    "SkiOperator",
    "ski_apply",
    "build_kuu",
    "KuuStructure",
    "CrossCovariance",
    "LogdetMethod",
    "Scheme",
    "make_model",
    "sor_cov",
    "fitc_cov",
    "sor_matrix",
    "fitc_matrix",
    "global_gp_weights",
    "jittered_kuu",
    "learn_hypers",
    "LearningResult",
    "sample_prior",
    "predict_mean",
    "predict_variance",
    "log_marginal_likelihood",
    "dumps",
    "loads",
    "save_model",
    "load_model",
]
