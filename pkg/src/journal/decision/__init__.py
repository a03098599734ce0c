"""Naive Bayes publication decisions."""

from .classifier import Posterior, decide, likelihood_ratio, posterior_acceptable
from .config import ColdStart, EngineConfig, PriorMode, Smoothing
from .estimators import class_conditional, class_prior
from .training import ReviewVector, TrainingSet, build_training_set, eligible_reviewers

__all__ = [
    'ColdStart',
    'EngineConfig',
    'Posterior',
    'PriorMode',
    'ReviewVector',
    'Smoothing',
    'TrainingSet',
    'build_training_set',
    'class_conditional',
    'class_prior',
    'decide',
    'eligible_reviewers',
    'likelihood_ratio',
    'posterior_acceptable',
]
