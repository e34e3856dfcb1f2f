"""scikit-learn style wrapper around the solver."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .ils import IlsParams, uils
from .model import Instance


class UILSScheduler(BaseEstimator):
    """Solve one instance per ``fit`` call.

    ``fit`` takes an :class:`Instance` in place of a feature matrix and
    stores ``schedule_``, ``cost_`` and ``stats_``. ``predict`` returns the
    machine (0-based) assigned to each job ``1..n``; ``score`` is the
    negated objective so that larger is better.
    """

    def __init__(self, restarts=10, iils=None, time_limit=600.0, rcl_alpha=0.15,
                 evaluator="auto", random_state=0):
        self.restarts = restarts
        self.iils = iils
        self.time_limit = time_limit
        self.rcl_alpha = rcl_alpha
        self.evaluator = evaluator
        self.random_state = random_state

    def fit(self, X: Instance, y=None):
        if not isinstance(X, Instance):
            raise TypeError(f"expected an Instance, got {type(X).__name__}")
        seed = self.random_state if self.random_state is not None else 0
        params = IlsParams(restarts=self.restarts, iils=self.iils, time_limit=self.time_limit,
                           rcl_alpha=self.rcl_alpha, seed=int(seed), evaluator=self.evaluator)
        res = uils(X, params)
        self.instance_ = X
        self.schedule_ = res.schedule
        self.cost_ = res.cost
        self.stats_ = res
        return self

    def _check(self):
        if not hasattr(self, "schedule_"):
            raise NotFittedError("call fit before using this scheduler")

    def predict(self, X=None) -> np.ndarray:
        self._check()
        if X is not None and X is not self.instance_:
            raise ValueError("predict only describes the fitted instance")
        return self.schedule_.assignment(self.instance_.n)[1:]

    def score(self, X=None, y=None) -> float:
        self._check()
        return -float(self.cost_)
