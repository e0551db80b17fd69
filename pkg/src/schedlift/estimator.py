"""Estimator-style wrapper around the rounding drivers.

``fit`` solves the lift for an instance and rounds it; ``predict`` returns the
machine of every job. Only the parameter handling of the usual estimator API
carries over: there is no training set and no generalization to other inputs.
"""

from __future__ import annotations

from math import ceil

from sklearn.base import BaseEstimator

from ._validation import (
    check_degree,
    check_epsilon_param,
    check_instance,
    check_is_fitted,
    check_mode,
    check_target,
)
from .rational import Fraction
from .rounding import SUCCESS, ptas_round, ptas_round_order


class LiftRoundingScheduler(BaseEstimator):
    """Schedule by rounding a Sherali-Adams lift of assign(B, T).

    Parameters
    ----------
    epsilon : rational with integral inverse, e.g. ``"1/2"``
    degree : lift degree; ``None`` uses the number of assignment variables
    mode : ``"sym"`` (symmetry rows) or ``"order"`` (symmetry and ordering rows)
    complete : emit implied lift rows as well
    seed : seed for the persistence spot checks
    """

    def __init__(self, epsilon="1/2", degree=None, mode="sym", complete=False, seed=0):
        self.epsilon = epsilon
        self.degree = degree
        self.mode = mode
        self.complete = complete
        self.seed = seed

    def _run(self, instance, T):
        driver = ptas_round if self.mode == "sym" else ptas_round_order
        return driver(instance, T, self.epsilon_, self.degree_, seed=self.seed, complete=self.complete)

    def fit(self, X, y=None):
        """Round at target ``y`` (an integer T). Without ``y`` the smallest T in
        ``[max(max p, ceil(sum p / m)), sum p]`` with a successful rounding is used."""
        instance = check_instance(X)
        self.epsilon_ = check_epsilon_param(self.epsilon)
        self.degree_ = check_degree(self.degree, instance)
        check_mode(self.mode)
        if y is not None:
            T = check_target(y)
            result = self._run(instance, T)
        else:
            lo = max(max(instance.sizes.values()), ceil(Fraction(instance.total_size, instance.machines)))
            result = None
            for T in range(lo, instance.total_size + 1):
                result = self._run(instance, T)
                if result.status == SUCCESS:
                    break
        self.instance_ = instance
        self.T_ = result.T
        self.result_ = result
        self.status_ = result.status
        self.schedule_ = result.schedule
        return self

    def predict(self, X=None):
        """Machine index per job, in the instance's job order."""
        check_is_fitted(self)
        if X is not None and check_instance(X) != self.instance_:
            raise ValueError("predict only applies to the instance passed to fit")
        if self.schedule_ is None:
            raise ValueError(f"rounding did not produce a schedule (status {self.status_})")
        return [self.schedule_.assignment[j] for j in self.instance_.job_ids]

    def fit_predict(self, X, y=None):
        return self.fit(X, y).predict()

    def score(self, X=None, y=None):
        """Negative makespan, so that larger is better."""
        check_is_fitted(self)
        if self.schedule_ is None:
            raise ValueError(f"rounding did not produce a schedule (status {self.status_})")
        return -self.schedule_.makespan
