import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from uils import solution_cost
from uils.estimator import UILSScheduler
from uils.generate import random_instance

from conftest import example_instance


def test_params_round_trip():
    est = UILSScheduler(restarts=3, rcl_alpha=0.3)
    params = est.get_params()
    assert params["restarts"] == 3 and params["rcl_alpha"] == 0.3 and params["random_state"] == 0
    est.set_params(iils=5)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "schedule_")


def test_fit_predict_score():
    inst = random_instance(4, 9, 3)
    est = UILSScheduler(restarts=2, random_state=7).fit(inst)
    assert solution_cost(est.schedule_, inst) == est.cost_
    assert est.score() == -est.cost_
    labels = est.predict()
    assert labels.shape == (9,) and set(labels.tolist()) <= {0, 1, 2}
    for k, seq in enumerate(est.schedule_.seqs):
        assert all(labels[j - 1] == k for j in seq[1:])


def test_same_random_state_same_answer():
    inst = random_instance(1, 10, 2)
    a = UILSScheduler(restarts=2, random_state=3).fit(inst)
    b = clone(a).fit(inst)
    assert a.schedule_.seqs == b.schedule_.seqs


def test_worked_example_optimum():
    assert UILSScheduler(restarts=3).fit(example_instance()).cost_ == 8


def test_unfitted_and_bad_input():
    est = UILSScheduler()
    with pytest.raises(NotFittedError):
        est.predict()
    with pytest.raises(NotFittedError):
        est.score()
    with pytest.raises(TypeError):
        est.fit(np.zeros((3, 3)))
