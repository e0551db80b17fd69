from fractions import Fraction

import pytest
from sklearn.base import clone

from schedlift import LiftRoundingScheduler
from schedlift._validation import NotFittedError, check_degree, check_instance, check_mode, check_target
from schedlift.exceptions import NonIntegralEpsilonInverse
from schedlift.model import Instance
from schedlift.rounding import LIFT_INFEASIBLE, SUCCESS, brute_force_opt

INST = Instance.from_sizes(2, [5, 4, 3])


def test_params_roundtrip():
    est = LiftRoundingScheduler(epsilon="1/3", degree=4, mode="order")
    assert est.get_params() == {"complete": False, "degree": 4, "epsilon": "1/3", "mode": "order", "seed": 0}
    twin = clone(est).set_params(seed=5)
    assert twin.seed == 5 and twin.mode == "order"


def test_fit_predict_at_target():
    est = LiftRoundingScheduler().fit(INST, 7)
    assert est.status_ == SUCCESS and est.T_ == 7
    machines = est.predict()
    assert len(machines) == INST.n and set(machines) <= {1, 2}
    assert est.score() == -est.schedule_.makespan >= -Fraction(21, 2)


def test_fit_without_target_finds_smallest_success():
    est = LiftRoundingScheduler().fit(INST)
    opt, _ = brute_force_opt(INST)
    assert est.status_ == SUCCESS and est.T_ <= opt


def test_fit_accepts_documents(tmp_path):
    doc = INST.to_dict()
    assert LiftRoundingScheduler().fit_predict(doc, 7) == LiftRoundingScheduler().fit_predict(INST, 7)
    path = tmp_path / "inst.json"
    path.write_text(__import__("json").dumps(doc))
    assert check_instance(str(path)) == INST


def test_unfitted_and_failed():
    with pytest.raises(NotFittedError):
        LiftRoundingScheduler().predict()
    est = LiftRoundingScheduler().fit(INST, 5)
    assert est.status_ == LIFT_INFEASIBLE
    with pytest.raises(ValueError):
        est.predict()


def test_predict_rejects_other_instance():
    est = LiftRoundingScheduler().fit(INST, 7)
    with pytest.raises(ValueError):
        est.predict(Instance.from_sizes(2, [1]))


def test_validation_errors():
    with pytest.raises(NonIntegralEpsilonInverse):
        LiftRoundingScheduler(epsilon="2/5").fit(INST, 7)
    with pytest.raises(ValueError):
        check_mode("lex")
    with pytest.raises(ValueError):
        check_target(0)
    with pytest.raises(ValueError):
        check_degree(0, INST)
    with pytest.raises(TypeError):
        check_instance(42)
    assert check_degree(None, INST) == 6
