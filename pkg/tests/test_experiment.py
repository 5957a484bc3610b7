import csv
import io
from fractions import Fraction

import pytest

from hatguess.experiment import random_experiment


def test_rows_reproduce():
    a = random_experiment(300, 2, 3, seed=11)
    b = random_experiment(300, 2, 3, seed=11)
    assert a.rows == b.rows
    assert [r.seed for r in a.rows] == [11, 12, 13]


def test_single_trial_is_trial_zero_of_longer_run():
    one = random_experiment(200, Fraction(3, 2), 1, seed=4)
    three = random_experiment(200, Fraction(3, 2), 3, seed=4)
    assert one.rows[0] == three.rows[0]


def test_edgeless_trials():
    rep = random_experiment(50, 0, 2, seed=0)
    assert all(r.m == 0 and r.strong_degeneracy == 1 and r.hg_bound == 2 for r in rep.rows)
    assert rep.free_fraction == 1


def test_markov_bound_and_outputs():
    rep = random_experiment(10000, 2, 1, seed=0)
    assert rep.markov_bound == Fraction(64, 10000)
    data = rep.to_json()
    assert data["config"]["C"] == "2" and len(data["rows"]) == 1
    assert data["aggregates"]["markov_bound"] == pytest.approx(0.0064)
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert rows[0]["seed"] == "0"
    assert "K23-free fraction" in rep.table()


def test_k23_flag_consistent():
    rep = random_experiment(60, 12, 3, seed=1)
    for r in rep.rows:
        assert r.k23_free == (r.max_common < 3)
        assert r.hg_bound == (2 * r.strong_degeneracy) ** r.strong_degeneracy


@pytest.mark.parametrize("args", [(4, 2, 1, 0), (10, 2, 0, 0), (10, -1, 1, 0), (10, 11, 1, 0)])
def test_parameter_validation(args):
    with pytest.raises(ValueError):
        random_experiment(*args)
