import pytest
from sklearn.base import clone

from gramwalk import ChainOracleRanker, GrammarWalkRanker
from gramwalk.fixtures import _lanl


def test_walk_ranker_fit_toy3(toy3, coaut):
    est = GrammarWalkRanker(grammar=coaut, epsilon=0.001, seed=4)
    est.fit(toy3)
    assert est.converged_
    assert set(est.ranking_) == {_lanl("r1"), _lanl("r2"), _lanl("r3")}
    assert abs(sum(est.ranking_.values()) - 1.0) < 1e-9


def test_oracle_ranker_fit_toy3(toy3, coaut):
    est = ChainOracleRanker(grammar=coaut).fit(toy3)
    for v in est.ranking_.values():
        assert abs(v - 1 / 3) < 1e-9


def test_top_ordering(toy2x2, coaut_prime):
    est = ChainOracleRanker(grammar=coaut_prime).fit(toy2x2)
    top = est.top(3)
    assert [v for v, _ in top] == [_lanl("r1"), _lanl("r2"), _lanl("r3")]
    assert est.top()[-1][0] == _lanl("r5")


def test_predict_unranked_vertex_scores_zero(toy3, coaut):
    est = ChainOracleRanker(grammar=coaut).fit(toy3)
    scores = est.predict([_lanl("r1"), _lanl("U1")])
    assert scores[0] > 0
    assert scores[1] == 0.0


def test_get_params_and_clone(coaut):
    est = GrammarWalkRanker(grammar=coaut, epsilon=0.01, seed=3)
    params = est.get_params()
    assert params["epsilon"] == 0.01 and params["seed"] == 3
    twin = clone(est)
    assert twin.get_params()["seed"] == 3
    assert not hasattr(twin, "ranking_")


def test_fit_requires_grammar(toy3):
    with pytest.raises(ValueError):
        GrammarWalkRanker().fit(toy3)
    with pytest.raises(ValueError):
        ChainOracleRanker().fit(toy3)


def test_rankers_agree(toy3, coaut):
    walk = GrammarWalkRanker(grammar=coaut, epsilon=0.0005, seed=0).fit(toy3)
    exact = ChainOracleRanker(grammar=coaut).fit(toy3)
    for v, x in exact.ranking_.items():
        assert abs(walk.ranking_[v] - x) < 0.02
