from vhss.harness import games
from vhss.params import toy_params
from vhss.ring import RingElement
from vhss.sampling import RngHandle
from vhss.scheme import PartialResult, vhss_ver


def test_correctness_small():
    rep = games.run_correctness_game(toy_params(), 20, RngHandle.from_string("corr"), max_size=12)
    assert rep.events == 0 and rep.passed
    assert rep.bound < 1e-6


def test_correctness_deterministic():
    a = games.run_correctness_game(toy_params(), 5, RngHandle.from_string("det"), max_size=8)
    b = games.run_correctness_game(toy_params(), 5, RngHandle.from_string("det"), max_size=8)
    assert a.to_text() == b.to_text()


def test_each_strategy_fails_to_forge():
    prm = toy_params()
    for strat in games.STRATEGIES:
        rep = games.run_verifiability_game(prm, 40, strat, RngHandle.from_string(strat),
                                           queries_per_key=20)
        assert rep.events == 0 and rep.passed, strat
        assert rep.extra["honest_rejects"] == 0


def test_white_box_control_always_forges():
    rep = games.run_verifiability_game(toy_params(), 20, "mixed", RngHandle.from_string("wb"),
                                       white_box=True)
    assert rep.events == 20 and rep.passed


def test_clopper_pearson():
    assert games.clopper_pearson_upper(0, 10000) < 5e-4
    assert games.clopper_pearson_lower(0, 10) == 0.0
    assert games.clopper_pearson_upper(10, 10) == 1.0
    assert 0 < games.clopper_pearson_lower(5, 100) < 0.05 < games.clopper_pearson_upper(5, 100)


def test_simulator_verifies(toy_keys):
    prm = toy_params()
    rng = RngHandle.from_string("sim")
    y = RingElement.from_ints([3, 1], prm.r, prm.n)
    s1, s2 = games.context_hiding_sim(toy_keys.vk, y, rng)
    assert vhss_ver(toy_keys.vk, s1, s2) == y


def test_hiding_small():
    rep = games.run_hiding_game(toy_params(), 800, RngHandle.from_string("hide"))
    assert rep.events == 0 and rep.passed


def test_report_text():
    rep = games.GameReport("x", 4, 1, 0.5, True, {"k": "v"})
    assert rep.rate == 0.25
    assert rep.to_text().splitlines() == ["game=x", "trials=4", "events=1", "rate=0.25",
                                          "bound=0.5", "pass=true", "k=v"]


def test_tamper_strategies_change_partial():
    prm = toy_params()
    rng = RngHandle.from_string("tam")
    honest = PartialResult(RingElement.zero(prm.n, prm.r), RingElement.zero(prm.n, prm.r))
    stale = PartialResult(RingElement.one(prm.n, prm.r), RingElement.zero(prm.n, prm.r))
    for s in ("perturb", "scaled"):
        assert games.tamper(s, honest, stale, prm, rng) != honest
    assert games.tamper("replay", honest, stale, prm, rng) is stale
