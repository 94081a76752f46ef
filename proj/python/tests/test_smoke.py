import math
from fractions import Fraction

import pytest

import ctxrand


def test_gd_table_row():
    g = ctxrand.build_gd(3)
    assert g.size == 15
    alpha, witness = ctxrand.independence_number(g)
    assert alpha == Fraction(7)
    assert sum(g.weights[v] for v in witness) == alpha
    assert ctxrand.fractional_packing_number(g) == pytest.approx(8, abs=1e-6)
    assert ctxrand.lovasz_theta(g) == pytest.approx(7.6753, abs=1e-3)
    assert ctxrand.theta_gd_analytic(3) == pytest.approx(ctxrand.lovasz_theta(g), abs=1e-4)


def test_pentagon_theta():
    assert ctxrand.lovasz_theta(ctxrand.build_odd_cycle(5)) == pytest.approx(math.sqrt(5), abs=1e-6)


def test_graph_text_round_trip():
    g = ctxrand.build_odd_cycle(7)
    back = ctxrand.graph_from_text(g.to_text())
    assert back.size == 7
    assert back.strict_edges == g.edges
    with pytest.raises(ctxrand.ParseError):
        ctxrand.graph_from_text("graph x")


def test_epsilon_odd_cycle():
    value, strict, full = ctxrand.epsilon_independence(ctxrand.epsilon_expand(ctxrand.build_odd_cycle(5), 0.3))
    assert (strict, full) == (Fraction(5, 2), Fraction(2))
    assert value == pytest.approx(2.15, abs=1e-15)
    assert ctxrand.odd_cycle_threshold(5) == pytest.approx(0.4721359550, abs=1e-9)


def test_qubit_gap():
    q = ctxrand.qubit_contextuality_gap(3)
    assert q["quantum_value"] - q["eps_onc_bound"] == pytest.approx(1 - q["epsilon"], abs=1e-12)


def test_hidden_variable_models():
    model, overlap = ctxrand.hv_agreement("ks", math.pi / 3)
    assert (model, overlap) == pytest.approx((0.375, 0.25))
    est, err = ctxrand.monte_carlo_hv_check("ks", math.pi / 3, 200000, seed=3)
    assert abs(est - 0.375) <= 4 * err
    with pytest.raises(ValueError):
        ctxrand.hv_agreement("ks", 0.0)


def test_guessing_endpoints():
    assert ctxrand.guessing_probability(7.0)["p_guess"] == pytest.approx(1.0, abs=1e-5)
    top = ctxrand.guessing_probability(ctxrand.theta_gd_analytic(3) - 1e-6)
    assert -math.log2(top["p_guess"]) >= 1.5


def test_protocol_replay_and_classical_abort():
    a = ctxrand.simulate_protocol(seed=11, rounds=20000)
    b = ctxrand.simulate_protocol(seed=11, rounds=20000)
    assert a == b
    c = ctxrand.simulate_protocol(seed=11, rounds=20000, delta=0.1, device="classical")
    assert c["aborted"]
    assert c["certified_length"] == 0


def test_toeplitz():
    out = ctxrand.toeplitz_extract([1, 0, 1, 1, 0, 0, 1, 0], [1, 1, 0, 1, 0, 0, 1, 0, 1, 1], 3, 3)
    assert out == [1, 0, 1]
    with pytest.raises(ctxrand.EntropyExhausted):
        ctxrand.toeplitz_extract([0] * 8, [0] * 10, 3, 2)


def test_attacks_and_si_c():
    for ctx in range(6):
        r = ctxrand.deterministic_context_attack("square", ctx)
        assert r["verified"]
        assert math.prod(r["predicted"]) in (1, -1)
    assert ctxrand.si_c_entangled_check(3, [0.3, -0.2, 0.9]) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ctxrand.DomainError):
        ctxrand.si_c_entangled_check(2, [1, 1j])
