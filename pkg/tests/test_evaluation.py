"""Normalized values, harmonic scores, aggregation, and ranking."""

from __future__ import annotations

import math
import statistics

import numpy as np
import pytest

from benchmark_data import (AGENT_COUNT, ENV_SIZE, EXPECTED_MEANS,
                            EXPECTED_SCORES)
from evacsim import (Environment, MeanStd, MetricsBundle, PrimeBundle,
                     ReferenceResult, RunAggregate, RunRecord, aggregate_runs,
                     evaluate, phi, prime_values, rank_configurations, xi)


def _metrics(cid):
    m = EXPECTED_MEANS[cid]
    return MetricsBundle(t_g=m["t_g"], t_bar=m["t_bar"], d_bar=m["d_bar"],
                         s_bar=m["s_bar"], w_bar=m["w_bar"],
                         agents=AGENT_COUNT[cid.split("-")[0]])


def _reference(cid):
    m = EXPECTED_MEANS[cid]
    return ReferenceResult(t_ar=m["t_ar"], s_ar=m["s_ar"], w_ar=m["w_ar"],
                           agent=None)


def _environment(cid):
    return Environment(*ENV_SIZE[cid.split("-")[0]])


def _primes_from_table(cid):
    e = EXPECTED_SCORES[cid]
    return PrimeBundle(t_g_prime=e["t_g_prime"], t_bar_prime=e["t_bar_prime"],
                       d_bar=EXPECTED_MEANS[cid]["d_bar"],
                       s_bar_prime=e["s_bar_prime"],
                       w_bar_prime=e["w_bar_prime"])


def test_prime_value_examples():
    primes = prime_values(_metrics("s1-a"), _reference("s1-a"),
                          _environment("s1-a"))
    assert primes.t_g_prime == pytest.approx(52.90 / 32.32, abs=1e-12)
    assert primes.t_g_prime == pytest.approx(1.6367, abs=1e-4)
    assert primes.w_bar_prime == pytest.approx(35.31 / math.hypot(30, 30),
                                               abs=1e-12)
    assert primes.w_bar_prime == pytest.approx(0.8323, abs=1e-4)
    assert primes.d_bar == EXPECTED_MEANS["s1-a"]["d_bar"]


def test_matching_speeds_give_e():
    metrics = MetricsBundle(t_g=10.0, t_bar=8.0, d_bar=1.2, s_bar=1.15,
                            w_bar=12.0, agents=5)
    ref = ReferenceResult(t_ar=9.0, s_ar=1.15, w_ar=11.0, agent=None)
    primes = prime_values(metrics, ref, Environment(30, 30))
    assert primes.s_bar_prime == pytest.approx(math.e, abs=1e-12)


def test_degenerate_reference_is_rejected():
    metrics = MetricsBundle(t_g=10.0, t_bar=8.0, d_bar=1.2, s_bar=1.0,
                            w_bar=12.0, agents=5)
    bad = ReferenceResult(t_ar=0.0, s_ar=1.15, w_ar=11.0, agent=None)
    with pytest.raises(ValueError):
        prime_values(metrics, bad, Environment(30, 30))


def test_phi_known_values():
    assert phi(_primes_from_table("s1-b")) == pytest.approx(1.2256, abs=1e-3)
    assert phi(_primes_from_table("s2-a")) == pytest.approx(0.9018, abs=1e-3)
    ones = PrimeBundle(1.0, 1.0, 1.0, 1.0, 1.0)
    assert phi(ones) == 1.0
    assert xi(ones) == 1.0


def test_xi_known_values():
    assert xi(_primes_from_table("s1-b")) == pytest.approx(1.6775, abs=1e-3)
    assert xi(_primes_from_table("s4-c")) == pytest.approx(2.0847, abs=1e-3)


def test_scores_are_harmonic_means():
    rng = np.random.default_rng(101)
    for _ in range(200):
        v = rng.uniform(0.05, 9.0, size=5)
        bundle = PrimeBundle(*v)
        assert phi(bundle) == pytest.approx(statistics.harmonic_mean(v),
                                            rel=1e-12)
        assert xi(bundle) == pytest.approx(
            statistics.harmonic_mean([v[0], v[1], v[2], v[3]]), rel=1e-12)
        assert v.min() - 1e-12 <= phi(bundle) <= v.max() + 1e-12


def test_score_monotonicity():
    rng = np.random.default_rng(77)
    for _ in range(200):
        v = rng.uniform(0.05, 9.0, size=5)
        i = int(rng.integers(0, 5))
        bumped = v.copy()
        bumped[i] += float(rng.uniform(0.1, 2.0))
        assert phi(PrimeBundle(*bumped)) > phi(PrimeBundle(*v))
        if i < 4:
            assert xi(PrimeBundle(*bumped)) > xi(PrimeBundle(*v))
        else:
            assert xi(PrimeBundle(*bumped)) == xi(PrimeBundle(*v))


def test_time_scale_cancels_in_primes():
    rng = np.random.default_rng(5)
    metrics = MetricsBundle(t_g=40.0, t_bar=30.0, d_bar=1.1, s_bar=0.9,
                            w_bar=33.0, agents=10)
    env = Environment(30, 30)
    base = prime_values(metrics, ReferenceResult(20.0, 1.15, 25.0, None), env)
    for _ in range(50):
        k = float(rng.uniform(0.2, 8.0))
        scaled_metrics = MetricsBundle(t_g=40.0 * k, t_bar=30.0 * k,
                                       d_bar=1.1, s_bar=0.9, w_bar=33.0,
                                       agents=10)
        scaled_ref = ReferenceResult(20.0 * k, 1.15, 25.0, None)
        scaled = prime_values(scaled_metrics, scaled_ref, env)
        assert scaled.t_g_prime == pytest.approx(base.t_g_prime, rel=1e-12)
        assert scaled.t_bar_prime == pytest.approx(base.t_bar_prime,
                                                   rel=1e-12)


def test_evaluate_wires_scores_to_primes():
    result = evaluate(_metrics("s1-a"), _reference("s1-a"),
                      _environment("s1-a"))
    assert result.phi == phi(result.primes)
    assert result.xi == xi(result.primes)


def test_reconstructed_scores_match_published():
    # scores recomputed from the published normalized values must sit within
    # 0.02 of the published scores for every configuration
    for cid, expected in EXPECTED_SCORES.items():
        primes = _primes_from_table(cid)
        assert abs(phi(primes) - expected["phi"]) <= 0.02, cid
        assert abs(xi(primes) - expected["xi"]) <= 0.02, cid


def _record(cid, run, phi_val, xi_val):
    return RunRecord(config_id=cid, run=run, seed=run,
                     metrics=MetricsBundle(t_g=10.0 + run, t_bar=8.0 + run,
                                           d_bar=1.1, s_bar=1.0, w_bar=10.0,
                                           agents=4),
                     phi=phi_val, xi=xi_val)


def test_aggregate_matches_stdlib_statistics():
    phis = [1.30, 1.25, 1.40]
    records = [_record("a", i, p, p + 0.2) for i, p in enumerate(phis)]
    agg = aggregate_runs(records)
    assert agg.config_id == "a"
    assert agg.n_runs == 3
    assert agg.phi.mean == pytest.approx(statistics.mean(phis), rel=1e-12)
    assert agg.phi.std == pytest.approx(statistics.stdev(phis), rel=1e-12)
    assert agg.metrics["t_g"].mean == pytest.approx(11.0)


def test_aggregate_rejects_mixed_configs():
    with pytest.raises(ValueError):
        aggregate_runs([_record("a", 0, 1.0, 1.0), _record("b", 1, 1.0, 1.0)])
    with pytest.raises(ValueError):
        aggregate_runs([])


def test_aggregate_without_scores_leaves_them_unset():
    records = [_record("a", 0, None, None), _record("a", 1, None, None)]
    agg = aggregate_runs(records)
    assert agg.phi is None and agg.xi is None


def _aggregate(cid, phi_val, xi_val):
    return RunAggregate(config_id=cid, n_runs=1, metrics={}, reference={},
                        primes={}, phi=MeanStd(phi_val, 0.0),
                        xi=MeanStd(xi_val, 0.0))


def _order(aggs, metric):
    return [a.config_id for a in rank_configurations(aggs, metric)]


def test_ranking_sorts_by_mean_score():
    aggs = [_aggregate("a", 1.5, 1.9), _aggregate("b", 1.2, 2.0),
            _aggregate("c", 1.3, 1.4)]
    assert _order(aggs, "phi") == ["b", "c", "a"]
    assert _order(aggs, "xi") == ["c", "a", "b"]


def test_ranking_breaks_ties_by_id():
    aggs = [_aggregate("z", 1.2, 1.2), _aggregate("a", 1.2, 1.2),
            _aggregate("m", 1.5, 1.5)]
    assert _order(aggs, "phi") == ["a", "z", "m"]


def test_ranking_requires_scores_and_known_metric():
    aggs = [_aggregate("a", 1.2, 1.2),
            RunAggregate(config_id="b", n_runs=1, metrics={}, reference={},
                         primes={}, phi=None, xi=None)]
    with pytest.raises(ValueError, match="not comparable"):
        rank_configurations(aggs, "phi")
    with pytest.raises(ValueError, match="unknown ranking metric"):
        rank_configurations([_aggregate("a", 1.0, 1.0)], "psi")
