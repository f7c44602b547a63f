"""Reference-normalized metric values and the comparative scores.

A solo baseline run turns raw metrics into dimensionless primes:

- t_g' = t_g / t_ar, t_bar' = t_bar / t_ar
- s_bar' = exp(s_ar / s_bar), exponential so speed differences weigh less
- w_bar' = w_bar / hypot(width, height), scaled by the environment diagonal
- d_bar is carried through as measured (already a ratio of counts)

phi is the harmonic mean of all five; xi drops the distance term and keeps
four. Lower is better for both. Harmonic averaging keeps any single weak
value from hiding behind the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import ReferenceResult
from .metrics import MetricsBundle
from .scenario import Environment

__all__ = ["PrimeBundle", "EvaluationResult", "RunRecord", "MeanStd",
           "RunAggregate", "prime_values", "phi", "xi", "evaluate",
           "aggregate_runs", "rank_configurations"]


@dataclass(frozen=True)
class PrimeBundle:
    t_g_prime: float
    t_bar_prime: float
    d_bar: float
    s_bar_prime: float
    w_bar_prime: float

    def as_dict(self) -> dict[str, float]:
        return {"t_g_prime": self.t_g_prime, "t_bar_prime": self.t_bar_prime,
                "d_bar": self.d_bar, "s_bar_prime": self.s_bar_prime,
                "w_bar_prime": self.w_bar_prime}


@dataclass(frozen=True)
class EvaluationResult:
    primes: PrimeBundle
    phi: float
    xi: float


def prime_values(metrics: MetricsBundle, reference: ReferenceResult,
                 environment: Environment) -> PrimeBundle:
    """Normalize one run's metrics against its reference baseline."""
    if reference.t_ar <= 0 or reference.s_ar <= 0 or reference.w_ar <= 0:
        raise ValueError("degenerate reference: baseline values must be positive")
    if metrics.s_bar <= 0:
        raise ValueError("degenerate metrics: s_bar must be positive")
    return PrimeBundle(
        t_g_prime=metrics.t_g / reference.t_ar,
        t_bar_prime=metrics.t_bar / reference.t_ar,
        d_bar=metrics.d_bar,
        s_bar_prime=math.exp(reference.s_ar / metrics.s_bar),
        w_bar_prime=metrics.w_bar / environment.hypotenuse,
    )


def _check_positive(values, what: str):
    for v in values:
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"{what} requires positive finite inputs, got {v}")


def phi(primes: PrimeBundle) -> float:
    """Five-term harmonic mean; lower means the crowd evacuated better."""
    vals = (primes.t_g_prime, primes.t_bar_prime, primes.d_bar,
            primes.s_bar_prime, primes.w_bar_prime)
    _check_positive(vals, "phi")
    return 5.0 / sum(1.0 / v for v in vals)


def xi(primes: PrimeBundle) -> float:
    """Four-term variant without the walked-distance prime."""
    vals = (primes.t_g_prime, primes.t_bar_prime, primes.d_bar,
            primes.s_bar_prime)
    _check_positive(vals, "xi")
    return 4.0 / sum(1.0 / v for v in vals)


def evaluate(metrics: MetricsBundle, reference: ReferenceResult,
             environment: Environment) -> EvaluationResult:
    primes = prime_values(metrics, reference, environment)
    return EvaluationResult(primes, phi(primes), xi(primes))


@dataclass(frozen=True)
class RunRecord:
    """One (configuration, run) outcome; phi/xi absent when the scenario was
    not comparable (primes still carry the per-configuration normalization)."""

    config_id: str
    run: int
    seed: int
    metrics: MetricsBundle
    reference: ReferenceResult | None = None
    primes: PrimeBundle | None = None
    phi: float | None = None
    xi: float | None = None


@dataclass(frozen=True)
class MeanStd:
    mean: float
    std: float


@dataclass(frozen=True)
class RunAggregate:
    """Per-configuration mean and sample std over its runs."""

    config_id: str
    n_runs: int
    metrics: dict[str, MeanStd]
    reference: dict[str, MeanStd] | None
    primes: dict[str, MeanStd] | None
    phi: MeanStd | None
    xi: MeanStd | None


def _mean_std(values: list[float]) -> MeanStd:
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return MeanStd(mean, 0.0)
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return MeanStd(mean, math.sqrt(var))


def aggregate_runs(records: list[RunRecord]) -> RunAggregate:
    """Collapse the runs of one configuration into mean/std per field.

    The score statistics average per-run ratios: each run's phi/xi is
    computed first, then averaged, rather than scoring the mean metrics.
    """
    if not records:
        raise ValueError("no run records to aggregate")
    ids = {r.config_id for r in records}
    if len(ids) != 1:
        raise ValueError(f"records mix configurations: {sorted(ids)}")

    metric_keys = ("t_g", "t_bar", "d_bar", "s_bar", "w_bar")
    metrics = {k: _mean_std([getattr(r.metrics, k) for r in records])
               for k in metric_keys}

    reference = primes = agg_phi = agg_xi = None
    if all(r.reference is not None for r in records):
        reference = {k: _mean_std([getattr(r.reference, k) for r in records])
                     for k in ("t_ar", "s_ar", "w_ar")}
        primes = {k: _mean_std([getattr(r.primes, k) for r in records])
                  for k in ("t_g_prime", "t_bar_prime", "s_bar_prime", "w_bar_prime")}
    if all(r.phi is not None for r in records):
        agg_phi = _mean_std([r.phi for r in records])
        agg_xi = _mean_std([r.xi for r in records])

    return RunAggregate(records[0].config_id, len(records), metrics,
                        reference, primes, agg_phi, agg_xi)


def rank_configurations(aggregates: list[RunAggregate],
                        metric: str = "phi") -> list[RunAggregate]:
    """Order configurations by mean score, best (lowest) first.

    Means closer than 1e-9 count as tied and fall back to id order. Raises
    when any aggregate lacks the score, which happens exactly when the
    configurations were not comparable.
    """
    if metric not in ("phi", "xi"):
        raise ValueError(f"unknown ranking metric '{metric}'")
    for agg in aggregates:
        if getattr(agg, metric) is None:
            raise ValueError("configurations not comparable; phi/xi undefined")

    ordered = sorted(aggregates, key=lambda a: (getattr(a, metric).mean, a.config_id))
    # means within 1e-9 are ties: reorder each tied stretch by id
    out: list[RunAggregate] = []
    i = 0
    while i < len(ordered):
        j = i + 1
        while (j < len(ordered)
               and abs(getattr(ordered[j], metric).mean
                       - getattr(ordered[i], metric).mean) < 1e-9):
            j += 1
        out.extend(sorted(ordered[i:j], key=lambda a: a.config_id))
        i = j
    return out
