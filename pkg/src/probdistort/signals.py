"""Signal structures and their distortions: Bayesian posteriors from
likelihood matrices, per-state distortions of signal distributions, and the
two-sided (prior + likelihood) update with its commutation checker.

Per-state signal maps act on plain probability vectors over the signal
space.  In the two-sided update the signal maps may return non-normalized
non-negative vectors; everything else in the package keeps distributions
normalized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    SUM_TOL,
    Belief,
    StateSpace,
    _sample_on_support,
    belief,
    belief_distance,
    random_support_mask,
    trial_rng,
)
from .distortion import CoherenceReport, DistortionFn, PowerWeighted, identify_power
from .errors import SpaceTooSmall, ZeroProbabilitySignal

VecMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SignalSpace:
    """Ordered, uniquely labeled finite set of signal outcomes (at least two)."""

    labels: tuple[str, ...]

    def __init__(self, labels):
        object.__setattr__(self, "labels", tuple(str(x) for x in labels))
        if len(self.labels) < 2:
            raise ValueError("signal space needs at least two signals")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("signal labels must be unique")

    @property
    def m(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class BlackwellExperiment:
    """Row-stochastic likelihood matrix: rows[w, t] = chance of signal t in state w."""

    space: StateSpace
    signals: SignalSpace
    rows: np.ndarray = field(compare=False)

    def __post_init__(self):
        r = np.asarray(self.rows, dtype=np.float64)
        if r.shape != (self.space.n, self.signals.m):
            raise ValueError(f"expected a {self.space.n}x{self.signals.m} matrix, got {r.shape}")
        if np.any(r < 0.0):
            raise ValueError("likelihoods must be non-negative")
        sums = r.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > SUM_TOL):
            raise ValueError("each row must sum to 1")
        r = r.copy()
        r.flags.writeable = False
        object.__setattr__(self, "rows", r)

    def likelihood(self, theta: int) -> np.ndarray:
        return self.rows[:, theta]


def bayes_posterior(p: Belief, sigma: BlackwellExperiment, theta: int) -> Belief:
    """Posterior over states after observing signal `theta`."""
    if p.space != sigma.space:
        raise ValueError("belief and experiment live on different state spaces")
    numer = p.probs * sigma.likelihood(theta)
    total = float(numer.sum())
    if total <= 0.0:
        raise ZeroProbabilitySignal(f"signal {theta} has zero probability under this prior")
    return belief(p.space, numer / total)


# Vector-level map families over distributions on the signal space.

def vec_identity() -> VecMap:
    return lambda v: v


def vec_power_weighted(weights: Sequence[float], power: float) -> VecMap:
    """Normalized weight-and-power map on probability vectors (zeros preserved)."""
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w <= 0.0) or not power > 0.0:
        raise ValueError("weights and power must be strictly positive")

    def g(v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        sup = v > 0.0
        out[sup] = w[sup] * v[sup] ** power
        return out / out.sum()

    return g


def vec_scaled_power(gamma: Sequence[float], power: float) -> VecMap:
    """Non-normalized map v -> gamma * v**power (the two-sided update's signal form)."""
    gam = np.asarray(gamma, dtype=np.float64)
    if np.any(gam <= 0.0) or not power > 0.0:
        raise ValueError("gamma and power must be strictly positive")

    def g(v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        sup = v > 0.0
        out[sup] = gam[sup] * v[sup] ** power
        return out

    return g


def vec_additive_smoothing(eps: float) -> VecMap:
    def g(v: np.ndarray) -> np.ndarray:
        out = np.where(v > 0.0, v + eps, 0.0)
        return out / out.sum()

    return g


@dataclass(frozen=True)
class BlackwellDistortion:
    """One signal-distribution map per state, each acting on the same signal space."""

    space: StateSpace
    signals: SignalSpace
    maps: tuple[VecMap, ...]

    def __post_init__(self):
        if len(self.maps) != self.space.n:
            raise ValueError("need exactly one map per state")

    @classmethod
    def power_weighted(
        cls,
        space: StateSpace,
        signals: SignalSpace,
        weights_by_state: Sequence[Sequence[float]],
        power_by_state: Sequence[float],
    ) -> "BlackwellDistortion":
        maps = tuple(
            vec_power_weighted(w, a) for w, a in zip(weights_by_state, power_by_state, strict=True)
        )
        return cls(space, signals, maps)

    @classmethod
    def identity(cls, space: StateSpace, signals: SignalSpace) -> "BlackwellDistortion":
        return cls(space, signals, tuple(vec_identity() for _ in range(space.n)))

    def apply(self, sigma: BlackwellExperiment) -> BlackwellExperiment:
        rows = np.vstack([g(sigma.rows[i]) for i, g in enumerate(self.maps)])
        return BlackwellExperiment(self.space, self.signals, rows)


def _vec_condition(v: np.ndarray, mask: np.ndarray) -> Optional[np.ndarray]:
    total = v[mask].sum()
    if total <= 0.0:
        return None
    return np.where(mask, v, 0.0) / total


def _sample_vec(rng: np.random.Generator, mask: np.ndarray) -> np.ndarray:
    v = np.zeros(mask.shape[0])
    k = int(mask.sum())
    if k == 1:
        v[mask] = 1.0
        return v
    draws = rng.exponential(size=k)
    v[mask] = draws / draws.sum()
    return v


def check_blackwell_signal_coherence(
    bd: BlackwellDistortion,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float = DEFAULT_TOL,
) -> CoherenceReport:
    """Per-state sampled test that each signal map commutes with conditioning
    on signal subsets; reports the worst deviation across states.

    Witness shape: (state index, signal distribution, signal subset).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    m = bd.signals.m
    max_dev = 0.0
    worst: Optional[tuple] = None
    for state, g in enumerate(bd.maps):
        for t in range(trials):
            rng = trial_rng(seed, state * trials + t)
            sup = random_support_mask(rng, m, min_size=2)
            v = _sample_vec(rng, sup)
            size = int(rng.integers(1, m))
            s_mask = np.zeros(m, dtype=bool)
            s_mask[rng.choice(m, size=size, replace=False)] = True
            if not np.any(s_mask & sup):
                continue
            cond = _vec_condition(v, s_mask)
            lhs = g(cond)
            rhs = _vec_condition(g(v), s_mask)
            gap = 1.0 if rhs is None else float(np.abs(lhs - rhs).max())
            if gap > max_dev:
                max_dev = gap
                worst = (state, v, tuple(np.flatnonzero(s_mask)))
    return CoherenceReport.build(max_dev, tol, worst)


@dataclass(frozen=True)
class GretherSpec:
    """A prior distortion together with per-state signal-likelihood distortions.

    `signal_maps[w]` may return non-negative vectors that do not sum to one;
    they must preserve the support of their input.
    """

    space: StateSpace
    signals: SignalSpace
    prior_map: DistortionFn
    signal_maps: tuple[VecMap, ...]

    def __post_init__(self):
        if len(self.signal_maps) != self.space.n:
            raise ValueError("need exactly one signal map per state")

    @classmethod
    def power_family(
        cls,
        space: StateSpace,
        signals: SignalSpace,
        weights: Sequence[float],
        power: float,
        gamma: Optional[Sequence[float]] = None,
    ) -> "GretherSpec":
        """The commuting family: shared exponent, state-independent signal scaling."""
        gam = np.ones(signals.m) if gamma is None else np.asarray(gamma, dtype=np.float64)
        g = vec_scaled_power(gam, power)
        return cls(space, signals, PowerWeighted(space, np.asarray(weights, float), power), (g,) * space.n)

    @classmethod
    def original_form(
        cls,
        space: StateSpace,
        signals: SignalSpace,
        prior_power: float,
        signal_power: float,
    ) -> "GretherSpec":
        """Plain power distortions of prior and likelihood with separate exponents."""
        f = PowerWeighted(space, np.ones(space.n), prior_power)
        g = vec_scaled_power(np.ones(signals.m), signal_power)
        return cls(space, signals, f, (g,) * space.n)

    @classmethod
    def undistorted(cls, space: StateSpace, signals: SignalSpace) -> "GretherSpec":
        return cls(space, signals, lambda p: p, tuple(vec_identity() for _ in range(space.n)))


def grether_update(spec: GretherSpec, p: Belief, sigma: BlackwellExperiment, theta: int) -> Belief:
    """Bayes with distorted inputs: distorted prior times distorted likelihood, normalized."""
    fp = spec.prior_map(p).probs
    lik = np.array([spec.signal_maps[w](sigma.rows[w])[theta] for w in range(spec.space.n)])
    numer = fp * lik
    total = float(numer.sum())
    if total <= 0.0:
        raise ZeroProbabilitySignal(f"signal {theta} has zero distorted probability")
    return belief(spec.space, numer / total)


def _require_checkable(spec: GretherSpec) -> None:
    if spec.space.n < 3 or spec.signals.m < 2:
        raise SpaceTooSmall(
            "two-sided coherence checking needs at least 3 states and 2 signals"
        )


def check_gretherian_coherence(
    spec: GretherSpec,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float = DEFAULT_TOL,
) -> CoherenceReport:
    """Sampled test that updating with distorted inputs equals distorting the posterior.

    Draws full-support priors and experiments, picks a signal with positive
    probability both ways, and compares the two update orders in max norm.
    Witness shape: (prior, likelihood rows, signal index).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _require_checkable(spec)
    n, m = spec.space.n, spec.signals.m
    full = np.ones(n, dtype=bool)
    max_dev = 0.0
    worst: Optional[tuple] = None
    for t in range(trials):
        rng = trial_rng(seed, t)
        p = _sample_on_support(rng, spec.space, full)
        rows = rng.exponential(size=(n, m))
        rows /= rows.sum(axis=1, keepdims=True)
        sigma = BlackwellExperiment(spec.space, spec.signals, rows)
        theta = int(rng.integers(m))
        lhs = spec.prior_map(bayes_posterior(p, sigma, theta))
        rhs = grether_update(spec, p, sigma, theta)
        gap = belief_distance(lhs, rhs)
        if gap > max_dev:
            max_dev = gap
            worst = (p, rows, theta)
    return CoherenceReport.build(max_dev, tol, worst)


def _signal_probe_grid(m: int, seed: int, extra: int = 8) -> list[np.ndarray]:
    grid: list[np.ndarray] = []
    for i in range(m):
        v = np.zeros(m)
        v[i] = 1.0
        grid.append(v)
    for i in range(m):
        for j in range(i + 1, m):
            v = np.zeros(m)
            v[i] = v[j] = 0.5
            grid.append(v)
    grid.append(np.full(m, 1.0 / m))
    rng = np.random.default_rng(seed)
    for _ in range(extra):
        draws = rng.exponential(size=m)
        grid.append(draws / draws.sum())
    return grid


def normalized_grether_check(
    spec: GretherSpec,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float = DEFAULT_TOL,
) -> bool:
    """True when the signal maps stay normalized and the two update orders commute.

    Normalization is probed on a fixed grid over the signal simplex
    (vertices, edge midpoints, barycenter) plus seeded samples.  When both
    conditions hold, the prior map must be a unit-exponent reweighting, and
    that is cross-checked here.
    """
    _require_checkable(spec)
    for g in spec.signal_maps:
        for v in _signal_probe_grid(spec.signals.m, seed):
            out = g(v)
            if np.any(out < 0.0) or abs(float(out.sum()) - 1.0) > tol:
                return False
    if not check_gretherian_coherence(spec, trials, seed, tol=tol).passed:
        return False
    recovered = identify_power(spec.prior_map, space=spec.space)
    if abs(recovered - 1.0) > 1e-7:
        raise AssertionError(
            f"normalized commuting update implies a unit exponent, got {recovered!r}"
        )
    return True
