"""Distortions of beliefs over states: the power-weighted family, black-box
identification of its parameters, and samplers that check whether an
arbitrary distortion commutes with conditioning.

A distortion is any callable Belief -> Belief on a fixed space that maps the
support onto itself.  `PowerWeighted` is the closed-form family
phi(p)(w) = weights[w] * p(w)**power / (normalizer over the support); the
checkers accept it or any user callable interchangeably.  Checkers draw
their trial inputs from a per-trial counter RNG, so results are
deterministic for a given seed no matter how calls are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .core import (
    DEFAULT_TOL,
    Belief,
    Event,
    Partition,
    StateSpace,
    belief,
    belief_distance,
    condition,
    random_event,
    random_support_mask,
    trial_rng,
    uniform_belief,
    _sample_on_support,
)
from .errors import NonPositiveOutput, ZeroProbabilityEvent

DistortionFn = Callable[[Belief], Belief]


@dataclass(frozen=True)
class PowerWeighted:
    """Closed-form distortion: reweight states and raise probabilities to a power.

    `weights` is stored normalized to sum 1 (it is only identified up to
    scale) and must be strictly positive; `power` must be strictly positive.
    Zero probabilities stay zero: 0**power is taken as 0 and the normalizing
    sum runs over the support only, so the output support equals the input
    support for every belief including boundary ones.
    """

    space: StateSpace
    weights: np.ndarray = field(compare=False)
    power: float
    log_weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (self.space.n,):
            raise ValueError(f"expected {self.space.n} weights, got shape {w.shape}")
        if np.any(w <= 0.0):
            raise ValueError("weights must be strictly positive")
        if not self.power > 0.0:
            raise ValueError("power must be strictly positive")
        w = w / w.sum()
        w.flags.writeable = False
        lw = np.log(w)
        lw.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "log_weights", lw)

    def apply_probs(self, p: np.ndarray) -> np.ndarray:
        return kernels.power_apply(self.log_weights, self.power, np.asarray(p, dtype=np.float64))

    def __call__(self, p: Belief) -> Belief:
        if p.space != self.space:
            raise ValueError("belief lives on a different state space")
        return belief(self.space, self.apply_probs(p.probs))


def apply_power_weighted(d: PowerWeighted, p: Belief) -> Belief:
    """Apply the closed-form distortion to a belief."""
    return d(p)


def identity_distortion() -> DistortionFn:
    return lambda p: p


# Named non-coherent families.  All preserve the support (so they are
# positive distortions) but none has the weight-and-power form; they serve
# as counterexamples for every checker in the package.

def additive_smoothing(eps: float) -> DistortionFn:
    """phi(p) proportional to p + eps on the support of p."""

    def d(p: Belief) -> Belief:
        v = np.where(p.probs > 0.0, p.probs + eps, 0.0)
        return belief(p.space, v)

    return d


def uniform_mixture(lam: float) -> DistortionFn:
    """Mix p with the uniform distribution on its support."""

    def d(p: Belief) -> Belief:
        sup = p.probs > 0.0
        v = np.where(sup, (1.0 - lam) * p.probs + lam / sup.sum(), 0.0)
        return belief(p.space, v)

    return d


def support_softmax(beta: float) -> DistortionFn:
    """phi(p) proportional to exp(beta * p) on the support of p."""

    def d(p: Belief) -> Belief:
        v = np.where(p.probs > 0.0, np.exp(beta * p.probs), 0.0)
        return belief(p.space, v)

    return d


def odds_squash() -> DistortionFn:
    """phi(p) proportional to p / (1 + p)."""

    def d(p: Belief) -> Belief:
        return belief(p.space, p.probs / (1.0 + p.probs))

    return d


def quadratic_tilt() -> DistortionFn:
    """phi(p) proportional to p + p**2."""

    def d(p: Belief) -> Belief:
        return belief(p.space, p.probs + p.probs**2)

    return d


@dataclass(frozen=True)
class CoherenceReport:
    """Outcome of a sampled commutation check.

    `witness` is the trial input attaining the worst deviation and is
    present exactly when that deviation exceeds the tolerance; its shape
    depends on the checker that produced the report.
    """

    passed: bool
    max_deviation: float
    tol: float
    witness: Optional[tuple]

    @classmethod
    def build(cls, max_deviation: float, tol: float, worst: Optional[tuple]) -> "CoherenceReport":
        failed = max_deviation > tol
        return cls(not failed, max_deviation, tol, worst if failed else None)


def _space_of(d, space: Optional[StateSpace]) -> StateSpace:
    if space is not None:
        return space
    if isinstance(d, PowerWeighted):
        return d.space
    raise ValueError("pass `space` when the distortion is a bare callable")


def check_coherence(
    d: DistortionFn,
    trials: int = 1000,
    seed: int = 0,
    *,
    space: Optional[StateSpace] = None,
    tol: float = DEFAULT_TOL,
) -> CoherenceReport:
    """Sampled test that distorting commutes with conditioning.

    Draws (p, E) pairs with p(E) > 0, including boundary beliefs, and
    measures the max-norm gap between distort-then-condition and
    condition-then-distort.  A conditioning of the distorted belief that
    fails outright (mass vanished from E) counts as a deviation of 1.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sp = _space_of(d, space)
    if sp.n < 2:
        raise ValueError("need at least two states to condition on proper events")
    max_dev = 0.0
    worst: Optional[tuple] = None
    for i in range(trials):
        rng = trial_rng(seed, i)
        sup = random_support_mask(rng, sp.n, min_size=2)
        p = _sample_on_support(rng, sp, sup)
        e = random_event(rng, sp.n)
        while not np.any(sup & e.mask(sp)):
            e = random_event(rng, sp.n)
        gap = commutation_gap(d, p, e)
        if gap > max_dev:
            max_dev = gap
            worst = (p, e)
    return CoherenceReport.build(max_dev, tol, worst)


def commutation_gap(d: DistortionFn, p: Belief, e: Event) -> float:
    """Max-norm gap between d(p|E) and d(p)|E at one input."""
    lhs = d(condition(p, e))
    try:
        rhs = condition(d(p), e)
    except ZeroProbabilityEvent:
        return 1.0
    return belief_distance(lhs, rhs)


def identify_weights(d: DistortionFn, *, space: Optional[StateSpace] = None) -> np.ndarray:
    """Recover the state weights of a positive distortion from its value at uniform.

    At the uniform belief the probability term is constant, so the distorted
    vector is the (normalized) weight vector itself.
    """
    sp = _space_of(d, space)
    out = d(uniform_belief(sp)).probs
    if np.any(out <= 0.0):
        raise NonPositiveOutput("distortion returned a zero entry at the uniform belief")
    return out / out.sum()


def identify_power(d: DistortionFn, *, space: Optional[StateSpace] = None) -> float:
    """Recover the probability exponent of a positive distortion.

    Uses the two-step ratio at the uniform belief: applying the distortion
    twice multiplies log-ratios by (1 + power).  When the distortion fixes
    the uniform belief (uniform weights) that ratio is uninformative, so a
    fixed skewed probe is used instead; for the identity map the exponent is
    not identified and the conventional value 1 is returned.
    """
    sp = _space_of(d, space)
    pu = uniform_belief(sp)
    b1 = d(pu)
    if np.any(b1.probs <= 0.0):
        raise NonPositiveOutput("distortion returned a zero entry at the uniform belief")
    if belief_distance(b1, pu) > DEFAULT_TOL:
        b2 = d(b1)
        if np.any(b2.probs <= 0.0):
            raise NonPositiveOutput("distortion returned a zero entry on a full-support belief")
        l1 = np.log(b1.probs)
        l2 = np.log(b2.probs)
        i = int(np.argmax(l1))
        j = int(np.argmin(l1))
        return float((l2[i] - l2[j]) / (l1[i] - l1[j])) - 1.0
    probe_raw = np.full(sp.n, 0.2)
    probe_raw[0] = 0.6
    probe = belief(sp, probe_raw)
    c = d(probe)
    if np.any(c.probs <= 0.0):
        raise NonPositiveOutput("distortion returned a zero entry on a full-support belief")
    i, j = 0, int(np.argmin(probe.probs))
    num = np.log(c.probs[i] / c.probs[j])
    den = np.log(probe.probs[i] / probe.probs[j])
    return float(num / den)


def check_ratio_test_alpha1(
    d: DistortionFn,
    trials: int = 200,
    seed: int = 0,
    *,
    space: Optional[StateSpace] = None,
    tol: float = 1e-7,
) -> bool:
    """Sampled cross-ratio test for a unit probability exponent.

    For two beliefs and two states, distorted odds ratios preserve the raw
    cross ratio exactly when the exponent is 1.  Deviations are measured on
    the log scale relative to the size of the raw log cross ratio, so `tol`
    bounds the implied deviation of the exponent from 1.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sp = _space_of(d, space)
    full = np.ones(sp.n, dtype=bool)
    for t in range(trials):
        rng = trial_rng(seed, t)
        p = _sample_on_support(rng, sp, full)
        q = _sample_on_support(rng, sp, full)
        i, j = rng.choice(sp.n, size=2, replace=False)
        fp, fq = d(p), d(q)
        if min(fp.probs[j], fq.probs[i], fp.probs[i], fq.probs[j]) <= 0.0:
            return False
        log_lhs = np.log(fp.probs[i]) - np.log(fp.probs[j]) + np.log(fq.probs[j]) - np.log(fq.probs[i])
        log_rhs = np.log(p.probs[i]) - np.log(p.probs[j]) + np.log(q.probs[j]) - np.log(q.probs[i])
        dev = abs(log_lhs - log_rhs) / max(abs(log_rhs), 1.0)
        if dev > tol:
            return False
    return True


def _block_probs(b: Belief, pi: Partition) -> np.ndarray:
    return np.array([b.probs[e.mask(b.space)].sum() for e in pi.blocks])


def check_pi_marginality(
    d: DistortionFn,
    pi: Partition,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Sampled test that distorted block probabilities depend only on block probabilities.

    Pairs of beliefs agreeing on every block mass are generated two ways:
    the first two trials use the canonical pairs that pin down the family
    (mass split across two block states versus concentrated on one, and two
    different single states of the same block), the rest redistribute each
    block's mass with a fresh Dirichlet draw.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sp = pi.space
    for t in range(trials):
        rng = trial_rng(seed, t)
        pair = _canonical_pair(sp, pi, t) if t < 2 else None
        if pair is None:
            base = _sample_on_support(rng, sp, np.ones(sp.n, dtype=bool))
            p, q = base, _redistribute_within_blocks(rng, base, pi)
        else:
            p, q = pair
        if np.abs(_block_probs(d(p), pi) - _block_probs(d(q), pi)).max() > tol:
            return False
    return True


def _canonical_pair(sp: StateSpace, pi: Partition, which: int):
    for e in pi.blocks:
        if 1 < len(e.members) < sp.n:
            inside = sorted(e.members)[:2]
            outside = min(set(range(sp.n)) - e.members)
            a = np.zeros(sp.n)
            b = np.zeros(sp.n)
            if which == 0:
                a[inside[0]] = a[inside[1]] = 0.25
                a[outside] = 0.5
                b[inside[0]] = 0.5
                b[outside] = 0.5
            else:
                a[inside[0]] = 0.5
                a[outside] = 0.5
                b[inside[1]] = 0.5
                b[outside] = 0.5
            return belief(sp, a), belief(sp, b)
    return None


def _redistribute_within_blocks(rng: np.random.Generator, p: Belief, pi: Partition) -> Belief:
    v = np.zeros(p.space.n)
    for e in pi.blocks:
        mask = e.mask(p.space)
        mass = p.probs[mask].sum()
        if mass <= 0.0:
            continue
        k = int(mask.sum())
        if k == 1:
            v[mask] = mass
        else:
            draws = rng.exponential(size=k)
            v[mask] = mass * draws / draws.sum()
    return belief(p.space, v)
