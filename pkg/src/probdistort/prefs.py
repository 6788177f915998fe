"""Preferences built on distorted beliefs: act evaluation and dynamic
consistency, weighted utility over lotteries, KL-regularized motivated
beliefs, and the betting construction that prices incoherence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .core import (
    DEFAULT_TOL,
    SUM_TOL,
    Belief,
    Event,
    StateSpace,
    _sample_on_support,
    belief,
    condition,
    random_event,
    trial_rng,
)
from .distortion import CoherenceReport, DistortionFn
from .errors import NoConvergence, ZeroProbabilityEvent

# ---------------------------------------------------------------------------
# Acts and dynamic consistency


@dataclass(frozen=True)
class Act:
    """Real payoff per state (utils)."""

    space: StateSpace
    payoffs: np.ndarray = field(compare=False)

    def __post_init__(self):
        v = np.asarray(self.payoffs, dtype=np.float64)
        if v.shape != (self.space.n,):
            raise ValueError(f"expected {self.space.n} payoffs, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("payoffs must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "payoffs", v)


def act_value(f: Act, d: DistortionFn, p: Belief) -> float:
    """Expected payoff of the act under the distorted belief."""
    return float(f.payoffs @ d(p).probs)


def splice(f: Act, g: Act, e: Event) -> Act:
    """Act paying f on the event and g off it."""
    if f.space != g.space:
        raise ValueError("acts live on different state spaces")
    mask = e.mask(f.space)
    return Act(f.space, np.where(mask, f.payoffs, g.payoffs))


def check_dynamic_consistency(
    d: DistortionFn,
    trials: int = 500,
    seed: int = 0,
    *,
    space: Optional[StateSpace] = None,
    tol: float = DEFAULT_TOL,
) -> CoherenceReport:
    """Sampled test that ex-ante and ex-post rankings of spliced acts agree.

    Each trial draws a full-support belief, a proper event, and acts
    (f, g, h), then compares the sign of the value gap between f-on-E-else-g
    and h-on-E-else-g before and after conditioning on E.  Gaps within `tol`
    of zero on either side count as ties and never fail the check.  The
    deviation recorded for a disagreement is the smaller |gap|, i.e. how far
    the pair is from a tie.  Witness shape: (belief, event, f, g, h).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    from .distortion import _space_of

    sp = _space_of(d, space)
    if sp.n < 2:
        raise ValueError("need at least two states for a proper conditioning event")
    full = np.ones(sp.n, dtype=bool)
    max_dev = 0.0
    worst: Optional[tuple] = None
    for t in range(trials):
        rng = trial_rng(seed, t)
        p = _sample_on_support(rng, sp, full)
        e = random_event(rng, sp.n)
        f, g, h = (Act(sp, rng.normal(size=sp.n)) for _ in range(3))
        fe = splice(f, g, e)
        he = splice(h, g, e)
        gap_ante = act_value(fe, d, p) - act_value(he, d, p)
        post = condition(p, e)
        gap_post = act_value(fe, d, post) - act_value(he, d, post)
        if abs(gap_ante) <= tol or abs(gap_post) <= tol:
            continue
        if (gap_ante > 0.0) != (gap_post > 0.0):
            dev = min(abs(gap_ante), abs(gap_post))
            if dev > max_dev:
                max_dev = dev
                worst = (p, e, f, g, h)
    return CoherenceReport.build(max_dev, tol, worst)


# ---------------------------------------------------------------------------
# Betting on incoherence


@dataclass(frozen=True)
class DutchBook:
    """A bet whose subjective value flips sign with the distort/condition order.

    Wins `stake` on the winning state, loses `loss_rate * stake` on the
    losing state, pays nothing elsewhere on the event; `break_even_prob` is
    the winning-state probability at which the bet is actuarially fair.
    """

    event: Event
    win_state: int
    lose_state: int
    stake: float
    break_even_prob: float
    loss_rate: float
    value_distort_first: float
    value_condition_first: float

    def __post_init__(self):
        if self.win_state == self.lose_state:
            raise ValueError("win and lose states must differ")
        implied = self.break_even_prob / (1.0 - self.break_even_prob)
        if abs(self.loss_rate - implied) > 1e-9 * max(1.0, implied):
            raise ValueError("loss_rate must equal break_even_prob / (1 - break_even_prob)")


def construct_dutch_book(
    d: DistortionFn,
    p: Belief,
    e: Event,
    stake: float,
    *,
    tol: float = DEFAULT_TOL,
) -> Optional[DutchBook]:
    """Build a bet exposing a commutation failure of `d` at (p, E), if one exists.

    The winning state maximizes the gap between condition-then-distort and
    distort-then-condition probabilities; the break-even probability is the
    midpoint of the two.  The losing state is the remaining event state of
    largest distorted mass, falling back to other event states if the
    midpoint bet does not flip sign there (possible only when the event has
    three or more states).  Returns None when no sign-flipping bet exists at
    this input, in particular whenever `d` commutes at (p, E).
    """
    if len(e.members) < 2:
        raise ValueError("the betting event needs at least two states")
    if stake <= 0.0:
        raise ValueError("stake must be positive")
    members = e.sorted_members()
    cond_first = d(condition(p, e)).probs
    try:
        distort_first = condition(d(p), e).probs
    except ZeroProbabilityEvent:
        return None
    gaps = {w: abs(cond_first[w] - distort_first[w]) for w in members}
    win_order = sorted((w for w in members if gaps[w] > tol), key=lambda w: -gaps[w])
    for win in win_order:
        a = 0.5 * (cond_first[win] + distort_first[win])
        if not 0.0 < a < 1.0:
            continue
        rate = a / (1.0 - a)
        lose_order = sorted((w for w in members if w != win), key=lambda w: -distort_first[w])
        for lose in lose_order:
            v_cond = stake * (cond_first[win] - rate * cond_first[lose])
            v_dist = stake * (distort_first[win] - rate * distort_first[lose])
            if v_cond * v_dist < 0.0:
                return DutchBook(
                    event=e,
                    win_state=int(win),
                    lose_state=int(lose),
                    stake=float(stake),
                    break_even_prob=float(a),
                    loss_rate=float(rate),
                    value_distort_first=float(v_dist),
                    value_condition_first=float(v_cond),
                )
    return None


# ---------------------------------------------------------------------------
# Lotteries and weighted utility


@dataclass(frozen=True)
class Lottery:
    """Finite-support distribution over monetary outcomes."""

    outcomes: tuple[float, ...]
    probs: np.ndarray = field(compare=False)

    def __init__(self, outcomes: Sequence[float], probs: Sequence[float]):
        xs = tuple(float(x) for x in outcomes)
        if len(set(xs)) != len(xs):
            raise ValueError("outcomes must be distinct")
        v = np.asarray(probs, dtype=np.float64)
        if v.shape != (len(xs),):
            raise ValueError("need one probability per outcome")
        if np.any(v <= 0.0):
            raise ValueError("outcome probabilities must be strictly positive")
        if abs(v.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {v.sum()!r}, not 1")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "outcomes", xs)
        object.__setattr__(self, "probs", v)


class WeightFunction:
    """Continuous strictly positive weight over an outcome interval.

    Either piecewise-linear over sorted knots (positivity checked at the
    knots, which suffices between them) or exp(kappa * u(x)).  Evaluation
    outside the knot range clamps to the boundary value.
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], describe: str):
        self._fn = fn
        self._describe = describe

    @classmethod
    def piecewise_linear(cls, knots: Sequence[float], values: Sequence[float]) -> "WeightFunction":
        xs = np.asarray(knots, dtype=np.float64)
        ys = np.asarray(values, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("need matching 1-D knots and values, at least two")
        if np.any(np.diff(xs) <= 0.0):
            raise ValueError("knots must be strictly increasing")
        if np.any(ys <= 0.0):
            raise ValueError("weight values must be strictly positive")
        return cls(lambda x: np.interp(x, xs, ys), f"piecewise-linear over {xs.size} knots")

    @classmethod
    def exponential(cls, kappa: float, u: Callable[[float], float]) -> "WeightFunction":
        def fn(x: np.ndarray) -> np.ndarray:
            return np.exp(kappa * np.array([u(v) for v in x]))

        return cls(fn, f"exp({kappa} * u)")

    @classmethod
    def constant(cls, c: float = 1.0) -> "WeightFunction":
        if c <= 0.0:
            raise ValueError("constant weight must be positive")
        return cls(lambda x: np.full(x.shape, c), f"constant {c}")

    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        scalar = arr.ndim == 0
        out = np.asarray(self._fn(np.atleast_1d(arr)), dtype=np.float64)
        if np.any(out <= 0.0):
            raise ValueError("weight function must be strictly positive")
        return float(out[0]) if scalar else out

    def __repr__(self) -> str:
        return f"WeightFunction({self._describe})"


def weighted_utility(l: Lottery, psi: WeightFunction, u: Callable[[float], float]) -> float:
    """Weight-reweighted expected utility: sum w*p*u / sum w*p."""
    xs = np.array(l.outcomes)
    w = psi(xs)
    uv = np.array([u(x) for x in l.outcomes])
    wp = w * l.probs
    return float((wp @ uv) / wp.sum())


def distort_lottery(l: Lottery, psi: WeightFunction, power: float = 1.0) -> Lottery:
    """Lottery with probabilities reweighted by psi(x) * p(x)**power."""
    w = psi(np.array(l.outcomes)) * l.probs**power
    return Lottery(l.outcomes, w / w.sum())


def merge_gap(
    psi: WeightFunction, power: float, x_star: float, x_prime: float, offset: float
) -> float:
    """Distorted-mass gap between a nearly merged three-point lottery and its limit.

    The moving lottery puts 1/3 each on x_prime, x_star + offset, x_star; the
    limit lottery puts 1/3 on x_prime and 2/3 on x_star.  Returns the gap
    between the distorted mass near x_star and the distorted mass of the
    merged outcome.  offset == 0 evaluates the analytic limit of the moving
    side, which differs from the merged side unless the exponent is 1.
    """
    w_star = psi(x_star)
    w_prime = psi(x_prime)
    if offset != 0.0:
        moving = distort_lottery(
            Lottery((x_prime, x_star + offset, x_star), (1 / 3, 1 / 3, 1 / 3)), psi, power
        )
        mass_near = float(moving.probs[1] + moving.probs[2])
    else:
        mass_near = 2.0 * w_star / (2.0 * w_star + w_prime)
    merged = distort_lottery(Lottery((x_prime, x_star), (1 / 3, 2 / 3)), psi, power)
    return abs(mass_near - float(merged.probs[1]))


def check_weak_continuity_alpha1(
    psi: WeightFunction,
    x_star: float = 0.5,
    x_prime: float = 0.25,
    offsets: Sequence[float] = (0.1, 0.01, 0.001),
    tol: float = 1e-3,
) -> bool:
    """True when merging outcomes is continuous for the unit-exponent distortion of psi.

    Evaluates the merge gap along decreasing offsets and requires it to
    shrink to at most `tol`.  Exponents other than 1 leave a gap bounded
    away from zero on the same sequence.
    """
    gaps = [merge_gap(psi, 1.0, x_star, x_prime, off) for off in sorted(offsets, reverse=True)]
    non_increasing = all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
    return non_increasing and gaps[-1] <= tol


def find_allais_config(
    slopes: Sequence[float] = (0.0, 1.0, 4.0, 9.0, 29.0, 59.0),
    curvatures: Sequence[float] = (1.0, 0.8, 0.5),
) -> Optional[tuple[WeightFunction, Callable[[float], float], tuple[Lottery, Lottery, Lottery, Lottery]]]:
    """Search for a common-consequence ranking reversal under weighted utility.

    Uses the classic quadruple over outcomes (0, 1, 5): A is 1 for sure,
    B trades a 0.01 chance of 0 for a 0.10 chance of 5; C and D strip the
    common 0.89 chance of 1.  Independence forces A over B iff C over D; the
    search looks for A over B together with D over C.  The weight function
    is piecewise linear with an elevated value at 0 (slope parameter) and
    the utility index is a power curve.  Returns the first configuration
    exhibiting the reversal, or None.
    """
    a = Lottery((1.0,), (1.0,))
    b = Lottery((5.0, 1.0, 0.0), (0.10, 0.89, 0.01))
    c = Lottery((1.0, 0.0), (0.11, 0.89))
    dd = Lottery((5.0, 0.0), (0.10, 0.90))
    for s in slopes:
        psi = WeightFunction.piecewise_linear((0.0, 1.0, 5.0), (1.0 + s, 1.0, 1.0))
        for curv in curvatures:
            u = _power_curve(curv)
            va, vb = weighted_utility(a, psi, u), weighted_utility(b, psi, u)
            vc, vd = weighted_utility(c, psi, u), weighted_utility(dd, psi, u)
            if va > vb + 1e-12 and vd > vc + 1e-12:
                return psi, u, (a, b, c, dd)
    return None


def _power_curve(curv: float) -> Callable[[float], float]:
    return lambda x: float(x) ** curv


# ---------------------------------------------------------------------------
# Motivated beliefs with generalized KL costs


@dataclass(frozen=True)
class MotivatedProblem:
    """Choose a belief maximizing anticipated utility minus a scaled divergence.

    Objective over the simplex:
        utilities . q - (1 / utility_scale) * sum_w q(w) (ln q(w) - prior_power * ln prior(w))
    With prior_power = 1 the penalty is the KL divergence from the prior;
    the minimization variant used for multiplier-style preferences is the
    same problem with negated utilities.
    """

    space: StateSpace
    utilities: np.ndarray = field(compare=False)
    utility_scale: float
    prior_power: float
    prior: Belief

    def __post_init__(self):
        v = np.asarray(self.utilities, dtype=np.float64)
        if v.shape != (self.space.n,):
            raise ValueError(f"expected {self.space.n} utilities, got shape {v.shape}")
        if not (self.utility_scale > 0.0 and self.prior_power > 0.0):
            raise ValueError("utility_scale and prior_power must be positive")
        if self.prior.space != self.space:
            raise ValueError("prior lives on a different state space")
        if np.any(self.prior.probs <= 0.0):
            raise ValueError("prior must have full support")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "utilities", v)

    def objective(self, q: Belief | np.ndarray) -> float:
        qv = q.probs if isinstance(q, Belief) else np.asarray(q, dtype=np.float64)
        sup = qv > 0.0
        ent = qv[sup] @ (np.log(qv[sup]) - self.prior_power * np.log(self.prior.probs[sup]))
        return float(self.utilities @ qv - ent / self.utility_scale)


def solve_motivated_closed_form(mp: MotivatedProblem) -> Belief:
    """Stationary point of the objective: q proportional to exp(scale * u) * prior**power."""
    scaled = mp.utility_scale * mp.utilities
    log_w = scaled - (scaled.max() + math.log(np.exp(scaled - scaled.max()).sum()))
    return belief(mp.space, kernels.power_apply(log_w, mp.prior_power, mp.prior.probs))


def solve_motivated_numerical(
    mp: MotivatedProblem, max_iters: int = 500, tol: float = 1e-10
) -> Belief:
    """Maximize the objective directly by entropic mirror ascent.

    Multiplicative updates on the simplex interior with step halving on any
    objective decrease; stops when the projected-gradient residual drops
    below `tol`.  Independent of the closed form, which it serves to verify.
    """
    q, _, residual = kernels.mirror_ascent(
        mp.utilities, mp.utility_scale, mp.prior_power, mp.prior.probs, max_iters, tol
    )
    if residual >= tol:
        raise NoConvergence(
            f"projected-gradient residual {residual:.3e} after {max_iters} iterations"
        )
    return belief(mp.space, q)
