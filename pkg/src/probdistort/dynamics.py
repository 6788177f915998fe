"""Repeated application of a weight-and-power distortion: closed-form
iterates, limit beliefs, idempotence, and fixed-point enumeration.

The n-step iterate has probability exponent power**n and weight exponent
equal to the geometric sum of powers, both computed in closed form so high
iterates stay finite in log domain.  Limits split into three regimes by the
exponent: below 1 the limit depends only on the support, at 1 mass flows to
the heaviest weight level within the support, above 1 to the states
maximizing p**(power-1) * weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import DEFAULT_TOL, Belief, Event, StateSpace, belief, belief_distance
from .distortion import PowerWeighted
from .errors import NoConvergence, StateSpaceTooLarge

SUPPORT_RULE = "support_rule"
MAX_LIKELIHOOD_RULE = "maximum_likelihood_rule"
LEXICOGRAPHIC_RULE = "lexicographic_rule"
IDENTITY = "identity"

_ARGMAX_BAND = 1e-9  # relative band on log scores; near-ties join the maximal set


@dataclass(frozen=True)
class LimitClassification:
    """Limit of repeated distortion plus the regime that produced it.

    `iterations_to_tol` is "closed-form" when the limit came from the
    analytic case split; `verify_limit_numerically` reports the iterate
    count that reaches it.
    """

    kind: str
    limit: Belief
    iterations_to_tol: int | str = "closed-form"


def iterate(d: PowerWeighted, p: Belief, n: int) -> Belief:
    """n-fold application of the distortion, via closed-form exponents."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if p.space != d.space:
        raise ValueError("belief lives on a different state space")
    return belief(d.space, kernels.power_iterate(d.log_weights, d.power, p.probs, n))


def _argmax_mask(scores: np.ndarray, valid: np.ndarray) -> np.ndarray:
    top = scores[valid].max()
    band = _ARGMAX_BAND * max(1.0, abs(top))
    return valid & (scores >= top - band)


def _weights_power_on(d: PowerWeighted, mask: np.ndarray) -> np.ndarray:
    v = np.zeros(d.space.n)
    s = d.log_weights[mask] / (1.0 - d.power)
    e = np.exp(s - s.max())
    v[mask] = e / e.sum()
    return v


def is_identity_params(d: PowerWeighted, weight_tol: float = 1e-9, power_tol: float = 1e-7) -> bool:
    """Whether the parameters are the no-distortion point (uniform weights, unit power)."""
    return (
        abs(d.power - 1.0) <= power_tol
        and np.abs(d.weights - 1.0 / d.space.n).max() <= weight_tol
    )


def limit_belief(d: PowerWeighted, p: Belief) -> LimitClassification:
    """Closed-form limit of the iterates started at p.

    Exponent below 1: weights**(1/(1-power)) normalized over the support of
    p (a support rule).  Exactly 1: p conditioned on the heaviest-weight
    states within its support (a lexicographic rule; identity when the
    weights are uniform).  Above 1: weights**(1/(1-power)) normalized over
    the states maximizing p**(power-1) * weight (a maximum likelihood rule).
    """
    if p.space != d.space:
        raise ValueError("belief lives on a different state space")
    sup = p.probs > 0.0
    if d.power == 1.0:
        mask = _argmax_mask(d.log_weights, sup)
        v = np.where(mask, p.probs, 0.0)
        lim = belief(d.space, v / v.sum())
        kind = IDENTITY if is_identity_params(d) else LEXICOGRAPHIC_RULE
        return LimitClassification(kind, lim)
    if d.power < 1.0:
        return LimitClassification(SUPPORT_RULE, belief(d.space, _weights_power_on(d, sup)))
    scores = np.full(d.space.n, -np.inf)
    scores[sup] = (d.power - 1.0) * np.log(p.probs[sup]) + d.log_weights[sup]
    mask = _argmax_mask(scores, sup)
    return LimitClassification(MAX_LIKELIHOOD_RULE, belief(d.space, _weights_power_on(d, mask)))


def verify_limit_numerically(
    d: PowerWeighted, p: Belief, tol: float = 1e-6, max_n: int = 200
) -> int:
    """Smallest iterate count whose distance to the closed-form limit is within tol."""
    target = limit_belief(d, p).limit
    for n in range(max_n + 1):
        if belief_distance(iterate(d, p, n), target) <= tol:
            return n
    raise NoConvergence(f"no iterate within {tol} of the limit after {max_n} steps")


def _probe_grid(space: StateSpace) -> list[Belief]:
    n = space.n
    probes = [belief(space, np.full(n, 1.0 / n))]
    skew = np.full(n, 0.2)
    skew[0] = 0.6
    probes.append(belief(space, skew))
    probes.append(belief(space, np.arange(1.0, n + 1.0)))
    for i in range(n - 1):
        v = np.zeros(n)
        v[i] = v[i + 1] = 0.5
        probes.append(belief(space, v))
    return probes


def check_idempotence(d: PowerWeighted, tol: float = DEFAULT_TOL) -> bool:
    """True when applying the distortion twice equals applying it once on a probe grid.

    Away from knife-edge parameters this coincides with `is_identity_params`:
    the only idempotent member of the family is the no-distortion point.
    """
    worst = 0.0
    for p in _probe_grid(d.space):
        once = d(p)
        worst = max(worst, belief_distance(d(once), once))
    return worst <= tol


def weight_level_sets(d: PowerWeighted, tol: float = 0.0) -> list[Event]:
    """Events of equal weight, ordered from heaviest to lightest.

    With tol = 0 grouping is by exact float equality, which is what the
    fixed-point representatives need; a positive tol groups near-ties.
    """
    order = np.argsort(-d.weights, kind="stable")
    levels: list[list[int]] = []
    for idx in order:
        if levels and abs(d.weights[levels[-1][0]] - d.weights[idx]) <= tol:
            levels[-1].append(int(idx))
        else:
            levels.append([int(idx)])
    return [Event(level) for level in levels]


def enumerate_fixed_points(d: PowerWeighted, *, verify_tol: float = 1e-12) -> list[Belief]:
    """All fixed points (exponent != 1) or a finite family of representatives (exponent 1).

    Away from unit exponent there is exactly one fixed point per non-empty
    support set: weights**(1/(1-power)) normalized over it.  At unit
    exponent every distribution supported inside a single weight level set
    is fixed; returned are the point masses plus the uniform distribution on
    each multi-state level set (see `weight_level_sets` for the partition).
    Every returned belief is verified fixed to within `verify_tol`.
    """
    n = d.space.n
    if n > 16:
        raise StateSpaceTooLarge(f"fixed-point enumeration over {n} states is not supported")
    points: list[Belief] = []
    if d.power != 1.0:
        for bits in range(1, 2**n):
            mask = np.array([(bits >> i) & 1 for i in range(n)], dtype=bool)
            points.append(belief(d.space, _weights_power_on(d, mask)))
    else:
        for i in range(n):
            v = np.zeros(n)
            v[i] = 1.0
            points.append(Belief(d.space, v))
        for level in weight_level_sets(d):
            if len(level.members) >= 2:
                mask = level.mask(d.space)
                points.append(belief(d.space, mask / mask.sum()))
    for q in points:
        residual = belief_distance(d(q), q)
        if residual > verify_tol:
            raise AssertionError(f"enumerated point is not fixed (residual {residual:.3e})")
    return points
