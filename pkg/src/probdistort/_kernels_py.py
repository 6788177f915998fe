"""Pure-NumPy kernels: the hot inner loops behind the public API.

Mirrors `_ckernels.pyx` function-for-function; `kernels` picks one of the
two at import time.  All functions take and return float64 arrays and never
mutate their inputs.  Probability vectors use exact 0.0 to mark states
outside the support; those states stay exactly 0.0 in every output.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"


def power_apply(log_weights: np.ndarray, power: float, p: np.ndarray) -> np.ndarray:
    """Weight-and-power distortion of a probability vector, in log domain.

    out[i] = w[i] * p[i]**power, normalized over the support of p.
    """
    out = np.zeros_like(p)
    sup = p > 0.0
    s = log_weights[sup] + power * np.log(p[sup])
    s -= s.max()
    e = np.exp(s)
    out[sup] = e / e.sum()
    return out


def power_iterate(log_weights: np.ndarray, power: float, p: np.ndarray, n: int) -> np.ndarray:
    """n-fold composition of power_apply, via the closed-form exponents.

    After n steps the probability exponent is power**n and the weight
    exponent is the geometric sum 1 + power + ... + power**(n-1).
    """
    if n == 0:
        return p.copy()
    prob_exp = power**n
    weight_exp = float(n) if power == 1.0 else (prob_exp - 1.0) / (power - 1.0)
    out = np.zeros_like(p)
    sup = p > 0.0
    s = weight_exp * log_weights[sup] + prob_exp * np.log(p[sup])
    s -= s.max()
    e = np.exp(s)
    out[sup] = e / e.sum()
    return out


def _kl_objective(q, log_q, u, inv_scale, prior_power, log_prior):
    return float(u @ q - inv_scale * (q @ (log_q - prior_power * log_prior)))


def mirror_ascent(
    utilities: np.ndarray,
    utility_scale: float,
    prior_power: float,
    prior: np.ndarray,
    max_iters: int,
    tol: float,
):
    """Entropic mirror ascent for the KL-regularized anticipated-utility objective.

    Maximizes u.q - (1/K) * sum_i q_i (ln q_i - L ln p_i) over the simplex
    interior with multiplicative updates q <- normalize(q * exp(step * grad)),
    halving the step whenever the objective would decrease.  Returns
    (q, iterations, residual) where residual is the max-norm of the gradient
    projected onto the simplex (q-weighted mean removed).
    """
    inv_scale = 1.0 / utility_scale
    log_prior = np.log(prior)
    q = prior.astype(np.float64, copy=True)
    log_q = log_prior.copy()
    obj = _kl_objective(q, log_q, utilities, inv_scale, prior_power, log_prior)
    residual = np.inf
    for it in range(max_iters):
        grad = utilities - inv_scale * (log_q + 1.0 - prior_power * log_prior)
        residual = float(np.abs(grad - q @ grad).max())
        if residual < tol:
            return q, it, residual
        step = 0.5 * utility_scale
        slack = 1e-13 * (1.0 + abs(obj))  # float noise floor; halting on it would stall
        while True:
            z = log_q + step * grad
            z -= z.max()
            q_new = np.exp(z)
            q_new /= q_new.sum()
            log_q_new = np.log(q_new)
            obj_new = _kl_objective(q_new, log_q_new, utilities, inv_scale, prior_power, log_prior)
            if obj_new >= obj - slack or step < 1e-18:
                break
            step *= 0.5
        q, log_q, obj = q_new, log_q_new, obj_new
    grad = utilities - inv_scale * (log_q + 1.0 - prior_power * log_prior)
    residual = float(np.abs(grad - q @ grad).max())
    return q, max_iters, residual
