# cython: boundscheck=False, wraparound=False, cdivision=True
"""C kernels: compiled twins of `_kernels_py`.

Same contracts as the Python module; see the docstrings there.  Inputs are
taken as const memoryviews so the frozen (read-only) arrays used by the
dataclasses can be passed straight through.
"""

import numpy as np

from libc.math cimport exp, fabs, log

IMPLEMENTATION = "compiled"

cdef double NEG_INF = -np.inf


def power_apply(log_weights, double power, p):
    cdef const double[::1] lw = np.ascontiguousarray(log_weights, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t n = pv.shape[0]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double s, m, total
    cdef Py_ssize_t i
    m = NEG_INF
    for i in range(n):
        if pv[i] > 0.0:
            s = lw[i] + power * log(pv[i])
            if s > m:
                m = s
    total = 0.0
    for i in range(n):
        if pv[i] > 0.0:
            s = exp(lw[i] + power * log(pv[i]) - m)
            ov[i] = s
            total += s
    for i in range(n):
        if pv[i] > 0.0:
            ov[i] /= total
    return out


def power_iterate(log_weights, double power, p, int n_steps):
    cdef const double[::1] lw = np.ascontiguousarray(log_weights, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t n = pv.shape[0]
    if n_steps == 0:
        return np.asarray(p, dtype=np.float64).copy()
    cdef double prob_exp = power**n_steps
    cdef double weight_exp
    if power == 1.0:
        weight_exp = <double>n_steps
    else:
        weight_exp = (prob_exp - 1.0) / (power - 1.0)
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double s, m, total
    cdef Py_ssize_t i
    m = NEG_INF
    for i in range(n):
        if pv[i] > 0.0:
            s = weight_exp * lw[i] + prob_exp * log(pv[i])
            if s > m:
                m = s
    total = 0.0
    for i in range(n):
        if pv[i] > 0.0:
            s = exp(weight_exp * lw[i] + prob_exp * log(pv[i]) - m)
            ov[i] = s
            total += s
    for i in range(n):
        if pv[i] > 0.0:
            ov[i] /= total
    return out


cdef double _kl_objective(const double[::1] q, const double[::1] log_q, const double[::1] u,
                          double inv_scale, double prior_power,
                          const double[::1] log_prior, Py_ssize_t n):
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        acc += u[i] * q[i] - inv_scale * q[i] * (log_q[i] - prior_power * log_prior[i])
    return acc


def mirror_ascent(utilities, double utility_scale, double prior_power, prior,
                  int max_iters, double tol):
    cdef const double[::1] u = np.ascontiguousarray(utilities, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]
    cdef double inv_scale = 1.0 / utility_scale
    prior_arr = np.ascontiguousarray(prior, dtype=np.float64)
    q_arr = prior_arr.copy()
    log_prior_arr = np.log(prior_arr)
    log_q_arr = log_prior_arr.copy()
    grad_arr = np.empty(n, dtype=np.float64)
    q_new_arr = np.empty(n, dtype=np.float64)
    log_q_new_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] q = q_arr
    cdef double[::1] log_q = log_q_arr
    cdef const double[::1] log_prior = log_prior_arr
    cdef double[::1] grad = grad_arr
    cdef double[::1] q_new = q_new_arr
    cdef double[::1] log_q_new = log_q_new_arr
    cdef double obj, obj_new, residual, step, mean_grad, z, m, total, r
    cdef Py_ssize_t i, it

    obj = _kl_objective(q, log_q, u, inv_scale, prior_power, log_prior, n)
    residual = np.inf
    for it in range(max_iters):
        mean_grad = 0.0
        for i in range(n):
            grad[i] = u[i] - inv_scale * (log_q[i] + 1.0 - prior_power * log_prior[i])
            mean_grad += q[i] * grad[i]
        residual = 0.0
        for i in range(n):
            r = fabs(grad[i] - mean_grad)
            if r > residual:
                residual = r
        if residual < tol:
            return q_arr, it, residual
        step = 0.5 * utility_scale
        slack = 1e-13 * (1.0 + fabs(obj))  # float noise floor; halting on it would stall
        while True:
            m = NEG_INF
            for i in range(n):
                z = log_q[i] + step * grad[i]
                log_q_new[i] = z
                if z > m:
                    m = z
            total = 0.0
            for i in range(n):
                q_new[i] = exp(log_q_new[i] - m)
                total += q_new[i]
            for i in range(n):
                q_new[i] /= total
                log_q_new[i] = log(q_new[i])
            obj_new = _kl_objective(q_new, log_q_new, u, inv_scale, prior_power, log_prior, n)
            if obj_new >= obj - slack or step < 1e-18:
                break
            step *= 0.5
        for i in range(n):
            q[i] = q_new[i]
            log_q[i] = log_q_new[i]
        obj = obj_new
    mean_grad = 0.0
    for i in range(n):
        grad[i] = u[i] - inv_scale * (log_q[i] + 1.0 - prior_power * log_prior[i])
        mean_grad += q[i] * grad[i]
    residual = 0.0
    for i in range(n):
        r = fabs(grad[i] - mean_grad)
        if r > residual:
            residual = r
    return q_arr, max_iters, residual
