"""Command-line runner: JSON scenario files in, JSON reports or CSV curves out.

Each subcommand executes one scenario kind.  Reports echo the scenario,
carry a deterministic results section (identical scenario and seed give
byte-identical results), and record provenance (seed, trials, tolerance,
version, kernel implementation).  Exit codes: 0 success, 1 a property check
failed (witness included in the report), 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

import numpy as np

from . import __version__, kernels
from .core import DEFAULT_TOL, Belief, Event, StateSpace, belief, condition, event_prob
from .distortion import (
    PowerWeighted,
    additive_smoothing,
    check_coherence,
    identify_power,
    identify_weights,
    identity_distortion,
    odds_squash,
    quadratic_tilt,
    support_softmax,
    uniform_mixture,
)
from .dynamics import (
    check_idempotence,
    enumerate_fixed_points,
    iterate,
    limit_belief,
    verify_limit_numerically,
    weight_level_sets,
)
from .errors import NoConvergence, ProbDistortError
from .joint import (
    SignalEvent,
    WeightedGS,
    check_marginality,
    check_strong_signal_coherence,
    check_weak_signal_coherence,
    condition_on_signal_event,
    induced_marginal_distortion,
    joint_distribution,
    power_joint_distortion,
    state_marginal,
)
from .prefs import (
    Lottery,
    MotivatedProblem,
    WeightFunction,
    check_dynamic_consistency,
    construct_dutch_book,
    solve_motivated_closed_form,
    solve_motivated_numerical,
    weighted_utility,
)
from .signals import (
    BlackwellDistortion,
    BlackwellExperiment,
    GretherSpec,
    SignalSpace,
    bayes_posterior,
    check_blackwell_signal_coherence,
    check_gretherian_coherence,
    grether_update,
    normalized_grether_check,
    vec_additive_smoothing,
    vec_identity,
    vec_power_weighted,
    vec_scaled_power,
)

KINDS = (
    "distort",
    "condition",
    "identify",
    "coherence-audit",
    "grether",
    "gs",
    "motivated",
    "dynamics",
    "dutch-book",
    "dynamic-consistency",
    "weighted-utility",
    "curve",
)

AUDIT_KINDS = {"coherence-audit", "dynamic-consistency"}


class ScenarioError(Exception):
    """Invalid scenario input; `field` names the first offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"field '{field}': {message}")
        self.field = field


def _need(params: dict, name: str, kind=None):
    if name not in params:
        raise ScenarioError(name, "is required")
    value = params[name]
    if kind is not None and not isinstance(value, kind):
        raise ScenarioError(name, f"has the wrong type ({type(value).__name__})")
    return value


def _need_number(params: dict, name: str, positive: bool = False) -> float:
    value = _need(params, name)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(name, "must be a number")
    if positive and not value > 0:
        raise ScenarioError(name, "must be positive")
    return float(value)


def _need_int(params: dict, name: str, minimum: int = 0) -> int:
    value = _need(params, name)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(name, "must be an integer")
    if value < minimum:
        raise ScenarioError(name, f"must be at least {minimum}")
    return value


def _states(params: dict) -> StateSpace:
    labels = _need(params, "states", list)
    try:
        return StateSpace(labels)
    except ValueError as exc:
        raise ScenarioError("states", str(exc)) from exc


def _signal_space(params: dict) -> SignalSpace:
    labels = _need(params, "signals", list)
    try:
        return SignalSpace(labels)
    except ValueError as exc:
        raise ScenarioError("signals", str(exc)) from exc


def _belief_from(params: dict, space: StateSpace, name: str = "belief") -> Belief:
    raw = _need(params, name, dict)
    probs = np.zeros(space.n)
    for label, value in raw.items():
        if label not in space.labels:
            raise ScenarioError(name, f"unknown state label {label!r}")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(name, f"probability of {label!r} must be a number")
        probs[space.index(label)] = value
    if np.any(probs < 0.0):
        raise ScenarioError(name, "probabilities must be non-negative")
    if abs(probs.sum() - 1.0) > 1e-9:
        raise ScenarioError(name, f"probabilities sum to {probs.sum()!r}, not 1")
    return belief(space, probs)


def _event_from(params: dict, space: StateSpace, name: str = "event") -> Event:
    labels = _need(params, name, list)
    if not labels:
        raise ScenarioError(name, "must be non-empty")
    for label in labels:
        if label not in space.labels:
            raise ScenarioError(name, f"unknown state label {label!r}")
    return Event.from_labels(space, labels)


def _vector_from(params: dict, name: str, size: int, positive: bool = False) -> np.ndarray:
    raw = _need(params, name, list)
    if len(raw) != size:
        raise ScenarioError(name, f"needs exactly {size} entries")
    for value in raw:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(name, "entries must be numbers")
    out = np.asarray(raw, dtype=np.float64)
    if positive and np.any(out <= 0.0):
        raise ScenarioError(name, "entries must be strictly positive")
    return out


def _distortion_from(params: dict, space: StateSpace, name: str = "distortion"):
    spec = _need(params, name, dict)
    kind = spec.get("kind")
    if kind == "power-weighted":
        psi = _vector_from(spec, "psi", space.n, positive=True)
        alpha = _need_number(spec, "alpha", positive=True)
        return PowerWeighted(space, psi, alpha)
    if kind == "identity":
        return identity_distortion()
    if kind == "additive-smoothing":
        return additive_smoothing(_need_number(spec, "epsilon", positive=True))
    if kind == "uniform-mixture":
        return uniform_mixture(_need_number(spec, "lambda", positive=True))
    if kind == "support-softmax":
        return support_softmax(_need_number(spec, "beta"))
    if kind == "odds-squash":
        return odds_squash()
    if kind == "quadratic-tilt":
        return quadratic_tilt()
    raise ScenarioError(f"{name}.kind", f"unknown distortion kind {kind!r}")


def _experiment_from(params: dict, space: StateSpace, signals: SignalSpace) -> BlackwellExperiment:
    rows = _need(params, "experiment", list)
    try:
        return BlackwellExperiment(space, signals, np.asarray(rows, dtype=np.float64))
    except (ValueError, TypeError) as exc:
        raise ScenarioError("experiment", str(exc)) from exc


def _signal_maps_from(spec: dict, space: StateSpace, signals: SignalSpace, name: str):
    kind = spec.get("kind")
    if kind == "identity":
        return tuple(vec_identity() for _ in range(space.n))
    if kind == "power-gamma":
        gamma = _vector_from(spec, "gamma", signals.m, positive=True)
        alpha = _need_number(spec, "alpha", positive=True)
        return (vec_scaled_power(gamma, alpha),) * space.n
    if kind == "per-state-power-gamma":
        rows = _need(spec, "gamma_by_state", list)
        if len(rows) != space.n:
            raise ScenarioError(f"{name}.gamma_by_state", f"needs {space.n} rows")
        alpha = _need_number(spec, "alpha", positive=True)
        return tuple(
            vec_scaled_power(_vector_from({"g": row}, "g", signals.m, positive=True), alpha)
            for row in rows
        )
    if kind == "power":
        beta = _need_number(spec, "beta", positive=True)
        return (vec_scaled_power(np.ones(signals.m), beta),) * space.n
    if kind == "power-weighted-by-state":
        rows = _need(spec, "psi_by_state", list)
        powers = _need(spec, "alpha_by_state", list)
        if len(rows) != space.n or len(powers) != space.n:
            raise ScenarioError(f"{name}.psi_by_state", f"needs {space.n} rows and powers")
        return tuple(
            vec_power_weighted(
                _vector_from({"w": row}, "w", signals.m, positive=True), float(a)
            )
            for row, a in zip(rows, powers)
        )
    if kind == "smoothing":
        eps = _need_number(spec, "epsilon", positive=True)
        return tuple(vec_additive_smoothing(eps) for _ in range(space.n))
    raise ScenarioError(f"{name}.kind", f"unknown signal-map kind {kind!r}")


def _joint_distortion_from(params: dict, space: StateSpace, signals: SignalSpace):
    spec = _need(params, "distortion", dict)
    kind = spec.get("kind")
    if kind == "weighted":
        return WeightedGS(space, signals, _vector_from(spec, "psi", space.n, positive=True))
    if kind == "power":
        psi = _vector_from(spec, "psi", space.n, positive=True)
        alpha = _need_number(spec, "alpha", positive=True)
        return power_joint_distortion(psi, alpha)
    raise ScenarioError("distortion.kind", f"unknown joint distortion kind {kind!r}")


def _belief_map(b: Belief) -> dict:
    return {label: float(x) for label, x in zip(b.space.labels, b.probs)}


def _event_labels(space: StateSpace, e: Event) -> list:
    return [space.labels[i] for i in e.sorted_members()]


def _coherence_results(report, space: StateSpace) -> dict:
    out = {
        "passed": report.passed,
        "max_deviation": float(report.max_deviation),
        "tol": float(report.tol),
        "witness": None,
    }
    if report.witness is not None:
        p, e = report.witness
        out["witness"] = {"belief": _belief_map(p), "event": _event_labels(space, e)}
    return out


# --- scenario executors (return (results_dict, exit_code)) ------------------


def _run_distort(params: dict):
    space = _states(params)
    psi = _vector_from(params, "psi", space.n, positive=True)
    alpha = _need_number(params, "alpha", positive=True)
    p = _belief_from(params, space)
    out = PowerWeighted(space, psi, alpha)(p)
    return {"distorted": _belief_map(out)}, 0


def _run_condition(params: dict):
    space = _states(params)
    p = _belief_from(params, space)
    e = _event_from(params, space)
    try:
        out = condition(p, e)
    except ProbDistortError as exc:
        raise ScenarioError("event", str(exc)) from exc
    return {"conditional": _belief_map(out), "event_prob": event_prob(p, e)}, 0


def _run_identify(params: dict):
    space = _states(params)
    d = _distortion_from(params, space)
    weights = identify_weights(d, space=space)
    power = identify_power(d, space=space)
    return {
        "psi": {label: float(w) for label, w in zip(space.labels, weights)},
        "alpha": float(power),
    }, 0


def _run_coherence_audit(params: dict):
    space = _states(params)
    d = _distortion_from(params, space)
    trials = _need_int(params, "trials", minimum=1)
    seed = _need_int(params, "seed")
    tol = float(params.get("tol", DEFAULT_TOL))
    report = check_coherence(d, trials, seed, space=space, tol=tol)
    return _coherence_results(report, space), 0 if report.passed else 1


def _run_grether(params: dict):
    space = _states(params)
    signals = _signal_space(params)
    action = _need(params, "action", str)
    f = _distortion_from(params, space, name="f")
    g = _signal_maps_from(_need(params, "g", dict), space, signals, "g")
    spec = GretherSpec(space, signals, f, g)
    if action == "update":
        p = _belief_from(params, space, name="prior")
        sigma = _experiment_from(params, space, signals)
        theta_label = _need(params, "theta", str)
        if theta_label not in signals.labels:
            raise ScenarioError("theta", f"unknown signal label {theta_label!r}")
        theta = signals.index(theta_label)
        try:
            post = grether_update(spec, p, sigma, theta)
            bayes = bayes_posterior(p, sigma, theta)
        except ProbDistortError as exc:
            raise ScenarioError("theta", str(exc)) from exc
        return {"posterior": _belief_map(post), "bayes_posterior": _belief_map(bayes)}, 0
    trials = _need_int(params, "trials", minimum=1)
    seed = _need_int(params, "seed")
    tol = float(params.get("tol", DEFAULT_TOL))
    if action == "audit":
        report = check_gretherian_coherence(spec, trials, seed, tol=tol)
        out = {
            "passed": report.passed,
            "max_deviation": float(report.max_deviation),
            "tol": float(report.tol),
            "witness": None,
        }
        if report.witness is not None:
            p, rows, theta = report.witness
            out["witness"] = {
                "prior": _belief_map(p),
                "experiment": [[float(x) for x in row] for row in rows],
                "theta": signals.labels[theta],
            }
        return out, 0 if report.passed else 1
    if action == "normalized-check":
        ok = normalized_grether_check(spec, trials, seed, tol=tol)
        return {"normalized_and_coherent": bool(ok)}, 0
    if action == "blackwell-audit":
        bd = BlackwellDistortion(space, signals, g)
        report = check_blackwell_signal_coherence(bd, trials, seed, tol=tol)
        out = {
            "passed": report.passed,
            "max_deviation": float(report.max_deviation),
            "tol": float(report.tol),
            "witness": None,
        }
        if report.witness is not None:
            state, v, subset = report.witness
            out["witness"] = {
                "state": space.labels[state],
                "signal_distribution": [float(x) for x in v],
                "signal_event": [signals.labels[i] for i in subset],
            }
        return out, 0 if report.passed else 1
    raise ScenarioError("action", f"unknown grether action {action!r}")


def _run_gs(params: dict):
    space = _states(params)
    signals = _signal_space(params)
    action = _need(params, "action", str)
    if action in ("state-marginal", "condition"):
        cells = _need(params, "cells", list)
        try:
            p = joint_distribution(space, signals, np.asarray(cells, dtype=np.float64))
        except (ValueError, TypeError) as exc:
            raise ScenarioError("cells", str(exc)) from exc
        if action == "state-marginal":
            return {"marginal": _belief_map(state_marginal(p))}, 0
        labels = _need(params, "signal_event", list)
        for label in labels:
            if label not in signals.labels:
                raise ScenarioError("signal_event", f"unknown signal label {label!r}")
        try:
            out = condition_on_signal_event(p, SignalEvent.from_labels(signals, labels))
        except ProbDistortError as exc:
            raise ScenarioError("signal_event", str(exc)) from exc
        return {"conditional_cells": [[float(x) for x in row] for row in out.cells]}, 0
    if action == "distort":
        cells = _need(params, "cells", list)
        try:
            p = joint_distribution(space, signals, np.asarray(cells, dtype=np.float64))
        except (ValueError, TypeError) as exc:
            raise ScenarioError("cells", str(exc)) from exc
        d = _joint_distortion_from(params, space, signals)
        out = d(p)
        return {"distorted_cells": [[float(x) for x in row] for row in out.cells]}, 0
    if action == "induced-marginal":
        d = _joint_distortion_from(params, space, signals)
        q = _belief_from(params, space)
        theta_label = _need(params, "theta", str)
        if theta_label not in signals.labels:
            raise ScenarioError("theta", f"unknown signal label {theta_label!r}")
        out = induced_marginal_distortion(
            d, q, signals.index(theta_label), signals=signals
        )
        return {"marginal": _belief_map(out)}, 0
    if action in ("audit-weak", "audit-strong", "audit-marginality"):
        d = _joint_distortion_from(params, space, signals)
        trials = _need_int(params, "trials", minimum=1)
        seed = _need_int(params, "seed")
        tol = float(params.get("tol", DEFAULT_TOL))
        if action == "audit-marginality":
            ok = check_marginality(d, trials, seed, space=space, signals=signals, tol=tol)
            return {"passed": bool(ok)}, 0 if ok else 1
        checker = (
            check_weak_signal_coherence if action == "audit-weak" else check_strong_signal_coherence
        )
        report = checker(d, trials, seed, space=space, signals=signals, tol=tol)
        out = {
            "passed": report.passed,
            "max_deviation": float(report.max_deviation),
            "tol": float(report.tol),
            "witness": None,
        }
        if report.witness is not None:
            p, which = report.witness
            subset = [which] if isinstance(which, int) else list(which)
            out["witness"] = {
                "cells": [[float(x) for x in row] for row in p.cells],
                "signal_event": [signals.labels[i] for i in subset],
            }
        return out, 0 if report.passed else 1
    raise ScenarioError("action", f"unknown gs action {action!r}")


def _run_motivated(params: dict):
    space = _states(params)
    utilities = _vector_from(params, "utilities", space.n)
    scale = _need_number(params, "K", positive=True)
    power = _need_number(params, "Lambda", positive=True)
    prior = _belief_from(params, space, name="prior")
    if np.any(prior.probs <= 0.0):
        raise ScenarioError("prior", "must have full support")
    mp = MotivatedProblem(space, utilities, scale, power, prior)
    closed = solve_motivated_closed_form(mp)
    results = {"distorted": _belief_map(closed), "objective": mp.objective(closed)}
    code = 0
    if params.get("compare", True):
        tol = float(params.get("tol", 1e-8))
        try:
            numerical = solve_motivated_numerical(mp)
        except NoConvergence as exc:
            raise ScenarioError("compare", str(exc)) from exc
        gap = float(np.abs(closed.probs - numerical.probs).max())
        results["numerical"] = _belief_map(numerical)
        results["max_gap"] = gap
        results["passed"] = gap <= tol
        if gap > tol:
            code = 1
    return results, code


def _run_dynamics(params: dict):
    space = _states(params)
    psi = _vector_from(params, "psi", space.n, positive=True)
    alpha = _need_number(params, "alpha", positive=True)
    d = PowerWeighted(space, psi, alpha)
    action = _need(params, "action", str)
    if action == "iterate":
        p = _belief_from(params, space)
        n = _need_int(params, "n", minimum=1)
        return {"iterate": _belief_map(iterate(d, p, n))}, 0
    if action == "limit":
        p = _belief_from(params, space)
        lim = limit_belief(d, p)
        return {"kind": lim.kind, "limit": _belief_map(lim.limit)}, 0
    if action == "verify-limit":
        p = _belief_from(params, space)
        tol = float(params.get("tol", 1e-6))
        max_n = int(params.get("max_n", 200))
        lim = limit_belief(d, p)
        try:
            steps = verify_limit_numerically(d, p, tol, max_n)
        except NoConvergence as exc:
            raise ScenarioError("max_n", str(exc)) from exc
        return {
            "kind": lim.kind,
            "limit": _belief_map(lim.limit),
            "iterations_to_tol": steps,
        }, 0
    if action == "idempotence":
        return {"idempotent": bool(check_idempotence(d))}, 0
    if action == "fixed-points":
        points = enumerate_fixed_points(d)
        levels = [
            [space.labels[i] for i in e.sorted_members()] for e in weight_level_sets(d)
        ]
        return {
            "fixed_points": [_belief_map(q) for q in points],
            "weight_level_sets": levels,
        }, 0
    raise ScenarioError("action", f"unknown dynamics action {action!r}")


def _run_dutch_book(params: dict):
    space = _states(params)
    d = _distortion_from(params, space)
    p = _belief_from(params, space)
    e = _event_from(params, space)
    stake = _need_number(params, "stake", positive=True)
    if len(e.members) < 2:
        raise ScenarioError("event", "needs at least two states")
    book = construct_dutch_book(d, p, e, stake)
    if book is None:
        return {"book": None}, 0
    return {
        "book": {
            "event": _event_labels(space, book.event),
            "win_state": space.labels[book.win_state],
            "lose_state": space.labels[book.lose_state],
            "stake": book.stake,
            "break_even_prob": book.break_even_prob,
            "loss_rate": book.loss_rate,
            "value_distort_first": book.value_distort_first,
            "value_condition_first": book.value_condition_first,
        }
    }, 0


def _run_dynamic_consistency(params: dict):
    space = _states(params)
    d = _distortion_from(params, space)
    trials = _need_int(params, "trials", minimum=1)
    seed = _need_int(params, "seed")
    tol = float(params.get("tol", DEFAULT_TOL))
    report = check_dynamic_consistency(d, trials, seed, space=space, tol=tol)
    out = {
        "passed": report.passed,
        "max_deviation": float(report.max_deviation),
        "tol": float(report.tol),
        "witness": None,
    }
    if report.witness is not None:
        p, e, f, g, h = report.witness
        out["witness"] = {
            "belief": _belief_map(p),
            "event": _event_labels(space, e),
            "f": [float(x) for x in f.payoffs],
            "g": [float(x) for x in g.payoffs],
            "h": [float(x) for x in h.payoffs],
        }
    return out, 0 if report.passed else 1


def _run_weighted_utility(params: dict):
    outcomes = _need(params, "outcomes", list)
    if len(outcomes) < 1:
        raise ScenarioError("outcomes", "must be non-empty")
    probs = _vector_from(params, "probs", len(outcomes), positive=True)
    psi_values = _vector_from(params, "psi", len(outcomes), positive=True)
    u_values = _vector_from(params, "u", len(outcomes))
    try:
        lot = Lottery(tuple(float(x) for x in outcomes), probs)
    except ValueError as exc:
        raise ScenarioError("outcomes", str(exc)) from exc
    table = {float(x): (float(w), float(uv)) for x, w, uv in zip(lot.outcomes, psi_values, u_values)}
    psi = WeightFunction(
        lambda xs: np.array([table[float(x)][0] for x in xs]), "tabulated"
    )
    value = weighted_utility(lot, psi, lambda x: table[float(x)][1])
    return {"value": value}, 0


def _run_curve(params: dict, out_path: Optional[str]):
    psi = _vector_from(params, "psi", 2, positive=True)
    alphas = _need(params, "alphas", list)
    if not alphas:
        raise ScenarioError("alphas", "must be non-empty")
    for a in alphas:
        if isinstance(a, bool) or not isinstance(a, (int, float)) or a <= 0:
            raise ScenarioError("alphas", "entries must be positive numbers")
    grid = _need_int(params, "grid", minimum=2)
    if out_path is None:
        raise ScenarioError("out", "curve output needs --out")
    space = StateSpace(["w1", "w2"])
    lines = ["p,alpha,phi_p"]
    for a in alphas:
        d = PowerWeighted(space, psi, float(a))
        for k in range(1, grid + 1):
            p = k / (grid + 1.0)
            phi = d(belief(space, [p, 1.0 - p])).probs[0]
            lines.append(f"{p:.17g},{float(a):.17g},{phi:.17g}")
    with open(out_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return {"rows": len(lines) - 1, "path": out_path}, 0


_EXECUTORS = {
    "distort": _run_distort,
    "condition": _run_condition,
    "identify": _run_identify,
    "coherence-audit": _run_coherence_audit,
    "grether": _run_grether,
    "gs": _run_gs,
    "motivated": _run_motivated,
    "dynamics": _run_dynamics,
    "dutch-book": _run_dutch_book,
    "dynamic-consistency": _run_dynamic_consistency,
    "weighted-utility": _run_weighted_utility,
}


def run(kind: str, scenario_path: str, out_path: Optional[str], overrides: dict, quiet: bool) -> int:
    """Execute one scenario file and write its report; returns the exit code."""
    started = time.perf_counter()
    try:
        with open(scenario_path) as fh:
            scenario = json.load(fh)
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"scenario is not valid JSON: {exc}", file=sys.stderr)
        return 2
    try:
        if not isinstance(scenario, dict):
            raise ScenarioError("scenario", "must be a JSON object")
        file_kind = scenario.get("kind")
        if file_kind != kind:
            raise ScenarioError("kind", f"scenario kind {file_kind!r} does not match subcommand {kind!r}")
        params = scenario.get("parameters")
        if not isinstance(params, dict):
            raise ScenarioError("parameters", "must be a JSON object")
        params = dict(params)
        for key, value in overrides.items():
            if value is not None:
                params[key] = value
        if kind == "curve":
            results, code = _run_curve(params, out_path)
        else:
            results, code = _EXECUTORS[kind](params)
    except ScenarioError as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 2
    except ProbDistortError as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 2

    report = {
        "scenario": scenario,
        "results": results,
        "provenance": {
            "version": __version__,
            "kernel": kernels.IMPLEMENTATION,
            "seed": params.get("seed"),
            "trials": params.get("trials"),
            "tol": params.get("tol"),
        },
        "timing": {"seconds": time.perf_counter() - started},
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if kind != "curve" and out_path is not None:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    elif kind != "curve":
        print(text)
    if not quiet:
        status = "ok" if code == 0 else "property check failed"
        print(f"{kind}: {status}", file=sys.stderr)
    return code


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="probdistort",
        description="Run belief-distortion scenarios from JSON files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a '{kind}' scenario")
        p.add_argument("--scenario", required=True, help="path to the scenario JSON file")
        p.add_argument("--out", default=None, help="output path (report JSON, or CSV for curve)")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument("--trials", type=int, default=None, help="override the scenario trial count")
        p.add_argument("--tol", type=float, default=None, help="override the scenario tolerance")
        p.add_argument("--quiet", action="store_true", help="suppress the status line")
    args = parser.parse_args(argv)
    overrides = {"seed": args.seed, "trials": args.trials, "tol": args.tol}
    return run(args.command, args.scenario, args.out, overrides, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
