"""Joint state-signal distributions and distortions of the whole matrix.

A joint distribution is a single probability measure over state-signal
cells.  Distortions here act on the entire matrix at once; the checkers
probe whether they commute with conditioning on signal events and whether
the distorted state marginal depends only on the input state marginal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import DEFAULT_TOL, SUM_TOL, Belief, StateSpace, belief, trial_rng
from .distortion import CoherenceReport, DistortionFn
from .errors import (
    MarginalityViolation,
    SignalSpaceTooLarge,
    ZeroProbabilityEvent,
)
from .signals import SignalSpace


@dataclass(frozen=True)
class SignalEvent:
    """Non-empty set of signal indices."""

    members: frozenset[int]

    def __init__(self, members: Iterable[int]):
        ms = frozenset(int(i) for i in members)
        if not ms:
            raise ValueError("signal event must be non-empty")
        if any(i < 0 for i in ms):
            raise ValueError("signal indices must be non-negative")
        object.__setattr__(self, "members", ms)

    @classmethod
    def from_labels(cls, signals: SignalSpace, labels: Iterable[str]) -> "SignalEvent":
        return cls(signals.index(x) for x in labels)

    def mask(self, signals: SignalSpace) -> np.ndarray:
        if max(self.members) >= signals.m:
            raise ValueError("signal event refers to signals outside the space")
        out = np.zeros(signals.m, dtype=bool)
        out[sorted(self.members)] = True
        return out


@dataclass(frozen=True)
class JointDistribution:
    """Probability distribution over state-signal pairs, stored as an n x m matrix."""

    space: StateSpace
    signals: SignalSpace
    cells: np.ndarray = field(compare=False)

    def __post_init__(self):
        c = np.asarray(self.cells, dtype=np.float64)
        if c.shape != (self.space.n, self.signals.m):
            raise ValueError(f"expected a {self.space.n}x{self.signals.m} matrix, got {c.shape}")
        if np.any(c < 0.0):
            raise ValueError("cells must be non-negative")
        if abs(c.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"cells sum to {c.sum()!r}, not 1")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "cells", c)

    def signal_prob(self, theta: int) -> float:
        return float(self.cells[:, theta].sum())

    def column_belief(self, theta: int) -> Belief:
        """Distribution over states given the signal (the normalized column)."""
        col = self.cells[:, theta]
        total = col.sum()
        if total <= 0.0:
            raise ZeroProbabilityEvent(f"signal {theta} has zero probability")
        return belief(self.space, col / total)


JointDistortion = Callable[[JointDistribution], JointDistribution]


def joint_distribution(
    space: StateSpace, signals: SignalSpace, cells: Sequence[Sequence[float]] | np.ndarray
) -> JointDistribution:
    """Joint distribution from raw cells, renormalizing small float drift."""
    c = np.asarray(cells, dtype=np.float64)
    total = c.sum()
    if abs(total - 1.0) > SUM_TOL:
        if total <= 0.0:
            raise ValueError("cells must have positive total mass")
        c = c / total
    return JointDistribution(space, signals, c)


def state_marginal(p: JointDistribution) -> Belief:
    """Row sums: the distribution over states implied by the joint."""
    return belief(p.space, p.cells.sum(axis=1))


def signal_marginal(p: JointDistribution) -> np.ndarray:
    """Column sums: the distribution over signals implied by the joint."""
    return p.cells.sum(axis=0)


def condition_on_signal_event(
    p: JointDistribution, s: SignalEvent, tol: float = 0.0
) -> JointDistribution:
    """Restrict to the given signal columns and renormalize; other columns become zero."""
    mask = s.mask(p.signals)
    total = float(p.cells[:, mask].sum())
    if total <= tol:
        raise ZeroProbabilityEvent(f"signal event {sorted(s.members)} has mass {total}")
    cells = np.where(mask[None, :], p.cells, 0.0) / total
    return joint_distribution(p.space, p.signals, cells)


def apply_weighted_gs(weights: Sequence[float] | np.ndarray, p: JointDistribution) -> JointDistribution:
    """Scale every row by its state weight and renormalize the whole matrix."""
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (p.space.n,) or np.any(w <= 0.0):
        raise ValueError("need one strictly positive weight per state")
    cells = w[:, None] * p.cells
    return joint_distribution(p.space, p.signals, cells / cells.sum())


@dataclass(frozen=True)
class WeightedGS:
    """Closed-form joint distortion: per-state weights, probabilities untouched."""

    space: StateSpace
    signals: SignalSpace
    weights: np.ndarray = field(compare=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (self.space.n,) or np.any(w <= 0.0):
            raise ValueError("need one strictly positive weight per state")
        w = w / w.sum()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def __call__(self, p: JointDistribution) -> JointDistribution:
        return apply_weighted_gs(self.weights, p)


def power_joint_distortion(weights: Sequence[float], power: float) -> JointDistortion:
    """Cell-wise weight-and-power distortion of the whole matrix.

    For power != 1 this fails marginality; it is the standard counterexample
    family for the joint checkers.
    """
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w <= 0.0) or not power > 0.0:
        raise ValueError("weights and power must be strictly positive")

    def d(p: JointDistribution) -> JointDistribution:
        cells = np.zeros_like(p.cells)
        sup = p.cells > 0.0
        wm = np.broadcast_to(w[:, None], p.cells.shape)
        cells[sup] = wm[sup] * p.cells[sup] ** power
        return joint_distribution(p.space, p.signals, cells / cells.sum())

    return d


def build_remark1_distortion(
    varphi: Callable[[JointDistribution], np.ndarray],
    h_maps: Sequence[DistortionFn],
) -> JointDistortion:
    """Compose a signal-probability distortion with per-signal state distortions.

    varphi maps the joint to a distribution over signals (positive wherever
    the signal has positive probability); h_maps[t] distorts the conditional
    state distribution of column t.  The composite commutes with
    conditioning on single signals by construction.
    """

    def d(p: JointDistribution) -> JointDistribution:
        sig = np.asarray(varphi(p), dtype=np.float64)
        cells = np.zeros_like(p.cells)
        for t in range(p.signals.m):
            if p.signal_prob(t) <= 0.0:
                continue
            cells[:, t] = sig[t] * h_maps[t](p.column_belief(t)).probs
        return joint_distribution(p.space, p.signals, cells)

    return d


def signal_marginal_varphi() -> Callable[[JointDistribution], np.ndarray]:
    """The undistorted signal-probability map (keeps the signal marginal)."""
    return signal_marginal


def strong_family_varphi(
    gammas: Sequence[Callable[[Belief], float]], power: float
) -> Callable[[JointDistribution], np.ndarray]:
    """Signal-probability distortion of the form gamma_t(column) * p(t)**power, normalized.

    Composites built from this family commute with conditioning on every
    signal event, not just single signals.
    """

    def varphi(p: JointDistribution) -> np.ndarray:
        out = np.zeros(p.signals.m)
        for t in range(p.signals.m):
            mass = p.signal_prob(t)
            if mass > 0.0:
                out[t] = gammas[t](p.column_belief(t)) * mass**power
        return out / out.sum()

    return varphi


def _joint_spaces(d, space, signals):
    if isinstance(d, WeightedGS):
        return d.space, d.signals
    if space is None or signals is None:
        raise ValueError("pass `space` and `signals` when the distortion is a bare callable")
    return space, signals


def _sample_joint(rng: np.random.Generator, n: int, m: int, full_support: bool) -> np.ndarray:
    cells = rng.exponential(size=(n, m))
    if not full_support:
        drop = rng.random(size=(n, m)) < 0.3
        if drop.all():
            drop.flat[int(rng.integers(n * m))] = False
        cells = np.where(drop, 0.0, cells)
    return cells / cells.sum()


def _cells_gap(a: JointDistribution, b: JointDistribution) -> float:
    return float(np.abs(a.cells - b.cells).max())


def check_weak_signal_coherence(
    d: JointDistortion,
    trials: int = 200,
    seed: int = 0,
    *,
    space: Optional[StateSpace] = None,
    signals: Optional[SignalSpace] = None,
    tol: float = DEFAULT_TOL,
) -> CoherenceReport:
    """Sampled test that the distortion commutes with conditioning on one signal.

    Witness shape: (joint distribution, signal index).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sp, sig = _joint_spaces(d, space, signals)
    max_dev = 0.0
    worst: Optional[tuple] = None
    for t in range(trials):
        rng = trial_rng(seed, t)
        p = joint_distribution(sp, sig, _sample_joint(rng, sp.n, sig.m, full_support=t % 2 == 0))
        cols = [j for j in range(sig.m) if p.signal_prob(j) > 0.0]
        theta = cols[int(rng.integers(len(cols)))]
        ev = SignalEvent([theta])
        lhs = d(condition_on_signal_event(p, ev))
        try:
            rhs = condition_on_signal_event(d(p), ev)
            gap = _cells_gap(lhs, rhs)
        except ZeroProbabilityEvent:
            gap = 1.0
        if gap > max_dev:
            max_dev = gap
            worst = (p, theta)
    return CoherenceReport.build(max_dev, tol, worst)


def check_strong_signal_coherence(
    d: JointDistortion,
    trials: int = 50,
    seed: int = 0,
    *,
    space: Optional[StateSpace] = None,
    signals: Optional[SignalSpace] = None,
    tol: float = DEFAULT_TOL,
) -> CoherenceReport:
    """As the weak check, but over every non-empty proper signal event.

    Enumerates all 2**m - 2 proper events per sampled joint, so the signal
    space is capped at 12 signals.  Witness shape: (joint, signal indices).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sp, sig = _joint_spaces(d, space, signals)
    if sig.m > 12:
        raise SignalSpaceTooLarge(f"subset enumeration over {sig.m} signals is not supported")
    max_dev = 0.0
    worst: Optional[tuple] = None
    for t in range(trials):
        rng = trial_rng(seed, t)
        p = joint_distribution(sp, sig, _sample_joint(rng, sp.n, sig.m, full_support=t % 2 == 0))
        dp = d(p)
        for size in range(1, sig.m):
            for combo in combinations(range(sig.m), size):
                ev = SignalEvent(combo)
                if p.cells[:, list(combo)].sum() <= 0.0:
                    continue
                lhs = d(condition_on_signal_event(p, ev))
                try:
                    rhs = condition_on_signal_event(dp, ev)
                    gap = _cells_gap(lhs, rhs)
                except ZeroProbabilityEvent:
                    gap = 1.0
                if gap > max_dev:
                    max_dev = gap
                    worst = (p, combo)
    return CoherenceReport.build(max_dev, tol, worst)


def check_marginality(
    d: JointDistortion,
    trials: int = 200,
    seed: int = 0,
    *,
    space: Optional[StateSpace] = None,
    signals: Optional[SignalSpace] = None,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Sampled test that equal state marginals in implies equal state marginals out.

    Each trial redistributes every row's mass across columns (trial 0
    concentrates everything in the first column, the sharpest contrast) and
    compares the distorted state marginals.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sp, sig = _joint_spaces(d, space, signals)
    for t in range(trials):
        rng = trial_rng(seed, t)
        p = joint_distribution(sp, sig, _sample_joint(rng, sp.n, sig.m, full_support=t % 3 != 1))
        if t == 0:
            cells2 = np.zeros_like(p.cells)
            cells2[:, 0] = p.cells.sum(axis=1)
        else:
            cells2 = np.zeros_like(p.cells)
            for i in range(sp.n):
                mass = p.cells[i].sum()
                if mass <= 0.0:
                    continue
                draws = rng.exponential(size=sig.m)
                cells2[i] = mass * draws / draws.sum()
        q = joint_distribution(sp, sig, cells2)
        gap = np.abs(state_marginal(d(p)).probs - state_marginal(d(q)).probs).max()
        if gap > tol:
            return False
    return True


def induced_marginal_distortion(
    d: JointDistortion,
    q: Belief,
    theta_star: int,
    *,
    signals: Optional[SignalSpace] = None,
    tol: float = DEFAULT_TOL,
) -> Belief:
    """Distort a state distribution through the joint distortion.

    Embeds q as a single column of an otherwise-zero matrix, distorts, and
    returns the state marginal.  The result must not depend on which column
    carries the mass; every embedding is compared and a MarginalityViolation
    is raised if any two disagree beyond `tol`.
    """
    sig = d.signals if isinstance(d, WeightedGS) else signals
    if sig is None:
        raise ValueError("pass `signals` when the distortion is a bare callable")
    marginals = []
    for t in range(sig.m):
        cells = np.zeros((q.space.n, sig.m))
        cells[:, t] = q.probs
        marginals.append(state_marginal(d(JointDistribution(q.space, sig, cells))).probs)
    stacked = np.vstack(marginals)
    spread = float((stacked.max(axis=0) - stacked.min(axis=0)).max())
    if spread > tol:
        raise MarginalityViolation(
            f"column embeddings of the same marginal disagree by {spread:.3e}"
        )
    return belief(q.space, marginals[theta_star])


def full_matrix_form_applies(n: int, m: int, strongly_coherent: bool) -> bool:
    """Whether the whole-matrix weighted form is pinned down, not just the
    per-column conditional form: needs at least as many states as signals,
    or at least three signals together with strong coherence."""
    return n >= m or (m >= 3 and strongly_coherent)
