"""Finite probability spaces: state labels, beliefs, events, conditioning.

Everything here is immutable and pure.  Probability vectors are float64;
an entry is "off the support" exactly when it is 0.0.  Vector sums are kept
within SUM_TOL of one by renormalizing after arithmetic, and all equality
style comparisons elsewhere in the package default to DEFAULT_TOL.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ZeroProbabilityEvent

SUM_TOL = 1e-12
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class StateSpace:
    """Ordered, uniquely labeled finite set of states."""

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]):
        object.__setattr__(self, "labels", tuple(str(x) for x in labels))
        if not self.labels:
            raise ValueError("state space needs at least one state")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("state labels must be unique")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class Event:
    """Non-empty set of state indices."""

    members: frozenset[int]

    def __init__(self, members: Iterable[int]):
        ms = frozenset(int(i) for i in members)
        if not ms:
            raise ValueError("event must be non-empty")
        if any(i < 0 for i in ms):
            raise ValueError("state indices must be non-negative")
        object.__setattr__(self, "members", ms)

    @classmethod
    def from_labels(cls, space: StateSpace, labels: Iterable[str]) -> "Event":
        return cls(space.index(x) for x in labels)

    def mask(self, space: StateSpace) -> np.ndarray:
        if max(self.members) >= space.n:
            raise ValueError("event refers to states outside the space")
        out = np.zeros(space.n, dtype=bool)
        out[sorted(self.members)] = True
        return out

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


@dataclass(frozen=True)
class Belief:
    """Probability distribution over a StateSpace.

    Entries are non-negative and sum to one within SUM_TOL; construction
    validates both.  Use `belief` to build one from possibly drifted
    arithmetic output (it renormalizes when needed).
    """

    space: StateSpace
    probs: np.ndarray = field(compare=False)

    def __post_init__(self):
        v = np.asarray(self.probs, dtype=np.float64)
        if v.shape != (self.space.n,):
            raise ValueError(f"expected {self.space.n} probabilities, got shape {v.shape}")
        if np.any(v < 0.0):
            raise ValueError("probabilities must be non-negative")
        if abs(v.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {v.sum()!r}, not 1")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "probs", v)

    @property
    def support(self) -> Event:
        return Event(np.flatnonzero(self.probs > 0.0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Belief)
            and self.space == other.space
            and np.array_equal(self.probs, other.probs)
        )


def belief(space: StateSpace, probs: Sequence[float] | np.ndarray) -> Belief:
    """Belief from raw values, renormalizing when float drift exceeds SUM_TOL."""
    v = np.asarray(probs, dtype=np.float64)
    total = v.sum()
    if abs(total - 1.0) > SUM_TOL:
        if total <= 0.0:
            raise ValueError("probabilities must have positive total mass")
        v = v / total
    return Belief(space, v)


def uniform_belief(space: StateSpace) -> Belief:
    return Belief(space, np.full(space.n, 1.0 / space.n))


def point_mass(space: StateSpace, state: int) -> Belief:
    v = np.zeros(space.n)
    v[state] = 1.0
    return Belief(space, v)


def event_prob(p: Belief, e: Event) -> float:
    """Total probability mass on the event."""
    return float(p.probs[e.mask(p.space)].sum())


def condition(p: Belief, e: Event, tol: float = 0.0) -> Belief:
    """Bayesian conditional of p on the event; zero outside it.

    Raises ZeroProbabilityEvent when the event's mass is at or below tol
    (default: only when no mass at all sits on the event, so tiny tail
    masses still condition exactly).
    """
    mask = e.mask(p.space)
    total = float(p.probs[mask].sum())
    if total <= tol:
        raise ZeroProbabilityEvent(f"event {e.sorted_members()} has mass {total}")
    out = np.where(mask, p.probs, 0.0) / total
    return belief(p.space, out)


def belief_distance(p: Belief, q: Belief) -> float:
    """Max-norm distance between two beliefs on the same space."""
    if p.space != q.space:
        raise ValueError("beliefs live on different state spaces")
    return float(np.abs(p.probs - q.probs).max())


def sample_belief(space: StateSpace, support: Event, seed: int) -> Belief:
    """Flat-Dirichlet draw on the face of the simplex spanned by `support`.

    Deterministic given the seed; strictly positive exactly on `support`.
    Uses normalized independent unit exponentials, the standard
    dependency-free construction of a uniform simplex point.
    """
    rng = np.random.default_rng(seed)
    return _sample_on_support(rng, space, support.mask(space))


def _sample_on_support(rng: np.random.Generator, space: StateSpace, mask: np.ndarray) -> Belief:
    k = int(mask.sum())
    v = np.zeros(space.n)
    if k == 1:
        v[mask] = 1.0
        return Belief(space, v)
    draws = rng.exponential(size=k)
    while np.any(draws <= 0.0):  # exponential(0.0) has measure zero but guard anyway
        draws = rng.exponential(size=k)
    v[mask] = draws / draws.sum()
    return belief(space, v)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Per-trial generator derived from (seed, counter), independent of scheduling."""
    return np.random.default_rng([int(seed), int(index)])


def random_support_mask(rng: np.random.Generator, n: int, min_size: int = 1) -> np.ndarray:
    """Uniformly random support of size >= min_size."""
    size = int(rng.integers(min_size, n + 1))
    idx = rng.choice(n, size=size, replace=False)
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    return mask


def random_event(rng: np.random.Generator, n: int, proper: bool = True) -> Event:
    """Uniformly random non-empty (by default proper) subset of states."""
    hi = n if proper else n + 1
    size = int(rng.integers(1, hi))
    return Event(rng.choice(n, size=size, replace=False))


@dataclass(frozen=True)
class Partition:
    """Disjoint events covering the whole state space."""

    space: StateSpace
    blocks: tuple[Event, ...]

    def __init__(self, space: StateSpace, blocks: Iterable[Event]):
        bl = tuple(blocks)
        seen: set[int] = set()
        for b in bl:
            if seen & b.members:
                raise ValueError("partition blocks must be disjoint")
            seen |= b.members
        if seen != set(range(space.n)):
            raise ValueError("partition blocks must cover the state space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "blocks", bl)

    def is_nontrivial(self) -> bool:
        """True when some block has more than one state but not all of them."""
        return any(1 < len(b.members) < self.space.n for b in self.blocks)
