"""Second-level inference: probability over candidate Markov-chain orders.

Both priors over orders reduce to a log-sum-exp normalization of the
per-order log evidences, with the parameter-count penalty entering as an
additive -|M_k| term in log space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

#: Two probabilities closer than this are treated as tied in map_order.
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class OrderPosterior:
    """Normalized probability over candidate orders k."""

    orders: tuple[int, ...]
    log_evidence: np.ndarray = field(repr=False)
    log_prior_weight: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)

    def probability(self, k: int) -> float:
        return float(self.probabilities[self.orders.index(k)])


def free_params(k: int, alphabet_size: int) -> int:
    """Number of free parameters of an order-k chain: A**k * (A - 1)."""
    if k < 1:
        raise ValueError("order k must be >= 1")
    if alphabet_size < 2:
        raise ValueError("alphabet size must be >= 2")
    return alphabet_size**k * (alphabet_size - 1)


def _log_normalize(scores: np.ndarray) -> np.ndarray:
    shift = scores.max()
    w = np.exp(scores - shift)
    return w / w.sum()


def _build(evidences: Mapping[int, float], log_prior) -> OrderPosterior:
    if not evidences:
        raise ValueError("need at least one candidate order")
    orders = tuple(sorted(evidences))
    log_ev = np.array([float(evidences[k]) for k in orders])
    log_pw = np.array([float(log_prior(k)) for k in orders])
    probs = _log_normalize(log_ev + log_pw)
    return OrderPosterior(orders, log_ev, log_pw, probs)


def compare_uniform(evidences: Mapping[int, float]) -> OrderPosterior:
    """Uniform prior over orders; it cancels in the normalization."""
    return _build(evidences, lambda k: 0.0)


def compare_penalized(evidences: Mapping[int, float], alphabet_size: int) -> OrderPosterior:
    """Prior weight exp(-|M_k|), penalizing the free-parameter count.

    The penalty prior's own normalization cancels between numerator and
    denominator, so only the exp(-|M_k|) factors matter.
    """
    return _build(evidences, lambda k: -float(free_params(k, alphabet_size)))


def map_order(op: OrderPosterior) -> int:
    """Most probable order; ties within TIE_TOLERANCE go to the smallest k."""
    best = op.probabilities.max()
    for k, p in zip(op.orders, op.probabilities):
        if p >= best - TIE_TOLERANCE:
            return k
    raise AssertionError("unreachable")
