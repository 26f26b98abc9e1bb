"""Penalized maximum-likelihood training for the tagger."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from spellvar.crf.model import LABELS, CrfModel
from spellvar.crf.objective import encode_dataset, log_likelihood_and_gradient, unpack_weights
from spellvar.crf.optimizer import minimize


@dataclass(frozen=True)
class TrainConfig:
    """Elastic-net training settings; the defaults favour sparse models."""

    l1: float = 2.35
    l2: float = 0.08
    max_optimizer_iterations: int = 200
    gradient_tolerance: float = 1e-5
    window: int = 1

    def __post_init__(self) -> None:
        if self.l1 < 0 or self.l2 < 0:
            raise ValueError("penalties must be non-negative")
        if self.max_optimizer_iterations < 1:
            raise ValueError("max_optimizer_iterations must be >= 1")


def train(
    data: Sequence[tuple[Sequence[Sequence[str]], Sequence[str]]],
    config: TrainConfig = TrainConfig(),
) -> CrfModel:
    """Fit a model on (features, tags) sequences.

    Single-label data still trains but the returned model carries the
    ``degenerate`` flag.  A non-finite objective raises.
    """
    if not data:
        raise ValueError("no training data")
    dataset = encode_dataset(data)
    degenerate = len(set(dataset.gold.tolist())) < 2

    def fun_grad(weights: np.ndarray) -> tuple[float, np.ndarray]:
        value, gradient = log_likelihood_and_gradient(weights, dataset, config.l2)
        return -value, -gradient

    result = minimize(
        fun_grad,
        np.zeros(dataset.n_parameters),
        l1=config.l1,
        max_iterations=config.max_optimizer_iterations,
        tolerance=config.gradient_tolerance,
    )
    if not np.isfinite(result.fun):
        raise ValueError("training diverged to a non-finite objective")
    state, transitions = unpack_weights(result.x, dataset)
    return CrfModel(
        feature_index=dataset.feature_index,
        state=state,
        transitions=transitions,
        window=config.window,
        labels=LABELS,
        degenerate=degenerate,
        final_objective=-result.fun,
    )
