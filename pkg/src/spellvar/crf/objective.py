"""Penalized log-likelihood and its exact gradient, batched over sequences.

Sequences are flattened into one sparse indicator matrix (positions x
features) so emission scores and expected feature counts become two sparse
matrix products; forward-backward runs vectorized over all sequences at
once, padded to the longest one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.special import logsumexp

from spellvar.crf.model import LABELS


@dataclass
class EncodedDataset:
    """Training data compiled to arrays.

    Flat position rows are ordered sequence by sequence, position by
    position; ``position_of[s, t]`` maps back into that flat order and
    ``mask`` marks real (non-padded) positions.
    """

    feature_index: dict[str, int]
    matrix: sparse.csr_matrix
    gold: np.ndarray
    gold_onehot: np.ndarray
    lengths: np.ndarray
    mask: np.ndarray
    transition_counts: np.ndarray
    n_labels: int = len(LABELS)

    @property
    def n_features(self) -> int:
        return len(self.feature_index)

    @property
    def n_parameters(self) -> int:
        return self.n_features * self.n_labels + self.n_labels * self.n_labels


def encode_dataset(
    data: Sequence[tuple[Sequence[Sequence[str]], Sequence[str]]],
) -> EncodedDataset:
    """Index features in first-seen order and flatten sequences to arrays."""
    feature_index: dict[str, int] = {}
    label_index = {label: i for i, label in enumerate(LABELS)}
    rows: list[int] = []
    cols: list[int] = []
    gold: list[int] = []
    lengths: list[int] = []
    transition_counts = np.zeros((len(LABELS), len(LABELS)))
    flat = 0
    for features, tags in data:
        if len(features) != len(tags):
            raise ValueError(
                f"sequence has {len(features)} feature lists but {len(tags)} tags"
            )
        if len(features) == 0:
            raise ValueError("empty sequences are not trainable")
        previous: int | None = None
        for feats, tag in zip(features, tags):
            if tag not in label_index:
                raise ValueError(f"unknown tag {tag!r}")
            current = label_index[tag]
            gold.append(current)
            if previous is not None:
                transition_counts[previous, current] += 1
            previous = current
            for feature in dict.fromkeys(feats):
                index = feature_index.setdefault(feature, len(feature_index))
                rows.append(flat)
                cols.append(index)
            flat += 1
        lengths.append(len(features))

    matrix = sparse.csr_matrix(
        (np.ones(len(rows)), (rows, cols)),
        shape=(flat, len(feature_index)),
    )
    gold_arr = np.array(gold, dtype=int)
    onehot = np.zeros((flat, len(LABELS)))
    onehot[np.arange(flat), gold_arr] = 1.0
    lengths_arr = np.array(lengths, dtype=int)
    max_len = int(lengths_arr.max())
    mask = np.arange(max_len)[None, :] < lengths_arr[:, None]
    return EncodedDataset(
        feature_index=feature_index,
        matrix=matrix,
        gold=gold_arr,
        gold_onehot=onehot,
        lengths=lengths_arr,
        mask=mask,
        transition_counts=transition_counts,
    )


def unpack_weights(weights: np.ndarray, dataset: EncodedDataset) -> tuple[np.ndarray, np.ndarray]:
    n_state = dataset.n_features * dataset.n_labels
    state = weights[:n_state].reshape(dataset.n_features, dataset.n_labels)
    transitions = weights[n_state:].reshape(dataset.n_labels, dataset.n_labels)
    return state, transitions


def log_likelihood_and_gradient(
    weights: np.ndarray, dataset: EncodedDataset, l2: float = 0.0
) -> tuple[float, np.ndarray]:
    """Sum over sequences of gold-path score minus log partition, minus the
    L2 term, together with its exact gradient (empirical minus expected
    counts minus ``l2 * weights``).  L1 is left to the optimizer."""
    state, transitions = unpack_weights(weights, dataset)
    n_seqs, max_len = dataset.mask.shape
    n_labels = dataset.n_labels

    emissions_flat = np.asarray(dataset.matrix @ state)
    emissions = np.zeros((n_seqs, max_len, n_labels))
    emissions[dataset.mask] = emissions_flat

    alpha = np.empty_like(emissions)
    alpha[:, 0] = emissions[:, 0]
    for t in range(1, max_len):
        step = logsumexp(alpha[:, t - 1, :, None] + transitions[None], axis=1)
        alpha[:, t] = np.where(dataset.mask[:, t, None], step + emissions[:, t], alpha[:, t - 1])
    log_z = logsumexp(alpha[:, -1], axis=-1)

    beta = np.zeros_like(emissions)
    for t in range(max_len - 2, -1, -1):
        step = logsumexp(
            transitions[None] + (emissions[:, t + 1] + beta[:, t + 1])[:, None, :], axis=2
        )
        beta[:, t] = np.where(dataset.mask[:, t + 1, None], step, beta[:, t + 1])

    node_log = alpha + beta - log_z[:, None, None]
    node_marginals = np.exp(node_log) * dataset.mask[:, :, None]
    marginals_flat = node_marginals[dataset.mask]

    expected_transitions = np.zeros_like(transitions)
    for t in range(1, max_len):
        live = dataset.mask[:, t]
        if not live.any():
            break
        joint = (
            alpha[live, t - 1, :, None]
            + transitions[None]
            + (emissions[live, t] + beta[live, t])[:, None, :]
            - log_z[live, None, None]
        )
        expected_transitions += np.exp(joint).sum(axis=0)

    flat_rows = np.arange(dataset.gold.shape[0])
    gold_score = float(emissions_flat[flat_rows, dataset.gold].sum())
    gold_score += float((dataset.transition_counts * transitions).sum())

    value = gold_score - float(log_z.sum())
    value -= 0.5 * l2 * (float((state * state).sum()) + float((transitions * transitions).sum()))

    grad_state = np.asarray(dataset.matrix.T @ (dataset.gold_onehot - marginals_flat))
    grad_state -= l2 * state
    grad_transitions = dataset.transition_counts - expected_transitions - l2 * transitions
    gradient = np.concatenate([grad_state.ravel(), grad_transitions.ravel()])
    return value, gradient
