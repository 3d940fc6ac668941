"""LIBSVM / SVM-Light text files, train/test splits and feature scaling."""

import gzip
import io
import logging
from dataclasses import dataclass

import numpy as np

from .data import dataset_from_arrays
from .errors import (DimensionMismatch, InputError, MalformedLine,
                     NonMonotonicIndex, TooFewSamples, UnmappableLabel)

__all__ = ["SvmLightRecord", "parse_svmlight", "load_svmlight",
           "serialize_svmlight", "densify", "records_to_dataset", "split",
           "ScalingSpec", "fit_scaling", "apply_scaling"]

logger = logging.getLogger(__name__)

# only these label spellings are accepted; anything else (2, 3, ...) is an error
_LABELS = {1.0: 1.0, -1.0: -1.0, 0.0: -1.0}


@dataclass(frozen=True)
class SvmLightRecord:
    label: float
    entries: tuple  # ((index, value), ...) with 1-based increasing indices

    @property
    def max_index(self):
        return self.entries[-1][0] if self.entries else 0


def _parse_line(line, line_no):
    tokens = line.split()
    try:
        raw = float(tokens[0])
    except ValueError:
        raise MalformedLine(line_no, f"bad label {tokens[0]!r}") from None
    if raw not in _LABELS:
        raise UnmappableLabel(line_no, tokens[0])
    entries = []
    last = 0
    for tok in tokens[1:]:
        idx, sep, val = tok.partition(":")
        if not sep:
            raise MalformedLine(line_no, f"expected index:value, got {tok!r}")
        try:
            idx = int(idx)
            val = float(val)
        except ValueError:
            raise MalformedLine(line_no, f"bad entry {tok!r}") from None
        if idx < 1:
            raise MalformedLine(line_no, f"feature index {idx} is not positive")
        if not np.isfinite(val):
            raise MalformedLine(line_no, f"non-finite value in {tok!r}")
        if idx <= last:
            raise NonMonotonicIndex(line_no)
        last = idx
        entries.append((idx, val))
    return SvmLightRecord(_LABELS[raw], tuple(entries))


def parse_svmlight(stream):
    """Parse records from a text stream (or a string).

    ``#`` starts a comment; blank lines are skipped.  Labels ``+1``/``1``
    map to +1 and ``-1``/``0`` to -1.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    records = []
    for line_no, line in enumerate(stream, start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            records.append(_parse_line(line, line_no))
    return records


def load_svmlight(path):
    """Parse a file; names ending in ``.gz`` are read through gzip."""
    path = str(path)
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8") as fh:
        return parse_svmlight(fh)


def serialize_svmlight(records):
    """Canonical text: ``+1``/``-1`` labels and ``repr`` values."""
    lines = []
    for r in records:
        parts = ["+1" if r.label > 0 else "-1"]
        parts.extend(f"{int(i)}:{float(v)!r}" for i, v in r.entries)
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def densify(records, n_features=None):
    """Dense ``(X, y)``; width is the largest index seen unless given."""
    width = max((r.max_index for r in records), default=0)
    if n_features is None:
        n_features = width
    elif width > n_features:
        raise DimensionMismatch(
            f"records use feature {width} but only {n_features} are expected")
    X = np.zeros((len(records), n_features))
    for row, r in enumerate(records):
        for i, v in r.entries:
            X[row, i - 1] = v
    y = np.array([r.label for r in records], dtype=np.float64)
    return X, y


def records_to_dataset(records, n_features=None):
    X, y = densify(records, n_features)
    return dataset_from_arrays(X, y)


def split(records, train_fraction, seed):
    """Seeded, stratified train/test split.

    Each class is shuffled independently and divided in proportion, with at
    least one sample of each class on each side whenever that class has two
    or more members.  A single-class input falls back to a plain shuffle.
    """
    records = list(records)
    n = len(records)
    if n < 2:
        raise TooFewSamples("need at least two records to split")
    if not 0.0 < train_fraction < 1.0:
        raise InputError("train_fraction must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    n_train = min(max(int(round(train_fraction * n)), 1), n - 1)
    labels = np.array([r.label for r in records])
    classes = [np.flatnonzero(labels == c) for c in (1.0, -1.0)]
    classes = [c for c in classes if c.size]
    if len(classes) == 1:
        logger.warning("single-class input; split is not stratified")
        order = rng.permutation(n)
        return ([records[i] for i in order[:n_train]],
                [records[i] for i in order[n_train:]])

    # largest-remainder allocation of n_train across classes
    sizes = np.array([c.size for c in classes])
    exact = n_train * sizes / n
    take = np.floor(exact).astype(int)
    for j in np.argsort(-(exact - take), kind="stable")[: n_train - take.sum()]:
        take[j] += 1
    for j, s in enumerate(sizes):
        if s >= 2:
            take[j] = min(max(take[j], 1), s - 1)
    while take.sum() > n_train:
        j = int(np.argmax(take - (sizes >= 2)))
        take[j] -= 1
    while take.sum() < n_train:
        j = int(np.argmax(sizes - take - (sizes >= 2)))
        take[j] += 1

    train, test = [], []
    for idx, t in zip(classes, take):
        idx = rng.permutation(idx)
        train.extend(idx[:t])
        test.extend(idx[t:])
    train = rng.permutation(np.array(train, dtype=int))
    test = rng.permutation(np.array(test, dtype=int))
    return [records[i] for i in train], [records[i] for i in test]


@dataclass(frozen=True)
class ScalingSpec:
    mode: str = "none"
    low: np.ndarray = None
    span: np.ndarray = None


def fit_scaling(X, mode="none"):
    """Learn scaling parameters from training features only."""
    if mode in ("none", "unit_l2_per_sample"):
        return ScalingSpec(mode)
    if mode == "minmax_per_feature":
        X = np.asarray(X, dtype=np.float64)
        low = X.min(axis=0)
        span = X.max(axis=0) - low
        span[span == 0] = 1.0
        return ScalingSpec(mode, low, span)
    raise InputError(f"unknown scaling mode {mode!r}")


def apply_scaling(X, scaling):
    X = np.asarray(X, dtype=np.float64)
    if scaling.mode == "none":
        return X
    if scaling.mode == "minmax_per_feature":
        if X.shape[1] != scaling.low.shape[0]:
            raise DimensionMismatch("scaling was fit on a different width")
        return (X - scaling.low) / scaling.span
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return X / np.where(norms == 0, 1.0, norms)
