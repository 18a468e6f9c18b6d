"""Split strategies over window indices."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from har_chain.exceptions import ProtocolError
from har_chain.preprocess.models import WindowedDataset
from har_chain.utils.seeding import derive_rng

logger = logging.getLogger(__name__)


class Protocol(str, Enum):
    HOLDOUT = "holdout"
    KFOLD = "kfold"
    LOSO = "loso"


class Grouping(str, Enum):
    WINDOW = "window"
    SUBJECT = "subject"


@dataclass(eq=False)
class FoldSpec:
    """Disjoint train and test window indices for one fold."""

    fold_id: str
    train_indices: np.ndarray
    test_indices: np.ndarray
    held_out_subject: str | None = None

    def __post_init__(self):
        self.train_indices = np.asarray(self.train_indices, dtype=np.int64)
        self.test_indices = np.asarray(self.test_indices, dtype=np.int64)
        if np.intersect1d(self.train_indices, self.test_indices).size:
            raise ProtocolError(f"fold {self.fold_id}: train and test indices overlap")

    def check(self, size: int) -> None:
        for name, idx in (("train", self.train_indices), ("test", self.test_indices)):
            if idx.size and (idx.min() < 0 or idx.max() >= size):
                raise ProtocolError(f"fold {self.fold_id}: {name} index outside [0, {size})")

    def to_dict(self) -> dict[str, Any]:
        return {
            "fold_id": self.fold_id,
            "held_out_subject": self.held_out_subject,
            "train_size": int(self.train_indices.size),
            "test_size": int(self.test_indices.size),
        }


def split_train_val(
    dataset: WindowedDataset,
    val_fraction: float = 0.2,
    seed: int = 0,
    grouping: Grouping | str = Grouping.SUBJECT,
) -> FoldSpec:
    """Split windows into a training and a validation side.

    ``window`` grouping shuffles window indices and cuts off ``round(N * f)`` of them.
    ``subject`` grouping shuffles the subjects and moves whole subjects to the
    validation side until it holds at least ``f`` of all windows; at least one
    subject always stays on the training side.

    :raises ValueError: If ``val_fraction`` is outside ``(0, 1)``.
    :raises ProtocolError: If the data cannot be split (fewer than two windows or subjects).
    """
    if not 0 < val_fraction < 1:
        raise ValueError(f"val_fraction must be in (0, 1), got {val_fraction}")
    grouping = Grouping(grouping)
    n = len(dataset)
    rng = derive_rng(seed, "split")

    if grouping is Grouping.WINDOW:
        if n < 2:
            raise ProtocolError(f"cannot split {n} window(s) into train and validation")
        order = rng.permutation(n)
        n_val = min(max(int(round(n * val_fraction)), 1), n - 1)
        return FoldSpec("holdout", np.sort(order[n_val:]), np.sort(order[:n_val]))

    subjects = dataset.subjects()
    if len(subjects) < 2:
        raise ProtocolError(f"subject-grouped split needs at least 2 subjects, found {len(subjects)}")
    ids = dataset.subject_ids.astype(str)
    val_subjects: list[str] = []
    covered = 0
    for s in rng.permutation(np.array(subjects, dtype=object)):
        if covered >= val_fraction * n or len(val_subjects) == len(subjects) - 1:
            break
        val_subjects.append(str(s))
        covered += int((ids == s).sum())
    is_val = np.isin(ids, val_subjects)
    logger.debug(f"Validation subjects: {sorted(val_subjects)} ({covered}/{n} windows)")
    return FoldSpec("holdout", np.flatnonzero(~is_val), np.flatnonzero(is_val))


def kfold(dataset: WindowedDataset, k: int, seed: int = 0) -> list[FoldSpec]:
    """Seeded ``k``-fold split of window indices; larger chunks come first.

    :raises ProtocolError: If ``k`` is not in ``[2, N]``.
    """
    n = len(dataset)
    if not 2 <= k <= n:
        raise ProtocolError(f"k must be in [2, {n}], got {k}")
    order = derive_rng(seed, "split").permutation(n)
    chunks = np.array_split(order, k)
    folds = []
    for i, chunk in enumerate(chunks):
        train_idx = np.concatenate([c for j, c in enumerate(chunks) if j != i])
        folds.append(FoldSpec(str(i + 1), np.sort(train_idx), np.sort(chunk)))
    return folds


def loso(dataset: WindowedDataset) -> list[FoldSpec]:
    """One fold per subject, in sorted subject order.

    :raises ProtocolError: If the dataset holds fewer than two subjects.
    """
    subjects = dataset.subjects()
    if len(subjects) < 2:
        raise ProtocolError(f"leave-one-subject-out needs at least 2 subjects, found {len(subjects)}")
    ids = dataset.subject_ids.astype(str)
    return [
        FoldSpec(s, np.flatnonzero(ids != s), np.flatnonzero(ids == s), held_out_subject=s)
        for s in subjects
    ]


def make_folds(
    dataset: WindowedDataset,
    protocol: Protocol | str,
    k: int = 5,
    seed: int = 0,
    val_fraction: float = 0.2,
    grouping: Grouping | str = Grouping.SUBJECT,
) -> list[FoldSpec]:
    protocol = Protocol(protocol)
    if protocol is Protocol.KFOLD:
        return kfold(dataset, k, seed)
    if protocol is Protocol.LOSO:
        return loso(dataset)
    return [split_train_val(dataset, val_fraction, seed, grouping)]
