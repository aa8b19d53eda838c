"""Mode-inference audit: confusion matrix, precision, recall.

Rows index the respondent-validated mode, columns the inferred mode. Legs
missing either label never enter the matrix; they are tallied separately so
the audited total stays reconcilable with the raw leg count.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from .diary import TripLeg
from .errors import EmptyMatrixError
from .modes import MODE_ORDER, ModeLabel

_INDEX = {mode: i for i, mode in enumerate(MODE_ORDER)}
N_MODES = len(MODE_ORDER)


@dataclass(frozen=True, slots=True)
class ConfusionMatrix:
    counts: tuple[tuple[int, ...], ...]  # [validated][inferred]
    excluded: int = 0

    def __post_init__(self) -> None:
        if len(self.counts) != N_MODES or any(len(r) != N_MODES for r in self.counts):
            raise ValueError(f"counts must be {N_MODES}x{N_MODES}")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(N_MODES))

    def row_sum(self, mode: ModeLabel) -> int:
        return sum(self.counts[_INDEX[mode]])

    def col_sum(self, mode: ModeLabel) -> int:
        j = _INDEX[mode]
        return sum(row[j] for row in self.counts)

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            counts=tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.counts, other.counts)
            ),
            excluded=self.excluded + other.excluded,
        )


def zero_matrix() -> ConfusionMatrix:
    return ConfusionMatrix(counts=tuple(tuple(0 for _ in MODE_ORDER) for _ in MODE_ORDER))


def matrix_from_counts(
    counts: Sequence[Sequence[int]], excluded: int = 0
) -> ConfusionMatrix:
    return ConfusionMatrix(counts=tuple(tuple(row) for row in counts), excluded=excluded)


def build_confusion(legs: Iterable[TripLeg]) -> ConfusionMatrix:
    """Tally validated-vs-inferred mode pairs over trip legs.

    Legs lacking a validated mode or with an unmapped inferred mode are
    skipped and counted in ``excluded``.
    """
    counts = [[0] * N_MODES for _ in MODE_ORDER]
    excluded = 0
    for leg in legs:
        if leg.validated_mode is None or leg.inferred_mode is None:
            excluded += 1
        else:
            counts[_INDEX[leg.validated_mode]][_INDEX[leg.inferred_mode]] += 1
    return matrix_from_counts(counts, excluded=excluded)


def precision(matrix: ConfusionMatrix, mode: ModeLabel) -> float | None:
    """Correct predictions of ``mode`` over all predictions of it; None when
    the mode was never predicted."""
    denom = matrix.col_sum(mode)
    if denom == 0:
        return None
    i = _INDEX[mode]
    return matrix.counts[i][i] / denom


def recall(matrix: ConfusionMatrix, mode: ModeLabel) -> float | None:
    """Correct predictions of ``mode`` over all validated occurrences of it;
    None when the mode was never validated."""
    denom = matrix.row_sum(mode)
    if denom == 0:
        return None
    i = _INDEX[mode]
    return matrix.counts[i][i] / denom


def mismatch_rate(matrix: ConfusionMatrix) -> float:
    """Share of legs whose inferred mode disagrees with the validated mode."""
    total = matrix.total
    if total == 0:
        raise EmptyMatrixError("confusion matrix has no entries")
    return 1.0 - matrix.trace / total


def _pct(value: float | None) -> str:
    return "" if value is None else f"{value * 100.0:.1f}"


def confusion_csv(matrix: ConfusionMatrix) -> str:
    """CSV with one row per validated mode, a Recall column, and a final
    Precision row (inferred modes across the columns)."""
    out = io.StringIO()
    out.write("," + ",".join(m.display for m in MODE_ORDER) + ",Recall (%)\n")
    for mode in MODE_ORDER:
        row = matrix.counts[_INDEX[mode]]
        out.write(
            mode.display
            + ","
            + ",".join(str(c) for c in row)
            + f",{_pct(recall(matrix, mode))}\n"
        )
    out.write(
        "Precision (%),"
        + ",".join(_pct(precision(matrix, mode)) for mode in MODE_ORDER)
        + ",\n"
    )
    return out.getvalue()
