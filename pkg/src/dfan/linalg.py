"""Sparse exact row echelon forms over Q with tracked row combinations."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable


class SemiEchelon:
    """Rows with pairwise distinct pivots, the pivot being the key-maximal column.

    Each stored row remembers which input rows produced it (a dict
    label -> coefficient), so that reductions come with certificates.
    """

    def __init__(self, key: Callable[[Hashable], tuple]):
        self.key = key
        self.rows: dict = {}  # pivot -> (row dict, combination dict)

    def __len__(self) -> int:
        return len(self.rows)

    def pivots(self) -> set:
        return set(self.rows)

    def _lead(self, row: dict):
        return max(row, key=self.key)

    def head_reduce(self, row: dict, combo: dict | None = None) -> tuple:
        """Cancel the leading column while it is a pivot; returns (row, combo)."""
        row = dict(row)
        combo = dict(combo or {})
        while row:
            lead = self._lead(row)
            stored = self.rows.get(lead)
            if stored is None:
                break
            prow, pcombo = stored
            c = row[lead] / prow[lead]
            for col, v in prow.items():
                nv = row.get(col, 0) - c * v
                if nv:
                    row[col] = nv
                else:
                    row.pop(col, None)
            for lab, v in pcombo.items():
                nv = combo.get(lab, 0) - c * v
                if nv:
                    combo[lab] = nv
                else:
                    combo.pop(lab, None)
        return row, combo

    def add(self, row: dict, label: Hashable) -> bool:
        """Insert a row; False when it reduces to zero."""
        reduced, combo = self.head_reduce(row, {label: Fraction(1)})
        if not reduced:
            return False
        self.rows[self._lead(reduced)] = (reduced, combo)
        return True

    def extend(self, rows: Iterable[tuple]) -> None:
        for label, row in rows:
            self.add(row, label)
