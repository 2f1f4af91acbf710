"""Sparse exact elimination, factored once and reused for many right-hand sides."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence


def _axpy(target: dict, c, src: Mapping):
    for k, v in src.items():
        x = target.get(k, 0) + c * v
        if x:
            target[k] = x
        else:
            target.pop(k, None)


class SparseSystem:
    """Rows are dicts column -> coefficient.  solve(b) returns one solution or None."""

    def __init__(self, rows: Sequence[Mapping], ncols: int):
        self.ncols = ncols
        self.nrows = len(rows)
        self.pivots: list = []  # (column, row dict, combination of original rows)
        self.conditions: list = []  # combinations that must vanish on b
        where: dict = {}
        for i, r in enumerate(rows):
            row = {k: Fraction(v) for k, v in r.items() if v}
            combo = {i: Fraction(1)}
            changed = True
            while changed:
                changed = False
                for col in sorted(row):
                    if col in where:
                        _, prow, pcombo = self.pivots[where[col]]
                        c = -row[col]
                        _axpy(row, c, prow)
                        _axpy(combo, c, pcombo)
                        changed = True
                        break
            if not row:
                self.conditions.append(combo)
                continue
            col = min(row)
            inv = 1 / row[col]
            row = {k: v * inv for k, v in row.items()}
            combo = {k: v * inv for k, v in combo.items()}
            where[col] = len(self.pivots)
            self.pivots.append((col, row, combo))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, b: Sequence):
        b = list(b)
        for cond in self.conditions:
            if sum(c * b[i] for i, c in cond.items() if b[i]):
                return None
        x = [0] * self.ncols
        for col, row, combo in reversed(self.pivots):
            val = sum(c * b[i] for i, c in combo.items() if b[i])
            val -= sum(v * x[k] for k, v in row.items() if k != col and x[k])
            x[col] = Fraction(val)
        return x
