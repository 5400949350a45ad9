"""Sparse Gauss-Jordan elimination over Q(q).

Pivots are chosen by lowest :meth:`QScalar.complexity` to keep coefficient
growth down.  Every call allocates its own workspace, so the solver is
reentrant.
"""

from __future__ import annotations

from .scalar import ZERO, QScalar

__all__ = ["LinearSystemError", "solve_unique", "rank"]


class LinearSystemError(ArithmeticError):
    """Raised when a system has no solution or more than one."""

    def __init__(self, kind: str, detail: str):
        super().__init__(f"{kind} linear system: {detail}")
        self.kind = kind


def _rows_from_columns(columns, rhs=None):
    rows: dict = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            if v:
                rows.setdefault(key, {})[j] = v
    if rhs is not None:
        for key, v in rhs.items():
            if v:
                rows.setdefault(key, {})[-1] = v
    return list(rows.values())


def _eliminate(rows: list[dict], ncols: int):
    """Reduce in place; return list of (col, pivot_row) and the free columns."""
    pivots = []
    free = []
    active = rows
    for j in range(ncols):
        best = None
        for r in active:
            v = r.get(j)
            if v is not None and (best is None or v.complexity() < best[0]):
                best = (v.complexity(), r)
        if best is None:
            free.append(j)
            continue
        prow = best[1]
        inv = prow[j].inverse()
        for c in list(prow):
            prow[c] = prow[c] * inv
        for r in rows:
            if r is prow:
                continue
            f = r.get(j)
            if f is None:
                continue
            for c, pv in prow.items():
                nv = r.get(c, ZERO) - f * pv
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        pivots.append((j, prow))
        active = [r for r in active if r is not prow]
    return pivots, free, active


def solve_unique(columns: list[dict], rhs: dict) -> list[QScalar]:
    """Solve ``sum_j x_j * columns[j] == rhs`` for a unique ``x``.

    Vectors are dicts from an arbitrary row key to QScalar.  Raises
    :class:`LinearSystemError` when the system is inconsistent or the
    solution is not unique.
    """
    rows = _rows_from_columns(columns, rhs)
    pivots, free, rest = _eliminate(rows, len(columns))
    for r in rest:
        if r.get(-1):
            raise LinearSystemError("inconsistent", f"residual equation 0 = {r[-1]}")
    if free:
        raise LinearSystemError("underdetermined", f"no pivot for unknowns {free}")
    sol = [ZERO] * len(columns)
    for j, prow in pivots:
        sol[j] = prow.get(-1, ZERO)
    return sol


def rank(columns: list[dict]) -> int:
    rows = _rows_from_columns(columns)
    pivots, _, _ = _eliminate(rows, len(columns))
    return len(pivots)
