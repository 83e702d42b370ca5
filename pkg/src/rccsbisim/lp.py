"""Exact feasibility of ``A x = b, x >= 0`` by phase-one simplex.

Rows are sparse ``{column: coefficient}`` maps.  Arithmetic is done in
``gmpy2.mpq`` for speed; inputs may be ``Fraction`` or ``int``.  Bland's rule
prevents cycling.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from gmpy2 import mpq

Row = Mapping[int, Fraction | int]


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def feasible(rows: Sequence[Row], rhs: Sequence[Fraction | int], nvars: int) -> bool:
    """True iff some ``x >= 0`` satisfies every row exactly."""
    tab: list[dict[int, mpq]] = []
    b: list[mpq] = []
    for row, r in zip(rows, rhs):
        r = _q(r)
        coeffs = {j: _q(c) for j, c in row.items() if c}
        if r < 0:
            r = -r
            coeffs = {j: -c for j, c in coeffs.items()}
        if not coeffs:
            if r != 0:
                return False
            continue
        tab.append(coeffs)
        b.append(r)
    m = len(tab)
    # Artificial variable i sits in column nvars + i and starts in the basis.
    basis = [nvars + i for i in range(m)]
    for i in range(m):
        tab[i][nvars + i] = mpq(1)
    # Reduced costs of the phase-one objective (sum of artificials).
    cost: dict[int, mpq] = {}
    for row in tab:
        for j, c in row.items():
            if j < nvars:
                cost[j] = cost.get(j, mpq(0)) - c
    cost = {j: c for j, c in cost.items() if c}
    value = sum(b, mpq(0))
    while value > 0:
        entering = min((j for j, c in cost.items() if c < 0 and j < nvars), default=None)
        if entering is None:
            return False
        leave, best = -1, None
        for i in range(m):
            a = tab[i].get(entering)
            if a is not None and a > 0:
                ratio = b[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        _pivot(tab, b, leave, entering)
        f = cost[entering]
        for j, c in tab[leave].items():
            v = cost.get(j, 0) - f * c
            if v:
                cost[j] = v
            else:
                cost.pop(j, None)
        basis[leave] = entering
        value = sum((b[i] for i in range(m) if basis[i] >= nvars), mpq(0))
    return True


def _pivot(tab: list[dict[int, mpq]], b: list[mpq], r: int, col: int) -> None:
    prow = tab[r]
    piv = prow[col]
    if piv != 1:
        for j in prow:
            prow[j] /= piv
        b[r] /= piv
    for i, row in enumerate(tab):
        if i == r:
            continue
        f = row.get(col)
        if not f:
            continue
        for j, c in prow.items():
            v = row.get(j, 0) - f * c
            if v:
                row[j] = v
            else:
                row.pop(j, None)
        b[i] -= f * b[r]
