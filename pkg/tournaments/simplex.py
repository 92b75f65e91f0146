"""
Exact rational simplex for packing LPs: maximize c.x subject to A x <= b, x >= 0, b >= 0.

The all-slack basis is feasible, so no phase one is needed. Pivots follow
Bland's rule (lowest-index entering column, ties in the ratio test broken by
lowest basic index), which guarantees termination on degenerate problems.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence
import logging

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPSolution:
    value: Fraction
    primal: List[Fraction]
    dual: List[Fraction]
    pivots: int


class UnboundedProblem(ArithmeticError):
    pass


class RationalSimplex:
    def __init__(self, matrix: Sequence[Sequence[int]], rhs: Sequence[int], objective: Sequence[int]):
        if any(b < 0 for b in rhs):
            raise ValueError("right-hand side must be nonnegative")
        if any(len(row) != len(objective) for row in matrix) or len(matrix) != len(rhs):
            raise ValueError("matrix shape does not match rhs/objective")
        self.rows = len(rhs)
        self.columns = len(objective)
        self.matrix = matrix
        self.rhs = rhs
        self.objective = objective

    def solve(self) -> LPSolution:
        m, nv = self.rows, self.columns
        width = nv + m
        tableau = [
            [Fraction(a) for a in row] + [ONE if i == r else ZERO for i in range(m)]
            for r, row in enumerate(self.matrix)
        ]
        rhs = [Fraction(b) for b in self.rhs]
        reduced = [-Fraction(c) for c in self.objective] + [ZERO] * m
        value = ZERO
        basis = list(range(nv, width))
        pivots = 0

        while True:
            entering = next((j for j in range(width) if reduced[j] < 0), None)
            if entering is None:
                break
            leaving = None
            best_ratio = None
            for r in range(m):
                a = tableau[r][entering]
                if a > 0:
                    ratio = rhs[r] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[r] < basis[leaving])
                    ):
                        best_ratio, leaving = ratio, r
            if leaving is None:
                raise UnboundedProblem(f"column {entering} is unbounded")

            pivot_row = tableau[leaving]
            pivot = pivot_row[entering]
            if pivot != 1:
                pivot_row = tableau[leaving] = [a / pivot for a in pivot_row]
                rhs[leaving] /= pivot
            support = [j for j in range(width) if pivot_row[j]]
            for r in range(m):
                factor = tableau[r][entering]
                if r == leaving or not factor:
                    continue
                row = tableau[r]
                for j in support:
                    row[j] -= factor * pivot_row[j]
                rhs[r] -= factor * rhs[leaving]
            factor = reduced[entering]
            for j in support:
                reduced[j] -= factor * pivot_row[j]
            value -= factor * rhs[leaving]
            basis[leaving] = entering
            pivots += 1

        primal = [ZERO] * nv
        for r, column in enumerate(basis):
            if column < nv:
                primal[column] = rhs[r]
        dual = reduced[nv:]
        logger.debug(f"Simplex finished: {m}x{nv}, {pivots} pivots, value {value}")
        return LPSolution(value=value, primal=primal, dual=dual, pivots=pivots)
