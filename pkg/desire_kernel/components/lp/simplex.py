"""Exact two-phase simplex over `fractions.Fraction`.

Programs are `maximize c·x subject to A x (<=|>=|=) b, x >= 0`. Pivoting uses
Bland's rule (smallest entering index, ties in the ratio test broken by the
smallest basic variable), so every run terminates and identical programs give
identical pivots. Infeasible programs come back with a Farkas multiplier
vector `y` that `verify_farkas` can re-check:

    y·A >= 0,  y·b < 0,  y_i >= 0 on `<=` rows,  y_i <= 0 on `>=` rows.
"""
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

from desire_kernel.core.errors import LpDimensionError
from desire_kernel.core.rational import ONE, ZERO

logger = logging.getLogger(__name__)


class Relation(StrEnum):
    LE = "<="
    GE = ">="
    EQ = "="

    def flipped(self) -> "Relation":
        if self is Relation.LE:
            return Relation.GE
        if self is Relation.GE:
            return Relation.LE
        return Relation.EQ

    def holds(self, lhs: Fraction, rhs: Fraction) -> bool:
        if self is Relation.LE:
            return lhs <= rhs
        if self is Relation.GE:
            return lhs >= rhs
        return lhs == rhs


class LpStatus(StrEnum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    @staticmethod
    def of(
        coefficients: Sequence[Fraction | int], relation: Relation, rhs: Fraction | int
    ) -> "Constraint":
        return Constraint(
            tuple(Fraction(a) for a in coefficients), relation, Fraction(rhs)
        )

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coefficients, x)), ZERO)


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective·x subject to the constraints and x >= 0."""

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self) -> None:
        n = len(self.objective)
        for i, row in enumerate(self.constraints):
            if len(row.coefficients) != n:
                raise LpDimensionError(
                    f"constraint {i} has {len(row.coefficients)} coefficients, "
                    f"objective has {n}"
                )

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    @staticmethod
    def maximize(
        objective: Sequence[Fraction | int], constraints: Sequence[Constraint]
    ) -> "LinearProgram":
        return LinearProgram(tuple(Fraction(c) for c in objective), tuple(constraints))


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    value: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Dense tableau with a reduced-cost row `r` where `r[-1]` holds -z."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]) -> None:
        self.rows = rows
        self.basis = basis
        self.r: list[Fraction] = []

    def price(self, costs: Sequence[Fraction]) -> None:
        width = len(costs) + 1
        r = [*costs, ZERO]
        for row, b in zip(self.rows, self.basis):
            cost = costs[b]
            if cost:
                for j in range(width):
                    r[j] -= cost * row[j]
        self.r = r

    def pivot(self, i: int, j: int) -> None:
        pivot_row = self.rows[i]
        p = pivot_row[j]
        if p != ONE:
            self.rows[i] = pivot_row = [a / p for a in pivot_row]
        for k, row in enumerate(self.rows):
            factor = row[j]
            if k != i and factor:
                self.rows[k] = [a - factor * b for a, b in zip(row, pivot_row)]
        factor = self.r[j]
        if factor:
            self.r = [a - factor * b for a, b in zip(self.r, pivot_row)]
        self.basis[i] = j

    def iterate(self, allowed: int) -> bool:
        """Run Bland pivots over columns < `allowed`. False means unbounded."""
        while True:
            entering = next((j for j in range(allowed) if self.r[j] > 0), None)
            if entering is None:
                return True
            leaving: int | None = None
            best: tuple[Fraction, int] | None = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best:
                        best, leaving = key, i
            if leaving is None:
                return False
            self.pivot(leaving, entering)


def lp_solve(lp: LinearProgram) -> LpOutcome:
    """Solve a linear program exactly.

    Infeasible and unbounded programs are outcomes, not errors.
    """
    n = lp.num_variables
    m = len(lp.constraints)

    # rows with a negative right-hand side are negated so that b >= 0
    flipped = [row.rhs < 0 for row in lp.constraints]
    normalized: list[tuple[list[Fraction], Relation, Fraction]] = []
    for row, flip in zip(lp.constraints, flipped):
        if flip:
            normalized.append(
                ([-a for a in row.coefficients], row.relation.flipped(), -row.rhs)
            )
        else:
            normalized.append((list(row.coefficients), row.relation, row.rhs))

    # columns: structural | slack or surplus | artificial
    aux_col: list[int | None] = []
    num_aux = 0
    for _, relation, _ in normalized:
        if relation is Relation.EQ:
            aux_col.append(None)
        else:
            aux_col.append(n + num_aux)
            num_aux += 1
    art_col: list[int | None] = []
    num_art = 0
    for _, relation, _ in normalized:
        if relation is Relation.LE:
            art_col.append(None)
        else:
            art_col.append(n + num_aux + num_art)
            num_art += 1
    first_artificial = n + num_aux
    width = first_artificial + num_art

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    for i, (coefficients, relation, rhs) in enumerate(normalized):
        row = [*coefficients, *([ZERO] * (width - n)), rhs]
        aux = aux_col[i]
        if aux is not None:
            row[aux] = ONE if relation is Relation.LE else -ONE
        art = art_col[i]
        if art is not None:
            row[art] = ONE
            basis.append(art)
        else:
            assert aux is not None
            basis.append(aux)
        rows.append(row)

    tableau = _Tableau(rows, basis)

    # phase 1: maximize -(sum of artificials)
    tableau.price([ZERO] * first_artificial + [-ONE] * num_art)
    tableau.iterate(width)
    if tableau.r[-1] > 0:
        farkas = []
        for i in range(m):
            aux, art = aux_col[i], art_col[i]
            if art is not None:
                y = -ONE - tableau.r[art]
            else:
                assert aux is not None
                y = -tableau.r[aux]
            farkas.append(-y if flipped[i] else y)
        logger.debug("Infeasible program with n=%s m=%s", n, m)
        return LpOutcome(LpStatus.INFEASIBLE, farkas=tuple(farkas))

    # drive zero-valued artificials out of the basis, drop redundant rows
    i = 0
    while i < len(tableau.rows):
        if tableau.basis[i] >= first_artificial:
            row = tableau.rows[i]
            j = next((j for j in range(first_artificial) if row[j] != 0), None)
            if j is None:
                del tableau.rows[i]
                del tableau.basis[i]
                continue
            tableau.pivot(i, j)
        i += 1

    # phase 2 on the original objective, artificial columns barred
    tableau.price([*lp.objective, *([ZERO] * (width - n))])
    if not tableau.iterate(first_artificial):
        logger.debug("Unbounded program with n=%s m=%s", n, m)
        return LpOutcome(LpStatus.UNBOUNDED)

    solution = [ZERO] * n
    for row, b in zip(tableau.rows, tableau.basis):
        if b < n:
            solution[b] = row[-1]
    return LpOutcome(LpStatus.OPTIMAL, value=-tableau.r[-1], solution=tuple(solution))


def verify_solution(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    """Exact check that x >= 0 satisfies every constraint."""
    if len(x) != lp.num_variables or any(v < 0 for v in x):
        return False
    return all(row.relation.holds(row.lhs(x), row.rhs) for row in lp.constraints)


def verify_farkas(lp: LinearProgram, y: Sequence[Fraction]) -> bool:
    """Exact check that y proves the program infeasible."""
    if len(y) != len(lp.constraints):
        return False
    for y_i, row in zip(y, lp.constraints):
        if row.relation is Relation.LE and y_i < 0:
            return False
        if row.relation is Relation.GE and y_i > 0:
            return False
    for j in range(lp.num_variables):
        column = sum(
            (y_i * row.coefficients[j] for y_i, row in zip(y, lp.constraints)), ZERO
        )
        if column < 0:
            return False
    return sum((y_i * row.rhs for y_i, row in zip(y, lp.constraints)), ZERO) < 0
