"""Conic feasibility predicates, each reduced to exact linear programs.

Notation used below: `G` is a finite generator set, `V≻0` the background cone of
the ordering, and `posi(V≻0 ∪ G)` the set of non-trivial combinations
`s + Σ λ_g g` with `λ >= 0` and `s` either 0 or in `V≻0`.
"""
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from injector import singleton

from desire_kernel.components.lp.simplex import (
    Constraint,
    LinearProgram,
    LpOutcome,
    LpStatus,
    Relation,
    lp_solve,
)
from desire_kernel.core.assessment import CredalSet, GambleAssessment, OptionSet
from desire_kernel.core.gamble import (
    BackgroundOrdering,
    Gamble,
    SpaceSpec,
    check_same_space,
)
from desire_kernel.core.rational import ONE, ZERO
from desire_kernel.core.verdict import UNBOUNDED, Bound

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConeWitness:
    """`target = slack + Σ lambdas[i] · generators[i]`, checkable by hand."""

    target: Gamble
    generators: tuple[Gamble, ...]
    lambdas: tuple[Fraction, ...]
    slack: Gamble

    def combination(self) -> Gamble:
        total = self.slack
        for weight, g in zip(self.lambdas, self.generators):
            if weight:
                total = total + g * weight
        return total

    def verify(self, ordering: BackgroundOrdering) -> bool:
        if len(self.lambdas) != len(self.generators):
            return False
        if any(weight < 0 for weight in self.lambdas):
            return False
        if not self.slack.is_zero() and not ordering.dominates(self.slack):
            return False
        if self.slack.is_zero() and not any(self.lambdas):
            return False
        return self.combination() == self.target

    def lambda_map(self) -> dict[Gamble, Fraction]:
        return {g: w for g, w in zip(self.generators, self.lambdas) if w}


@dataclass(frozen=True)
class MixingWitness:
    """A common element `Σ mu[b]·b` of posi(B) and posi(V≻0 ∪ G)."""

    options: tuple[Gamble, ...]
    mu: tuple[Fraction, ...]
    cone: ConeWitness

    def verify(self, ordering: BackgroundOrdering) -> bool:
        if any(weight < 0 for weight in self.mu) or not any(self.mu):
            return False
        total = self.cone.target.space.zero()
        for weight, b in zip(self.mu, self.options):
            total = total + b * weight
        return total == self.cone.target and self.cone.verify(ordering)


def _row(
    blocks: Sequence[Sequence[Fraction]], relation: Relation, rhs: Fraction
) -> Constraint:
    return Constraint(
        tuple(a for block in blocks for a in block), relation, Fraction(rhs)
    )


def _zeros(k: int) -> list[Fraction]:
    return [ZERO] * k


def _unit(k: int, i: int, value: Fraction = ONE) -> list[Fraction]:
    unit = _zeros(k)
    unit[i] = value
    return unit


@singleton
class ConeComponent:
    """Decides membership questions for finitely generated cones.

    Stateless; a single instance is shared by every service.
    """

    def cone_contains(
        self, generators: GambleAssessment, f: Gamble
    ) -> ConeWitness | None:
        """Decide f ∈ posi(V≻0 ∪ G), returning a witness when it holds."""
        check_same_space(generators.space, (f,))
        gens = generators.gambles
        if generators.ordering is BackgroundOrdering.STRICT:
            return self._strict_cone_contains(gens, f)
        k, n = len(gens), len(f.space)
        rows = [
            _row([[g.coords[x] for g in gens], _unit(n, x)], Relation.EQ, f.coords[x])
            for x in range(n)
        ]
        if f.is_zero():
            rows.append(_row([[ONE] * k, [ONE] * n], Relation.EQ, ONE))
        outcome = lp_solve(LinearProgram(tuple(_zeros(k + n)), tuple(rows)))
        if not outcome.is_optimal:
            return None
        assert outcome.solution is not None
        lambdas = outcome.solution[:k]
        slack = Gamble(outcome.solution[k : k + n], f.space)
        return ConeWitness(f, gens, lambdas, slack)

    def _strict_cone_contains(
        self, gens: tuple[Gamble, ...], f: Gamble
    ) -> ConeWitness | None:
        k, n = len(gens), len(f.space)
        zero_slack = f.space.zero()

        # slack = 0: f is a non-trivial combination of the generators alone
        rows = [
            _row([[g.coords[x] for g in gens]], Relation.EQ, f.coords[x])
            for x in range(n)
        ]
        if f.is_zero():
            rows.append(_row([[ONE] * k], Relation.EQ, ONE))
        if k:
            outcome = lp_solve(LinearProgram(tuple(_zeros(k)), tuple(rows)))
            if outcome.is_optimal:
                assert outcome.solution is not None
                return ConeWitness(f, gens, outcome.solution, zero_slack)

        # slack > 0 in every coordinate: maximize the smallest slack, capped at 1
        columns = k + n + 1
        rows = [
            _row(
                [[g.coords[x] for g in gens], _unit(n, x), [ZERO]],
                Relation.EQ,
                f.coords[x],
            )
            for x in range(n)
        ]
        rows += [
            _row([_zeros(k), _unit(n, x), [-ONE]], Relation.GE, ZERO)
            for x in range(n)
        ]
        rows.append(_row([_zeros(k + n), [ONE]], Relation.LE, ONE))
        outcome = lp_solve(
            LinearProgram(tuple(_unit(columns, columns - 1)), tuple(rows))
        )
        if not (outcome.is_optimal and outcome.value and outcome.value > 0):
            return None
        assert outcome.solution is not None
        lambdas = outcome.solution[:k]
        slack = Gamble(outcome.solution[k : k + n], f.space)
        return ConeWitness(f, gens, lambdas, slack)

    def cone_consistent(self, generators: GambleAssessment) -> bool:
        """0 ∉ posi(V≻0 ∪ G)."""
        return self.cone_contains(generators, generators.space.zero()) is None

    def posi_meets_cone(
        self, options: OptionSet, generators: GambleAssessment
    ) -> MixingWitness | None:
        """Decide posi(B) ∩ posi(V≻0 ∪ G) ≠ ∅.

        The common element is normalized so that its B-weights sum to 1.

        Raises:
            EmptyOptionSetError: if B is empty.
        """
        options.require_non_empty("B")
        check_same_space(generators.space, options)
        bs, gens = options.gambles, generators.gambles
        p, k, n = len(bs), len(gens), len(generators.space)
        # columns: μ (p) | λ (k) | s (n) | t, maximize t with t <= 1
        width = p + k + n + 1
        objective = _unit(width, width - 1)

        rows = [
            _row(
                [
                    [b.coords[x] for b in bs],
                    [-g.coords[x] for g in gens],
                    _unit(n, x, -ONE),
                    [ZERO],
                ],
                Relation.EQ,
                ZERO,
            )
            for x in range(n)
        ]
        rows.append(_row([[ONE] * p, _zeros(k + n + 1)], Relation.EQ, ONE))
        rows.append(_row([_zeros(width - 1), [ONE]], Relation.LE, ONE))

        if generators.ordering is not BackgroundOrdering.STRICT:
            # t <= Σλ + Σs
            nontrivial = _row([_zeros(p), [ONE] * (k + n), [-ONE]], Relation.GE, ZERO)
            outcome = lp_solve(LinearProgram.maximize(objective, [*rows, nontrivial]))
            return self._mixing_witness(outcome, bs, gens, options.space)

        # slack = 0 and t <= Σλ
        no_slack = [
            _row([_zeros(p + k), _unit(n, x), [ZERO]], Relation.EQ, ZERO)
            for x in range(n)
        ]
        nontrivial = _row([_zeros(p), [ONE] * k, _zeros(n), [-ONE]], Relation.GE, ZERO)
        outcome = lp_solve(
            LinearProgram.maximize(objective, [*rows, *no_slack, nontrivial])
        )
        witness = self._mixing_witness(outcome, bs, gens, options.space)
        if witness is not None:
            return witness

        # slack > 0: t <= every slack coordinate
        positive_slack = [
            _row([_zeros(p + k), _unit(n, x), [-ONE]], Relation.GE, ZERO)
            for x in range(n)
        ]
        outcome = lp_solve(LinearProgram.maximize(objective, [*rows, *positive_slack]))
        return self._mixing_witness(outcome, bs, gens, options.space)

    @staticmethod
    def _mixing_witness(
        outcome: LpOutcome,
        bs: tuple[Gamble, ...],
        gens: tuple[Gamble, ...],
        space: SpaceSpec,
    ) -> MixingWitness | None:
        if not (outcome.is_optimal and outcome.value and outcome.value > 0):
            return None
        assert outcome.solution is not None
        p, k, n = len(bs), len(gens), len(space)
        mu = outcome.solution[:p]
        lambdas = outcome.solution[p : p + k]
        slack = Gamble(outcome.solution[p + k : p + k + n], space)
        target = space.zero()
        for weight, b in zip(mu, bs):
            target = target + b * weight
        return MixingWitness(bs, mu, ConeWitness(target, gens, lambdas, slack))

    def posi_contains(
        self, options: OptionSet, f: Gamble
    ) -> tuple[Fraction, ...] | None:
        """Decide f ∈ posi(B): f = Σ μ_b b with μ >= 0 and μ ≠ 0.

        Returns the coefficients μ when it holds.
        """
        options.require_non_empty("B")
        check_same_space(options.space, (f,))
        bs, n = options.gambles, len(options.space)
        rows = [
            _row([[b.coords[x] for b in bs]], Relation.EQ, f.coords[x])
            for x in range(n)
        ]
        if f.is_zero():
            rows.append(_row([[ONE] * len(bs)], Relation.EQ, ONE))
        outcome = lp_solve(LinearProgram(tuple(_zeros(len(bs))), tuple(rows)))
        return outcome.solution if outcome.is_optimal else None

    def chull_contains(
        self, options: OptionSet, f: Gamble
    ) -> tuple[Fraction, ...] | None:
        """Decide f ∈ chull(B), returning the convex weights when it holds."""
        options.require_non_empty("B")
        check_same_space(options.space, (f,))
        bs, n = options.gambles, len(options.space)
        rows = [
            _row([[b.coords[x] for b in bs]], Relation.EQ, f.coords[x])
            for x in range(n)
        ]
        rows.append(_row([[ONE] * len(bs)], Relation.EQ, ONE))
        outcome = lp_solve(LinearProgram(tuple(_zeros(len(bs))), tuple(rows)))
        return outcome.solution if outcome.is_optimal else None

    def lower_prevision(self, generators: GambleAssessment, f: Gamble) -> Bound:
        """sup{μ : f - μ ∈ posi(V≻0 ∪ G)} computed on the closed cone.

        Inconsistent generators entail every gamble, so the supremum is
        `UNBOUNDED`.
        """
        check_same_space(generators.space, (f,))
        if not self.cone_consistent(generators):
            return UNBOUNDED
        gens, n = generators.gambles, len(f.space)
        # variables: μ+, μ-, λ;  μ+ - μ- + Σλg <= f
        rows = [
            _row([[ONE, -ONE], [g.coords[x] for g in gens]], Relation.LE, f.coords[x])
            for x in range(n)
        ]
        objective = [ONE, -ONE, *_zeros(len(gens))]
        outcome = lp_solve(LinearProgram.maximize(objective, rows))
        if outcome.status is LpStatus.UNBOUNDED:
            return UNBOUNDED
        assert outcome.value is not None
        return outcome.value

    def shift_margin(self, generators: GambleAssessment, f: Gamble) -> Bound | None:
        """Largest ε >= 0 with f - ε·1 in the closed cone of s + Σλg.

        Returns None when even ε = 0 is out of reach.
        """
        check_same_space(generators.space, (f,))
        gens, n = generators.gambles, len(f.space)
        k = len(gens)
        rows = [
            _row(
                [[g.coords[x] for g in gens], _unit(n, x), [ONE]],
                Relation.EQ,
                f.coords[x],
            )
            for x in range(n)
        ]
        outcome = lp_solve(LinearProgram.maximize(_unit(k + n + 1, k + n), rows))
        if outcome.status is LpStatus.INFEASIBLE:
            return None
        if outcome.status is LpStatus.UNBOUNDED:
            return UNBOUNDED
        assert outcome.value is not None
        return outcome.value

    def credal_accepts(self, credal: CredalSet, options: OptionSet) -> bool:
        """Decide that every P in conv(M) has some b in B with P(b) > 0.

        Minimizes t subject to P(b) <= t over convex weights on the vertices;
        accepts iff the minimum is positive.
        """
        options.require_non_empty("B")
        check_same_space(credal.space, options)
        vertices = credal.vertices
        q = len(vertices)
        # variables: w (q), t+, t-; maximize t- - t+ = -t
        rows = [
            _row([[b.dot(v.coords) for v in vertices], [-ONE, ONE]], Relation.LE, ZERO)
            for b in options
        ]
        rows.append(_row([[ONE] * q, [ZERO, ZERO]], Relation.EQ, ONE))
        outcome = lp_solve(LinearProgram.maximize([*_zeros(q), -ONE, ONE], rows))
        assert outcome.value is not None
        return -outcome.value > 0

    def prevision_below(
        self, credal: CredalSet, gambles: Sequence[Gamble]
    ) -> tuple[Fraction, ...] | None:
        """Find P in conv(M) with P(h) <= 0 for every h, as vertex weights."""
        check_same_space(credal.space, gambles)
        vertices = credal.vertices
        q = len(vertices)
        rows = [
            _row([[h.dot(v.coords) for v in vertices]], Relation.LE, ZERO)
            for h in gambles
        ]
        rows.append(_row([[ONE] * q], Relation.EQ, ONE))
        outcome = lp_solve(LinearProgram(tuple(_zeros(q)), tuple(rows)))
        return outcome.solution if outcome.is_optimal else None
