"""Property tests of the closure predicate on small random assessments.

Queries that are known to be entailed are built from assessed sets (every
assessed set belongs to its own closure) and then transformed with the set
operators.
"""
import itertools

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from desire_kernel.core.assessment import (
    CredalSet,
    GambleAssessment,
    OptionSet,
    OptionSetAssessment,
)
from desire_kernel.core.gamble import BackgroundOrdering, SpaceSpec
from desire_kernel.services.choice.certificate import CertificateDocument
from desire_kernel.services.choice.certificate_verifier import CertificateVerifier
from desire_kernel.services.choice.choice_service import ChoiceService
from desire_kernel.services.desirability.desirability_service import (
    DesirabilityService,
)
from desire_kernel.services.operators.operators_service import OperatorsService
from tests.strategies import (
    credal_sets,
    dominating_gambles,
    gamble_assessments,
    gambles,
    option_set_assessments,
    option_sets,
    orderings,
    positive_scalars,
    spaces,
)

PROPERTIES = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[
        HealthCheck.too_slow,
        HealthCheck.filter_too_much,
        HealthCheck.function_scoped_fixture,
    ],
)


def _consistent(
    choice: ChoiceService,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
) -> OptionSetAssessment:
    a = data.draw(option_set_assessments(space=space, ordering=ordering))
    assume(choice.k_consistent(a))
    return a


def _entailed_set(
    data: st.DataObject, a: OptionSetAssessment, space: SpaceSpec
) -> OptionSet:
    """An assessed set padded with random extra options.

    The empty assessment entails background singletons instead.
    """
    if a.sets:
        base = data.draw(st.sampled_from(a.sets))
    else:
        base = OptionSet(space, (data.draw(dominating_gambles(space, a.ordering)),))
    extra = data.draw(st.lists(gambles(space), max_size=2))
    return base.with_gambles(*extra)


@PROPERTIES
@given(st.data(), spaces, orderings)
def test_no_zero_and_background_singletons(
    choice: ChoiceService,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
) -> None:
    a = _consistent(choice, data, space, ordering)
    assert not choice.k_entails(a, OptionSet(space, (space.zero(),)))
    u = data.draw(dominating_gambles(space, ordering))
    assert choice.k_entails(a, OptionSet(space, (u,)))


@PROPERTIES
@given(st.data(), spaces, orderings)
def test_zero_removal_and_supersets(
    choice: ChoiceService,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
) -> None:
    a = _consistent(choice, data, space, ordering)
    b = _entailed_set(data, a, space)
    assert choice.k_entails(a, b)
    with_zero = b.with_gambles(space.zero())
    assert choice.k_entails(a, with_zero)
    without_zero = with_zero.without(space.zero())
    if not without_zero.is_empty():
        assert choice.k_entails(a, without_zero)
    superset = b.with_gambles(*data.draw(st.lists(gambles(space), max_size=2)))
    assert choice.k_entails(a, superset)


@PROPERTIES
@given(st.data(), spaces, orderings)
def test_combination_of_entailed_sets(
    choice: ChoiceService,
    operators: OperatorsService,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
) -> None:
    a = _consistent(choice, data, space, ordering)
    first, second = _entailed_set(data, a, space), _entailed_set(data, a, space)
    weights = st.fractions(min_value=0, max_value=2, max_denominator=3)
    pairs = st.tuples(weights, weights).filter(lambda pair: any(pair))
    coefficients = {
        (u, v): data.draw(pairs) for u, v in itertools.product(first, second)
    }
    combined = operators.k3_combine(first, second, coefficients)
    assert choice.k_entails(a, combined)


@PROPERTIES
@given(st.data(), spaces, orderings)
def test_rescaling_keeps_entailment(
    choice: ChoiceService,
    operators: OperatorsService,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
) -> None:
    a = _consistent(choice, data, space, ordering)
    b = _entailed_set(data, a, space)
    scales = {u: data.draw(positive_scalars) for u in b}
    assert choice.k_entails(a, operators.rescale(b, scales))


@PROPERTIES
@given(st.data(), spaces, orderings)
def test_aizermann(
    choice: ChoiceService,
    operators: OperatorsService,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
) -> None:
    a = _consistent(choice, data, space, ordering)
    b = _entailed_set(data, a, space)
    u = data.draw(st.sampled_from(b.gambles))
    rest = b.without(u)
    assume(not rest.is_empty())
    if choice.k_entails(a, operators.translate(b, u).without(space.zero())):
        assert choice.k_entails(a, rest)


@PROPERTIES
@given(st.data(), spaces, orderings)
def test_mixing_closure_contains_plain_closure(
    choice: ChoiceService,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
) -> None:
    a = _consistent(choice, data, space, ordering)
    b = data.draw(option_sets(space))
    if choice.k_entails(a, b):
        assert choice.k_entails_mixing(a, b)


@PROPERTIES
@given(st.data(), spaces, orderings)
def test_mixing_removes_positive_combinations(
    choice: ChoiceService,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
) -> None:
    a = _consistent(choice, data, space, ordering)
    b = data.draw(option_sets(space))
    scale = data.draw(positive_scalars)
    combinations = [(u + v) * scale for u, v in itertools.combinations(b, 2)]
    widened = b.with_gambles(*combinations).without(space.zero())
    assume(not widened.is_empty())
    if choice.k_entails_mixing(a, widened) and not b.without(space.zero()).is_empty():
        assert choice.k_entails_mixing(a, b.without(space.zero()))


@PROPERTIES
@given(st.data(), spaces)
def test_binary_collapse(
    choice: ChoiceService,
    desirability: DesirabilityService,
    data: st.DataObject,
    space: SpaceSpec,
) -> None:
    generators: GambleAssessment = data.draw(gamble_assessments(space=space))
    lifted = generators.lift()
    consistent = desirability.d_consistent(generators)
    assert bool(choice.k_consistent(lifted)) == consistent
    assume(consistent)
    model = desirability.natural_extension(generators)
    for f in data.draw(st.lists(gambles(space), min_size=1, max_size=4)):
        plain = choice.k_entails(lifted, OptionSet(space, (f,)))
        assert bool(plain) == (desirability.d_entails(model, f) is not None)


@PROPERTIES
@given(st.data(), spaces, orderings, st.booleans())
def test_certificates_verify(
    choice: ChoiceService,
    verifier: CertificateVerifier,
    data: st.DataObject,
    space: SpaceSpec,
    ordering: BackgroundOrdering,
    mixing: bool,
) -> None:
    a = data.draw(option_set_assessments(space=space, ordering=ordering))
    consistency = choice.k_consistent(a)
    document = CertificateDocument.from_certificate(consistency.certificate, a)
    assert verifier.verify(a, None, document)
    assume(consistency)

    b = data.draw(option_sets(space))
    verdict = (choice.k_entails_mixing if mixing else choice.k_entails)(a, b)
    document = CertificateDocument.from_certificate(verdict.certificate, a)
    reloaded = CertificateDocument.model_validate(document.to_json_dict())
    assert reloaded.to_json_dict() == document.to_json_dict()
    assert verifier.verify(a, b, reloaded)


@PROPERTIES
@given(st.data(), spaces)
def test_rejection_is_translation_invariant(
    choice: ChoiceService, data: st.DataObject, space: SpaceSpec
) -> None:
    a = _consistent(choice, data, space, BackgroundOrdering.NONNEG)
    s = data.draw(option_sets(space))
    v = data.draw(gambles(space))
    shifted = OptionSet(space, tuple(u + v for u in s))
    rejected = choice.reject_set(a, s)
    assert choice.reject_set(a, shifted) == OptionSet(
        space, tuple(u + v for u in rejected)
    )


@PROPERTIES
@given(st.data(), spaces)
def test_e_admissible_options_are_maximal(
    choice: ChoiceService,
    desirability: DesirabilityService,
    data: st.DataObject,
    space: SpaceSpec,
) -> None:
    credal: CredalSet = data.draw(credal_sets(space=space))
    s = data.draw(option_sets(space, max_size=4))
    admissible = choice.e_admissible_choice(credal, s)
    maximal = desirability.credal_maximality_choice(credal, s)
    assert admissible.issubset(maximal)
    assert not admissible.is_empty()
    if len(credal) == 1:
        assert admissible == maximal
