import pytest

from packages.core.metamodel.errors import DimensionError
from packages.core.metamodel.loss import loss
from packages.core.metamodel.models import AdaptationEnd, Entities, StateSet


def test_hamming_loss_for_finite_states():
    end = AdaptationEnd(targets=(0, 0, 0, 0))
    assert loss(Entities((0, 1, 0, 1)), end, StateSet.finite((0, 1))) == 0.5
    assert loss((0, 0, 0, 0), end) == 0.0


def test_mean_squared_error_for_continuous_states():
    end = AdaptationEnd(targets=(0.0, 1.0))
    assert loss((0.5, 0.5), end, StateSet.real_interval(0.0, 1.0)) == pytest.approx(0.25)
    assert loss((1.0, 1.0), end) == pytest.approx(0.5)


def test_loss_dimension_mismatch():
    with pytest.raises(DimensionError):
        loss((0, 1, 0), AdaptationEnd(targets=(0, 1)))


@pytest.mark.parametrize(
    "left, right, state_set",
    [
        ((0, 1, 1, 0), (1, 1, 0, 0), StateSet.finite((0, 1))),
        (("a", "b", "c"), ("c", "b", "a"), StateSet.finite(("a", "b", "c"))),
        ((0.1, 0.7, 0.3), (0.4, 0.2, 0.9), StateSet.real_interval(0.0, 1.0)),
    ],
)
def test_loss_is_zero_on_target_and_symmetric(left, right, state_set):
    assert loss(left, AdaptationEnd(targets=left), state_set) == 0.0
    forward_loss = loss(left, AdaptationEnd(targets=right), state_set)
    backward_loss = loss(right, AdaptationEnd(targets=left), state_set)
    assert forward_loss == backward_loss
    assert forward_loss > 0
