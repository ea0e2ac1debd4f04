import numpy as np
import pytest

from invreg import first_order as fo
from invreg.errors import BadHyperparameter
from invreg.loss import FeatureVector


@pytest.mark.parametrize("variant", fo.VARIANTS)
def test_zero_gradient_leaves_theta(variant):
    st = fo.first_order_init(3)
    st = fo.first_order_step(st, FeatureVector.from_checked([1.0, -2.0]), 0.0, variant)
    np.testing.assert_array_equal(st.theta, np.zeros(3))


def test_gradient_of_instantaneous_loss():
    fv = FeatureVector.from_checked([2.0])
    np.testing.assert_allclose(fo.gradient(np.array([1.0, 1.0]), fv, 1.0), [2.0, 4.0])


def test_adagrad_step_sizes_shrink():
    st = fo.first_order_init(2)
    fv = FeatureVector.from_checked([1.5])
    st = fo.first_order_step(st, fv, 3.0, "adagrad")
    before = fo.effective_step_sizes(st, "adagrad")
    st = fo.first_order_step(st, fv, 3.0, "adagrad")
    assert np.all(fo.effective_step_sizes(st, "adagrad") < before)


def test_adam_first_step_is_lr_sized():
    # bias correction makes the first Adam step lr * sign(grad)
    st = fo.first_order_step(fo.first_order_init(2), FeatureVector.from_checked([2.0]), 1.0, "adam")
    np.testing.assert_allclose(st.theta, [1e-3, 1e-3], rtol=1e-6)


def test_rmsprop_first_step():
    st = fo.first_order_step(fo.first_order_init(1), FeatureVector(np.array([1.0])), -1.0, "rmsprop")
    # grad = 1, v = 0.1, step = lr / sqrt(0.1)
    np.testing.assert_allclose(st.theta, [-1e-3 / np.sqrt(0.1)], rtol=1e-6)


def test_adam_converges_on_stationary_stream():
    rng = np.random.default_rng(3)
    target = np.array([0.5, -1.0, 0.8])
    st = fo.first_order_init(3)
    for x in rng.standard_normal((5000, 2)):
        fv = FeatureVector.from_checked(x)
        st = fo.first_order_step(st, fv, float(target @ fv.full), "adam")
    assert np.linalg.norm(st.theta - target) < 0.05


def test_accumulators_stay_finite_and_nonnegative():
    rng = np.random.default_rng(4)
    for variant in fo.VARIANTS:
        st = fo.first_order_init(3)
        for x in rng.standard_normal((200, 2)):
            st = fo.first_order_step(st, FeatureVector.from_checked(x), float(rng.standard_normal()), variant)
        assert np.all(np.isfinite(st.theta)) and np.all(st.v >= 0)


def test_bad_variant_and_hyper():
    st = fo.first_order_init(2)
    with pytest.raises(BadHyperparameter):
        fo.first_order_step(st, FeatureVector.from_checked([1.0]), 0.0, "sgd")
    with pytest.raises(BadHyperparameter):
        fo.first_order_init(2, lr=0.0)
