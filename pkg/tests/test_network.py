import numpy as np
import pytest

from layerbcd.activations import identity, leaky_relu, relu
from layerbcd.init import init_aux_monotone, init_aux_relu, init_state_monotone
from layerbcd.network import (NetworkShape, NetworkState, ShapeError,
                              load_checkpoint, loss_monotone, loss_relu_skip,
                              predict, predict_batch, save_checkpoint)

from conftest import rng


def scalar_state(weights, aux, d_in=1, L=None, n=1):
    L = L if L is not None else len(weights)
    shape = NetworkShape(d_in, 1, L, n)
    return NetworkState([np.array(w, dtype=float).reshape(s) for w, s in
                         zip(weights, shape.weight_dims())],
                        [np.array(v, dtype=float).reshape(1, n) for v in aux],
                        shape)


class TestLossMonotone:
    def test_exact_init_has_zero_hidden_losses(self, tiny_dataset, tiny_shape, tiny_state):
        lb = loss_monotone(tiny_state, tiny_dataset.x, tiny_dataset.y, 1.0, leaky_relu(0.5))
        assert lb.hidden == (0.0, 0.0)

    def test_unit_output_residual(self):
        # V_1 matches the forward value, so only the output term contributes.
        state = scalar_state([[1.0], [1.0]], [[1.0]])
        lb = loss_monotone(state, np.array([[1.0]]), np.array([0.0]), 1.0, identity())
        assert lb.output == 1.0 and lb.hidden == (0.0,) and lb.total == 1.0

    def test_hand_evaluated_two_layer_case(self):
        state = scalar_state([[2.0], [1.0]], [[1.0]])
        lb = loss_monotone(state, np.array([[1.0]]), np.array([0.0]), 1.0, identity())
        assert lb.hidden == (1.0,)
        assert lb.output == 1.0
        assert lb.total == 2.0

    def test_total_is_sum_of_components(self, tiny_dataset, tiny_state):
        st = tiny_state
        st.aux[0] = st.aux[0] + 0.1
        lb = loss_monotone(st, tiny_dataset.x, tiny_dataset.y, 0.7, leaky_relu(0.5))
        assert lb.total == lb.output + sum(lb.hidden)
        assert all(h >= 0 for h in lb.hidden) and lb.output >= 0

    def test_sample_permutation_invariance(self, tiny_dataset, tiny_shape, tiny_state):
        act = leaky_relu(0.5)
        st = tiny_state
        st.aux[0] = st.aux[0] + 0.01  # make hidden losses nonzero
        lb = loss_monotone(st, tiny_dataset.x, tiny_dataset.y, 1.0, act)
        perm = rng(3).permutation(tiny_shape.n)
        st2 = NetworkState(st.weights, [v[:, perm] for v in st.aux], st.shape)
        lb2 = loss_monotone(st2, tiny_dataset.x[perm], tiny_dataset.y[perm], 1.0, act)
        np.testing.assert_allclose(
            [lb2.total, lb2.output, *lb2.hidden],
            [lb.total, lb.output, *lb.hidden], rtol=1e-12)

    def test_shape_mismatch_raises(self, tiny_dataset, tiny_state):
        with pytest.raises(ShapeError):
            loss_monotone(tiny_state, tiny_dataset.x[:, :4], tiny_dataset.y, 1.0, leaky_relu(0.5))

    def test_gamma_must_be_positive(self, tiny_dataset, tiny_state):
        with pytest.raises(ValueError):
            loss_monotone(tiny_state, tiny_dataset.x, tiny_dataset.y, 0.0, leaky_relu(0.5))


class TestLossReluSkip:
    def test_exact_relu_init_zero_hidden(self):
        g = rng(12)
        shape = NetworkShape(5, 3, 4, 6)
        x = g.standard_normal((6, 5))
        weights = [g.standard_normal(d) * 0.2 for d in shape.weight_dims()]
        aux = init_aux_relu(weights, x)
        state = NetworkState(weights, aux, shape)
        lb = loss_relu_skip(state, x, g.standard_normal(6), 1.0, relu())
        assert lb.hidden == (0.0, 0.0, 0.0)

    def test_hand_evaluated_skip_residual(self):
        # sigma(W_2 V_1) + V_1 - V_2 = relu(2) + 2 - 3 = 1.
        state = scalar_state([[1.0], [1.0], [1.0]], [[2.0], [3.0]])
        x = np.array([[2.0]])
        lb = loss_relu_skip(state, x, np.array([3.0]), 1.0, relu())
        assert lb.hidden[1] == 1.0
        assert lb.hidden[0] == 0.0  # relu(1*2) == V_1
        assert lb.output == 0.0     # W_3 V_2 = 3 = y

    def test_all_zero_state_zero_labels(self):
        state = scalar_state([[0.0], [0.0], [0.0]], [[0.0], [0.0]])
        lb = loss_relu_skip(state, np.array([[0.0]]), np.array([0.0]), 1.0, relu())
        assert lb.total == 0.0

    def test_requires_relu(self, tiny_dataset, tiny_state):
        with pytest.raises(ValueError):
            loss_relu_skip(tiny_state, tiny_dataset.x, tiny_dataset.y, 1.0, leaky_relu(0.5))


class TestPredict:
    def test_zero_weights_predict_zero(self):
        shape = NetworkShape(4, 3, 3, 1)
        weights = [np.zeros(d) for d in shape.weight_dims()]
        assert predict(weights, np.array([1.0, -2.0, 3.0, 4.0]), relu()) == 0.0

    def test_hand_forward_pass(self):
        weights = [np.array([[1.0, 0.0]]), np.array([[2.0]])]
        assert predict(weights, np.array([3.0, 5.0]), identity()) == 6.0

    def test_skip_with_zero_residual_branch(self):
        g = rng(21)
        w1 = g.standard_normal((4, 5))
        w2 = np.zeros((4, 4))
        w3 = g.standard_normal((1, 4))
        x = g.standard_normal(5)
        with_skip = predict([w1, w2, w3], x, relu(), skip=True)
        two_layer = predict([w1, w3], x, relu())
        assert with_skip == pytest.approx(two_layer, rel=1e-15)

    def test_zero_loss_state_interpolates(self, tiny_dataset, tiny_shape):
        act = leaky_relu(0.5)
        state = init_state_monotone(tiny_shape, tiny_dataset.x, act, seed=3)
        y = predict_batch(state.weights, tiny_dataset.x, act)
        lb = loss_monotone(state, tiny_dataset.x, y, 1.0, act)
        assert lb.total <= 1e-25
        preds = np.array([predict(state.weights, xi, act) for xi in tiny_dataset.x])
        assert float(np.sum((preds - y) ** 2)) <= 1e-10


class TestCheckpoint:
    def test_round_trip_bit_exact(self, tmp_path, tiny_state):
        path = tmp_path / "model.ckpt"
        act = leaky_relu(0.5)
        save_checkpoint(path, tiny_state.weights, act, skip=False)
        weights, act2, skip = load_checkpoint(path)
        assert act2 == act and skip is False
        for a, b in zip(weights, tiny_state.weights):
            assert np.array_equal(a, b)

    def test_skip_flag_round_trip(self, tmp_path, tiny_state):
        path = tmp_path / "model.ckpt"
        save_checkpoint(path, tiny_state.weights, relu(), skip=True)
        _, act, skip = load_checkpoint(path)
        assert act == relu() and skip is True

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.ckpt"
        path.write_text("not a checkpoint\n")
        with pytest.raises(ValueError):
            load_checkpoint(path)
