import numpy as np
import pytest

from offpolicy_bench.nn import (
    AdamState,
    Mlp,
    adam_init,
    adam_step,
    grad_check,
    grads_zeros_like,
    mlp_backward,
    mlp_copy,
    mlp_forward,
    mlp_init,
    squared_error_loss,
)


def zero_net(sizes, output_activation="identity"):
    net = mlp_init(sizes, output_activation, seed=0)
    for w in net.weights:
        w[:] = 0.0
    return net


class TestInit:
    def test_deterministic_given_seed(self):
        a = mlp_init([4, 256, 256, 256, 1], seed=7)
        b = mlp_init([4, 256, 256, 256, 1], seed=7)
        assert len(a.weights) == 4
        for wa, wb in zip(a.weights, b.weights):
            assert np.array_equal(wa, wb)

    def test_different_seeds_differ(self):
        a = mlp_init([3, 8, 1], seed=1)
        b = mlp_init([3, 8, 1], seed=2)
        assert not np.array_equal(a.weights[0], b.weights[0])

    def test_rejects_single_layer(self):
        with pytest.raises(ValueError):
            mlp_init([3], seed=0)

    def test_rejects_zero_width(self):
        with pytest.raises(ValueError):
            mlp_init([3, 0, 1], seed=0)

    def test_biases_zero_and_weight_scale(self):
        net = mlp_init([2, 2, 1], seed=0)
        for b in net.biases:
            assert np.all(b == 0.0)
        for w, fan_in in zip(net.weights, net.layer_sizes[:-1]):
            assert np.max(np.abs(w)) <= 1.0 / np.sqrt(fan_in)


class TestForward:
    def test_zero_net_identity_gives_zero(self):
        net = zero_net([3, 5, 2])
        out, _ = mlp_forward(net, np.array([1.0, -2.0, 3.0]))
        assert np.array_equal(out, np.zeros(2))

    def test_zero_net_tanh_gives_zero(self):
        net = zero_net([3, 5, 2], "tanh")
        out, _ = mlp_forward(net, np.array([1.0, -2.0, 3.0]))
        assert np.array_equal(out, np.zeros(2))

    def test_one_one_affine(self):
        net = Mlp((1, 1), [np.array([[2.0]])], [np.array([0.5])], "identity")
        out, _ = mlp_forward(net, np.array([1.0]))
        assert out[0] == pytest.approx(2.5)

    def test_batch_matches_vector(self):
        net = mlp_init([4, 16, 3], seed=3)
        xs = np.random.default_rng(0).standard_normal((5, 4))
        batch_out, _ = mlp_forward(net, xs)
        for i in range(5):
            single, _ = mlp_forward(net, xs[i])
            # gemm vs gemv may differ in the last ulp
            assert np.allclose(single, batch_out[i], rtol=1e-13, atol=1e-15)

    def test_dimension_mismatch(self):
        net = mlp_init([4, 8, 1], seed=0)
        with pytest.raises(ValueError):
            mlp_forward(net, np.zeros(5))

    def test_tanh_head_stays_inside_open_interval(self):
        # Huge pre-activations would round tanh to exactly 1.0; the head must
        # still land strictly inside (-1, 1).
        net = mlp_init([1, 1], "tanh", seed=0)
        net.weights[0][:] = 1.0
        net.biases[0][:] = 100.0
        out, _ = mlp_forward(net, np.array([100.0]))
        assert -1.0 < out[0] < 1.0


class TestBackward:
    def test_zero_grad_output_gives_zero_grads(self):
        net = mlp_init([3, 8, 2], seed=1)
        x = np.array([0.3, -0.7, 1.1])
        _, cache = mlp_forward(net, x)
        grads, gin = mlp_backward(net, cache, np.zeros(2))
        assert all(np.all(g == 0.0) for g in grads.weights)
        assert all(np.all(g == 0.0) for g in grads.biases)
        assert np.all(gin == 0.0)

    def test_one_one_identity_grads(self):
        net = Mlp((1, 1), [np.array([[3.0]])], [np.array([0.0])], "identity")
        x = np.array([1.7])
        _, cache = mlp_forward(net, x)
        grads, gin = mlp_backward(net, cache, np.array([1.0]))
        assert grads.weights[0][0, 0] == pytest.approx(1.7)
        assert grads.biases[0][0] == pytest.approx(1.0)
        assert gin[0] == pytest.approx(3.0)

    def test_cache_mismatch_rejected(self):
        net = mlp_init([3, 8, 2], seed=1)
        _, cache = mlp_forward(net, np.zeros(3))
        other = mlp_init([3, 4, 2], seed=1)
        with pytest.raises(ValueError):
            mlp_backward(other, cache, np.ones(2))

    def test_matches_finite_differences_3_16_1(self):
        net = mlp_init([3, 16, 1], seed=11)
        x = np.random.default_rng(5).uniform(0.2, 1.0, 3)
        value, grad = squared_error_loss(np.array([0.37]))
        assert grad_check(net, x, value, grad) <= 1e-5

    def test_batch_grads_match_sum_of_singles(self):
        net = mlp_init([4, 8, 2], seed=2)
        xs = np.random.default_rng(1).standard_normal((6, 4))
        gout = np.random.default_rng(2).standard_normal((6, 2))
        _, cache = mlp_forward(net, xs)
        batch_grads, batch_gin = mlp_backward(net, cache, gout)
        acc = grads_zeros_like(net)
        for i in range(6):
            _, c = mlp_forward(net, xs[i])
            g, gi = mlp_backward(net, c, gout[i])
            for aw, gw in zip(acc.weights, g.weights):
                aw += gw
            for ab, gb in zip(acc.biases, g.biases):
                ab += gb
            assert np.allclose(gi, batch_gin[i])
        for aw, bw in zip(acc.weights, batch_grads.weights):
            assert np.allclose(aw, bw, rtol=1e-12, atol=1e-12)


class TestInputOnlyBackward:
    def test_matches_full_backward(self):
        from offpolicy_bench.nn.net import mlp_input_grad

        net = mlp_init([5, 12, 12, 3], "tanh", seed=7)
        xs = np.random.default_rng(0).standard_normal((6, 5))
        gout = np.random.default_rng(1).standard_normal((6, 3))
        _, cache = mlp_forward(net, xs)
        _, gin_full = mlp_backward(net, cache, gout)
        gin_fast = mlp_input_grad(net, cache, gout)
        assert np.array_equal(gin_full, gin_fast)


class TestGradCheck:
    def test_zero_net_zero_target(self):
        net = zero_net([3, 6, 1])
        value, grad = squared_error_loss(np.zeros(1))
        assert grad_check(net, np.array([0.5, 0.5, 0.5]), value, grad) <= 1e-8

    def test_random_4_8_8_1_relu(self):
        net = mlp_init([4, 8, 8, 1], seed=42)
        rng = np.random.default_rng(42)
        x = rng.uniform(0.3, 1.2, 4)
        value, grad = squared_error_loss(np.array([-0.25]))
        assert grad_check(net, x, value, grad) <= 1e-5

    def test_tanh_head(self):
        net = mlp_init([3, 10, 2], "tanh", seed=9)
        x = np.random.default_rng(9).uniform(0.2, 0.9, 3)
        value, grad = squared_error_loss(np.array([0.1, -0.4]))
        assert grad_check(net, x, value, grad) <= 1e-5


def reference_adam(param, grad, m, v, t, lr, b1=0.9, b2=0.999, eps=1e-8):
    """Textbook Adam recurrence, written independently of the implementation."""
    m = b1 * m + (1 - b1) * grad
    v = b2 * v + (1 - b2) * grad**2
    mhat = m / (1 - b1**t)
    vhat = v / (1 - b2**t)
    return param - lr * mhat / (np.sqrt(vhat) + eps), m, v


class TestAdam:
    def one_param_net(self, value=0.0):
        return Mlp((1, 1), [np.array([[value]])], [np.array([0.0])], "identity")

    def test_zero_grads_are_identity_on_params(self):
        net = mlp_init([3, 8, 2], seed=4)
        before = [w.copy() for w in net.weights]
        state = adam_init(net)
        adam_step(net, grads_zeros_like(net), state, 0.1)
        assert state.step_count == 1
        for w, w0 in zip(net.weights, before):
            assert np.array_equal(w, w0)

    def test_first_step_matches_hand_recurrence(self):
        # param 0, grad 1, lr 0.1: first bias-corrected step moves ~ -lr.
        net = self.one_param_net(0.0)
        state = adam_init(net)
        grads = grads_zeros_like(net)
        grads.weights[0][0, 0] = 1.0
        adam_step(net, grads, state, 0.1)
        expected, _, _ = reference_adam(0.0, 1.0, 0.0, 0.0, 1, 0.1)
        assert net.weights[0][0, 0] == pytest.approx(expected, abs=1e-12)
        assert net.weights[0][0, 0] == pytest.approx(-0.1, abs=1e-6)

    def test_many_steps_match_hand_recurrence(self):
        net = self.one_param_net(0.3)
        state = adam_init(net)
        rng = np.random.default_rng(0)
        p, m, v = 0.3, 0.0, 0.0
        for t in range(1, 51):
            g = rng.standard_normal()
            grads = grads_zeros_like(net)
            grads.weights[0][0, 0] = g
            adam_step(net, grads, state, 0.01)
            p, m, v = reference_adam(p, g, m, v, t, 0.01)
            assert net.weights[0][0, 0] == pytest.approx(p, abs=1e-13)

    def test_constant_positive_grad_strictly_decreases(self):
        net = self.one_param_net(0.0)
        state = adam_init(net)
        grads = grads_zeros_like(net)
        grads.weights[0][0, 0] = 2.5
        prev = 0.0
        for _ in range(20):
            adam_step(net, grads, state, 0.05)
            assert net.weights[0][0, 0] < prev
            prev = net.weights[0][0, 0]

    def test_rejects_nonfinite_grads(self):
        net = mlp_init([2, 4, 1], seed=0)
        state = adam_init(net)
        grads = grads_zeros_like(net)
        grads.weights[0][0, 0] = np.nan
        with pytest.raises(ValueError):
            adam_step(net, grads, state, 0.1)
        assert state.step_count == 0

    def test_rejects_shape_mismatch(self):
        net = mlp_init([2, 4, 1], seed=0)
        other = mlp_init([2, 5, 1], seed=0)
        state = adam_init(net)
        with pytest.raises(ValueError):
            adam_step(net, grads_zeros_like(other), state, 0.1)


class TestCopy:
    def test_copy_is_deep(self):
        net = mlp_init([3, 8, 2], seed=6)
        twin = mlp_copy(net)
        twin.weights[0][0, 0] += 1.0
        assert net.weights[0][0, 0] != twin.weights[0][0, 0]
