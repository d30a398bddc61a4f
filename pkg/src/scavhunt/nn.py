"""A small numpy multilayer perceptron with hand-written backprop and Adam."""

import struct

import numpy as np

__all__ = ["QNetwork", "Adam", "td_loss_and_gradients", "save_network", "load_network"]

HIDDEN_UNITS = (16, 16)


class QNetwork:
    """Fully connected ReLU network with a linear output layer.

    ``params`` is the flat list ``[W1, b1, W2, b2, ...]`` with ``W`` shaped
    (fan_in, fan_out), so a batch of row vectors is evaluated as ``x @ W + b``.
    """

    def __init__(self, layer_sizes, params=None, rng=None):
        self.layer_sizes = tuple(int(s) for s in layer_sizes)
        if len(self.layer_sizes) < 2:
            raise ValueError("need at least an input and an output layer")
        if params is None:
            params = self._init_params(np.random.default_rng(rng))
        self.params = [np.array(p, dtype=np.float64) for p in params]
        for i, (fan_in, fan_out) in enumerate(zip(self.layer_sizes, self.layer_sizes[1:])):
            if self.params[2 * i].shape != (fan_in, fan_out):
                raise ValueError(f"layer {i} weights have shape {self.params[2 * i].shape}")
            if self.params[2 * i + 1].shape != (fan_out,):
                raise ValueError(f"layer {i} bias has shape {self.params[2 * i + 1].shape}")

    @classmethod
    def for_nodes(cls, node_count, rng=None):
        return cls((2 * node_count, *HIDDEN_UNITS, node_count), rng=rng)

    def _init_params(self, rng):
        params = []
        for fan_in, fan_out in zip(self.layer_sizes, self.layer_sizes[1:]):
            limit = np.sqrt(6.0 / fan_in)
            params.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            params.append(np.zeros(fan_out))
        return params

    @property
    def n_inputs(self):
        return self.layer_sizes[0]

    @property
    def n_outputs(self):
        return self.layer_sizes[-1]

    def copy(self):
        return QNetwork(self.layer_sizes, [p.copy() for p in self.params])

    def forward(self, obs):
        x = np.asarray(obs, dtype=np.float64)
        if x.shape[-1] != self.n_inputs:
            raise ValueError(f"expected {self.n_inputs} inputs, got {x.shape[-1]}")
        n_layers = len(self.params) // 2
        for i in range(n_layers):
            x = x @ self.params[2 * i] + self.params[2 * i + 1]
            if i < n_layers - 1:
                x = np.maximum(x, 0.0)
        return x

    __call__ = forward

    def forward_cache(self, x):
        """Forward pass keeping each layer's input and pre-activation for backprop."""
        inputs, pre = [], []
        n_layers = len(self.params) // 2
        for i in range(n_layers):
            inputs.append(x)
            z = x @ self.params[2 * i] + self.params[2 * i + 1]
            pre.append(z)
            x = np.maximum(z, 0.0) if i < n_layers - 1 else z
        return x, inputs, pre

    def backward(self, grad_out, inputs, pre):
        grads = [None] * len(self.params)
        g = grad_out
        for i in reversed(range(len(self.params) // 2)):
            if i < len(self.params) // 2 - 1:
                g = g * (pre[i] > 0)
            grads[2 * i] = inputs[i].T @ g
            grads[2 * i + 1] = g.sum(axis=0)
            if i:
                g = g @ self.params[2 * i].T
        return grads

    def lipschitz_bound(self):
        """Upper bound on the output change per unit input change (2-norm)."""
        bound = 1.0
        for w in self.params[::2]:
            bound *= np.linalg.norm(w, 2)
        return float(bound)


def td_loss_and_gradients(net, target_net, batch, gamma):
    """Mean squared one-step TD error and its exact parameter gradients.

    `batch` maps ``obs``, ``action``, ``reward``, ``next_obs`` and
    ``terminal`` to arrays.  The next state's current node is the action
    just taken, so that output is excluded from the bootstrap max.
    """
    obs = np.asarray(batch["obs"], dtype=np.float64)
    action = np.asarray(batch["action"], dtype=np.int64)
    reward = np.asarray(batch["reward"], dtype=np.float64)
    next_obs = np.asarray(batch["next_obs"], dtype=np.float64)
    terminal = np.asarray(batch["terminal"], dtype=bool)
    n = len(action)
    if n == 0:
        raise ValueError("empty batch")
    rows = np.arange(n)

    q_next = target_net.forward(next_obs)
    q_next[rows, action] = -np.inf
    target = reward + np.where(terminal, 0.0, gamma * q_next.max(axis=1))

    q, inputs, pre = net.forward_cache(obs)
    err = q[rows, action] - target
    loss = float(np.mean(err ** 2))
    grad_out = np.zeros_like(q)
    grad_out[rows, action] = 2.0 * err / n
    return loss, net.backward(grad_out, inputs, pre)


class Adam:
    """Bias-corrected Adam; moment buffers start at zero."""

    def __init__(self, params, beta1=0.9, beta2=0.999, eps=1e-8):
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.step_count = 0

    def step(self, params, grads, lr):
        """Update `params` in place and return them."""
        self.step_count += 1
        t = self.step_count
        b1, b2 = self.beta1, self.beta2
        c1, c2 = 1.0 - b1 ** t, 1.0 - b2 ** t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            p -= lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
        return params


_MAGIC = b"SHQN"
_VERSION = 1


def save_network(net, fh, with_map, normalize):
    """Binary dump: magic, version, flags, layer sizes, then float64 LE row-major params."""
    sizes = net.layer_sizes
    fh.write(_MAGIC)
    fh.write(struct.pack("<IIII", _VERSION, int(with_map), int(normalize), len(sizes)))
    fh.write(struct.pack(f"<{len(sizes)}I", *sizes))
    for p in net.params:
        fh.write(np.ascontiguousarray(p, dtype="<f8").tobytes())


def load_network(fh):
    """Inverse of `save_network`; returns ``(net, with_map, normalize)``."""
    if fh.read(4) != _MAGIC:
        raise ValueError("not a policy file")
    version, with_map, normalize, n = struct.unpack("<IIII", fh.read(16))
    if version != _VERSION:
        raise ValueError(f"unsupported policy file version {version}")
    sizes = struct.unpack(f"<{n}I", fh.read(4 * n))
    params = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        for shape in ((fan_in, fan_out), (fan_out,)):
            count = int(np.prod(shape))
            buf = fh.read(8 * count)
            if len(buf) != 8 * count:
                raise ValueError("truncated policy file")
            params.append(np.frombuffer(buf, dtype="<f8").reshape(shape).astype(np.float64))
    return QNetwork(sizes, params), bool(with_map), bool(normalize)
