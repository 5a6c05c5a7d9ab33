# this_file: src/qsmkit/neural/layers.py
"""Channels-last 3D network layers with explicit forward and backward passes.

Activations have shape (N, X, Y, Z, C). Every layer caches what its backward
pass needs during the most recent forward call.
"""

from __future__ import annotations

import numpy as np

from qsmkit.core.exceptions import ShapeError

SPATIAL = (1, 2, 3)
REDUCE = (0, 1, 2, 3)


class Layer:
    """Base layer: no parameters, identity buffers."""

    def __init__(self) -> None:
        self.params: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}
        self.buffers: dict[str, np.ndarray] = {}

    def forward(self, x: np.ndarray, training: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        raise NotImplementedError

    def backward(self, dout: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def zero_grad(self) -> None:
        for name, value in self.params.items():
            self.grads[name] = np.zeros_like(value)


class Conv3D(Layer):
    """Stride-1 cubic convolution with zero 'same' padding (odd kernel size)."""

    def __init__(self, c_in: int, c_out: int, size: int, rng: np.random.Generator) -> None:
        super().__init__()
        fan_in = size**3 * c_in
        self.size = size
        self.params["weight"] = rng.normal(0.0, np.sqrt(2.0 / fan_in), (size, size, size, c_in, c_out))
        self.params["bias"] = np.zeros(c_out)
        self.zero_grad()

    def _offsets(self):
        s = self.size
        return ((a, b, c) for a in range(s) for b in range(s) for c in range(s))

    def forward(self, x: np.ndarray, training: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        p = self.size // 2
        w = self.params["weight"]
        xp = np.pad(x, ((0, 0), (p, p), (p, p), (p, p), (0, 0))) if p else x
        _, nx, ny, nz, _ = x.shape
        out = np.zeros((*x.shape[:4], w.shape[-1]))
        for a, b, c in self._offsets():
            out += xp[:, a : a + nx, b : b + ny, c : c + nz, :] @ w[a, b, c]
        self._xp = xp
        self._shape = x.shape
        return out + self.params["bias"]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        p = self.size // 2
        w = self.params["weight"]
        xp = self._xp
        _, nx, ny, nz, _ = self._shape
        dxp = np.zeros_like(xp)
        dw = np.zeros_like(w)
        for a, b, c in self._offsets():
            window = xp[:, a : a + nx, b : b + ny, c : c + nz, :]
            dw[a, b, c] = np.tensordot(window, dout, axes=(REDUCE, REDUCE))
            dxp[:, a : a + nx, b : b + ny, c : c + nz, :] += dout @ w[a, b, c].T
        self.grads["weight"] = dw
        self.grads["bias"] = dout.sum(axis=REDUCE)
        return dxp[:, p : p + nx, p : p + ny, p : p + nz, :] if p else dxp


class DownConv(Layer):
    """2x2x2 convolution with stride 2."""

    def __init__(self, c_in: int, c_out: int, rng: np.random.Generator) -> None:
        super().__init__()
        self.params["weight"] = rng.normal(0.0, np.sqrt(2.0 / (8 * c_in)), (2, 2, 2, c_in, c_out))
        self.params["bias"] = np.zeros(c_out)
        self.zero_grad()

    def forward(self, x: np.ndarray, training: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        n, nx, ny, nz, c = x.shape
        if nx % 2 or ny % 2 or nz % 2:
            msg = f"stride-2 convolution needs even spatial dims, got {x.shape[1:4]}"
            raise ShapeError(msg)
        cols = x.reshape(n, nx // 2, 2, ny // 2, 2, nz // 2, 2, c).transpose(0, 1, 3, 5, 2, 4, 6, 7)
        cols = cols.reshape(n, nx // 2, ny // 2, nz // 2, 8 * c)
        self._cols = cols
        self._shape = x.shape
        w = self.params["weight"]
        return cols @ w.reshape(8 * c, -1) + self.params["bias"]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        n, nx, ny, nz, c = self._shape
        w = self.params["weight"]
        wm = w.reshape(8 * c, -1)
        self.grads["weight"] = np.tensordot(self._cols, dout, axes=(REDUCE, REDUCE)).reshape(w.shape)
        self.grads["bias"] = dout.sum(axis=REDUCE)
        dcols = (dout @ wm.T).reshape(n, nx // 2, ny // 2, nz // 2, 2, 2, 2, c)
        return dcols.transpose(0, 1, 4, 2, 5, 3, 6, 7).reshape(self._shape)


class UpConv(Layer):
    """2x2x2 transposed convolution with stride 2."""

    def __init__(self, c_in: int, c_out: int, rng: np.random.Generator) -> None:
        super().__init__()
        self.params["weight"] = rng.normal(0.0, np.sqrt(2.0 / c_in), (c_in, 2, 2, 2, c_out))
        self.params["bias"] = np.zeros(c_out)
        self.zero_grad()

    def forward(self, x: np.ndarray, training: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        n, nx, ny, nz, c = x.shape
        w = self.params["weight"]
        c_out = w.shape[-1]
        y = (x @ w.reshape(c, -1)).reshape(n, nx, ny, nz, 2, 2, 2, c_out)
        self._x = x
        return y.transpose(0, 1, 4, 2, 5, 3, 6, 7).reshape(n, 2 * nx, 2 * ny, 2 * nz, c_out) + self.params["bias"]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        x = self._x
        n, nx, ny, nz, c = x.shape
        w = self.params["weight"]
        c_out = w.shape[-1]
        d = dout.reshape(n, nx, 2, ny, 2, nz, 2, c_out).transpose(0, 1, 3, 5, 2, 4, 6, 7)
        d = d.reshape(n, nx, ny, nz, 8 * c_out)
        self.grads["weight"] = np.tensordot(x, d, axes=(REDUCE, REDUCE)).reshape(w.shape)
        self.grads["bias"] = dout.sum(axis=REDUCE)
        return d @ w.reshape(c, -1).T


class BatchNorm(Layer):
    """Per-channel batch normalization over batch and space."""

    def __init__(self, channels: int, momentum: float = 0.1, eps: float = 1e-5) -> None:
        super().__init__()
        self.momentum = momentum
        self.eps = eps
        self.params["gamma"] = np.ones(channels)
        self.params["beta"] = np.zeros(channels)
        self.buffers["running_mean"] = np.zeros(channels)
        self.buffers["running_var"] = np.ones(channels)
        self.zero_grad()

    def forward(self, x: np.ndarray, training: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        if training:
            mean = x.mean(axis=REDUCE)
            var = x.var(axis=REDUCE)
            m = self.momentum
            self.buffers["running_mean"] = (1 - m) * self.buffers["running_mean"] + m * mean
            self.buffers["running_var"] = (1 - m) * self.buffers["running_var"] + m * var
        else:
            mean = self.buffers["running_mean"]
            var = self.buffers["running_var"]
        inv_std = 1.0 / np.sqrt(var + self.eps)
        xhat = (x - mean) * inv_std
        self._xhat = xhat
        self._inv_std = inv_std
        self._batch_stats = training
        return self.params["gamma"] * xhat + self.params["beta"]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        xhat = self._xhat
        count = xhat.size // xhat.shape[-1]
        self.grads["gamma"] = (dout * xhat).sum(axis=REDUCE)
        self.grads["beta"] = dout.sum(axis=REDUCE)
        dxhat = dout * self.params["gamma"]
        if not self._batch_stats:
            return dxhat * self._inv_std
        return (
            self._inv_std
            / count
            * (count * dxhat - dxhat.sum(axis=REDUCE) - xhat * (dxhat * xhat).sum(axis=REDUCE))
        )


class ReLU(Layer):
    def forward(self, x: np.ndarray, training: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        self._active = x > 0
        return np.where(self._active, x, 0.0)

    def backward(self, dout: np.ndarray) -> np.ndarray:
        return np.where(self._active, dout, 0.0)


class Dropout(Layer):
    """Inverted dropout; identity outside training or at rate 0."""

    def __init__(self, rate: float) -> None:
        super().__init__()
        self.rate = rate

    def forward(self, x: np.ndarray, training: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        if not training or self.rate == 0:
            self._scale = None
            return x
        if rng is None:
            msg = "dropout in training mode needs a random generator"
            raise ValueError(msg)
        keep = rng.random(x.shape) >= self.rate
        self._scale = keep / (1.0 - self.rate)
        return x * self._scale

    def backward(self, dout: np.ndarray) -> np.ndarray:
        return dout if self._scale is None else dout * self._scale


class Sequential(Layer):
    """Layers applied in order; parameter names are '<index>.<name>'."""

    def __init__(self, layers: list[Layer]) -> None:
        super().__init__()
        self.layers = layers

    def forward(self, x: np.ndarray, training: bool = False, rng: np.random.Generator | None = None) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x, training, rng)
        return x

    def backward(self, dout: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            dout = layer.backward(dout)
        return dout

    def named_layers(self) -> list[tuple[str, Layer]]:
        return [(str(i), layer) for i, layer in enumerate(self.layers)]
