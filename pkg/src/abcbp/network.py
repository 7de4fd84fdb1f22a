"""Feed-forward network core: forward pass, squared-error indices, analytic
gradient via layer sensitivities, and the plain gradient-descent update.

Parameter flattening follows one canonical order everywhere: layer by layer,
each layer's weight matrix in row-major order followed by its bias vector.
Population optimizers, gradients and chromosome encodings all share it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericOverflowError, ShapeError

# Largest double strictly below 1 / smallest positive normal double. Logistic
# outputs are clamped into the open interval (0, 1) so the bound holds even
# when the underlying exponential saturates.
_BELOW_ONE = float(np.nextafter(1.0, 0.0))
_ABOVE_ZERO = float(np.finfo(np.float64).tiny)


@dataclass(frozen=True)
class TransferFunction:
    """Elementwise activation with its derivative, selected by kind."""

    kind: str  # "logistic" | "linear"

    def __post_init__(self):
        if self.kind not in ("logistic", "linear"):
            raise ValueError(f"unknown transfer function kind: {self.kind!r}")

    def __call__(self, n: np.ndarray) -> np.ndarray:
        if self.kind == "linear":
            return np.asarray(n, dtype=float).copy()
        n = np.asarray(n, dtype=float)
        # exp(-|n|) never overflows; the two-branch form is stable either side.
        ez = np.exp(-np.abs(n))
        out = np.where(n >= 0, 1.0 / (1.0 + ez), ez / (1.0 + ez))
        np.maximum(out, _ABOVE_ZERO, out=out)
        np.minimum(out, _BELOW_ONE, out=out)
        return out

    def derivative(self, n: np.ndarray) -> np.ndarray:
        if self.kind == "linear":
            return np.ones_like(np.asarray(n, dtype=float))
        return self.derivative_from_output(self(n))

    def derivative_from_output(self, a: np.ndarray) -> np.ndarray:
        """Derivative expressed through the activation value itself."""
        if self.kind == "linear":
            return np.ones_like(np.asarray(a, dtype=float))
        return a * (1.0 - a)


LOGISTIC = TransferFunction("logistic")
LINEAR = TransferFunction("linear")


@dataclass(frozen=True)
class LayerParams:
    """One layer: weights (neurons x inputs), biases (neurons,), transfer."""

    weights: np.ndarray
    biases: np.ndarray
    transfer: TransferFunction = LOGISTIC

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        b = np.asarray(self.biases, dtype=float)
        if w.ndim != 2 or b.ndim != 1:
            raise ShapeError("weights must be 2-d and biases 1-d")
        if w.shape[0] != b.shape[0]:
            raise ShapeError(
                f"layer has {w.shape[0]} weight rows but {b.shape[0]} biases"
            )
        if not (np.isfinite(w).all() and np.isfinite(b).all()):
            raise NumericOverflowError("layer parameters must be finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)

    @property
    def n_inputs(self) -> int:
        return self.weights.shape[1]

    @property
    def n_neurons(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class Network:
    """Ordered stack of layers; the object being trained."""

    layers: tuple[LayerParams, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise ShapeError("a network needs at least one layer")
        for lo, hi in zip(layers, layers[1:]):
            if hi.n_inputs != lo.n_neurons:
                raise ShapeError(
                    f"layer expects {hi.n_inputs} inputs but previous layer "
                    f"has {lo.n_neurons} neurons"
                )
        object.__setattr__(self, "layers", layers)

    @property
    def input_width(self) -> int:
        return self.layers[0].n_inputs

    @property
    def output_width(self) -> int:
        return self.layers[-1].n_neurons

    @property
    def n_params(self) -> int:
        return sum(l.weights.size + l.biases.size for l in self.layers)


@dataclass
class ForwardTrace:
    """Everything the backward pass needs from one forward evaluation.

    ``activations[0]`` is the input sample; ``activations[l + 1]`` is the
    output of layer ``l`` whose pre-activation is ``net_inputs[l]``.
    """

    net_inputs: list[np.ndarray]
    activations: list[np.ndarray]
    transfers: list[TransferFunction] = field(default_factory=list)

    @property
    def prediction(self) -> np.ndarray:
        return self.activations[-1]


def forward(net: Network, x) -> ForwardTrace:
    """Run one sample through the network, keeping the full trace."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 1 or a.shape[0] != net.input_width:
        raise ShapeError(
            f"input has shape {np.shape(x)}, expected ({net.input_width},)"
        )
    net_inputs, activations = [], [a]
    for layer in net.layers:
        n = layer.weights @ a + layer.biases
        if not np.isfinite(n).all():
            raise NumericOverflowError("non-finite net input during forward pass")
        a = layer.transfer(n)
        net_inputs.append(n)
        activations.append(a)
    return ForwardTrace(net_inputs, activations, [l.transfer for l in net.layers])


def predict(net: Network, x) -> np.ndarray:
    """Final activation only; same arithmetic as :func:`forward`."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 1 or a.shape[0] != net.input_width:
        raise ShapeError(
            f"input has shape {np.shape(x)}, expected ({net.input_width},)"
        )
    for layer in net.layers:
        n = layer.weights @ a + layer.biases
        if not np.isfinite(n).all():
            raise NumericOverflowError("non-finite net input during forward pass")
        a = layer.transfer(n)
    return a


def sample_sse(target, prediction) -> float:
    """Squared-error of one sample: sum over outputs of (t - p)^2."""
    t = np.asarray(target, dtype=float)
    p = np.asarray(prediction, dtype=float)
    if t.shape != p.shape:
        raise ShapeError(f"target shape {t.shape} != prediction shape {p.shape}")
    e = t - p
    out = float(e @ e)
    if not np.isfinite(out):
        raise NumericOverflowError("non-finite squared error")
    return out


def predictions(net: Network, X) -> np.ndarray:
    """Network outputs for every row of ``X`` (vectorized forward pass)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != net.input_width:
        raise ShapeError(
            f"feature matrix has shape {X.shape}, expected (*, {net.input_width})"
        )
    return _forward_batch(net, X)[1][-1]


def total_sse(net: Network, data) -> float:
    """Squared error summed over every sample of ``data``.

    Sums in dataset order with a fixed reduction; any parallel evaluation must
    reproduce this canonical result bit for bit.
    """
    X, T = data.features, data.targets
    if T.shape[1] != net.output_width:
        raise ShapeError(
            f"dataset has {T.shape[1]} targets, network expects {net.output_width}"
        )
    e = T - predictions(net, X)
    out = float(np.sum(np.sum(e * e, axis=1)))
    if not np.isfinite(out):
        raise NumericOverflowError("non-finite squared error")
    return out


def output_sensitivity(trace: ForwardTrace, target) -> np.ndarray:
    """Error derivative w.r.t. the last layer's net input.

    Uses the descending sign convention: S = -2 f'(n) * (t - a), so that
    subtracting a learning-rate multiple of S reduces the squared error.
    """
    t = np.asarray(target, dtype=float)
    a = trace.prediction
    if t.shape != a.shape:
        raise ShapeError(f"target shape {t.shape} != output shape {a.shape}")
    n_last = trace.net_inputs[-1]
    return -2.0 * trace.transfers[-1].derivative(n_last) * (t - a)


def backprop_sensitivity(
    next_layer: LayerParams, s_next: np.ndarray, trace: ForwardTrace, layer_index: int
) -> np.ndarray:
    """Propagate a sensitivity one layer back: S_l = f'(n_l) * (W_{l+1}^T S_{l+1})."""
    s_next = np.asarray(s_next, dtype=float)
    if s_next.shape[0] != next_layer.n_neurons:
        raise ShapeError(
            f"sensitivity length {s_next.shape[0]} != next layer size "
            f"{next_layer.n_neurons}"
        )
    n_l = trace.net_inputs[layer_index]
    return trace.transfers[layer_index].derivative(n_l) * (next_layer.weights.T @ s_next)


def _forward_batch(net: Network, X: np.ndarray):
    """Vectorized forward over all rows; returns per-layer (net_inputs, activations)."""
    a = X
    net_inputs, activations = [], [a]
    for layer in net.layers:
        n = a @ layer.weights.T + layer.biases
        if not np.isfinite(n).all():
            raise NumericOverflowError("non-finite net input during forward pass")
        a = layer.transfer(n)
        net_inputs.append(n)
        activations.append(a)
    return net_inputs, activations


def gradient(net: Network, data) -> np.ndarray:
    """Gradient of :func:`total_sse` w.r.t. every parameter, canonical order.

    Computed with the sensitivity recursion, accumulated over the full batch.
    """
    X, T = data.features, data.targets
    if X.shape[1] != net.input_width or T.shape[1] != net.output_width:
        raise ShapeError("dataset shape does not match network")
    _, activations = _forward_batch(net, X)
    layers = net.layers
    # Rows of S hold one sample's sensitivity for the current layer.
    s = -2.0 * layers[-1].transfer.derivative_from_output(activations[-1]) * (
        T - activations[-1]
    )
    grads_w = [None] * len(layers)
    grads_b = [None] * len(layers)
    for l in range(len(layers) - 1, -1, -1):
        grads_w[l] = s.T @ activations[l]
        grads_b[l] = s.sum(axis=0)
        if l > 0:
            s = layers[l - 1].transfer.derivative_from_output(activations[l]) * (
                s @ layers[l].weights
            )
    return np.concatenate(
        [np.concatenate([gw.ravel(), gb]) for gw, gb in zip(grads_w, grads_b)]
    )


def bp_step(net: Network, data, eta: float) -> Network:
    """One full-batch gradient-descent update; returns a new network."""
    if not (np.isfinite(eta) and eta >= 0.0):
        raise ValueError(f"learning rate must be finite and >= 0, got {eta}")
    g = gradient(net, data)
    return network_from_params(
        layer_sizes(net), network_params(net) - eta * g, transfers(net)
    )


def bp_sweep(net: Network, data, eta: float, batch_size: int = 1) -> Network:
    """One pass of incremental descent updates over the dataset, in order.

    Sensitivities are computed per contiguous batch with the weights as they
    stood before that batch's update, and the update uses the batch-mean
    gradient, so the step scale is per-sample regardless of batch size. The
    incremental form tolerates much larger learning rates than the summed
    full-batch step; ``batch_size=1`` is plain sample-by-sample descent.
    """
    if not (np.isfinite(eta) and eta >= 0.0):
        raise ValueError(f"learning rate must be finite and >= 0, got {eta}")
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    X, T = data.features, data.targets
    if X.shape[1] != net.input_width or T.shape[1] != net.output_width:
        raise ShapeError("dataset shape does not match network")
    tfs = [l.transfer for l in net.layers]
    Ws = [l.weights.copy() for l in net.layers]
    Bs = [l.biases.copy() for l in net.layers]
    depth = len(Ws)
    for lo in range(0, X.shape[0], batch_size):
        a = X[lo : lo + batch_size]
        acts, nets = [a], []
        for W, b, tf in zip(Ws, Bs, tfs):
            n = a @ W.T + b
            if not np.isfinite(n).all():
                raise NumericOverflowError("non-finite net input during sweep")
            a = tf(n)
            nets.append(n)
            acts.append(a)
        s = (
            -2.0
            * tfs[-1].derivative_from_output(acts[-1])
            * (T[lo : lo + batch_size] - acts[-1])
        )
        sens = [s]
        for l in range(depth - 1, 0, -1):
            s = tfs[l - 1].derivative_from_output(acts[l]) * (s @ Ws[l])
            sens.insert(0, s)
        scale = eta / a.shape[0]
        for l in range(depth):
            Ws[l] -= scale * (sens[l].T @ acts[l])
            Bs[l] -= scale * sens[l].sum(axis=0)
    return Network(tuple(
        LayerParams(W, B, tf) for W, B, tf in zip(Ws, Bs, tfs)
    ))


# -- flat parameter vector plumbing ------------------------------------------


def layer_sizes(net: Network) -> tuple[int, ...]:
    return (net.input_width,) + tuple(l.n_neurons for l in net.layers)


def transfers(net: Network) -> tuple[TransferFunction, ...]:
    return tuple(l.transfer for l in net.layers)


def param_count(sizes) -> int:
    """Total parameter count for a network with the given layer widths."""
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise ShapeError(f"invalid layer sizes {sizes}")
    return sum(o * i + o for i, o in zip(sizes, sizes[1:]))


def network_from_params(sizes, params, transfer=LOGISTIC) -> Network:
    """Build a network from a flat parameter vector in canonical order.

    ``transfer`` is one TransferFunction for every layer, or one per layer.
    """
    sizes = tuple(int(s) for s in sizes)
    flat = np.asarray(params, dtype=float)
    if flat.ndim != 1 or flat.shape[0] != param_count(sizes):
        raise ShapeError(
            f"parameter vector of length {flat.shape[0]} does not fit sizes {sizes} "
            f"(need {param_count(sizes)})"
        )
    if isinstance(transfer, TransferFunction):
        transfer = (transfer,) * (len(sizes) - 1)
    layers, pos = [], 0
    for t, (n_in, n_out) in zip(transfer, zip(sizes, sizes[1:])):
        w = flat[pos : pos + n_out * n_in].reshape(n_out, n_in)
        pos += n_out * n_in
        b = flat[pos : pos + n_out]
        pos += n_out
        layers.append(LayerParams(w, b, t))
    return Network(tuple(layers))


def network_params(net: Network) -> np.ndarray:
    """Flatten a network into the canonical parameter vector."""
    return np.concatenate(
        [np.concatenate([l.weights.ravel(), l.biases]) for l in net.layers]
    )
