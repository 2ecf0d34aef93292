"""
Dense Feedforward Network Module

A small fully connected network with Leaky ReLU hidden activations, a linear
output layer, mean-squared-error loss, exact backpropagation and plain SGD.
Everything is float64.

Serialised parameters are a JSON object::

    {"dims": [in, h1, ..., out], "alpha": 0.01, "activations": [true, ..., false],
     "params": [...]}

where ``params`` concatenates, layer by layer, the row-major weight matrix
(out x in) followed by the bias vector.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .utils.errors import InvalidArgumentError, ShapeError, StaleCacheError
from .utils.files import atomic_write
from .utils.seeding import make_rng

logger = logging.getLogger(__name__)


@dataclass
class Mlp:
    """
    Network parameters.

    Attributes:
        weights: Per-layer weight matrices, shape (out, in)
        biases: Per-layer bias vectors, shape (out,)
        alpha: Leaky ReLU negative slope
        activations: Per-layer flag; True applies Leaky ReLU after the affine map
        version: Incremented on every parameter update
    """

    weights: List[np.ndarray]
    biases: List[np.ndarray]
    alpha: float = 0.01
    activations: List[bool] = field(default_factory=list)
    version: int = 0

    def __post_init__(self):
        if not self.activations:
            self.activations = [True] * (len(self.weights) - 1) + [False]
        self.check()

    @property
    def dims(self) -> List[int]:
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    @property
    def num_parameters(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def check(self) -> None:
        """
        Verify the structural invariants.

        Raises:
            ShapeError: If layer dimensions do not chain
            InvalidArgumentError: If alpha is negative or a parameter is not finite
        """
        if not self.weights or len(self.weights) != len(self.biases) or len(self.activations) != len(self.weights):
            raise ShapeError("weights, biases and activation flags must have one entry per layer")
        for index, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[0],):
                raise ShapeError(f"layer {index}: weight {w.shape} and bias {b.shape} disagree")
            if index and w.shape[1] != self.weights[index - 1].shape[0]:
                emitted = self.weights[index - 1].shape[0]
                raise ShapeError(f"layer {index} expects {w.shape[1]} inputs, previous layer emits {emitted}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise InvalidArgumentError(f"layer {index} holds non-finite parameters")
        if self.alpha < 0:
            raise InvalidArgumentError(f"alpha must be non-negative, got {self.alpha}")

    def copy(self) -> "Mlp":
        return Mlp(
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            alpha=self.alpha,
            activations=list(self.activations),
            version=self.version,
        )

    def to_dict(self) -> Dict[str, Any]:
        params: List[float] = []
        for w, b in zip(self.weights, self.biases):
            params.extend(w.ravel(order="C").tolist())
            params.extend(b.tolist())
        return {
            "dims": self.dims,
            "alpha": self.alpha,
            "activations": list(self.activations),
            "params": params,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Mlp":
        """
        Rebuild a network from its serialised form.

        Raises:
            ShapeError: If the parameter count does not match the dims
        """
        dims = [int(d) for d in data["dims"]]
        params = np.asarray(data["params"], dtype=np.float64)
        weights, biases = [], []
        offset = 0
        for n_in, n_out in zip(dims[:-1], dims[1:]):
            end = offset + n_in * n_out
            if end + n_out > params.size:
                raise ShapeError("serialised parameters are shorter than the declared dims")
            weights.append(params[offset:end].reshape(n_out, n_in).copy())
            biases.append(params[end:end + n_out].copy())
            offset = end + n_out
        if offset != params.size:
            raise ShapeError("serialised parameters are longer than the declared dims")
        return cls(
            weights=weights,
            biases=biases,
            alpha=float(data.get("alpha", 0.01)),
            activations=[bool(a) for a in data["activations"]],
        )


@dataclass
class GradientSet:
    """Per-layer gradients, shape-congruent with an Mlp."""

    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def norm(self) -> float:
        total = sum(float(np.sum(g * g)) for g in self.weights) + sum(float(np.sum(g * g)) for g in self.biases)
        return math.sqrt(total)

    def scaled(self, factor: float) -> "GradientSet":
        return GradientSet(
            weights=[g * factor for g in self.weights],
            biases=[g * factor for g in self.biases],
        )


@dataclass
class ForwardCache:
    """Activations kept by forward for the matching backward call."""

    net_id: int
    version: int
    inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]
    output: np.ndarray


def leaky_relu(x, alpha: float):
    """
    Leaky ReLU: x for x >= 0, alpha * x otherwise.

    Works elementwise on arrays; returns a float for scalar input.
    """
    if np.isscalar(x):
        return float(x) if x >= 0 else alpha * float(x)
    x = np.asarray(x, dtype=np.float64)
    return np.where(x >= 0, x, alpha * x)


def leaky_relu_grad(z: np.ndarray, alpha: float) -> np.ndarray:
    """Derivative of leaky_relu; the kink at 0 takes the negative-branch slope."""
    return np.where(z > 0, 1.0, alpha)


def forward(net: Mlp, x) -> Tuple[np.ndarray, ForwardCache]:
    """
    Evaluate the network.

    Args:
        net: Network
        x: One input vector of length dims[0], or a batch of shape (n, dims[0])

    Returns:
        (output, cache): output has shape (dims[-1],) for a single vector or
        (n, dims[-1]) for a batch

    Raises:
        ShapeError: If the input width does not match the first layer
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    if batch.ndim != 2 or batch.shape[1] != net.weights[0].shape[1]:
        raise ShapeError(f"network expects inputs of width {net.weights[0].shape[1]}, got shape {x.shape}")

    inputs, pre = [], []
    a = batch
    for w, b, active in zip(net.weights, net.biases, net.activations):
        inputs.append(a)
        z = a @ w.T + b
        pre.append(z)
        a = np.where(z >= 0, z, net.alpha * z) if active else z

    cache = ForwardCache(net_id=id(net), version=net.version, inputs=inputs, pre_activations=pre, output=a)
    return (a[0] if single else a), cache


def mse_loss(pred, target) -> float:
    """
    Mean of squared componentwise differences.

    Raises:
        ShapeError: If the shapes differ
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeError(f"prediction shape {pred.shape} differs from target shape {target.shape}")
    if pred.size == 0:
        return 0.0
    diff = pred - target
    return float(np.mean(diff * diff))


def backward(net: Mlp, cache: ForwardCache, target) -> GradientSet:
    """
    Gradients of mse_loss(output, target) with respect to every parameter.

    Args:
        net: The network forward was called on
        cache: Cache returned by that forward call
        target: Target with the shape of the forward output

    Returns:
        GradientSet shaped like net

    Raises:
        StaleCacheError: If the cache belongs to another network or older parameters
        ShapeError: If the target shape does not match the output
    """
    if cache.net_id != id(net) or cache.version != net.version:
        raise StaleCacheError("activation cache does not belong to the current network parameters")
    out = cache.output
    target = np.asarray(target, dtype=np.float64)
    if target.ndim <= 1:
        target = target.reshape(-1, out.shape[1])
    if target.shape != out.shape:
        raise ShapeError(f"target shape {target.shape} differs from output shape {out.shape}")

    delta = 2.0 * (out - target) / out.size
    grad_w: List[Optional[np.ndarray]] = [None] * len(net.weights)
    grad_b: List[Optional[np.ndarray]] = [None] * len(net.weights)
    for layer in reversed(range(len(net.weights))):
        if net.activations[layer]:
            delta = delta * leaky_relu_grad(cache.pre_activations[layer], net.alpha)
        grad_w[layer] = delta.T @ cache.inputs[layer]
        grad_b[layer] = delta.sum(axis=0)
        if layer:
            delta = delta @ net.weights[layer]
    return GradientSet(weights=grad_w, biases=grad_b)


def sgd_step(net: Mlp, grads: GradientSet, lr: float) -> Mlp:
    """
    Apply theta <- theta - lr * grad in place.

    Returns:
        The updated network (same object)

    Raises:
        ShapeError: If the gradients are not shaped like the network
    """
    if len(grads.weights) != len(net.weights) or len(grads.biases) != len(net.biases):
        raise ShapeError("gradient set has a different number of layers than the network")
    for index, (w, b, gw, gb) in enumerate(zip(net.weights, net.biases, grads.weights, grads.biases)):
        if gw.shape != w.shape or gb.shape != b.shape:
            raise ShapeError(f"layer {index}: gradient shapes {gw.shape}/{gb.shape} differ from {w.shape}/{b.shape}")
    if lr == 0:
        return net
    for w, b, gw, gb in zip(net.weights, net.biases, grads.weights, grads.biases):
        w -= lr * gw
        b -= lr * gb
    net.version += 1
    return net


def clip_gradients(grads: GradientSet, max_norm: float) -> Tuple[GradientSet, float]:
    """
    Rescale gradients so their global L2 norm does not exceed max_norm.

    Args:
        grads: Gradients
        max_norm: Norm bound; 0 disables clipping

    Returns:
        (possibly rescaled gradients, norm before clipping)
    """
    norm = grads.norm()
    if max_norm > 0 and norm > max_norm:
        return grads.scaled(max_norm / norm), norm
    return grads, norm


def init_weights(
    dims: Sequence[int],
    seed: int,
    alpha: float = 0.01,
    hidden_activation: bool = True,
) -> Mlp:
    """
    Glorot-uniform initialisation with zero biases.

    Args:
        dims: Layer sizes [in, hidden..., out]
        seed: Seed of the initialisation stream
        alpha: Leaky ReLU slope
        hidden_activation: False builds an activation-free (affine) network

    Returns:
        A new Mlp

    Raises:
        InvalidArgumentError: If fewer than two sizes are given or a size is not positive
    """
    dims = [int(d) for d in dims]
    if len(dims) < 2:
        raise InvalidArgumentError("a network needs at least an input and an output size")
    if any(d < 1 for d in dims):
        raise InvalidArgumentError(f"layer sizes must be positive, got {dims}")
    rng = make_rng(seed, "init")
    weights, biases = [], []
    for n_in, n_out in zip(dims[:-1], dims[1:]):
        limit = math.sqrt(6.0 / (n_in + n_out))
        weights.append(rng.uniform(-limit, limit, size=(n_out, n_in)))
        biases.append(np.zeros(n_out, dtype=np.float64))
    activations = [hidden_activation] * (len(dims) - 2) + [False]
    logger.debug(f"Initialised network {dims} (hidden activation={hidden_activation})")
    return Mlp(weights=weights, biases=biases, alpha=alpha, activations=activations)


def save(net: Mlp, path: str) -> None:
    """Write the network's serialised form to a JSON file."""
    with atomic_write(path) as handle:
        json.dump(net.to_dict(), handle)


def load(path: str) -> Mlp:
    """Read a network written by save."""
    with open(path, "r", encoding="utf-8") as handle:
        return Mlp.from_dict(json.load(handle))
