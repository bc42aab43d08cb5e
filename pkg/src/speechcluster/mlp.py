"""A small feed-forward classifier: ReLU hidden layers, softmax output,
cross-entropy loss with L2 penalty, Adam updates, and loss-based early stopping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_ADAM_BETA1 = 0.9
_ADAM_BETA2 = 0.999
_ADAM_EPS = 1e-8


@dataclass(frozen=True)
class MlpConfig:
    hidden_layers: tuple[int, ...] = (100,)
    learning_rate: float = 1e-3
    l2: float = 1e-4
    batch_size: int = 200  # effective batch is min(batch_size, train size)
    max_epochs: int = 200
    early_stop_tol: float = 1e-4
    patience: int = 10
    seed: int = 0

    def __post_init__(self):
        if any(h < 1 for h in self.hidden_layers):
            raise ValueError("hidden layer sizes must be >= 1")
        if self.learning_rate <= 0 or self.l2 < 0:
            raise ValueError("rates must be positive")
        if self.batch_size < 1 or self.max_epochs < 1 or self.patience < 1:
            raise ValueError("batch_size, max_epochs, patience must be >= 1")


def _relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class MlpClassifier:
    """Multinomial classifier trained by mini-batch Adam.

    Deterministic for a fixed config seed: weight initialization (Glorot
    uniform) and batch shuffling both come from one seeded generator.
    """

    def __init__(self, config: MlpConfig | None = None):
        self.config = config or MlpConfig()
        self.classes_: tuple | None = None
        self.loss_curve_: list[float] = []
        self._weights: list[np.ndarray] = []
        self._biases: list[np.ndarray] = []

    def fit(self, X: np.ndarray, y) -> "MlpClassifier":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        classes = tuple(sorted(set(y.tolist())))
        if len(classes) < 2:
            raise ValueError("need at least 2 classes to fit")
        self.classes_ = classes
        class_index = {c: i for i, c in enumerate(classes)}
        yi = np.array([class_index[c] for c in y.tolist()], dtype=np.int64)
        onehot = np.zeros((X.shape[0], len(classes)))
        onehot[np.arange(X.shape[0]), yi] = 1.0

        cfg = self.config
        rng = np.random.default_rng(cfg.seed)
        sizes = [X.shape[1], *cfg.hidden_layers, len(classes)]
        self._weights = []
        self._biases = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            self._weights.append(rng.uniform(-bound, bound, (fan_in, fan_out)))
            self._biases.append(np.zeros(fan_out))

        m_w = [np.zeros_like(w) for w in self._weights]
        v_w = [np.zeros_like(w) for w in self._weights]
        m_b = [np.zeros_like(b) for b in self._biases]
        v_b = [np.zeros_like(b) for b in self._biases]

        n = X.shape[0]
        batch = min(cfg.batch_size, n)
        self.loss_curve_ = []
        best_loss = np.inf
        stagnant = 0
        step = 0
        for _ in range(cfg.max_epochs):
            perm = rng.permutation(n)
            epoch_losses = []
            for start in range(0, n, batch):
                sel = perm[start : start + batch]
                xb, yb = X[sel], onehot[sel]
                acts = [xb]
                for w, b in zip(self._weights[:-1], self._biases[:-1]):
                    acts.append(_relu(acts[-1] @ w + b))
                probs = _softmax(acts[-1] @ self._weights[-1] + self._biases[-1])

                m = xb.shape[0]
                ce = -np.log(np.clip(probs[yb.astype(bool)], 1e-12, None)).mean()
                penalty = 0.5 * cfg.l2 * sum(
                    float(np.sum(w * w)) for w in self._weights
                ) / m
                epoch_losses.append(ce + penalty)

                delta = (probs - yb) / m
                grads_w = []
                grads_b = []
                for layer in range(len(self._weights) - 1, -1, -1):
                    grads_w.append(
                        acts[layer].T @ delta + cfg.l2 * self._weights[layer] / m
                    )
                    grads_b.append(delta.sum(axis=0))
                    if layer > 0:
                        delta = delta @ self._weights[layer].T
                        delta[acts[layer] <= 0] = 0.0
                grads_w.reverse()
                grads_b.reverse()

                step += 1
                corr1 = 1.0 - _ADAM_BETA1**step
                corr2 = 1.0 - _ADAM_BETA2**step
                for layer in range(len(self._weights)):
                    m_w[layer] = _ADAM_BETA1 * m_w[layer] + (1 - _ADAM_BETA1) * grads_w[layer]
                    v_w[layer] = _ADAM_BETA2 * v_w[layer] + (1 - _ADAM_BETA2) * grads_w[layer] ** 2
                    m_b[layer] = _ADAM_BETA1 * m_b[layer] + (1 - _ADAM_BETA1) * grads_b[layer]
                    v_b[layer] = _ADAM_BETA2 * v_b[layer] + (1 - _ADAM_BETA2) * grads_b[layer] ** 2
                    self._weights[layer] -= cfg.learning_rate * (
                        (m_w[layer] / corr1) / (np.sqrt(v_w[layer] / corr2) + _ADAM_EPS)
                    )
                    self._biases[layer] -= cfg.learning_rate * (
                        (m_b[layer] / corr1) / (np.sqrt(v_b[layer] / corr2) + _ADAM_EPS)
                    )

            loss = float(np.mean(epoch_losses))
            self.loss_curve_.append(loss)
            if loss < best_loss - cfg.early_stop_tol:
                best_loss = loss
                stagnant = 0
            else:
                stagnant += 1
                if stagnant >= cfg.patience:
                    break
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.classes_ is None:
            raise RuntimeError("classifier is not fitted")
        h = np.asarray(X, dtype=np.float64)
        for w, b in zip(self._weights[:-1], self._biases[:-1]):
            h = _relu(h @ w + b)
        return _softmax(h @ self._weights[-1] + self._biases[-1])

    def predict(self, X: np.ndarray) -> np.ndarray:
        probs = self.predict_proba(X)
        idx = probs.argmax(axis=1)
        return np.asarray([self.classes_[i] for i in idx])
