"""Linear SVMs combined one-versus-one.

Each binary machine minimises ``0.5*|w|**2 + C * sum(max(0, 1 - y*(w.x + b)))``.
Features are centred per pair and the bias is carried by an extra constant
feature, so the default dual coordinate descent solver works on a
box-constrained dual with no equality constraint. The constant equals the
mean norm of the centred rows: scaling all features by ``s`` together with
``C -> C/s**2`` then scales the whole problem and leaves every decision sign
unchanged. The bias is mapped back to the uncentred space afterwards. A Pegasos solver (step ``1/(lambda*t)``,
``lambda = 1/(C*n)``) is available as an alternative.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _accel
from .dataset_io import natural_key
from .errors import DimensionMismatch, EmptyClass, FingerprintMismatch, NotEnoughClasses

FORMAT = "csface-ovo"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    c: float = 1.0
    epochs: int = 50
    seed: int = 0
    learning_rate_schedule: str = "1/(lambda*t)"  # only read by the pegasos solver
    solver: str = "dcd"
    tol: float = 1e-4

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.solver not in ("dcd", "pegasos"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.learning_rate_schedule != "1/(lambda*t)":
            raise ValueError(f"unsupported learning-rate schedule {self.learning_rate_schedule!r}")


@dataclass
class BinarySvm:
    weights: np.ndarray = field(repr=False)
    bias: float
    class_pair: Tuple = (1, -1)

    def decision(self, x) -> np.ndarray:
        return np.asarray(x, dtype=np.float64) @ self.weights + self.bias

    def predict(self, x):
        """Label per row; a decision value of exactly 0 goes to the first label."""
        d = np.atleast_1d(self.decision(x))
        return [self.class_pair[0] if v >= 0 else self.class_pair[1] for v in d]


def hinge_objective(w, b, X, y, c) -> float:
    margins = y * (np.asarray(X) @ w + b)
    return 0.5 * float(w @ w) + c * float(np.maximum(0.0, 1.0 - margins).sum())


# -- solvers (same source runs interpreted on numpy arrays or under numba) ---

def _dcd_loop(X, y, c, order, tol):
    n, d = X.shape
    q = np.empty(n)
    for i in range(n):
        q[i] = np.dot(X[i], X[i])
    alpha = np.zeros(n)
    w = np.zeros(d)
    epochs = order.shape[0]
    done = 0
    for e in range(epochs):
        worst = 0.0
        for k in range(n):
            i = order[e, k]
            g = y[i] * np.dot(w, X[i]) - 1.0
            a = alpha[i]
            if a <= 0.0:
                pg = min(g, 0.0)
            elif a >= c:
                pg = max(g, 0.0)
            else:
                pg = g
            if abs(pg) > worst:
                worst = abs(pg)
            if pg != 0.0 and q[i] > 0.0:
                na = min(max(a - g / q[i], 0.0), c)
                w += ((na - a) * y[i]) * X[i]
                alpha[i] = na
        done = e + 1
        if worst < tol:
            break
    return w, done


def _pegasos_loop(X, y, c, order, tol):
    n, d = X.shape
    lam = 1.0 / (c * n)
    w = np.zeros(d)
    t = 0
    for e in range(order.shape[0]):
        for k in range(n):
            i = order[e, k]
            t += 1
            eta = 1.0 / (lam * t)
            violated = y[i] * np.dot(w, X[i]) < 1.0
            w *= 1.0 - eta * lam
            if violated:
                w += (eta * y[i]) * X[i]
    return w, order.shape[0]


_dcd_numba = _accel.njit(_dcd_loop)
_pegasos_numba = _accel.njit(_pegasos_loop)


def _solver(name: str):
    if name == "dcd":
        return _dcd_numba if _accel.USE_NUMBA else _dcd_loop
    return _pegasos_numba if _accel.USE_NUMBA else _pegasos_loop


def _fit(X: np.ndarray, y: np.ndarray, cfg: TrainConfig, seed) -> Tuple[np.ndarray, float]:
    mean = X.mean(axis=0)
    aug = np.empty((X.shape[0], X.shape[1] + 1))
    aug[:, :-1] = X - mean
    scale = float(np.linalg.norm(aug[:, :-1], axis=1).mean())
    bias_feature = scale if scale > 0 else 1.0
    aug[:, -1] = bias_feature
    rng = np.random.default_rng(seed)
    order = np.stack([rng.permutation(X.shape[0]) for _ in range(cfg.epochs)]).astype(np.int64)
    w_aug, _ = _solver(cfg.solver)(aug, y, float(cfg.c), order, float(cfg.tol))
    w = w_aug[:-1].copy()
    return w, float(w_aug[-1] * bias_feature - w @ mean)


def train_binary(pos, neg, cfg: TrainConfig = TrainConfig(), class_pair=(1, -1), seed=None) -> BinarySvm:
    """Linear SVM separating ``pos`` (label +1) from ``neg`` (label -1)."""
    P = np.atleast_2d(np.asarray(pos, dtype=np.float64))
    N = np.atleast_2d(np.asarray(neg, dtype=np.float64))
    if P.size == 0 or N.size == 0:
        raise EmptyClass("both classes need at least one sample")
    if P.shape[1] != N.shape[1]:
        raise DimensionMismatch(f"feature dims differ: {P.shape[1]} vs {N.shape[1]}")
    X = np.vstack([P, N])
    y = np.concatenate([np.ones(len(P)), -np.ones(len(N))])
    w, b = _fit(X, y, cfg, cfg.seed if seed is None else seed)
    return BinarySvm(w, b, tuple(class_pair))


# -- one versus one ------------------------------------------------------------

@dataclass
class OvoModel:
    classes: List
    machines: List[BinarySvm]
    train_config: TrainConfig = TrainConfig()
    feature_fingerprint: str = ""

    def __post_init__(self):
        k = len(self.classes)
        if len(self.machines) != k * (k - 1) // 2:
            raise ValueError("one machine per unordered class pair required")
        index = {c: i for i, c in enumerate(self.classes)}
        self._a = np.array([index[m.class_pair[0]] for m in self.machines], dtype=np.int64)
        self._b = np.array([index[m.class_pair[1]] for m in self.machines], dtype=np.int64)
        if len(set(zip(self._a.tolist(), self._b.tolist()))) != len(self.machines):
            raise ValueError("duplicate class pair")
        self._W = np.stack([m.weights for m in self.machines]) if self.machines else np.zeros((0, 0))
        self._bias = np.array([m.bias for m in self.machines])

    @property
    def dim(self) -> int:
        return self._W.shape[1]

    def decision_values(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.dim:
            raise DimensionMismatch(f"expected {self.dim} features, got {X.shape[1]}")
        return X @ self._W.T + self._bias

    def tally(self, X):
        """Per-sample vote counts and summed winning margins, shape (n, K)."""
        dv = self.decision_values(X)
        n, k = dv.shape[0], len(self.classes)
        winner = np.where(dv >= 0, self._a[None, :], self._b[None, :])
        votes = np.zeros((n, k), dtype=np.int64)
        margin = np.zeros((n, k))
        rows = np.repeat(np.arange(n), dv.shape[1])
        np.add.at(votes, (rows, winner.ravel()), 1)
        np.add.at(margin, (rows, winner.ravel()), np.abs(dv).ravel())
        return votes, margin

    def predict_many(self, X) -> list:
        votes, margin = self.tally(X)
        out = []
        for v, mg in zip(votes, margin):
            tied = np.flatnonzero(v == v.max())
            if len(tied) > 1:
                best = mg[tied].max()
                tied = tied[mg[tied] == best]
            out.append(self.classes[int(tied[0])])  # classes are sorted: smallest label
        return out


def train_ovo(samples: Sequence[Tuple[object, np.ndarray]], cfg: TrainConfig = TrainConfig(),
              jobs: int = 1, feature_fingerprint: str = "") -> OvoModel:
    """One machine per unordered pair; the smaller label is the positive class.

    ``samples`` is a sequence of ``(label, feature_vector)``.
    """
    groups = {}
    for label, x in samples:
        groups.setdefault(label, []).append(np.asarray(x, dtype=np.float64))
    classes = sorted(groups, key=natural_key)
    if len(classes) < 2:
        raise NotEnoughClasses(f"need at least 2 classes, got {len(classes)}")
    dims = {x.shape for xs in groups.values() for x in xs}
    if len(dims) != 1:
        raise DimensionMismatch(f"inconsistent feature shapes: {sorted(dims)}")
    stacked = {c: np.stack(groups[c]) for c in classes}
    pairs = list(combinations(classes, 2))

    def fit(job):
        k, (a, b) = job
        return train_binary(stacked[a], stacked[b], cfg, (a, b), seed=(cfg.seed, k))

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            machines = list(pool.map(fit, enumerate(pairs)))
    else:
        machines = [fit(job) for job in enumerate(pairs)]
    return OvoModel(classes, machines, cfg, feature_fingerprint)


def predict(model: OvoModel, x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("predict expects a single feature vector")
    return model.predict_many(x[None, :])[0]


# -- serialisation ---------------------------------------------------------------

def model_to_dict(model: OvoModel) -> dict:
    return {
        "format": FORMAT,
        "version": FORMAT_VERSION,
        "classes": list(model.classes),
        "train_config": asdict(model.train_config),
        "feature_fingerprint": model.feature_fingerprint,
        "machines": [{"pair": list(m.class_pair), "weights": m.weights.tolist(), "bias": m.bias}
                     for m in model.machines],
    }


def save_model(model: OvoModel, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(model_to_dict(model)))
    return path


def load_model(path, expected_fingerprint: Optional[str] = None) -> OvoModel:
    data = json.loads(Path(path).read_text())
    if data.get("format") != FORMAT or data.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: not a {FORMAT} v{FORMAT_VERSION} model")
    if expected_fingerprint is not None and data["feature_fingerprint"] != expected_fingerprint:
        raise FingerprintMismatch(
            f"{path}: model built for features {data['feature_fingerprint']}, expected {expected_fingerprint}")
    machines = [BinarySvm(np.asarray(m["weights"], dtype=np.float64), float(m["bias"]), tuple(m["pair"]))
                for m in data["machines"]]
    return OvoModel(list(data["classes"]), machines, TrainConfig(**data["train_config"]),
                    data["feature_fingerprint"])
