"""Training data from plan traces, ridge regression and a small ReLU MLP."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    ConfigurationError,
    CorruptModelError,
    DatasetError,
    ModelSchemaError,
    ModelVersionError,
    TrainingDivergedError,
)
from .schemas import FEATURE_NAMES, n_features
from .search import trace_states

FORMAT_VERSION = 1
LABEL_COLUMN = "cost_to_go"
SECOND_HIDDEN = 3


# ---------------------------------------------------------------------------
# data


def label_trace(t, p):
    """Pair each state on the plan's trace with its remaining plan cost."""
    states = trace_states(t, p)
    remaining = p.cost
    labels = [remaining]
    for a in p.actions:
        remaining -= a.cost
        labels.append(remaining)
    return list(zip(states, labels))


@dataclass
class Dataset:
    schema: str
    X: np.ndarray
    y: np.ndarray
    provenance: list = field(default_factory=list)

    def __post_init__(self):
        if self.schema not in FEATURE_NAMES:
            raise DatasetError(f"unknown schema {self.schema!r}")
        self.X = np.asarray(self.X, dtype=np.float64).reshape(-1, n_features(self.schema))
        self.y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if self.X.shape[0] != self.y.shape[0]:
            raise DatasetError("feature and label counts differ")
        if (self.y < 0).any():
            raise DatasetError("labels must be nonnegative", row=int(np.argmax(self.y < 0)) + 1)
        if not self.provenance:
            self.provenance = [("", i) for i in range(len(self.y))]

    def __len__(self):
        return self.y.shape[0]

    @property
    def rows(self):
        return [(tuple(x), float(y)) for x, y in zip(self.X, self.y)]

    @classmethod
    def concat(cls, parts):
        parts = list(parts)
        if not parts:
            raise DatasetError("no datasets to merge")
        schema = parts[0].schema
        if any(p.schema != schema for p in parts):
            raise DatasetError("cannot merge datasets with different schemas")
        return cls(
            schema,
            np.concatenate([p.X for p in parts]),
            np.concatenate([p.y for p in parts]),
            [prov for p in parts for prov in p.provenance],
        )


def _num(x):
    x = float(x)
    return repr(int(x)) if x.is_integer() and abs(x) < 2**53 else repr(x)


def format_dataset(d):
    """CSV text; a ``# problem: <id>`` comment precedes each problem's rows."""
    out = io.StringIO()
    out.write(f"# schema: {d.schema}\n")
    out.write(",".join(FEATURE_NAMES[d.schema] + (LABEL_COLUMN,)) + "\n")
    current = None
    for (pid, _), x, y in zip(d.provenance, d.X, d.y):
        if pid != current:
            out.write(f"# problem: {pid}\n")
            current = pid
        out.write(",".join(_num(v) for v in x) + "," + _num(y) + "\n")
    return out.getvalue()


def parse_dataset(text):
    schema = None
    header = None
    rows, labels, prov = [], [], []
    pid = ""
    step = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("schema:"):
                schema = body.split(":", 1)[1].strip()
            elif body.startswith("problem:"):
                pid = body.split(":", 1)[1].strip()
                step = 0
            continue
        cells = [c.strip() for c in line.split(",")]
        if header is None:
            header = tuple(cells)
            if header[-1:] != (LABEL_COLUMN,):
                raise DatasetError(f"last column must be {LABEL_COLUMN}", row=lineno)
            matches = [s for s, names in FEATURE_NAMES.items() if names == header[:-1]]
            if not matches:
                raise DatasetError("header matches no feature schema", row=lineno)
            if schema is not None and schema != matches[0]:
                raise DatasetError(f"header does not match declared schema {schema}", row=lineno)
            schema = matches[0]
            continue
        if len(cells) != len(header):
            raise DatasetError(f"expected {len(header)} columns, got {len(cells)}", row=lineno)
        try:
            values = [float(c) for c in cells]
        except ValueError:
            raise DatasetError("non-numeric cell", row=lineno) from None
        if not all(math.isfinite(v) for v in values):
            raise DatasetError("non-finite value", row=lineno)
        if values[-1] < 0:
            raise DatasetError("negative label", row=lineno)
        rows.append(values[:-1])
        labels.append(values[-1])
        prov.append((pid, step))
        step += 1
    if header is None:
        raise DatasetError("missing header row")
    return Dataset(schema, np.array(rows, dtype=np.float64), np.array(labels), prov)


def write_dataset(d, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_dataset(d))


def read_dataset(path):
    with open(path, encoding="utf-8") as fh:
        return parse_dataset(fh.read())


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True, eq=False)
class Standardizer:
    means: np.ndarray
    stds: np.ndarray

    @classmethod
    def fit(cls, X):
        X = np.asarray(X, dtype=np.float64)
        stds = X.std(axis=0)
        stds[stds == 0] = 1.0
        return cls(X.mean(axis=0), stds)

    @classmethod
    def identity(cls, n):
        return cls(np.zeros(n), np.ones(n))

    def transform(self, X):
        return (np.asarray(X, dtype=np.float64) - self.means) / self.stds


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: np.ndarray
    bias: float
    standardizer: Standardizer
    schema: str

    kind = "linear"

    @property
    def n_features(self):
        return self.weights.shape[0]

    def predict(self, x):
        return float(self.standardizer.transform(x) @ self.weights + self.bias)

    def predict_batch(self, X):
        return self.standardizer.transform(X) @ self.weights + self.bias


@dataclass(frozen=True, eq=False)
class MlpModel:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    W3: np.ndarray
    b3: np.ndarray
    standardizer: Standardizer
    schema: str | None = None

    kind = "mlp"

    @property
    def n_features(self):
        return self.W1.shape[0]

    @property
    def params(self):
        return (self.W1, self.b1, self.W2, self.b2, self.W3, self.b3)

    @property
    def layer_shapes(self):
        return [self.W1.shape, self.W2.shape, self.W3.shape]

    def predict(self, x):
        return mlp_forward(self, x)

    def predict_batch(self, X):
        Xs = np.ascontiguousarray(self.standardizer.transform(X))
        return kernels.mlp_predict(*self.params, Xs)


def model_predict(m, x):
    return m.predict(np.asarray(x, dtype=np.float64))


def check_model(m):
    if m.schema not in FEATURE_NAMES:
        raise ModelSchemaError(f"model has unknown schema {m.schema!r}")
    if m.n_features != n_features(m.schema):
        raise ConfigurationError(
            f"model expects {m.n_features} features but schema {m.schema} has {n_features(m.schema)}"
        )


def ridge_fit(d, lam):
    """Closed-form ridge on standardized features; the bias is not penalised."""
    if len(d) < 1:
        raise DatasetError("ridge_fit needs at least one row")
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    std = Standardizer.fit(d.X)
    Xs = std.transform(d.X)
    ybar = float(d.y.mean())
    A = Xs.T @ Xs + lam * np.eye(Xs.shape[1])
    rhs = Xs.T @ (d.y - ybar)
    if lam == 0 and np.linalg.matrix_rank(A) < A.shape[0]:
        raise np.linalg.LinAlgError("singular normal equations with lambda=0; use lambda > 0")
    w = np.linalg.solve(A, rhs)
    return LinearModel(w, ybar, std, d.schema)


def mlp_init(n_features, seed, standardizer=None, schema=None):
    """Glorot-uniform weights from ``default_rng(seed)``, zero biases."""
    if n_features < 1:
        raise ValueError("n_features must be at least 1")
    rng = np.random.default_rng(seed)
    shapes = [(n_features, n_features), (n_features, SECOND_HIDDEN), (SECOND_HIDDEN, 1)]
    weights = []
    for fan_in, fan_out in shapes:
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
    return MlpModel(
        weights[0],
        np.zeros(n_features),
        weights[1],
        np.zeros(SECOND_HIDDEN),
        weights[2],
        np.zeros(1),
        standardizer or Standardizer.identity(n_features),
        schema,
    )


def mlp_forward(m, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (m.n_features,):
        raise ValueError(f"expected {m.n_features} features, got shape {x.shape}")
    return float(kernels.mlp_forward(*m.params, m.standardizer.transform(x)))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    epochs: int = 500
    seed: int = 0
    ridge_lambda: float = 1.0
    shuffle_each_epoch: bool = True

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be positive")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be nonnegative")


def mlp_train(d, cfg=TrainConfig()):
    """Per-row SGD on squared error. Returns ``(model, per-epoch training MSE)``."""
    if len(d) < 1:
        raise DatasetError("mlp_train needs at least one row")
    std = Standardizer.fit(d.X)
    m = mlp_init(d.X.shape[1], cfg.seed, std, d.schema)
    params = tuple(np.array(p, dtype=np.float64, order="C") for p in m.params)
    Xs = np.ascontiguousarray(std.transform(d.X))
    y = np.ascontiguousarray(d.y)
    rng = np.random.default_rng([cfg.seed, 1])
    order = np.arange(len(d), dtype=np.int64)
    curve = []
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(1, cfg.epochs + 1):
            if cfg.shuffle_each_epoch:
                order = rng.permutation(len(d)).astype(np.int64)
            kernels.mlp_sgd_epoch(*params, Xs, y, order, cfg.learning_rate)
            loss = float(np.mean((kernels.mlp_predict(*params, Xs) - y) ** 2))
            if not math.isfinite(loss):
                raise TrainingDivergedError(epoch)
            curve.append(loss)
    return MlpModel(*params, std, d.schema), curve


def training_mse(m, d):
    return float(np.mean((m.predict_batch(d.X) - d.y) ** 2))


# ---------------------------------------------------------------------------
# serialization


def _hex(a):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 0:
        return float(a).hex()
    return [_hex(x) for x in a]


def _unhex(v, shape=None):
    def conv(x):
        if isinstance(x, list):
            return [conv(y) for y in x]
        if not isinstance(x, str):
            raise CorruptModelError(f"corrupt model: expected hex float, got {x!r}")
        return float.fromhex(x)

    try:
        out = np.array(conv(v), dtype=np.float64)
    except ValueError as exc:
        raise CorruptModelError(f"corrupt model: {exc}") from None
    if shape is not None and out.shape != tuple(shape):
        raise CorruptModelError(f"corrupt model: expected shape {tuple(shape)}, got {out.shape}")
    return out


def save_model(m):
    """Serialize to versioned JSON with hexadecimal floats (exact round trip)."""
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": m.kind,
        "schema": m.schema,
        "n_features": int(m.n_features),
        "standardizer": {"means": _hex(m.standardizer.means), "stds": _hex(m.standardizer.stds)},
    }
    if m.kind == "linear":
        doc["weights"] = _hex(m.weights)
        doc["bias"] = float(m.bias).hex()
    else:
        doc["layers"] = [
            {"weights": _hex(W), "biases": _hex(b)} for W, b in ((m.W1, m.b1), (m.W2, m.b2), (m.W3, m.b3))
        ]
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def load_model(data):
    try:
        doc = json.loads(data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptModelError(f"corrupt model: {exc}") from None
    if not isinstance(doc, dict):
        raise CorruptModelError("corrupt model: top level is not an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"unsupported model format_version {version!r} (expected {FORMAT_VERSION})")
    try:
        kind = doc["kind"]
        schema = doc["schema"]
        n = int(doc["n_features"])
        std_doc = doc["standardizer"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModelError(f"corrupt model: missing field {exc}") from None
    if schema not in FEATURE_NAMES:
        raise ModelSchemaError(f"unknown feature schema {schema!r}")
    if n != n_features(schema):
        raise ModelSchemaError(f"schema {schema} has {n_features(schema)} features, model declares {n}")
    try:
        std = Standardizer(_unhex(std_doc["means"], (n,)), _unhex(std_doc["stds"], (n,)))
        if kind == "linear":
            return LinearModel(_unhex(doc["weights"], (n,)), float.fromhex(doc["bias"]), std, schema)
        if kind == "mlp":
            shapes = [(n, n), (n, SECOND_HIDDEN), (SECOND_HIDDEN, 1)]
            layers = doc["layers"]
            if len(layers) != 3:
                raise CorruptModelError("corrupt model: mlp needs 3 layers")
            params = []
            for layer, shape in zip(layers, shapes):
                params.append(_unhex(layer["weights"], shape))
                params.append(_unhex(layer["biases"], (shape[1],)))
            return MlpModel(*params, std, schema)
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise CorruptModelError(f"corrupt model: {exc!r}") from None
    raise CorruptModelError(f"corrupt model: unknown kind {kind!r}")


def write_model(m, path):
    with open(path, "wb") as fh:
        fh.write(save_model(m))


def read_model(path):
    with open(path, "rb") as fh:
        return load_model(fh.read())
