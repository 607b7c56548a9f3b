"""EEdGeNet architecture and deterministic inference forward pass.

The network runs along the electrode axis: the `seq_len` EEG channels form
the convolution sequence and the per-channel features form the input maps.
A temporal convolutional block (initial causal sub-block, kernel 10, then
two dilated residual sub-blocks, kernel 3 at dilations 2 and 4) feeds a
dense transformation block (512-256-128-64) and a 27-way softmax head.

Inference is a pure function of (input, bundle): dropout is inactive and
batch normalization uses the bundled running statistics.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ShapeMismatchError
from .features.extract import FeatureConfig, FeatureMatrix, extract_features
from .preprocess import (
    AsrSpec,
    BandpassSpec,
    FilterCoefficients,
    design_butterworth_bandpass,
    preprocess_window,
    simplified_asr,
    apply_filter,
)
from .selection import project_features
from .signals import CharacterWindow, ClassLabel


@dataclass(frozen=True)
class ModelConfig:
    seq_len: int = 32
    in_features: int = 85
    filters: int = 32
    initial_kernel: int = 10
    initial_dilation: int = 1
    residual_kernel: int = 3
    residual_dilations: tuple[int, ...] = (2, 4)
    n_residual_blocks: int = 2
    hidden: tuple[int, ...] = (512, 256, 128, 64)
    n_classes: int = 27
    dropout: float = 0.3
    dense_dropout: float = 0.3
    l2_dense: float = 0.0008
    bn_epsilon: float = 1e-3
    elu_alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "residual_dilations", tuple(self.residual_dilations))
        object.__setattr__(self, "hidden", tuple(self.hidden))
        if self.filters < 1 or not self.hidden or self.n_classes < 2:
            raise ValueError("invalid model dimensions")
        if any(d < 1 for d in self.residual_dilations):
            raise ValueError("dilations must be positive")

    def to_dict(self) -> dict:
        return {
            "seq_len": self.seq_len,
            "in_features": self.in_features,
            "filters": self.filters,
            "initial_kernel": self.initial_kernel,
            "initial_dilation": self.initial_dilation,
            "residual_kernel": self.residual_kernel,
            "residual_dilations": list(self.residual_dilations),
            "n_residual_blocks": self.n_residual_blocks,
            "hidden": list(self.hidden),
            "n_classes": self.n_classes,
            "dropout": self.dropout,
            "dense_dropout": self.dense_dropout,
            "l2_dense": self.l2_dense,
            "bn_epsilon": self.bn_epsilon,
            "elu_alpha": self.elu_alpha,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ModelConfig":
        return cls(
            seq_len=obj["seq_len"],
            in_features=obj["in_features"],
            filters=obj["filters"],
            initial_kernel=obj["initial_kernel"],
            initial_dilation=obj["initial_dilation"],
            residual_kernel=obj["residual_kernel"],
            residual_dilations=tuple(obj["residual_dilations"]),
            n_residual_blocks=obj["n_residual_blocks"],
            hidden=tuple(obj["hidden"]),
            n_classes=obj["n_classes"],
            dropout=obj["dropout"],
            dense_dropout=obj["dense_dropout"],
            l2_dense=obj["l2_dense"],
            bn_epsilon=obj["bn_epsilon"],
            elu_alpha=obj["elu_alpha"],
        )


_BN_PARTS = ("gamma", "beta", "mean", "var")


def expected_tensors(config: ModelConfig) -> list[tuple[str, tuple[int, ...]]]:
    """Canonical tensor names and shapes for a config, in payload order.

    Conv kernels are [filters_out, channels_in, kernel]; dense kernels are
    [units_out, units_in]; batch-norm vectors are per-channel.
    """
    f = config.filters
    out: list[tuple[str, tuple[int, ...]]] = []

    def add_bn(prefix: str, width: int):
        for part in _BN_PARTS:
            out.append((f"{prefix}.{part}", (width,)))

    out.append(("tcb.init.conv0.kernel", (f, config.in_features, config.initial_kernel)))
    out.append(("tcb.init.conv0.bias", (f,)))
    add_bn("tcb.init.bn0", f)
    out.append(("tcb.init.conv1.kernel", (f, f, config.initial_kernel)))
    out.append(("tcb.init.conv1.bias", (f,)))
    add_bn("tcb.init.bn1", f)
    for b in range(config.n_residual_blocks):
        for i in range(len(config.residual_dilations)):
            out.append((f"tcb.res{b}.conv{i}.kernel", (f, f, config.residual_kernel)))
            out.append((f"tcb.res{b}.conv{i}.bias", (f,)))
            add_bn(f"tcb.res{b}.bn{i}", f)
    prev = config.seq_len * f
    for i, width in enumerate(config.hidden):
        out.append((f"dtb.dense{i}.kernel", (width, prev)))
        out.append((f"dtb.dense{i}.bias", (width,)))
        add_bn(f"dtb.bn{i}", width)
        prev = width
    out.append(("head.kernel", (config.n_classes, prev)))
    out.append(("head.bias", (config.n_classes,)))
    return out


@dataclass(frozen=True)
class WeightBundle:
    """Validated parameter set; tensors stay float32 (the wire precision)."""

    config: ModelConfig
    tensors: dict[str, np.ndarray]
    version: int = 1

    def __post_init__(self):
        expected = expected_tensors(self.config)
        expected_names = {name for name, _ in expected}
        extra = set(self.tensors) - expected_names
        if extra:
            from .errors import CorruptBundleError

            raise CorruptBundleError(f"unexpected tensors: {sorted(extra)}")
        tensors = {}
        for name, shape in expected:
            if name not in self.tensors:
                raise ShapeMismatchError(name, expected=shape, actual=())
            arr = np.asarray(self.tensors[name], dtype=np.float32)
            if arr.shape != shape:
                raise ShapeMismatchError(name, expected=shape, actual=arr.shape)
            arr.setflags(write=False)
            tensors[name] = arr
        object.__setattr__(self, "tensors", tensors)

    def tensor(self, name: str) -> np.ndarray:
        return self.tensors[name].astype(np.float64)


def zero_bundle(config: ModelConfig, bn_identity: bool = True) -> WeightBundle:
    """All-zero weights; identity batch norm (gamma=1, var=1) by default."""
    tensors = {}
    for name, shape in expected_tensors(config):
        if bn_identity and (name.endswith(".gamma") or name.endswith(".var")):
            tensors[name] = np.ones(shape, dtype=np.float32)
        else:
            tensors[name] = np.zeros(shape, dtype=np.float32)
    return WeightBundle(config, tensors)


@dataclass(frozen=True)
class StageTiming:
    preprocess_ms: float = 0.0
    features_ms: float = 0.0
    model_ms: float = 0.0

    @property
    def total_ms(self) -> float:
        return self.preprocess_ms + self.features_ms + self.model_ms


@dataclass(frozen=True)
class PredictionResult:
    probs: np.ndarray
    logits: np.ndarray
    label: ClassLabel
    timing: StageTiming


def _elu(x: np.ndarray, alpha: float) -> np.ndarray:
    return np.where(x > 0, x, alpha * np.expm1(x))


def _bn(x: np.ndarray, bundle: WeightBundle, prefix: str) -> np.ndarray:
    gamma = bundle.tensor(f"{prefix}.gamma")
    beta = bundle.tensor(f"{prefix}.beta")
    mean = bundle.tensor(f"{prefix}.mean")
    var = bundle.tensor(f"{prefix}.var")
    return gamma * (x - mean) / np.sqrt(var + bundle.config.bn_epsilon) + beta


def _causal_conv(x: np.ndarray, kernel: np.ndarray, bias: np.ndarray, dilation: int) -> np.ndarray:
    # x: [T, C_in]; kernel: [C_out, C_in, k]; left zero pad keeps causality.
    seq_len = x.shape[0]
    k = kernel.shape[2]
    pad = (k - 1) * dilation
    xp = np.vstack([np.zeros((pad, x.shape[1])), x])
    out = np.broadcast_to(bias, (seq_len, bias.size)).copy()
    for j in range(k):
        out += xp[j * dilation : j * dilation + seq_len] @ kernel[:, :, j].T
    return out


def _conv_bn_elu(x, bundle, conv_name, bn_name, dilation):
    cfg = bundle.config
    y = _causal_conv(
        x, bundle.tensor(f"{conv_name}.kernel"), bundle.tensor(f"{conv_name}.bias"), dilation
    )
    return _elu(_bn(y, bundle, bn_name), cfg.elu_alpha)


def softmax(logits: np.ndarray) -> np.ndarray:
    z = np.exp(logits - logits.max())
    return z / z.sum()


def forward(input_matrix: np.ndarray, bundle: WeightBundle) -> PredictionResult:
    """Run one [seq_len, in_features] sample through the network."""
    cfg = bundle.config
    x = np.asarray(input_matrix, dtype=np.float64)
    if x.shape != (cfg.seq_len, cfg.in_features):
        raise ShapeMismatchError(
            "input", expected=(cfg.seq_len, cfg.in_features), actual=x.shape
        )
    start = time.perf_counter()

    h = _conv_bn_elu(x, bundle, "tcb.init.conv0", "tcb.init.bn0", cfg.initial_dilation)
    h = _conv_bn_elu(h, bundle, "tcb.init.conv1", "tcb.init.bn1", cfg.initial_dilation)
    for b in range(cfg.n_residual_blocks):
        skip = h
        branch = h
        for i, dilation in enumerate(cfg.residual_dilations):
            branch = _conv_bn_elu(branch, bundle, f"tcb.res{b}.conv{i}", f"tcb.res{b}.bn{i}", dilation)
        h = skip + branch

    v = h.reshape(-1)
    for i in range(len(cfg.hidden)):
        v = bundle.tensor(f"dtb.dense{i}.kernel") @ v + bundle.tensor(f"dtb.dense{i}.bias")
        v = _elu(_bn(v, bundle, f"dtb.bn{i}"), cfg.elu_alpha)
    logits = bundle.tensor("head.kernel") @ v + bundle.tensor("head.bias")
    probs = softmax(logits)
    elapsed_ms = (time.perf_counter() - start) * 1e3

    return PredictionResult(
        probs=probs,
        logits=logits,
        label=ClassLabel(int(np.argmax(probs))),
        timing=StageTiming(model_ms=elapsed_ms),
    )


def tcb_output(input_matrix: np.ndarray, bundle: WeightBundle) -> np.ndarray:
    """Convolutional-block activations (pre-flatten), for dependency checks."""
    cfg = bundle.config
    x = np.asarray(input_matrix, dtype=np.float64)
    h = _conv_bn_elu(x, bundle, "tcb.init.conv0", "tcb.init.bn0", cfg.initial_dilation)
    h = _conv_bn_elu(h, bundle, "tcb.init.conv1", "tcb.init.bn1", cfg.initial_dilation)
    for b in range(cfg.n_residual_blocks):
        branch = h
        for i, dilation in enumerate(cfg.residual_dilations):
            branch = _conv_bn_elu(branch, bundle, f"tcb.res{b}.conv{i}", f"tcb.res{b}.bn{i}", dilation)
        h = h + branch
    return h


class DecodingPipeline:
    """Preprocess -> features -> forward, with the filter designed once."""

    def __init__(
        self,
        bundle: WeightBundle,
        bandpass: BandpassSpec | None = None,
        asr: AsrSpec = AsrSpec(),
        feature_config: FeatureConfig = FeatureConfig(),
        kept_features: Optional[Sequence[str]] = None,
        filter_mode: str = "zero-phase",
    ):
        self.bundle = bundle
        self.bandpass = bandpass if bandpass is not None else BandpassSpec(fs=feature_config.fs)
        self.coeffs: FilterCoefficients = design_butterworth_bandpass(self.bandpass)
        self.asr = asr
        self.feature_config = feature_config
        self.kept_features = tuple(kept_features) if kept_features else None
        self.filter_mode = filter_mode
        n_features = len(self.kept_features) if self.kept_features else 85
        if bundle.config.in_features != n_features:
            raise ShapeMismatchError(
                "input",
                expected=(bundle.config.seq_len, bundle.config.in_features),
                actual=(bundle.config.seq_len, n_features),
            )

    def features_for(self, win: CharacterWindow) -> FeatureMatrix:
        clean = simplified_asr(apply_filter(win, self.coeffs, mode=self.filter_mode), self.asr)
        feats = extract_features(clean, self.feature_config)
        if self.kept_features:
            feats = project_features(feats, self.kept_features)
        return feats

    def predict(self, win: CharacterWindow) -> PredictionResult:
        t0 = time.perf_counter()
        clean = simplified_asr(apply_filter(win, self.coeffs, mode=self.filter_mode), self.asr)
        t1 = time.perf_counter()
        feats = extract_features(clean, self.feature_config)
        if self.kept_features:
            feats = project_features(feats, self.kept_features)
        t2 = time.perf_counter()
        result = forward(feats.values, self.bundle)
        t3 = time.perf_counter()
        timing = StageTiming(
            preprocess_ms=(t1 - t0) * 1e3,
            features_ms=(t2 - t1) * 1e3,
            model_ms=(t3 - t2) * 1e3,
        )
        return PredictionResult(result.probs, result.logits, result.label, timing)


def predict_window(win: CharacterWindow, bundle: WeightBundle, **kwargs) -> PredictionResult:
    """One-shot convenience around :class:`DecodingPipeline`."""
    return DecodingPipeline(bundle, **kwargs).predict(win)
