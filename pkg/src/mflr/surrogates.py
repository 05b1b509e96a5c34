"""Multifidelity surrogate construction.

Four variants share one container:

* ``single_fidelity``: PCA basis + polynomial regression on HF data alone.
* ``direct_aug``: HF data augmented with LF outputs used verbatim, trained
  by weighted least squares in the HF reduced space.
* ``explicit_aug``: like ``direct_aug`` but the LF outputs are first pushed
  through a learned affine correction between the LF and HF reduced spaces.
* ``additive``: LF surrogate plus a separately fitted discrepancy surrogate,
  each with its own basis and mean.

All fitting is pure; fitted surrogates are immutable and safe to share.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import pca
from .errors import DataError, DegenerateBasisWarning
from .features import FeatureMap, InputScaler
from .linalg import as_matrix
from .regression import LinearModel, fit_ols, fit_wls
from .weighting import WeightScheme, build_weights

HF = "HF"
LF = "LF"

DIRECT = "direct"
EXPLICIT_MAP = "explicit_map"

SINGLE_FIDELITY = "single_fidelity"
DIRECT_AUG = "direct_aug"
EXPLICIT_AUG = "explicit_aug"
ADDITIVE = "additive"


@dataclass(frozen=True)
class Dataset:
    """Paired inputs (d, N) and outputs (m, N) with a fidelity tag."""

    inputs: np.ndarray
    outputs: np.ndarray
    fidelity: str
    cost_per_sample: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "inputs", as_matrix(self.inputs, "dataset inputs"))
        object.__setattr__(self, "outputs", as_matrix(self.outputs, "dataset outputs"))
        if self.inputs.shape[1] != self.outputs.shape[1]:
            raise DataError(
                f"inputs have {self.inputs.shape[1]} samples but outputs have "
                f"{self.outputs.shape[1]}",
                code="bad-shape",
            )
        if self.fidelity not in (HF, LF):
            raise DataError(f"fidelity must be HF or LF, got {self.fidelity!r}", code="bad-config")
        if not self.cost_per_sample >= 0:
            raise DataError("cost_per_sample must be non-negative", code="bad-config")

    @property
    def n_samples(self):
        return self.inputs.shape[1]

    @property
    def input_dim(self):
        return self.inputs.shape[0]

    @property
    def output_dim(self):
        return self.outputs.shape[0]

    def select(self, indices):
        """Subset of samples at the given column indices."""
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.inputs[:, idx], self.outputs[:, idx], self.fidelity, self.cost_per_sample)

    def drop(self, i):
        """All samples except column ``i`` (used by leave-one-out folds)."""
        keep = np.arange(self.n_samples) != i
        return Dataset(self.inputs[:, keep], self.outputs[:, keep], self.fidelity, self.cost_per_sample)


@dataclass(frozen=True)
class SyntheticData:
    """LF-derived training samples at the LF input locations."""

    inputs: np.ndarray
    outputs: np.ndarray
    provenance: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "inputs", as_matrix(self.inputs, "synthetic inputs"))
        object.__setattr__(self, "outputs", as_matrix(self.outputs, "synthetic outputs"))
        if self.inputs.shape[1] != self.outputs.shape[1]:
            raise DataError("synthetic inputs and outputs disagree on sample count", code="bad-shape")
        if self.provenance not in (DIRECT, EXPLICIT_MAP):
            raise DataError(f"unknown provenance {self.provenance!r}", code="bad-config")

    @property
    def n_samples(self):
        return self.inputs.shape[1]


@dataclass(frozen=True)
class MFSurrogate:
    """Fitted surrogate predicting full-dimensional outputs.

    The projection variants use ``basis``/``model``/``scaler``; the additive
    variant instead carries an LF component and a discrepancy component, each
    a (basis, model, scaler) triple. Unused fields are ``None``.
    """

    variant: str
    basis: pca.ReducedBasis | None = None
    model: LinearModel | None = None
    scaler: InputScaler | None = None
    lf_basis: pca.ReducedBasis | None = None
    lf_model: LinearModel | None = None
    lf_scaler: InputScaler | None = None
    delta_basis: pca.ReducedBasis | None = None
    delta_model: LinearModel | None = None
    delta_scaler: InputScaler | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def input_dim(self):
        model = self.lf_model if self.variant == ADDITIVE else self.model
        return model.feature_map.input_dim

    @property
    def output_dim(self):
        basis = self.lf_basis if self.variant == ADDITIVE else self.basis
        return basis.output_dim

    def predict(self, x_star):
        """Full-dimensional predictions (m, J) at inputs ``x_star`` (d, J)."""
        x = as_matrix(x_star, "prediction inputs")
        if x.shape[0] != self.input_dim:
            raise DataError(
                f"prediction inputs have {x.shape[0]} rows, surrogate expects {self.input_dim}",
                code="bad-shape",
            )
        if self.variant == ADDITIVE:
            lf_part = pca.reconstruct(self.lf_basis, self.lf_model.predict(self.lf_scaler.transform(x)))
            delta_part = pca.reconstruct(
                self.delta_basis, self.delta_model.predict(self.delta_scaler.transform(x))
            )
            return lf_part + delta_part
        return pca.reconstruct(self.basis, self.model.predict(self.scaler.transform(x)))


def synth_direct(lf: Dataset):
    """Use the LF data verbatim as synthetic training data."""
    if lf.fidelity != LF:
        raise DataError("direct augmentation expects an LF dataset", code="bad-config")
    return SyntheticData(inputs=lf.inputs, outputs=lf.outputs, provenance=DIRECT)


def synth_explicit_map(hf: Dataset, lf: Dataset, lf_degree, hf_basis, lf_basis, colocated_lf_outputs=None):
    """Synthetic data via a learned affine correction in the HF reduced space.

    An LF surrogate supplies co-located LF predictions at the HF inputs
    (skipped when ``colocated_lf_outputs`` is given); both sides are
    expressed in the HF reduced basis and an affine map g from the
    transformed LF states to the HF states is fitted by OLS. Every LF sample
    is then pushed through the same coordinate transform and g to produce
    HF-like outputs at the LF inputs.

    Returns ``(SyntheticData, g)``. When either basis is empty the synthetic
    outputs degrade to a constant (mean-only) prediction and a warning is
    emitted.
    """
    if hf.fidelity != HF or lf.fidelity != LF:
        raise DataError("explicit mapping expects (HF, LF) datasets", code="bad-config")
    if hf.input_dim != lf.input_dim:
        raise DataError("HF and LF datasets disagree on input dimension", code="bad-shape")
    if hf.output_dim != lf.output_dim:
        raise DataError("HF and LF datasets disagree on output dimension", code="bad-shape")
    if hf.n_samples < 2:
        raise DataError("explicit mapping needs at least 2 HF samples", code="bad-shape")

    if hf_basis.k == 0:
        warnings.warn(
            "HF basis retained no dimensions; synthetic outputs collapse to the HF mean",
            DegenerateBasisWarning,
            stacklevel=2,
        )
        outputs = np.tile(hf_basis.mean[:, None], (1, lf.n_samples))
        g = LinearModel(FeatureMap(0, 1), np.zeros((1, 0)))
        synth = SyntheticData(lf.inputs, outputs, EXPLICIT_MAP, diagnostics={"degenerate_hf_basis": True})
        return synth, g

    if lf_basis.k == 0:
        warnings.warn(
            "LF basis retained no dimensions; the explicit map degrades to a constant",
            DegenerateBasisWarning,
            stacklevel=2,
        )

    if colocated_lf_outputs is None:
        c_lf = pca.project(lf_basis, lf.outputs)
        lf_scaler = InputScaler.fit(lf.inputs)
        f_lf = fit_ols(FeatureMap(lf.input_dim, lf_degree), lf_scaler.transform(lf.inputs), c_lf)
        colocated = pca.reconstruct(lf_basis, f_lf.predict(lf_scaler.transform(hf.inputs)))
    else:
        colocated = as_matrix(colocated_lf_outputs, "co-located LF outputs")
        if colocated.shape != hf.outputs.shape:
            raise DataError(
                f"co-located LF outputs must have shape {hf.outputs.shape}, got {colocated.shape}",
                code="bad-shape",
            )

    chat_train = pca.project(hf_basis, colocated)
    c_hf = pca.project(hf_basis, hf.outputs)
    g = fit_ols(FeatureMap(hf_basis.k, 1), chat_train, c_hf)

    # Map every LF sample through the same basis change before applying g.
    c_lf_all = pca.project(lf_basis, lf.outputs)
    chat_all = pca.project(hf_basis, pca.reconstruct(lf_basis, c_lf_all))
    outputs = pca.reconstruct(hf_basis, g.predict(chat_all))

    diagnostics = {"map_underdetermined": hf.n_samples < hf_basis.k + 1}
    if lf_basis.k == 0:
        diagnostics["degenerate_lf_basis"] = True
    return SyntheticData(lf.inputs, outputs, EXPLICIT_MAP, diagnostics=diagnostics), g


def fit_single_fidelity(hf: Dataset, degree, epsilon):
    """Baseline surrogate: PCA basis and OLS polynomial fit on HF data alone."""
    if hf.fidelity != HF:
        raise DataError("single-fidelity fit expects an HF dataset", code="bad-config")
    basis = pca.fit_basis(hf.outputs, epsilon)
    scaler = InputScaler.fit(hf.inputs)
    model = fit_ols(
        FeatureMap(hf.input_dim, degree),
        scaler.transform(hf.inputs),
        pca.project(basis, hf.outputs),
    )
    return MFSurrogate(variant=SINGLE_FIDELITY, basis=basis, model=model, scaler=scaler)


def fit_mf_data_aug(hf: Dataset, synth: SyntheticData, scheme: WeightScheme, degree, epsilon):
    """Weighted-least-squares surrogate on the HF data plus synthetic samples.

    The PCA basis comes from the HF outputs only; the pooled outputs are
    projected onto it and the polynomial model is fitted by WLS with weight 1
    on HF samples and scheme-defined weights on synthetic samples.
    """
    if hf.fidelity != HF:
        raise DataError("data augmentation expects an HF dataset", code="bad-config")
    if hf.input_dim != synth.inputs.shape[0]:
        raise DataError("HF and synthetic data disagree on input dimension", code="bad-shape")
    if hf.output_dim != synth.outputs.shape[0]:
        raise DataError("HF and synthetic data disagree on output dimension", code="bad-shape")
    basis = pca.fit_basis(hf.outputs, epsilon)
    x_pool = np.hstack([hf.inputs, synth.inputs])
    y_pool = np.hstack([hf.outputs, synth.outputs])
    c_mf = pca.project(basis, y_pool)
    wv = build_weights(scheme, hf.inputs, synth.inputs)
    scaler = InputScaler.fit(x_pool)
    model = fit_wls(FeatureMap(hf.input_dim, degree), scaler.transform(x_pool), c_mf, wv.values)
    diagnostics = dict(synth.diagnostics)
    diagnostics["n_zero_weights"] = int(np.count_nonzero(wv.synthetic == 0.0))
    if wv.dropped_axes:
        diagnostics["dropped_axes"] = list(wv.dropped_axes)
    variant = DIRECT_AUG if synth.provenance == DIRECT else EXPLICIT_AUG
    return MFSurrogate(variant=variant, basis=basis, model=model, scaler=scaler, diagnostics=diagnostics)


def fit_additive(hf: Dataset, lf: Dataset, lf_degree=1, delta_degree=1, epsilon=0.995):
    """Additive surrogate: LF regression plus a fitted discrepancy model.

    The LF component is fitted on the LF data; its co-located predictions at
    the HF inputs define the discrepancy, which gets its own basis and
    polynomial model. Predictions sum the two reconstructions (the two means
    form the bias term).
    """
    if hf.fidelity != HF or lf.fidelity != LF:
        raise DataError("additive fit expects (HF, LF) datasets", code="bad-config")
    if hf.input_dim != lf.input_dim:
        raise DataError("HF and LF datasets disagree on input dimension", code="bad-shape")
    if hf.output_dim != lf.output_dim:
        raise DataError("HF and LF datasets disagree on output dimension", code="bad-shape")
    if hf.n_samples < 2:
        raise DataError("additive fit needs at least 2 HF samples", code="bad-shape")

    lf_basis = pca.fit_basis(lf.outputs, epsilon)
    lf_scaler = InputScaler.fit(lf.inputs)
    lf_model = fit_ols(
        FeatureMap(lf.input_dim, lf_degree),
        lf_scaler.transform(lf.inputs),
        pca.project(lf_basis, lf.outputs),
    )
    colocated = pca.reconstruct(lf_basis, lf_model.predict(lf_scaler.transform(hf.inputs)))
    delta = hf.outputs - colocated

    delta_basis = pca.fit_basis(delta, epsilon)
    delta_scaler = InputScaler.fit(hf.inputs)
    delta_model = fit_ols(
        FeatureMap(hf.input_dim, delta_degree),
        delta_scaler.transform(hf.inputs),
        pca.project(delta_basis, delta),
    )
    return MFSurrogate(
        variant=ADDITIVE,
        lf_basis=lf_basis,
        lf_model=lf_model,
        lf_scaler=lf_scaler,
        delta_basis=delta_basis,
        delta_model=delta_model,
        delta_scaler=delta_scaler,
    )
