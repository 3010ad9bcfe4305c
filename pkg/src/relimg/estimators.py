"""scikit-learn style wrappers so the transforms drop into pipelines.

All three are stateless apart from remembering the input shape seen by
``fit``; outputs are ``object`` arrays of exact ints/Fractions.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import signal
from ._validation import check_connectivity, check_exact, check_window
from .ccl import BinaryImage, label_components_relational
from .integral2d import Image, build_sat

__all__ = ["MovingAverage", "IntegralImage", "ComponentLabeler"]

_MOVING_AVERAGES = {
    "naive": signal.moving_average_naive,
    "stream": signal.moving_average_stream,
    "memo": signal.moving_average_memo,
    "relational": lambda v, w: signal.moving_average_relational(v, w).averages,
}


def _exact_array(X, ndim: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(X, dtype=object)
    if arr.ndim not in ndim:
        raise ValueError(f"expected an array with ndim in {ndim}, got shape {arr.shape}")
    flat = [check_exact(v) for v in arr.ravel()]
    out = np.empty(arr.shape, dtype=object)
    out.ravel()[:] = flat
    return out


class MovingAverage(TransformerMixin, BaseEstimator):
    """Moving average over each row of ``X``.

    Parameters
    ----------
    window : int
        Window length, ``1 <= window <= n_features``.
    impl : {"naive", "stream", "memo", "relational"}
    """

    def __init__(self, window=2, impl="naive"):
        self.window = window
        self.impl = impl

    def fit(self, X, y=None):
        X = _exact_array(X, (2,))
        if self.impl not in _MOVING_AVERAGES:
            raise ValueError(f"impl must be one of {sorted(_MOVING_AVERAGES)}, got {self.impl!r}")
        check_window(self.window, X.shape[1])
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = _exact_array(X, (2,))
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but MovingAverage was fitted with {self.n_features_in_}"
            )
        fn = _MOVING_AVERAGES[self.impl]
        rows = [fn(list(row), self.window) for row in X]
        out = np.empty((X.shape[0], X.shape[1] - self.window + 1), dtype=object)
        for i, row in enumerate(rows):
            out[i, :] = row
        return out


class IntegralImage(TransformerMixin, BaseEstimator):
    """Summed-area table of each image in a ``(n, h, w)`` stack (or one ``(h, w)`` image)."""

    def fit(self, X, y=None):
        X = _exact_array(X, (2, 3))
        self.image_shape_ = X.shape[-2:]
        return self

    def transform(self, X):
        check_is_fitted(self, "image_shape_")
        X = _exact_array(X, (2, 3))
        single = X.ndim == 2
        stack = X[None] if single else X
        h, w = stack.shape[1:]
        out = np.empty((stack.shape[0], h + 1, w + 1), dtype=object)
        for i, img in enumerate(stack):
            sat = build_sat(Image(w, h, tuple(img.ravel())))
            out[i] = np.array(sat.rows, dtype=object)
        return out[0] if single else out


class ComponentLabeler(TransformerMixin, BaseEstimator):
    """Relational connected-component labeling of binary images.

    Nonzero pixels are foreground.
    """

    def __init__(self, connectivity=4):
        self.connectivity = connectivity

    def fit(self, X, y=None):
        check_connectivity(self.connectivity)
        X = _exact_array(X, (2, 3))
        self.image_shape_ = X.shape[-2:]
        return self

    def transform(self, X):
        check_is_fitted(self, "image_shape_")
        X = _exact_array(X, (2, 3))
        single = X.ndim == 2
        stack = X[None] if single else X
        h, w = stack.shape[1:]
        out = np.zeros(stack.shape, dtype=np.int64)
        for i, img in enumerate(stack):
            bits = tuple(1 if v else 0 for v in img.ravel())
            lg = label_components_relational(BinaryImage(w, h, bits), self.connectivity)
            out[i] = np.array(lg.labels, dtype=np.int64).reshape(h, w)
        return out[0] if single else out
