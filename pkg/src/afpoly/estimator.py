"""scikit-learn wrapper: hexagonal systems in, anti-forcing coefficients out."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import engine
from .hexmodel import HexSystem, parse_system


def check_systems(X) -> list[HexSystem]:
    """Coerce ``X`` to a list of systems.

    Accepts HexSystem objects and HEXTREE / ``C:`` / ``Hl:`` strings, either
    as a flat sequence or as a single-column 2-D array.
    """
    if isinstance(X, (str, HexSystem)):
        raise TypeError("expected a sequence of systems, got a single system")
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected one column of systems, got shape {arr.shape}")
        arr = arr[:, 0]
    elif arr.ndim != 1:
        raise ValueError(f"expected a 1-D sequence of systems, got {arr.ndim}-D input")
    out = []
    for item in arr:
        if isinstance(item, HexSystem):
            out.append(item)
        elif isinstance(item, str):
            out.append(parse_system(item))
        else:
            raise TypeError(f"cannot interpret {type(item).__name__} as a hexagonal system")
    if not out:
        raise ValueError("empty input")
    return out


class AntiForcingTransformer(TransformerMixin, BaseEstimator):
    """Map each system to the coefficient vector of its anti-forcing polynomial.

    Parameters
    ----------
    method : {"recurrence", "brute"}
        Tail recurrence, or the brute-force oracle (small systems only).
    normalize : bool
        Divide each row by its perfect-matching count, giving the
        distribution of anti-forcing numbers.
    max_degree : int or None
        Width of the output is ``max_degree + 1``; None learns it in ``fit``.
    """

    def __init__(self, method: str = "recurrence", normalize: bool = False, max_degree=None):
        self.method = method
        self.normalize = normalize
        self.max_degree = max_degree

    def _poly(self, h: HexSystem):
        if self.method == "recurrence":
            return engine.af_poly(h)
        if self.method == "brute":
            return engine.brute_af_poly(h)
        raise ValueError(f"method must be 'recurrence' or 'brute', got {self.method!r}")

    def fit(self, X, y=None):
        systems = check_systems(X)
        if self.max_degree is None:
            self.n_degrees_ = max(self._poly(h).degree for h in systems) + 1
        else:
            if self.max_degree < 0:
                raise ValueError("max_degree must be non-negative")
            self.n_degrees_ = int(self.max_degree) + 1
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_degrees_")
        systems = check_systems(X)
        rows = []
        for h in systems:
            p = self._poly(h)
            if p.degree >= self.n_degrees_:
                raise ValueError(
                    f"degree {p.degree} exceeds the fitted width {self.n_degrees_ - 1}; refit or raise max_degree"
                )
            rows.append([p[d] for d in range(self.n_degrees_)])
        if self.normalize:
            return np.array([[c / sum(r) for c in r] for r in rows], dtype=float)
        if max(max(r) for r in rows) >= 2**63:
            return np.array(rows, dtype=object)
        return np.array(rows, dtype=np.int64)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_degrees_")
        return np.array([f"x^{d}" for d in range(self.n_degrees_)], dtype=object)
