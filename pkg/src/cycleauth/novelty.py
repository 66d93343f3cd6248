"""One-class novelty gate over window feature vectors.

A Mahalanobis-distance scorer stands in for a one-class SVM: it is
deterministic, has no tuning loop, and exposes the same fit /
score_samples / decision_function surface, so a kernel method can be
swapped in behind the same interface later.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, OutlierMixin
from sklearn.exceptions import NotFittedError

from .exceptions import DataError, TrainingContractError
from .features import extract_features

__all__ = ["MahalanobisNovelty", "train_novelty"]


class MahalanobisNovelty(BaseEstimator, OutlierMixin):
    """Negative Mahalanobis distance to the training centroid.

    Features are standardized by their training spread, the covariance is
    shrunk toward its diagonal (small window counts leave it rank
    deficient otherwise) and ridge-regularized.  The decision threshold is
    the lower-interpolation 5th percentile of training scores, so at least
    95% of the training windows score at or above it.
    """

    def __init__(self, ridge=1e-6, shrinkage=0.7, quantile=0.05):
        self.ridge = ridge
        self.shrinkage = shrinkage
        self.quantile = quantile

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] < 2:
            raise DataError("novelty training needs a 2-D matrix with >= 2 rows")
        if not np.all(np.isfinite(X)):
            raise DataError("novelty training features must be finite")
        self.location_ = X.mean(axis=0)
        scale = X.std(axis=0)
        self.scale_ = np.where(scale > 1e-12, scale, 1.0)
        z = (X - self.location_) / self.scale_
        cov = np.cov(z, rowvar=False)
        cov = np.atleast_2d(cov)
        diagonal = np.diag(np.diag(cov))
        self.covariance_ = (
            (1.0 - self.shrinkage) * cov
            + self.shrinkage * diagonal
            + self.ridge * np.eye(cov.shape[0])
        )
        self.precision_ = np.linalg.inv(self.covariance_)
        train_scores = self.score_samples(X)
        self.threshold_ = float(np.quantile(train_scores, self.quantile, method="lower"))
        return self

    def _check_fitted(self):
        if not hasattr(self, "precision_"):
            raise NotFittedError("call fit before scoring")

    def score_samples(self, X) -> np.ndarray:
        """Higher is more owner-like; 0 is the training centroid."""
        self._check_fitted()
        X = np.atleast_2d(np.asarray(X, dtype=float))
        z = (X - self.location_) / self.scale_
        quad = np.einsum("ij,jk,ik->i", z, self.precision_, z)
        return -np.sqrt(np.maximum(quad, 0.0))

    def decision_function(self, X) -> np.ndarray:
        return self.score_samples(X) - self.threshold_

    def predict(self, X) -> np.ndarray:
        """+1 for windows that pass the gate, -1 for novel ones."""
        return np.where(self.decision_function(X) >= 0.0, 1, -1)

    def to_dict(self) -> dict:
        self._check_fitted()
        return {
            "ridge": self.ridge,
            "shrinkage": self.shrinkage,
            "quantile": self.quantile,
            "location": self.location_.tolist(),
            "scale": self.scale_.tolist(),
            "covariance": self.covariance_.tolist(),
            "threshold": self.threshold_,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "MahalanobisNovelty":
        model = cls(
            ridge=float(doc["ridge"]),
            shrinkage=float(doc["shrinkage"]),
            quantile=float(doc["quantile"]),
        )
        model.location_ = np.asarray(doc["location"], dtype=float)
        model.scale_ = np.asarray(doc["scale"], dtype=float)
        model.covariance_ = np.asarray(doc["covariance"], dtype=float)
        model.precision_ = np.linalg.inv(model.covariance_)
        model.threshold_ = float(doc["threshold"])
        return model


def train_novelty(windows, ridge=1e-6, shrinkage=0.7) -> MahalanobisNovelty:
    """Fit the gate on one owner's windows of a single activity."""
    windows = list(windows)
    if len(windows) < 5:
        raise TrainingContractError(f"need at least 5 windows, got {len(windows)}")
    labels = {w.label for w in windows}
    if len(labels) > 1:
        raise TrainingContractError(f"windows mix labels: {sorted(labels)}")
    X = np.vstack([extract_features(w) for w in windows])
    return MahalanobisNovelty(ridge=ridge, shrinkage=shrinkage).fit(X)
