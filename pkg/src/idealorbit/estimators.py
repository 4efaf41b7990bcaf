"""scikit-learn style wrappers.

:class:`SMLFitter` learns the arithmetic-progression structure of a 0/1
sequence indexed by a symmetric integer window.  :class:`OrbitInclusion`
takes a job and predicts membership ``n in S(I, J)`` exactly.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from .errors import ValidationError
from .jobs import Job
from .orbit import (
    DEFAULT_CONFIDENCE_RADIUS,
    SML_FIT,
    analyze,
    fit_sml,
)


def _as_integers(X, name="X"):
    X = check_array(np.asarray(X).reshape(-1, 1) if np.ndim(X) == 1 else X, dtype=None, ensure_2d=True)
    if X.shape[1] != 1:
        raise ValueError(f"{name} must hold a single column of integers")
    col = X[:, 0]
    if not np.issubdtype(col.dtype, np.integer):
        if not np.all(np.equal(np.mod(col, 1), 0)):
            raise ValueError(f"{name} must contain integers")
        col = col.astype(np.int64)
    return [int(v) for v in col]


class SMLFitter(ClassifierMixin, BaseEstimator):
    """Fit ``S ≈ (union of residue classes mod a) XOR (finite set)``.

    ``fit(X, y)`` expects ``X`` to cover a full window ``[-N, N]``.
    """

    def __init__(self, tail_fraction=0.5, characteristic=0, confidence_radius=DEFAULT_CONFIDENCE_RADIUS):
        self.tail_fraction = tail_fraction
        self.characteristic = characteristic
        self.confidence_radius = confidence_radius

    def fit(self, X, y):
        n = _as_integers(X)
        y = column_or_1d(y)
        if len(y) != len(n):
            raise ValueError("X and y have different lengths")
        if not 0 < self.tail_fraction <= 1:
            raise ValueError("tail_fraction must lie in (0, 1]")
        bits = {k: bool(v) for k, v in zip(n, y)}
        N = max(abs(k) for k in bits)
        missing = [k for k in range(-N, N + 1) if k not in bits]
        if missing:
            raise ValueError(f"window [-{N}, {N}] is incomplete; first missing index {missing[0]}")
        fit = fit_sml(
            bits,
            N,
            tail_fraction=self.tail_fraction,
            characteristic=self.characteristic,
            confidence_radius=self.confidence_radius,
        )
        self.window_ = N
        self.bits_ = bits
        self.status_ = fit.status
        self.period_ = fit.period
        self.progressions_ = fit.progressions
        self.exceptional_ = fit.exceptional
        self.classes_ = np.array([False, True])
        return self

    def predict(self, X):
        check_is_fitted(self, "status_")
        n = _as_integers(X)
        if self.status_ == SML_FIT:
            prog = set(self.progressions_)
            exc = set(self.exceptional_)
            return np.array([(k % self.period_ in prog) != (k in exc) for k in n])
        outside = [k for k in n if abs(k) > self.window_]
        if outside:
            raise ValueError(f"no structure was fitted; cannot extrapolate to n = {outside[0]}")
        return np.array([self.bits_[k] for k in n])


class OrbitInclusion(BaseEstimator):
    """Estimator view of a job: ``fit`` scans (and optionally certifies).

    ``predict(n)`` answers ``sigma^n(I) ⊇ J`` exactly, extending the scan
    beyond the window on demand.
    """

    def __init__(self, window=20, certify=False, prime=None, precision=12, strategy="orbit"):
        self.window = window
        self.certify = certify
        self.prime = prime
        self.precision = precision
        self.strategy = strategy

    def fit(self, job, y=None):
        if isinstance(job, dict):
            job = Job.from_dict(job)
        if not isinstance(job, Job):
            raise ValidationError("OrbitInclusion.fit expects a job (dict or Job)")
        if not isinstance(self.window, int) or self.window < 0:
            raise ValueError("window must be a non-negative integer")
        sigma = job.automorphism
        self.job_ = job
        self.report_ = analyze(
            sigma,
            job.ideal_I,
            job.ideal_J,
            self.window,
            Q=job.defining_ideal,
            certify_classes=self.certify,
            p=self.prime if self.prime is not None else job.prime,
            K=self.precision,
            strategy=self.strategy,
        )
        self.bits_ = dict(self.report_.bits)
        return self

    def _extend(self, radius):
        from .orbit import scan

        job = self.job_
        if radius > max(abs(k) for k in self.bits_):
            self.bits_ = scan(job.automorphism, job.ideal_I, job.ideal_J, radius, Q=job.defining_ideal)

    def predict(self, X):
        check_is_fitted(self, "report_")
        n = _as_integers(X)
        if n:
            self._extend(max(abs(k) for k in n))
        return np.array([self.bits_[k] for k in n])

    def score(self, X, y):
        return float(np.mean(self.predict(X) == column_or_1d(y).astype(bool)))
