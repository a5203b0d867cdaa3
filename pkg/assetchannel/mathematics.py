# -*- coding: utf-8 -*-
"""
   assetchannel.mathematics
   ~~~~~~~~~~~~~~~~~~~~~~~~

   This module contains the linear algebra shared by the estimators: least
   squares with rank diagnostics, the forward orthogonal deviations operator,
   companion matrices, moving-average coefficients and long-run covariances.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import numpy as np


__all__ = ['RankError', 'LeastSquares', 'ols', 'collinear_columns',
           'forward_orthogonal_deviations', 'within_demean',
           'companion_matrix', 'ma_coefficients', 'long_run_covariance',
           'bartlett_bandwidth', 'inf']


inf = float('inf')


class RankError(ValueError):
    """Raised when a design matrix does not have full column rank.  The
    offending columns are available as :attr:`columns`.
    """

    def __init__(self, columns, message=None):
        self.columns = list(columns)
        if message is None:
            message = 'Collinear regressors: %s' % ', '.join(
                map(str, self.columns))
        super(RankError, self).__init__(message)


def collinear_columns(x, names=None, tol=None):
    """Returns the names of the columns that do not increase the rank of ``x``
    when added from left to right.
    """
    x = np.asarray(x, dtype=float)
    if names is None:
        names = list(range(x.shape[1]))
    offending, kept = [], []
    rank = 0
    for c in range(x.shape[1]):
        trial = x[:, kept + [c]]
        new_rank = np.linalg.matrix_rank(trial, tol=tol)
        if new_rank > rank:
            kept.append(c)
            rank = new_rank
        else:
            offending.append(names[c])
    return offending


class LeastSquares(object):
    """The result of :func:`ols`."""

    def __init__(self, coef, resid, xtx_inv, names):
        self.coef = coef
        self.resid = resid
        self.names = names
        self.nobs, self.k = len(resid), len(coef)
        self.df_resid = self.nobs - self.k
        self.ssr = float(resid @ resid)
        self.sigma2 = self.ssr / self.df_resid if self.df_resid > 0 else 0.
        self.cov = self.sigma2 * xtx_inv
        self.xtx_inv = xtx_inv

    @property
    def se(self):
        return np.sqrt(np.clip(np.diag(self.cov), 0, None))

    @property
    def tvalues(self):
        with np.errstate(divide='ignore', invalid='ignore'):
            return self.coef / self.se

    def __getitem__(self, name):
        return self.coef[self.names.index(name)]

    def __repr__(self):
        return '<%s k=%d nobs=%d ssr=%.6g>' % (type(self).__name__, self.k,
                                               self.nobs, self.ssr)


def ols(y, x, names=None):
    """Least squares of ``y`` on the columns of ``x``.

    :raises: :exc:`RankError` naming the collinear columns.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if names is None:
        names = ['x%d' % c for c in range(x.shape[1])]
    names = list(names)
    if x.shape[0] < x.shape[1]:
        raise RankError(names, 'Need at least %d observations, got %d' %
                        (x.shape[1], x.shape[0]))
    if np.linalg.matrix_rank(x) < x.shape[1]:
        raise RankError(collinear_columns(x, names))
    q, r = np.linalg.qr(x)
    coef = np.linalg.solve(r, q.T @ y)
    r_inv = np.linalg.solve(r, np.eye(r.shape[0]))
    return LeastSquares(coef, y - x @ coef, r_inv @ r_inv.T, names)


def forward_orthogonal_deviations(x):
    """Subtracts from each row the mean of all later rows and rescales by
    ``sqrt(n / (n + 1))`` where ``n`` is the number of later rows.  The last
    row has no future and is dropped.
    """
    x = np.asarray(x, dtype=float)
    squeeze = x.ndim == 1
    if squeeze:
        x = x[:, None]
    t = x.shape[0]
    if t < 2:
        raise ValueError('Forward orthogonal deviations need at least 2 '
                         'observations, got %d' % t)
    tail = np.cumsum(x[::-1], axis=0)[::-1]
    n_future = np.arange(t - 1, 0, -1, dtype=float)[:, None]
    scale = np.sqrt(n_future / (n_future + 1.))
    out = scale * (x[:-1] - tail[1:] / n_future)
    return out[:, 0] if squeeze else out


def within_demean(x):
    x = np.asarray(x, dtype=float)
    return x - x.mean(axis=0)


def companion_matrix(coefs):
    """Stacks VAR coefficient matrices ``A_1..A_p`` into the first-order
    companion form.
    """
    coefs = [np.atleast_2d(np.asarray(a, dtype=float)) for a in coefs]
    p, m = len(coefs), coefs[0].shape[0]
    comp = np.zeros((m * p, m * p))
    comp[:m] = np.hstack(coefs)
    if p > 1:
        comp[m:, :-m] = np.eye(m * (p - 1))
    return comp


def ma_coefficients(coefs, horizon):
    """Moving-average coefficients ``Phi_0..Phi_H`` of a VAR, with
    ``Phi_0 = I`` and ``Phi_h = sum_k A_k Phi_{h-k}``.
    """
    coefs = [np.atleast_2d(np.asarray(a, dtype=float)) for a in coefs]
    m = coefs[0].shape[0]
    phi = np.zeros((horizon + 1, m, m))
    phi[0] = np.eye(m)
    for h in range(1, horizon + 1):
        for k in range(1, min(h, len(coefs)) + 1):
            phi[h] += coefs[k - 1] @ phi[h - k]
    return phi


def bartlett_bandwidth(nobs):
    """The Newey-West rule of thumb ``floor(4 (T / 100) ** (2 / 9))``."""
    return int(np.floor(4 * (nobs / 100.) ** (2. / 9.)))


def long_run_covariance(w, bandwidth=None):
    """Bartlett-kernel long-run covariance of the rows of ``w`` (T x k).
    Columns are demeaned first.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    w = w - w.mean(axis=0)
    t = w.shape[0]
    if bandwidth is None:
        bandwidth = bartlett_bandwidth(t)
    omega = w.T @ w / t
    for lag in range(1, min(bandwidth, t - 1) + 1):
        weight = 1. - lag / (bandwidth + 1.)
        gamma = w[lag:].T @ w[:-lag] / t
        omega += weight * (gamma + gamma.T)
    return omega
