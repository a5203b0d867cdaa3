# -*- coding: utf-8 -*-
"""
   assetchannel.coint
   ~~~~~~~~~~~~~~~~~~

   Kao's residual-based test of the null of no cointegration in a panel with
   unit fixed effects.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import functools
import logging
import math

import numpy as np
import pandas as pd

from . import global_env
from .mathematics import (bartlett_bandwidth, long_run_covariance, ols,
                          within_demean)
from .panel import PanelError


__all__ = ['KaoResult', 'kao_test', 'kao_table', 'null_distribution',
           'CALIBRATIONS', 'RESIDUAL_LAGS', 'VARIANT']


logger = logging.getLogger(__name__)


#: Default augmentation lags of the residual ADF regression.
RESIDUAL_LAGS = 1
#: The implemented statistic among Kao's five.
VARIANT = 'ADF'
#: Where p-values come from: the simulated null distribution of the statistic
#: for the panel's shape, or its standard normal limit.
CALIBRATIONS = ('simulated', 'asymptotic')
#: Panels drawn for a simulated null distribution.
NULL_REPLICATIONS = 1999
#: Root of the seeds of the simulated null distributions.
NULL_SEED = 1999

# Moment corrections of the ADF-type statistic: the t of the pooled residual
# regression is centred by sqrt(6 N) sigma_v / (2 sigma_0v) and scaled by
# sqrt(sigma_0v^2 / (2 sigma_v^2) + 3 sigma_v^2 / (10 sigma_0v^2)), which
# makes it standard normal as T then N grow.  Without augmentation lags this
# is Kao's DF*_t.
CENTRE_FACTOR = 6.
CENTRE_DIVISOR = 2.
SCALE_LONG_RUN = 2.
SCALE_SHORT_RUN = 3. / 10.


class KaoResult(object):
    """:attr:`p_value` follows :attr:`calibration`;
    :attr:`asymptotic_p_value` is always ``Phi(statistic)``.
    """

    variant = VARIANT

    def __init__(self, statistic, p_value, residual_lags, n_units, n_periods,
                 t_adf, sigma_v2, sigma_0v2, bandwidth, beta,
                 asymptotic_p_value=None, calibration='asymptotic'):
        self.statistic = statistic
        self.p_value = p_value
        self.residual_lags = residual_lags
        self.n_units = n_units
        self.n_periods = n_periods
        self.t_adf = t_adf
        self.sigma_v2 = sigma_v2
        self.sigma_0v2 = sigma_0v2
        self.bandwidth = bandwidth
        self.beta = beta
        if asymptotic_p_value is None:
            asymptotic_p_value = p_value
        self.asymptotic_p_value = asymptotic_p_value
        self.calibration = calibration

    def rejects(self, alpha=None):
        if alpha is None:
            alpha = global_env().alpha
        return self.p_value < alpha

    def __repr__(self):
        return '<%s %s statistic=%.4f p=%.4g (%s) N=%d T=%d>' % (
            type(self).__name__, self.variant, self.statistic, self.p_value,
            self.calibration, self.n_units, self.n_periods)


def _conditional_variance(cov):
    """Variance of the first component given the others."""
    yy, yx, xx = cov[0, 0], cov[0, 1:], cov[1:, 1:]
    return float(yy - yx @ np.linalg.solve(xx, yx))


def _statistic(blocks, regressors, residual_lags, bandwidth):
    """Kao's ADF-type statistic of ``T x (1 + k)`` unit blocks whose first
    column is the dependent variable.

    The nuisance variances are those of the innovation ``u = diff(e)`` of the
    fixed-effect residual given the regressor innovations ``diff(x)``,
    contemporaneous and long run, averaged over units.
    """
    n_units = len(blocks)
    demeaned = [within_demean(b) for b in blocks]
    pooled = ols(np.concatenate([dm[:, 0] for dm in demeaned]),
                 np.vstack([dm[:, 1:] for dm in demeaned]), regressors)
    beta = pooled.coef
    deps, designs = [], []
    short, long_ = 0., 0.
    for dm in demeaned:
        e = dm[:, 0] - dm[:, 1:] @ beta
        de = np.diff(e)
        rows = np.arange(residual_lags, len(de))
        deps.append(de[rows])
        designs.append(np.column_stack(
            [e[rows]] + [de[rows - k] for k in range(1, residual_lags + 1)]))
        w = np.column_stack([de, np.diff(dm[:, 1:], axis=0)])
        w = w - w.mean(axis=0)
        short = short + w.T @ w / len(w)
        long_ = long_ + long_run_covariance(w, bandwidth)
    adf = ols(np.concatenate(deps), np.vstack(designs),
              ['e_lag'] + ['de_lag%d' % k
                           for k in range(1, residual_lags + 1)])
    t_adf = float(adf.tvalues[0])
    sigma_v2 = _conditional_variance(short / n_units)
    sigma_0v2 = _conditional_variance(long_ / n_units)
    if sigma_v2 <= 0 or sigma_0v2 <= 0:
        raise PanelError('Degenerate nuisance variances (%g, %g)' %
                         (sigma_v2, sigma_0v2))
    sigma_v, sigma_0v = math.sqrt(sigma_v2), math.sqrt(sigma_0v2)
    statistic = (t_adf + math.sqrt(CENTRE_FACTOR * n_units) * sigma_v /
                 (CENTRE_DIVISOR * sigma_0v)) / math.sqrt(
        sigma_0v2 / (SCALE_LONG_RUN * sigma_v2) +
        SCALE_SHORT_RUN * sigma_v2 / sigma_0v2)
    return statistic, t_adf, sigma_v2, sigma_0v2, beta


@functools.lru_cache(maxsize=32)
def null_distribution(n_units, n_periods, n_regressors,
                      residual_lags=RESIDUAL_LAGS, bandwidth=None,
                      replications=NULL_REPLICATIONS):
    """Sorted statistics of panels of independent Gaussian random walks with
    the given shape.

    The statistic does not change when the dependent variable is rescaled,
    when the regressors are mixed linearly or added to it, or when a unit is
    shifted, so under Gaussian random walks of any covariance this is its
    exact distribution up to simulation error.  Seeded by the shape, so
    every call returns the same draws.
    """
    if bandwidth is None:
        bandwidth = bartlett_bandwidth(n_periods)
    seed = np.random.SeedSequence([NULL_SEED, n_units, n_periods,
                                   n_regressors, residual_lags,
                                   int(bandwidth)])
    rng = np.random.Generator(np.random.PCG64(seed))
    regressors = ['x%d' % (r + 1) for r in range(n_regressors)]
    draws = np.empty(replications)
    for r in range(replications):
        blocks = np.cumsum(rng.standard_normal(
            (n_units, n_periods, n_regressors + 1)), axis=1)
        draws[r] = _statistic(list(blocks), regressors, residual_lags,
                              bandwidth)[0]
    draws.sort()
    draws.flags.writeable = False
    logger.debug('Simulated the Kao null of N=%d T=%d k=%d (%d panels)',
                 n_units, n_periods, n_regressors, replications)
    return draws


def kao_test(ds, dependent, regressors, residual_lags=RESIDUAL_LAGS,
             bandwidth=None, env=None, calibration='simulated'):
    """Kao's ADF-type panel cointegration test.

    The dependent variable is regressed on the regressors with unit fixed
    effects; the pooled residuals enter an ADF regression without
    deterministic terms whose lags stay within units.  The statistic carries
    Kao's moment corrections and is standard normal in the limit.  With few
    units the pooled slope stays random and the limit over-rejects, so by
    default the p-value is the left tail of :func:`null_distribution` for
    the panel's shape.

    :param calibration: ``'simulated'`` or ``'asymptotic'``.
    :raises: :exc:`~assetchannel.panel.PanelError` for an unbalanced panel,
             :exc:`~assetchannel.mathematics.RankError` for regressors
             without within-unit variation.

    """
    if env is None:
        env = global_env()
    regressors = list(regressors)
    if not regressors:
        raise ValueError('Kao test needs at least one regressor')
    if residual_lags < 0:
        raise ValueError('residual_lags must be nonnegative')
    if calibration not in CALIBRATIONS:
        raise ValueError('Unknown calibration %r, expected one of %s' %
                         (calibration, ', '.join(CALIBRATIONS)))
    variables = [dependent] + regressors
    sub = ds.select(variables)
    if not sub.balanced:
        raise PanelError('Kao test needs a balanced panel of %s; use '
                         'balance() first' % ', '.join(variables))
    blocks = [sub.unit_block(unit, variables)[1] for unit in sub.units]
    n_units, n_periods = len(blocks), blocks[0].shape[0]
    if n_periods < residual_lags + 4:
        raise PanelError('Kao test needs at least %d periods, got %d' %
                         (residual_lags + 4, n_periods))
    if bandwidth is None:
        bandwidth = bartlett_bandwidth(n_periods)
    statistic, t_adf, sigma_v2, sigma_0v2, beta = _statistic(
        blocks, regressors, residual_lags, bandwidth)
    asymptotic_p = env.cdf(statistic)
    if calibration == 'simulated':
        null = null_distribution(n_units, n_periods, len(regressors),
                                 residual_lags, bandwidth)
        below = np.searchsorted(null, statistic, side='right')
        p_value = (1. + below) / (len(null) + 1.)
    else:
        p_value = asymptotic_p
    logger.info('Kao %s test of %s on %s (fixed effects, residual lags=%d, '
                'bandwidth=%d): statistic=%.4f p=%.4g (%s)', VARIANT,
                dependent, ', '.join(regressors), residual_lags, bandwidth,
                statistic, p_value, calibration)
    return KaoResult(statistic, p_value, residual_lags, n_units, n_periods,
                     t_adf, sigma_v2, sigma_0v2, bandwidth, beta,
                     asymptotic_p, calibration)


def kao_table(ds, systems, residual_lags=RESIDUAL_LAGS, bandwidth=None,
              env=None, calibration='simulated'):
    """One row per system: ``systems`` maps a name to ``(dependent,
    regressors)``.
    """
    rows = []
    for name, (dependent, regressors) in systems.items():
        result = kao_test(ds, dependent, regressors, residual_lags, bandwidth,
                          env, calibration)
        rows.append((name, dependent, ','.join(regressors), result.variant,
                     result.residual_lags, result.bandwidth,
                     result.statistic, result.p_value,
                     result.asymptotic_p_value, result.calibration))
    return pd.DataFrame(rows, columns=['system', 'dependent', 'regressors',
                                       'variant', 'residual_lags',
                                       'bandwidth', 'statistic', 'p_value',
                                       'asymptotic_p_value', 'calibration'])
