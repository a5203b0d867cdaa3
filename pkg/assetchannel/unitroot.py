# -*- coding: utf-8 -*-
"""
   assetchannel.unitroot
   ~~~~~~~~~~~~~~~~~~~~~

   The augmented Dickey-Fuller test and its Fisher combination across the
   units of a panel.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import collections
import logging
import math
import warnings

import numpy as np
import pandas as pd

from . import global_env
from .mathematics import ols
from .panel import PanelError, TransformSpec, apply_transform


__all__ = ['AdfResult', 'FisherAdfResult', 'adf_test', 'fisher_adf',
           'fisher_combine', 'mackinnon_p', 'unit_root_table',
           'DETERMINISTICS', 'LAG_RULES', 'MAX_ADF_LAGS']


logger = logging.getLogger(__name__)


#: Deterministic terms of the test regression by their short names.
DETERMINISTICS = collections.OrderedDict([
    ('n', 'none'), ('c', 'constant'), ('ct', 'constant_trend')])
#: ``fixed`` uses ``max_lags`` augmentation lags, ``aic`` searches 0..max.
LAG_RULES = ('fixed', 'aic')
#: Default maximum number of augmentation lags.
MAX_ADF_LAGS = 12
#: Observations required beyond the maximum lag.
MIN_EXTRA_OBS = 10


# MacKinnon (1994, 2010 update) response surface coefficients for one
# integrated variable, as distributed in statsmodels/tsa/adfvalues.py.  Below
# ``_TAU_STAR`` the small-p polynomial applies, above it the large-p one; the
# p-value is the normal CDF of the polynomial in tau.
_TAU_MIN = {'n': -19.04, 'c': -18.83, 'ct': -16.18}
_TAU_MAX = {'n': float('inf'), 'c': 2.74, 'ct': 0.7}
_TAU_STAR = {'n': -1.04, 'c': -1.61, 'ct': -2.89}
_TAU_SMALLP = {
    'n': (0.6344, 1.2378, 3.2496e-2),
    'c': (2.1659, 1.4412, 3.8269e-2),
    'ct': (3.2512, 1.6047, 4.9588e-2),
}
_TAU_LARGEP = {
    'n': (0.4797, 9.3557e-1, -0.6999e-1, 3.3066e-2),
    'c': (1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2),
    'ct': (2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2),
}


class AdfResult(collections.namedtuple('AdfResult', [
        'tau', 'p_value', 'lags_used', 'deterministic', 'n_obs'])):

    __slots__ = ()

    def rejects(self, alpha=None):
        if alpha is None:
            alpha = global_env().alpha
        return self.p_value < alpha


class FisherAdfResult(object):
    """The Fisher combination of per-unit ADF tests.

    :attr statistic: ``-2 sum(ln p_i)``.
    :attr dof: ``2 N``.
    :attr per_unit: an ordered dict of unit to :class:`AdfResult`.

    """

    def __init__(self, variable, statistic, dof, p_value, per_unit):
        self.variable = variable
        self.statistic = statistic
        self.dof = dof
        self.p_value = p_value
        self.per_unit = per_unit

    def rejects(self, alpha=None):
        if alpha is None:
            alpha = global_env().alpha
        return self.p_value < alpha

    def __repr__(self):
        return '<%s %s statistic=%.4f dof=%d p=%.4f>' % (
            type(self).__name__, self.variable, self.statistic, self.dof,
            self.p_value)


def _short_deterministic(deterministic):
    for short, name in DETERMINISTICS.items():
        if deterministic in (short, name):
            return short
    raise ValueError('Unknown deterministic terms %r, expected one of %s' %
                     (deterministic, ', '.join(DETERMINISTICS.values())))


def mackinnon_p(tau, deterministic='c', env=None):
    """Approximate p-value of a Dickey-Fuller tau from the response surface
    for one integrated variable.
    """
    if env is None:
        env = global_env()
    short = _short_deterministic(deterministic)
    if tau > _TAU_MAX[short]:
        return 1.
    elif tau < _TAU_MIN[short]:
        return 0.
    if tau <= _TAU_STAR[short]:
        coef = _TAU_SMALLP[short]
    else:
        coef = _TAU_LARGEP[short]
    return env.cdf(np.polyval(coef[::-1], tau))


def _adf_design(y, lags, start, short):
    """Regressand and design of the ADF regression over rows ``start..``
    of the differenced series.
    """
    dy = np.diff(y)
    rows = np.arange(start, len(dy))
    columns, names = [y[rows]], ['y_lag']
    for k in range(1, lags + 1):
        columns.append(dy[rows - k])
        names.append('dy_lag%d' % k)
    if short in ('c', 'ct'):
        columns.append(np.ones(len(rows)))
        names.append('const')
    if short == 'ct':
        columns.append(rows + 1.)
        names.append('trend')
    return dy[rows], np.column_stack(columns), names


def adf_test(series, deterministic='c', max_lags=MAX_ADF_LAGS,
             lag_rule='aic', env=None):
    """Augmented Dickey-Fuller test of a unit root in ``series``.

    With ``lag_rule='aic'`` every lag in ``0..max_lags`` is fitted on the
    common sample after ``max_lags`` differences, the AIC minimizer is kept
    and the chosen regression is refitted on its full sample.

    :param deterministic: ``'none'``, ``'constant'`` or ``'constant_trend'``
                          (or ``'n'``, ``'c'``, ``'ct'``).
    :raises: :exc:`ValueError` for a short or constant series.

    """
    short = _short_deterministic(deterministic)
    if lag_rule not in LAG_RULES:
        raise ValueError('Unknown lag rule %r, expected one of %s' %
                         (lag_rule, ', '.join(LAG_RULES)))
    if max_lags < 0:
        raise ValueError('max_lags must be nonnegative')
    y = np.asarray(series, dtype=float)
    if y.ndim != 1:
        raise ValueError('ADF needs a 1-dimensional series')
    if not np.isfinite(y).all():
        raise ValueError('Series contains absent or infinite values')
    if len(y) < max_lags + MIN_EXTRA_OBS:
        raise ValueError('Series too short: %d observations, need at least '
                         '%d for %d lags' % (len(y), max_lags + MIN_EXTRA_OBS,
                                             max_lags))
    if np.ptp(y) == 0:
        raise ValueError('constant series')
    dy = np.diff(y)
    if np.allclose(dy, dy[0], rtol=0, atol=1e-12 * max(1., abs(dy[0]))):
        # an exact linear trend fits without error; its first difference
        # carries no evidence against the unit root
        warnings.warn('Series is an exact linear trend; tau set to 0')
        logger.warning('ADF on an exact linear trend, tau set to 0')
        return AdfResult(0., mackinnon_p(0., short, env), 0,
                         DETERMINISTICS[short], len(dy))
    lags = max_lags
    if lag_rule == 'aic':
        best = None
        for p in range(max_lags + 1):
            dep, design, names = _adf_design(y, p, max_lags, short)
            fit = ols(dep, design, names)
            n = len(dep)
            aic = n * math.log(fit.ssr / n) + 2 * fit.k
            if best is None or aic < best[0]:
                best = (aic, p)
        lags = best[1]
    dep, design, names = _adf_design(y, lags, lags, short)
    fit = ols(dep, design, names)
    tau = float(fit.tvalues[0])
    return AdfResult(tau, mackinnon_p(tau, short, env), lags,
                     DETERMINISTICS[short], len(dep))


def fisher_combine(p_values, env=None):
    """Combines independent p-values by ``-2 sum(ln p)`` against a
    chi-square with ``2 N`` degrees of freedom.

    >>> fisher_combine([0.05, 0.10])  #doctest: +ELLIPSIS
    (10.596634733096073, 4, 0.03149...)

    """
    if env is None:
        env = global_env()
    p_values = [float(p) for p in p_values]
    if not p_values:
        raise ValueError('No p-values to combine')
    for p in p_values:
        if not 0 <= p <= 1:
            raise ValueError('p-value out of [0, 1]: %r' % p)
    tiny = np.finfo(float).tiny
    statistic = -2. * math.fsum(math.log(max(p, tiny)) for p in p_values)
    dof = 2 * len(p_values)
    return statistic, dof, env.chi2_sf(statistic, dof)


def fisher_adf(ds, variable, deterministic='c', max_lags=MAX_ADF_LAGS,
               lag_rule='aic', env=None):
    """Fisher-ADF panel unit-root test: the null is a unit root in every
    unit.

    :raises: :exc:`ValueError` naming the unit whose ADF test failed.

    """
    units = [u for u in ds.units if ds.series(u, variable).notna().any()]
    if len(units) < 2:
        raise PanelError('Fisher-ADF needs %s for at least 2 units, got %d' %
                         (variable, len(units)))
    per_unit = collections.OrderedDict()
    for unit in units:
        __, values = ds.unit_block(unit, [variable])
        try:
            per_unit[unit] = adf_test(values[:, 0], deterministic, max_lags,
                                      lag_rule, env)
        except ValueError as exc:
            raise ValueError('%s, unit %s: %s' % (variable, unit, exc)) \
                from exc
    statistic, dof, p_value = fisher_combine(
        [r.p_value for r in per_unit.values()], env)
    logger.info('Fisher-ADF %s (deterministic=%s, lag rule=%s, max lags=%d): '
                'statistic=%.4f dof=%d p=%.4g', variable,
                DETERMINISTICS[_short_deterministic(deterministic)],
                lag_rule, max_lags, statistic, dof, p_value)
    return FisherAdfResult(variable, statistic, dof, p_value, per_unit)


def unit_root_table(ds, variables, deterministic='c', max_lags=MAX_ADF_LAGS,
                    lag_rule='aic', env=None):
    """Fisher-ADF p-values of each variable in levels and in first
    differences, one row per variable.
    """
    rows = []
    for variable in variables:
        level = fisher_adf(ds, variable, deterministic, max_lags, lag_rule,
                           env)
        spec = TransformSpec('first_difference', variable)
        diffed = apply_transform(ds.select([variable]), spec)
        diff = fisher_adf(diffed, spec.output_name, deterministic, max_lags,
                          lag_rule, env)
        rows.append((variable, level.statistic, level.p_value,
                     diff.statistic, diff.p_value))
    return pd.DataFrame(rows, columns=['variable', 'level_statistic',
                                       'level_p', 'difference_statistic',
                                       'difference_p'])
