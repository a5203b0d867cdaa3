# -*- coding: utf-8 -*-
"""
   assetchannel.pvar
   ~~~~~~~~~~~~~~~~~

   Panel vector autoregression with unit fixed effects::

      Y_it = A_0 + A_1 Y_i,t-1 + ... + A_p Y_i,t-p + alpha_i + e_it

   The fixed effects are removed by forward orthogonal deviations and the
   slopes estimated by two-step GMM with lagged levels as instruments.  The
   fit then feeds lag selection by moment selection criteria, the companion
   matrix stability check and Cholesky-orthogonalized impulse responses with
   Monte Carlo bands.

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
from .mathematics import (companion_matrix, forward_orthogonal_deviations
                          as _fod, ma_coefficients, within_demean)
from .panel import PanelDataset, PanelError


__all__ = ['PvarSpec', 'PvarFit', 'LagSelectionTable', 'IrfResult',
           'Stability', 'forward_orthogonal_deviations', 'fit_pvar',
           'select_lag', 'companion_eigenvalues', 'orthogonalized_irf',
           'ma_coefficients', 'DEFAULT_ORDERING', 'INSTRUMENT_LAGS',
           'TRANSFORMS', 'IRF_HORIZON', 'IRF_DRAWS', 'IRF_BAND', 'IRF_SEED']


logger = logging.getLogger(__name__)


#: Recursive ordering of the eight-variable system: policy rate, exchange
#: rate, the four sectoral indices, industrial production and inflation.
DEFAULT_ORDERING = ('irs', 'err', 'index_telecom', 'index_man', 'index_elec',
                    'index_fin', 'ip', 'cpi')
#: Default instrument lags ``(first, last)`` of the untransformed levels.
#: ``(1, 4)`` over-identifies one lag order more.
INSTRUMENT_LAGS = (2, 4)
#: Fixed effect removals.
TRANSFORMS = ('forward_orthogonal_deviations', 'within_demean')
#: Default impulse response horizon in months.
IRF_HORIZON = 24
#: Default number of Monte Carlo parameter draws behind the bands.
IRF_DRAWS = 500
#: Default coverage of the percentile bands.
IRF_BAND = .90
#: Default seed of the band draws.
IRF_SEED = 42
#: Eigenvalue tolerance for a positive semidefinite residual covariance.
PSD_TOLERANCE = 1e-10


class PvarSpec(object):
    """What to estimate.

    :param variables: the endogenous variables, in the recursive ordering.
    :param lags: the lag order ``p``.
    :param transform: ``'forward_orthogonal_deviations'`` (GMM with lagged
                      level instruments) or ``'within_demean'`` (least
                      squares on unit-demeaned data).
    :param instrument_lags: ``(first, last)`` lags of the levels used as
                            instruments of every equation.

    """

    def __init__(self, variables=DEFAULT_ORDERING, lags=1,
                 transform='forward_orthogonal_deviations',
                 instrument_lags=INSTRUMENT_LAGS):
        variables = tuple(variables)
        if not variables:
            raise ValueError('No variables')
        duplicates = sorted(set(v for v in variables
                                if variables.count(v) > 1))
        if duplicates:
            raise ValueError('Duplicate variables in ordering: %s' %
                             ', '.join(duplicates))
        if int(lags) != lags or lags < 1:
            raise ValueError('Lag order must be a positive integer, got %r' %
                             (lags,))
        if transform not in TRANSFORMS:
            raise ValueError('Unknown transform %r, expected one of %s' %
                             (transform, ', '.join(TRANSFORMS)))
        first, last = instrument_lags
        if not 1 <= first <= last:
            raise ValueError('Instrument lags must satisfy 1 <= first <= '
                             'last, got %r' % (instrument_lags,))
        self.variables = variables
        self.lags = int(lags)
        self.transform = transform
        self.instrument_lags = (int(first), int(last))

    def with_lags(self, lags):
        return type(self)(self.variables, lags, self.transform,
                          self.instrument_lags)

    @property
    def gmm(self):
        return self.transform == 'forward_orthogonal_deviations'

    @property
    def sample_start(self):
        """Index of the first month of each unit entering the fit."""
        if self.gmm:
            return max(self.lags, self.instrument_lags[1])
        return self.lags

    def moment_counts(self):
        """``(moments, parameters)`` of the whole system."""
        m = len(self.variables)
        params = m * m * self.lags
        if not self.gmm:
            return params, params
        first, last = self.instrument_lags
        return m * m * (last - first + 1), params

    def describe(self):
        text = 'ordering=%s lags=%d transform=%s' % (
            ','.join(self.variables), self.lags, self.transform)
        if self.gmm:
            text += ' instruments=levels lagged %d..%d' % self.instrument_lags
        return text

    def __repr__(self):
        return '<%s %s>' % (type(self).__name__, self.describe())


class PvarFit(object):
    """An estimated panel VAR.

    :attr coefs: ``A_1..A_p`` as a ``(p, m, m)`` array.
    :attr intercept: ``A_0``, the mean of the unit intercepts.
    :attr fixed_effects: an ordered dict of unit to ``alpha_i``.
    :attr residuals: level residuals as a :class:`PanelDataset`.
    :attr sigma: residual covariance of the transformed equations.
    :attr coef_cov: covariance of the stacked coefficients, equation by
                    equation with ``A_1..A_p`` columns in each.

    """

    def __init__(self, variables, coefs, sigma, coef_cov=None, intercept=None,
                 fixed_effects=None, residuals=None, j_statistic=0.,
                 n_obs=0, n_params=None, n_moments=None, spec=None):
        self.variables = tuple(variables)
        self.coefs = np.asarray(coefs, dtype=float)
        m = len(self.variables)
        if self.coefs.ndim == 2:
            self.coefs = self.coefs[None]
        if self.coefs.shape[1:] != (m, m):
            raise ValueError('Coefficients must be (p, %d, %d), got %r' %
                             (m, m, self.coefs.shape))
        self.sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
        self.coef_cov = None if coef_cov is None else \
            np.atleast_2d(np.asarray(coef_cov, dtype=float))
        self.intercept = np.zeros(m) if intercept is None else \
            np.asarray(intercept, dtype=float)
        self.fixed_effects = fixed_effects or collections.OrderedDict()
        self.residuals = residuals
        self.j_statistic = j_statistic
        self.n_obs = n_obs
        self.n_params = self.coefs.size if n_params is None else n_params
        self.n_moments = self.n_params if n_moments is None else n_moments
        self.spec = spec

    @classmethod
    def from_coefficients(cls, variables, coefs, sigma, coef_cov=None):
        """A fit with known parameters."""
        return cls(variables, coefs, sigma, coef_cov)

    @property
    def lags(self):
        return self.coefs.shape[0]

    @property
    def params(self):
        """The coefficients stacked equation by equation."""
        m = len(self.variables)
        return self.coefs.transpose(1, 0, 2).reshape(m, -1).ravel()

    def coefs_from_params(self, params):
        m, p = len(self.variables), self.lags
        return np.asarray(params).reshape(m, p, m).transpose(1, 0, 2)

    @property
    def bse(self):
        if self.coef_cov is None:
            return None
        return self.coefs_from_params(
            np.sqrt(np.clip(np.diag(self.coef_cov), 0, None)))

    @property
    def overidentification(self):
        return self.n_moments - self.n_params

    def j_pvalue(self, env=None):
        if self.overidentification <= 0:
            return float('nan')
        if env is None:
            env = global_env()
        return env.chi2_sf(self.j_statistic, self.overidentification)

    def companion(self):
        return companion_matrix(list(self.coefs))

    def coefficient_frame(self):
        """One row per coefficient: equation, regressor, lag, estimate and
        standard error.
        """
        bse = self.bse
        rows = []
        for k in range(self.lags):
            for i, equation in enumerate(self.variables):
                for j, regressor in enumerate(self.variables):
                    rows.append((equation, regressor, k + 1,
                                 self.coefs[k, i, j],
                                 float('nan') if bse is None else
                                 bse[k, i, j]))
        frame = pd.DataFrame(rows, columns=['equation', 'regressor', 'lag',
                                            'estimate', 'se'])
        with np.errstate(divide='ignore', invalid='ignore'):
            frame['z'] = frame['estimate'] / frame['se']
        return frame

    def __repr__(self):
        return '<%s m=%d p=%d n=%d J=%.4g>' % (
            type(self).__name__, len(self.variables), self.lags, self.n_obs,
            self.j_statistic)


def forward_orthogonal_deviations(ds, variables):
    """Forward orthogonal deviations of each unit's series.  The last month
    of every unit is dropped.

    :raises: :exc:`PanelError` for a unit with a single observation.

    """
    variables = list(variables)
    frames = []
    for unit in ds.units:
        periods, values = ds.unit_block(unit, variables)
        if len(periods) < 2:
            raise PanelError('Unit %s has %d observation of %s; forward '
                             'orthogonal deviations need 2' %
                             (unit, len(periods), ', '.join(variables)))
        index = pd.MultiIndex.from_arrays(
            [[unit] * (len(periods) - 1), periods[:-1]],
            names=['unit', 'period'])
        frames.append(pd.DataFrame(_fod(values), index=index,
                                   columns=variables))
    return PanelDataset.from_frame(pd.concat(frames))


class _Moments(object):
    """Stacked transformed regressions and instruments of a panel."""

    def __init__(self, ds, spec, start=None):
        m, p = len(spec.variables), spec.lags
        if start is None:
            start = spec.sample_start
        first, last = spec.instrument_lags
        need = start + (2 if spec.gmm else 1)
        ys, xs, zs, levels = [], [], [], []
        for unit in ds.units:
            periods, values = ds.unit_block(unit, spec.variables)
            if len(periods) < need:
                raise PanelError(
                    'Insufficient time depth: unit %s has %d months, %s '
                    'needs at least %d' % (unit, len(periods),
                                           spec.describe(), need))
            rows = np.arange(start, len(periods))
            aligned = np.hstack([values[rows - k] for k in range(p + 1)])
            if spec.gmm:
                transformed = _fod(aligned)
                kept = rows[:-1]
                z = np.hstack([values[kept - lag]
                               for lag in range(first, last + 1)])
            else:
                transformed = within_demean(aligned)
                z = transformed[:, m:]
            ys.append(transformed[:, :m])
            xs.append(transformed[:, m:])
            zs.append(z)
            level_rows = np.arange(p, len(periods))
            levels.append((unit, periods[level_rows], values[level_rows],
                           np.hstack([values[level_rows - k]
                                      for k in range(1, p + 1)])))
        self.y = np.vstack(ys)
        self.x = np.vstack(xs)
        self.z = np.vstack(zs)
        self.levels = levels
        self.n = self.y.shape[0]


def _gmm(moments, m):
    """Two-step GMM of every equation on the common instrument set.

    :returns: ``(params, cov, j, residuals)``.

    """
    n, z = moments.n, moments.z
    q = z.shape[1]
    if n <= m * q:
        raise PanelError('Insufficient time depth: %d transformed '
                         'observations for %d moment conditions' % (n, m * q))
    szx = z.T @ moments.x / n
    szy = z.T @ moments.y / n
    szz = z.T @ z / n
    g = np.kron(np.eye(m), szx)
    gy = szy.ravel(order='F')
    def solve(weight):
        gw = g.T @ weight
        hessian = gw @ g
        if np.linalg.matrix_rank(hessian) < hessian.shape[0]:
            raise PanelError('Instruments do not identify the coefficients')
        return np.linalg.solve(hessian, gw @ gy), hessian
    # step 1: identity across equations, two-stage least squares within
    try:
        first = np.kron(np.eye(m), np.linalg.inv(szz))
    except np.linalg.LinAlgError:
        raise PanelError('Singular instrument moment matrix; use fewer '
                         'instrument lags')
    params, __ = solve(first)
    resid = moments.y - moments.x @ params.reshape(m, -1).T
    scores = (resid[:, :, None] * z[:, None, :]).reshape(n, m * q)
    s = scores.T @ scores / n
    if np.linalg.matrix_rank(s) < s.shape[0]:
        raise PanelError('Singular weighting matrix (rank %d of %d); use '
                         'fewer instrument lags' %
                         (np.linalg.matrix_rank(s), s.shape[0]))
    weight = np.linalg.inv(s)
    params, hessian = solve(weight)
    gap = gy - g @ params
    j = float(n * gap @ weight @ gap)
    cov = np.linalg.inv(hessian) / n
    resid = moments.y - moments.x @ params.reshape(m, -1).T
    return params, (cov + cov.T) / 2., max(j, 0.), resid


def _fit(ds, spec, start=None):
    m = len(spec.variables)
    moments = _Moments(ds, spec, start)
    params, cov, j, resid = _gmm(moments, m)
    n_moments, n_params = spec.moment_counts()
    if not spec.gmm:
        j = 0.
    coefs = params.reshape(m, spec.lags, m).transpose(1, 0, 2)
    slopes = params.reshape(m, -1)
    # unit intercepts from the level equations
    intercepts = collections.OrderedDict()
    level_resid = []
    for unit, periods, values, lagged in moments.levels:
        u = values - lagged @ slopes.T
        intercepts[unit] = u.mean(axis=0)
        level_resid.append((unit, periods, u - intercepts[unit]))
    intercept = np.mean(list(intercepts.values()), axis=0)
    fixed_effects = collections.OrderedDict(
        (unit, c - intercept) for unit, c in intercepts.items())
    frame = pd.concat([
        pd.DataFrame(e, columns=list(spec.variables),
                     index=pd.MultiIndex.from_arrays(
                         [[unit] * len(periods), periods],
                         names=['unit', 'period']))
        for unit, periods, e in level_resid])
    sigma = resid.T @ resid / moments.n
    return PvarFit(spec.variables, coefs, (sigma + sigma.T) / 2., cov,
                   intercept, fixed_effects, PanelDataset.from_frame(frame),
                   j, moments.n, n_params, n_moments, spec)


def fit_pvar(ds, spec):
    """Estimates the panel VAR described by ``spec``.

    :raises: :exc:`~assetchannel.panel.PanelError` for insufficient time
             depth or a singular weighting matrix.

    """
    fit = _fit(ds, spec)
    logger.info('PVAR %s: n=%d moments=%d params=%d J=%.4f', spec.describe(),
                fit.n_obs, fit.n_moments, fit.n_params, fit.j_statistic)
    return fit


class LagSelectionTable(object):
    """Moment and model selection criteria per candidate lag.  A lag whose
    moments do not over-identify it is kept as a row without criteria.
    """

    CRITERIA = ('mbic', 'maic', 'mqic')

    def __init__(self, rows, spec):
        self.rows = rows
        self.spec = spec

    def chosen_lag(self, criterion):
        values = [(r[criterion], r['lag']) for r in self.rows
                  if r[criterion] is not None]
        return min(values)[1] if values else None

    @property
    def chosen(self):
        return collections.OrderedDict((c, self.chosen_lag(c))
                                       for c in self.CRITERIA)

    def to_frame(self):
        return pd.DataFrame(
            self.rows, columns=['lag', 'j', 'j_pvalue'] +
            list(self.CRITERIA) + ['n_obs']).astype(
                {c: float for c in ('j', 'j_pvalue') + self.CRITERIA})

    def __repr__(self):
        return '<%s %s>' % (type(self).__name__, ' '.join(
            '%s=%s' % item for item in self.chosen.items()))


def select_lag(ds, spec, max_lag, env=None):
    """Fits lags ``1..max_lag`` on a common sample and ranks them by::

       MBIC = J - (q - k) ln n
       MAIC = J - 2 (q - k)
       MQIC = J - R (q - k) ln ln n

    where ``q`` and ``k`` count the moments and the parameters and ``n``
    the transformed observations.

    """
    if env is None:
        env = global_env()
    if not spec.gmm:
        raise ValueError('Lag selection needs the GMM transform')
    if max_lag < 1:
        raise ValueError('max_lag must be positive')
    start = max(max_lag, spec.instrument_lags[1])
    rows = []
    for lag in range(1, max_lag + 1):
        candidate = spec.with_lags(lag)
        n_moments, n_params = candidate.moment_counts()
        row = {'lag': lag, 'j': None, 'j_pvalue': None, 'mbic': None,
               'maic': None, 'mqic': None, 'n_obs': None}
        if n_moments > n_params:
            try:
                fit = _fit(ds, candidate, start)
            except PanelError as exc:
                logger.info('Lag %d not estimable: %s', lag, exc)
            else:
                over, n = n_moments - n_params, fit.n_obs
                row.update(j=fit.j_statistic, j_pvalue=fit.j_pvalue(env),
                           mbic=fit.j_statistic - over * math.log(n),
                           maic=fit.j_statistic - 2. * over,
                           mqic=fit.j_statistic -
                           env.mqic_r * over * math.log(math.log(n)),
                           n_obs=n)
        else:
            logger.info('Lag %d not estimable: %d moments for %d parameters',
                        lag, n_moments, n_params)
        rows.append(row)
    table = LagSelectionTable(rows, spec)
    if all(r['maic'] is None for r in rows):
        raise PanelError('No lag in 1..%d is estimable with %s' %
                         (max_lag, spec.describe()))
    logger.info('Lag selection (%s): %r', spec.describe(), table.chosen)
    return table


Stability = collections.namedtuple('Stability', ['eigenvalues', 'moduli',
                                                 'stable'])


def companion_eigenvalues(fit):
    """Eigenvalues of the companion matrix, largest modulus first.  The fit
    is stable when every modulus is below 1.
    """
    eigenvalues = np.linalg.eigvals(fit.companion())
    moduli = np.abs(eigenvalues)
    order = np.argsort(-moduli, kind='stable')
    eigenvalues, moduli = eigenvalues[order], moduli[order]
    return Stability(eigenvalues, moduli, bool((moduli < 1).all()))


def eigenvalue_frame(stability):
    return pd.DataFrame({'real': stability.eigenvalues.real,
                         'imag': stability.eigenvalues.imag,
                         'modulus': stability.moduli})


class IrfResult(object):
    """Orthogonalized impulse responses indexed ``[response, shock,
    horizon]``.

    :attr responses: responses to one-standard-deviation shocks.
    :attr unit_responses: responses to shocks moving the shocked variable by
                          one unit on impact.
    :attr lower, upper: the percentile bands of ``responses``.

    """

    def __init__(self, variables, responses, lower, upper, impact,
                 band_level, n_draws, seed):
        self.variables = tuple(variables)
        self.responses = responses
        self.lower = lower
        self.upper = upper
        self.impact = impact
        self.band_level = band_level
        self.n_draws = n_draws
        self.seed = seed
        scale = 1. / np.diag(impact)[None, :, None]
        self.unit_responses = responses * scale
        self.unit_lower = lower * scale
        self.unit_upper = upper * scale

    @property
    def horizons(self):
        return np.arange(self.responses.shape[2])

    def response(self, response, shock):
        """Point, lower and upper paths of one response to one shock."""
        i = self.variables.index(response)
        j = self.variables.index(shock)
        return self.responses[i, j], self.lower[i, j], self.upper[i, j]

    def to_frame(self):
        rows = []
        for i, response in enumerate(self.variables):
            for j, shock in enumerate(self.variables):
                for h in self.horizons:
                    rows.append((response, shock, h, self.responses[i, j, h],
                                 self.lower[i, j, h], self.upper[i, j, h],
                                 self.unit_responses[i, j, h],
                                 self.unit_lower[i, j, h],
                                 self.unit_upper[i, j, h]))
        return pd.DataFrame(rows, columns=[
            'response', 'shock', 'horizon', 'point', 'lower', 'upper',
            'unit_point', 'unit_lower', 'unit_upper'])

    def __repr__(self):
        return '<%s m=%d H=%d draws=%d band=%.2f>' % (
            type(self).__name__, len(self.variables), self.horizons[-1],
            self.n_draws, self.band_level)


def _cholesky(sigma):
    eigenvalues = np.linalg.eigvalsh(sigma)
    if eigenvalues.min() <= 0:
        raise ValueError('Residual covariance is not positive definite; '
                         'smallest eigenvalue %.6g' % eigenvalues.min())
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise ValueError('Residual covariance is not positive definite; '
                         'smallest eigenvalue %.6g' % eigenvalues.min())


def _responses(coefs, impact, horizon):
    return (ma_coefficients(list(coefs), horizon) @ impact).transpose(1, 2, 0)


def _draw_factor(cov):
    eigenvalues, vectors = np.linalg.eigh((cov + cov.T) / 2.)
    return vectors * np.sqrt(np.clip(eigenvalues, 0, None))


def orthogonalized_irf(fit, ordering=None, horizon=IRF_HORIZON,
                       n_draws=IRF_DRAWS, seed=IRF_SEED, band_level=IRF_BAND):
    """Impulse responses to Cholesky-orthogonalized shocks.

    The impact matrix is the lower triangular Cholesky factor of the
    residual covariance in the given ordering, so a variable responds on
    impact only to shocks of the variables ordered before it.  Bands are
    percentiles of the responses under ``n_draws`` coefficient vectors drawn
    from the normal approximation of the estimates; the impact matrix is
    held at its estimate.  Draw ``d`` uses the ``d``-th child of
    ``numpy.random.SeedSequence(seed)``.

    :raises: :exc:`ValueError` when the residual covariance is not positive
             definite.

    """
    if ordering is None:
        ordering = fit.variables
    ordering = tuple(ordering)
    if sorted(ordering) != sorted(fit.variables) or \
            len(set(ordering)) != len(ordering):
        raise ValueError('Ordering %s is not a permutation of %s' %
                         (', '.join(ordering), ', '.join(fit.variables)))
    if not 0 < band_level < 1:
        raise ValueError('band_level must be in (0, 1)')
    if horizon < 0:
        raise ValueError('horizon must be nonnegative')
    stability = companion_eigenvalues(fit)
    if not stability.stable:
        warnings.warn('PVAR is not stable (largest modulus %.4f); impulse '
                      'responses diverge' % stability.moduli[0])
        logger.warning('Impulse responses of an unstable PVAR')
    idx = [fit.variables.index(v) for v in ordering]
    sigma = fit.sigma[np.ix_(idx, idx)]
    impact = _cholesky(sigma)
    coefs = fit.coefs[:, idx][:, :, idx]
    point = _responses(coefs, impact, horizon)
    if n_draws:
        if fit.coef_cov is None:
            raise ValueError('Bands need the coefficient covariance')
        factor = _draw_factor(fit.coef_cov)
        params = fit.params
        draws = np.empty((n_draws,) + point.shape)
        children = np.random.SeedSequence(seed).spawn(n_draws)
        for d, child in enumerate(children):
            rng = np.random.default_rng(child)
            drawn = params + factor @ rng.standard_normal(len(params))
            drawn_coefs = fit.coefs_from_params(drawn)[:, idx][:, :, idx]
            draws[d] = _responses(drawn_coefs, impact, horizon)
        tail = 50. * (1. - band_level)
        lower = np.percentile(draws, tail, axis=0)
        upper = np.percentile(draws, 100. - tail, axis=0)
        lower = np.minimum(lower, point)
        upper = np.maximum(upper, point)
    else:
        lower, upper = point.copy(), point.copy()
    logger.info('IRF ordering=%s horizon=%d draws=%d seed=%r band=%.2f; '
                'Cholesky identification ignores simultaneity beyond the '
                'ordering', ','.join(ordering), horizon, n_draws, seed,
                band_level)
    return IrfResult(ordering, point, lower, upper, impact, band_level,
                     n_draws, seed)
