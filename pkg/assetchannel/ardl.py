# -*- coding: utf-8 -*-
"""
   assetchannel.ardl
   ~~~~~~~~~~~~~~~~~

   Panel ARDL models in error-correction form::

      dy_it = phi_i (y_i,t-1 - theta' x_it) + sum_j gamma_ij dy_i,t-j
              + sum_j delta_ij' dx_i,t-j + mu_i + e_it

   estimated unit by unit (mean group) or with a common long-run vector
   ``theta`` by maximum likelihood (pooled mean group).

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
from .mathematics import RankError, collinear_columns, ols


__all__ = ['ArdlSpec', 'UnitArdlFit', 'PmgFit', 'MgFit', 'ConvergenceError',
           'fit_unit_ardl', 'fit_pmg', 'fit_mg', 'half_life', 'pmg_table',
           'mg_table', 'ESTIMATORS', 'ECT_CRITICAL', 'MAX_ITERATIONS',
           'TOLERANCE', 'MAX_HALVINGS', 'FOOTNOTES']


logger = logging.getLogger(__name__)


ESTIMATORS = ('PMG', 'MG')
#: A unit whose error-correction t-statistic is above this 5% Dickey-Fuller
#: critical value (with intercept) is flagged as non-converging.
ECT_CRITICAL = -2.86
#: Newton iteration cap of the pooled mean group estimator.
MAX_ITERATIONS = 500
#: Newton stops when no long-run coefficient moves more than this.
TOLERANCE = 1e-8
#: Step-halvings tried before a Newton step is given up.
MAX_HALVINGS = 30
#: Half-life range stated alongside the published error-correction terms.
STATED_HALF_LIFE_YEARS = (1.5, 3.)

FOOTNOTES = (
    'Error-correction form: dy = phi (y(-1) - theta\'x) + short-run terms. '
    'theta is the long-run relation and phi the speed of adjustment; the '
    'printed model equation labels the two the other way round.',
    'Significance: * 10%, ** 5%, *** 1%.',
)


class ConvergenceError(ArithmeticError):
    """Raised when the pooled mean group iteration does not converge.  The
    visited long-run vectors are kept in :attr:`trajectory`.
    """

    def __init__(self, message, trajectory):
        super(ConvergenceError, self).__init__(message)
        self.trajectory = trajectory


class ArdlSpec(object):
    """An ARDL(p, q_1, ..., q_k) in error-correction form.

    :param dependent: the dependent variable.
    :param regressors: the long-run regressors.
    :param lags: ``(p, q)`` where ``q`` is one order for every regressor or
                 a sequence (or mapping) of orders per regressor.
    :param estimator: ``'PMG'`` or ``'MG'``.

    """

    def __init__(self, dependent, regressors, lags=(1, 1), estimator='PMG'):
        regressors = tuple(regressors)
        if not regressors:
            raise ValueError('No regressors')
        if dependent in regressors or len(set(regressors)) != len(regressors):
            raise ValueError('Variables must be distinct')
        p, q = lags
        if isinstance(q, dict):
            q = [q[r] for r in regressors]
        elif isinstance(q, (int, np.integer)):
            q = [q] * len(regressors)
        q = tuple(int(x) for x in q)
        if len(q) != len(regressors):
            raise ValueError('Need one lag order per regressor')
        if p < 1 or any(x < 0 for x in q):
            raise ValueError('Lag orders must satisfy p >= 1, q >= 0')
        if estimator not in ESTIMATORS:
            raise ValueError('Unknown estimator %r, expected one of %s' %
                             (estimator, ', '.join(ESTIMATORS)))
        self.dependent = dependent
        self.regressors = regressors
        self.p = int(p)
        self.q = q
        self.estimator = estimator

    @property
    def variables(self):
        return (self.dependent,) + self.regressors

    @property
    def start(self):
        """The first usable month of a unit."""
        return max((self.p,) + self.q + (1,))

    def describe(self):
        return 'ARDL(%d,%s) %s on %s' % (
            self.p, ','.join(map(str, self.q)), self.dependent,
            ','.join(self.regressors))

    def __repr__(self):
        return '<%s %s %s>' % (type(self).__name__, self.estimator,
                               self.describe())


class _UnitData(object):
    """The error-correction regression of one unit, split into the
    long-run part (``y_lag``, ``x``) and the short-run part ``w``.
    """

    def __init__(self, unit, values, spec):
        values = np.asarray(values, dtype=float)
        t = values.shape[0]
        if t < spec.start + 2:
            raise ValueError('Unit %s has %d months; %s needs at least %d' %
                             (unit, t, spec.describe(), spec.start + 2))
        y, x = values[:, 0], values[:, 1:]
        rows = np.arange(spec.start, t)
        diff = np.diff(values, axis=0)
        self.unit = unit
        self.dy = diff[rows - 1, 0]
        self.y_lag = y[rows - 1]
        self.x = x[rows]
        columns, names = [], []
        for j in range(1, spec.p):
            columns.append(diff[rows - 1 - j, 0])
            names.append('d_%s_lag%d' % (spec.dependent, j))
        for r, (name, q) in enumerate(zip(spec.regressors, spec.q)):
            for j in range(q):
                columns.append(diff[rows - 1 - j, 1 + r])
                names.append('d_%s' % name if j == 0 else
                             'd_%s_lag%d' % (name, j))
        columns.append(np.ones(len(rows)))
        names.append('const')
        self.w = np.column_stack(columns)
        self.w_names = names
        self.n = len(rows)
        if np.linalg.matrix_rank(self.w) < self.w.shape[1]:
            raise RankError(collinear_columns(self.w, names))
        q, __ = np.linalg.qr(self.w)
        self._q = q
        self.dy_t = self.annihilate(self.dy)
        self.y_lag_t = self.annihilate(self.y_lag)
        self.x_t = self.annihilate(self.x)

    def annihilate(self, v):
        """Residual of ``v`` after projecting on the short-run regressors."""
        return v - self._q @ (self._q.T @ v)

    def concentrated(self, theta):
        """``(phi, e, sigma2, xi)`` at the long-run vector ``theta``."""
        xi = self.y_lag_t - self.x_t @ theta
        b = float(xi @ xi)
        phi = float(xi @ self.dy_t) / b
        e = self.dy_t - phi * xi
        return phi, e, float(e @ e) / self.n, xi


class UnitArdlFit(object):
    """The error-correction regression of one unit.

    :attr phi: the speed of adjustment.
    :attr theta: the long-run coefficients, ``-beta / phi``.
    :attr short_run: an ordered dict of the short-run coefficients and the
                     intercept.
    :attr non_converging: ``True`` when ``phi`` is outside ``(-2, 0)`` or
                          not significantly negative.

    """

    def __init__(self, unit, regressors, phi, theta, short_run, sigma2,
                 phi_se=float('nan'), theta_se=None, n_obs=0, resid=None):
        self.unit = unit
        self.regressors = tuple(regressors)
        self.phi = phi
        self.theta = theta
        self.short_run = short_run
        self.sigma2 = sigma2
        self.phi_se = phi_se
        self.theta_se = theta_se
        self.n_obs = n_obs
        self.resid = resid

    @property
    def intercept(self):
        return self.short_run.get('const', 0.)

    @property
    def phi_t(self):
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.float64(self.phi) / np.float64(self.phi_se)

    @property
    def non_converging(self):
        return not -2 < self.phi < 0 or self.phi_t > ECT_CRITICAL

    def __repr__(self):
        return '<%s %s phi=%.4f theta=%s>' % (
            type(self).__name__, self.unit, self.phi,
            np.array2string(np.asarray(self.theta), precision=4))


def _unit_values(data, spec):
    if isinstance(data, pd.DataFrame):
        data = data[list(spec.variables)].to_numpy(dtype=float)
    values = np.asarray(data, dtype=float)
    if values.ndim != 2 or values.shape[1] != len(spec.variables):
        raise ValueError('Unit data must have columns %s' %
                         ', '.join(spec.variables))
    if not np.isfinite(values).all():
        raise ValueError('Unit data contain absent values')
    return values


def fit_unit_ardl(data, spec, unit=None):
    """Least squares of the unrestricted error-correction regression::

       dy_t = phi y_t-1 + beta' x_t + short-run terms + mu

    with ``theta = -beta / phi`` and delta-method standard errors.

    :param data: a frame with the dependent variable and the regressors as
                 columns, or an array with them in that order.
    :raises: :exc:`~assetchannel.mathematics.RankError` naming collinear
             columns.

    """
    values = _unit_values(data, spec)
    d = _UnitData(unit, values, spec)
    names = ['y_lag'] + list(spec.regressors) + d.w_names
    fit = ols(d.dy, np.column_stack([d.y_lag, d.x, d.w]), names)
    k = len(spec.regressors)
    phi, beta = float(fit.coef[0]), fit.coef[1:1 + k]
    cov = fit.cov[:1 + k, :1 + k]
    if phi == 0:
        theta = np.full(k, float('nan'))
        theta_se = np.full(k, float('nan'))
    else:
        theta = -beta / phi
        # gradient of -beta / phi in (phi, beta)
        grad = np.column_stack([beta / phi ** 2, -np.eye(k) / phi])
        theta_se = np.sqrt(np.clip(np.diag(grad @ cov @ grad.T), 0, None))
    short_run = collections.OrderedDict(
        zip(d.w_names, fit.coef[1 + k:].tolist()))
    result = UnitArdlFit(unit, spec.regressors, phi, theta, short_run,
                         fit.sigma2, float(fit.se[0]), theta_se, d.n,
                         fit.resid)
    if result.non_converging:
        warnings.warn('non-converging unit %s: phi=%.4f, t=%.2f' %
                      (unit, phi, result.phi_t))
        logger.warning('Non-converging unit %s (phi=%.4f)', unit, phi)
    return result


def _panel_units(ds, spec):
    for unit in ds.units:
        __, values = ds.unit_block(unit, spec.variables)
        yield unit, values


def _collect_unit_fits(ds, spec):
    fits, failed = [], []
    for unit, values in _panel_units(ds, spec):
        try:
            fits.append(fit_unit_ardl(values, spec, unit))
        except ValueError as exc:
            warnings.warn('unit %s excluded: %s' % (unit, exc))
            logger.warning('Unit %s excluded from the mean group: %s', unit,
                           exc)
            failed.append(unit)
    return fits, failed


def _mean_and_se(values):
    values = np.asarray(values, dtype=float)
    mean = values.mean(axis=0)
    if len(values) < 2:
        return mean, np.full_like(mean, float('nan'))
    return mean, values.std(axis=0, ddof=1) / math.sqrt(len(values))


class MgFit(object):
    """Mean group estimates: unweighted averages of the unit fits."""

    def __init__(self, spec, per_unit, excluded=()):
        self.spec = spec
        self.per_unit = per_unit
        self.excluded = list(excluded)
        thetas = np.vstack([f.theta for f in per_unit])
        self.theta_mg, self.se = _mean_and_se(thetas)
        self.phi_mg, self.phi_se = _mean_and_se([f.phi for f in per_unit])
        names = per_unit[0].short_run.keys()
        self.short_run = collections.OrderedDict(
            (n, float(np.mean([f.short_run[n] for f in per_unit])))
            for n in names)

    @property
    def theta(self):
        return self.theta_mg

    @property
    def n_units(self):
        return len(self.per_unit)

    @property
    def non_converging(self):
        return [f.unit for f in self.per_unit if f.non_converging]

    def __repr__(self):
        return '<%s %s N=%d theta=%s>' % (
            type(self).__name__, self.spec.describe(), self.n_units,
            np.array2string(self.theta_mg, precision=4))


def fit_mg(ds, spec):
    """Mean group estimator.  Units whose regression fails are excluded
    with a warning.
    """
    fits, failed = _collect_unit_fits(ds, spec)
    if not fits:
        raise ValueError('Every unit failed: %s' % ', '.join(map(str, failed)))
    if len(fits) + len(failed) < 2:
        raise ValueError('Mean group needs at least 2 units')
    result = MgFit(spec, fits, failed)
    logger.info('MG %s: N=%d theta=%s', spec.describe(), result.n_units,
                np.array2string(result.theta_mg, precision=6))
    return result


class PmgFit(object):
    """Pooled mean group estimates.

    :attr theta: the common long-run vector.
    :attr cov: its covariance, the inverse of the negative Hessian of the
               concentrated log-likelihood.
    :attr per_unit: unit fits sharing ``theta``.
    :attr pooled_phi: the observation-weighted mean of the unit speeds.

    """

    def __init__(self, spec, theta, cov, per_unit, log_likelihood,
                 iterations, trajectory):
        self.spec = spec
        self.theta = theta
        self.cov = cov
        self.theta_se = np.sqrt(np.clip(np.diag(cov), 0, None))
        self.per_unit = per_unit
        self.log_likelihood = log_likelihood
        self.iterations = iterations
        self.trajectory = trajectory
        weights = np.array([f.n_obs for f in per_unit], dtype=float)
        weights /= weights.sum()
        phis = np.array([f.phi for f in per_unit])
        self.pooled_phi = float(weights @ phis)
        if len(per_unit) > 1:
            spread = float(weights @ (phis - self.pooled_phi) ** 2)
            self.pooled_phi_se = math.sqrt(spread / (len(per_unit) - 1))
        else:
            self.pooled_phi_se = per_unit[0].phi_se
        names = per_unit[0].short_run.keys()
        self.short_run = collections.OrderedDict(
            (n, float(weights @ [f.short_run[n] for f in per_unit]))
            for n in names)

    @property
    def phi(self):
        return collections.OrderedDict((f.unit, f.phi) for f in self.per_unit)

    def confidence_interval(self, level=.95, env=None):
        """Normal intervals of ``theta``: ``(lower, upper)`` arrays."""
        if env is None:
            env = global_env()
        z = env.ppf(.5 + level / 2.)
        return self.theta - z * self.theta_se, self.theta + z * self.theta_se

    def __repr__(self):
        return '<%s %s theta=%s pooled_phi=%.4f iterations=%d>' % (
            type(self).__name__, self.spec.describe(),
            np.array2string(self.theta, precision=4), self.pooled_phi,
            self.iterations)


def _pmg_state(units, theta):
    """Log-likelihood, gradient and Hessian at ``theta``."""
    loglik, k = 0., len(theta)
    grad, hess, scoring = np.zeros(k), np.zeros((k, k)), np.zeros((k, k))
    for d in units:
        phi, e, sigma2, xi = d.concentrated(theta)
        if sigma2 <= 0:
            raise FloatingPointError('Unit %s fits without error' % d.unit)
        u = d.x_t.T @ e
        v = d.x_t.T @ (e - phi * xi)
        b = float(xi @ xi)
        xx = d.x_t.T @ d.x_t
        loglik -= .5 * d.n * (1. + math.log(2 * math.pi) + math.log(sigma2))
        grad -= phi * u / sigma2
        hess += (-(phi ** 2 * xx - np.outer(v, v) / b) / sigma2 +
                 2 * phi ** 2 * np.outer(u, u) / (d.n * sigma2 ** 2))
        scoring -= phi ** 2 * xx / sigma2
    return loglik, grad, hess, scoring


def _negative_definite(matrix):
    return np.linalg.eigvalsh((matrix + matrix.T) / 2.).max() < 0


def _line_search(units, theta, step, loglik):
    """Halves ``step`` until the log-likelihood does not fall.  Returns the
    new point and its state, or ``(None, None)``.
    """
    scale = 1.
    for __ in range(MAX_HALVINGS + 1):
        candidate = theta + scale * step
        state = _pmg_state(units, candidate)
        if state[0] >= loglik:
            return candidate, state
        scale /= 2.
    return None, None


def fit_pmg(ds, spec, theta0=None, max_iterations=MAX_ITERATIONS,
            tolerance=TOLERANCE):
    """Pooled mean group estimator.

    Maximizes the log-likelihood concentrated in the unit speeds and
    short-run coefficients over the common ``theta`` by Newton steps with
    step-halving, starting from the mean group estimate.  Where the Hessian
    is not negative definite the step falls back to scoring.

    :raises: :exc:`ConvergenceError` after ``max_iterations`` or when no
             step ascends away from a point that is not stationary.

    """
    units = [_UnitData(unit, values, spec)
             for unit, values in _panel_units(ds, spec)]
    if not units:
        raise ValueError('No unit observes %s' % ', '.join(spec.variables))
    if theta0 is None:
        fits, __ = _collect_unit_fits(ds, spec)
        usable = [f.theta for f in fits if np.isfinite(f.theta).all()]
        if not usable:
            raise ValueError('No unit gives a starting long-run vector')
        theta0 = np.mean(usable, axis=0)
    theta = np.asarray(theta0, dtype=float).copy()
    trajectory = [theta.copy()]
    loglik, grad, hess, scoring = _pmg_state(units, theta)
    converged = False
    for iteration in range(1, max_iterations + 1):
        curvatures = [scoring]
        if _negative_definite(hess):
            curvatures.insert(0, hess)
        for curvature in curvatures:
            step = -np.linalg.solve(curvature, grad)
            candidate, state = _line_search(units, theta, step, loglik)
            if state is not None:
                break
        else:
            # the scoring step measures the gradient in units of theta
            if np.abs(step).max() < tolerance:
                converged = True
                break
            raise ConvergenceError(
                'PMG found no ascent after %d halvings at iteration %d '
                '(max|step|=%.3g)' % (MAX_HALVINGS, iteration,
                                      np.abs(step).max()), trajectory)
        change = np.abs(candidate - theta).max()
        theta = candidate
        loglik, grad, hess, scoring = state
        trajectory.append(theta.copy())
        logger.debug('PMG iteration %d: loglik=%.10f max|dtheta|=%.3g',
                     iteration, loglik, change)
        if change < tolerance:
            converged = True
            break
    if not converged:
        raise ConvergenceError('PMG did not converge in %d iterations' %
                               max_iterations, trajectory)
    if not _negative_definite(hess):
        warnings.warn('saddle point suspected: Hessian not negative definite '
                      'at the optimum')
        logger.warning('PMG Hessian not negative definite at the optimum')
        cov = np.linalg.pinv(-hess)
    else:
        cov = np.linalg.inv(-hess)
    per_unit = []
    for d in units:
        phi, e, sigma2, xi = d.concentrated(theta)
        kappa, __, __, __ = np.linalg.lstsq(d.w, d.dy - phi * (
            d.y_lag - d.x @ theta), rcond=None)
        fit = UnitArdlFit(d.unit, spec.regressors, phi, theta,
                          collections.OrderedDict(zip(d.w_names,
                                                      kappa.tolist())),
                          sigma2, math.sqrt(sigma2 / float(xi @ xi)),
                          n_obs=d.n, resid=e)
        if phi >= 0:
            logger.warning('Unit %s does not error-correct (phi=%.4f)',
                           d.unit, phi)
        per_unit.append(fit)
    result = PmgFit(spec, theta, (cov + cov.T) / 2., per_unit, loglik,
                    len(trajectory) - 1, trajectory)
    logger.info('PMG %s: theta=%s pooled phi=%.4f after %d iterations',
                spec.describe(), np.array2string(theta, precision=6),
                result.pooled_phi, result.iterations)
    return result


def half_life(phi):
    """Months until half of a deviation from the long-run relation is
    corrected, ``ln(0.5) / ln(1 + phi)``.

    >>> half_life(-0.5)
    1.0

    """
    if not -1 < phi < 0:
        raise ValueError('no stable half-life for phi=%r' % (phi,))
    return math.log(.5) / math.log1p(phi)


def _display(estimate, se, env):
    if not np.isfinite(se) or se == 0:
        return '%.4f' % estimate, '', float('nan')
    p_value = env.two_sided_p(estimate / se)
    return ('%.4f%s' % (estimate, env.stars(p_value)), '(%.4f)' % se,
            p_value)


def _half_life_row(phi):
    try:
        months = half_life(phi)
    except ValueError:
        return None, None
    return months, months / 12.


def half_life_note(phi):
    months, years = _half_life_row(phi)
    if months is None:
        return 'No stable half-life for phi=%.4f.' % phi
    low, high = STATED_HALF_LIFE_YEARS
    note = ('Implied half-life %.1f months (%.2f years) from phi=%.4f.' %
            (months, years, phi))
    if not low <= years <= high:
        note += (' This is outside the %.1f-%.0f year range stated next to '
                 'the published error-correction terms.' % (low, high))
    return note


def pmg_table(fit, env=None):
    """Long-run coefficients, the pooled error-correction term and the
    implied half-life in the layout of a published PMG table.
    """
    if env is None:
        env = global_env()
    rows = []
    for name, estimate, se in zip(fit.spec.regressors, fit.theta,
                                  fit.theta_se):
        shown, shown_se, p_value = _display(estimate, se, env)
        rows.append((name, estimate, se, p_value, shown, shown_se))
    shown, shown_se, p_value = _display(fit.pooled_phi, fit.pooled_phi_se,
                                        env)
    rows.append(('ect', fit.pooled_phi, fit.pooled_phi_se, p_value, shown,
                 shown_se))
    months, years = _half_life_row(fit.pooled_phi)
    for name, value in (('half_life_months', months),
                        ('half_life_years', years)):
        rows.append((name, value, None, None,
                     '' if value is None else '%.2f' % value, ''))
    rows.append(('log_likelihood', fit.log_likelihood, None, None,
                 '%.4f' % fit.log_likelihood, ''))
    return pd.DataFrame(rows, columns=['term', 'estimate', 'se', 'p_value',
                                       'display', 'display_se'])


def mg_table(fit, env=None):
    """Mean group long-run coefficients and error-correction term."""
    if env is None:
        env = global_env()
    rows = []
    for name, estimate, se in zip(fit.spec.regressors, fit.theta_mg,
                                  fit.se):
        shown, shown_se, p_value = _display(estimate, se, env)
        rows.append((name, estimate, se, p_value, shown, shown_se))
    shown, shown_se, p_value = _display(fit.phi_mg, fit.phi_se, env)
    rows.append(('ect', fit.phi_mg, fit.phi_se, p_value, shown, shown_se))
    rows.append(('n_units', fit.n_units, None, None, str(fit.n_units), ''))
    return pd.DataFrame(rows, columns=['term', 'estimate', 'se', 'p_value',
                                       'display', 'display_se'])
