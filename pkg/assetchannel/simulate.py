# -*- coding: utf-8 -*-
"""
   assetchannel.simulate
   ~~~~~~~~~~~~~~~~~~~~~

   Data generating processes with known parameters.  Every draw comes from a
   single ``numpy.random.PCG64`` stream seeded by the configuration, so a
   seed reproduces a dataset bit for bit on the same numpy.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import collections
import logging

import numpy as np
import pandas as pd

from .index import ConstituentSeries
from .mathematics import companion_matrix
from .panel import PanelDataset, to_period


__all__ = ['DgpConfig', 'Simulation', 'draw', 'generate',
           'generate_constituents', 'generator_name', 'KINDS', 'BURN_IN',
           'START']


logger = logging.getLogger(__name__)


KINDS = ('panel_var', 'cointegrated_ecm', 'independent_random_walks',
         'white_noise')
INNOVATIONS = ('gaussian', 'student_t')
#: Periods drawn and discarded before the first kept month.
BURN_IN = 200
#: First month of simulated panels.
START = '2010-01'


def generator_name():
    """The bit generator behind every simulation and the numpy providing
    it.
    """
    return 'numpy.random.PCG64 (numpy %s)' % np.__version__


def _generator(seed):
    return np.random.Generator(np.random.PCG64(seed))


class DgpConfig(object):
    """A data generating process.

    :param kind: ``'panel_var'``, ``'cointegrated_ecm'``,
                 ``'independent_random_walks'`` or ``'white_noise'``.
    :param coefs: ``A_1..A_p`` of a panel VAR.
    :param cov: innovation covariance (of the VAR, the random walks or the
                white noise).  Defaults to the identity.
    :param variables: variable names; for ``cointegrated_ecm`` the
                      dependent variable comes first.
    :param fixed_effect_scale: standard deviation of the unit effects.
    :param unit_root: allows a panel VAR that is not stable.
    :param theta: mean long-run coefficients of ``cointegrated_ecm``.
    :param theta_spread: unit long-run coefficients spread linearly over
                         ``theta +- theta_spread``, first unit lowest.
    :param phi: ``(low, high)`` of the uniform speeds of adjustment.
    :param short_run: coefficient on the contemporaneous regressor
                      differences.
    :param noise_scale: standard deviation of the error-correction
                        equation's error.
    :param regressor_scales: per-unit standard deviation of the regressor
                             innovations.
    :param innovation: ``'gaussian'`` or ``'student_t'`` (scaled to unit
                       variance, ``df`` degrees of freedom).
    :param units: unit names, ``U1..UN`` by default.

    """

    def __init__(self, kind, n_units=6, n_periods=165, seed=42, coefs=None,
                 cov=None, variables=None, fixed_effect_scale=1.,
                 unit_root=False, theta=(1.,), theta_spread=0.,
                 phi=(-.3, -.1), short_run=0., noise_scale=1.,
                 regressor_scales=None, innovation='gaussian', df=5,
                 burn_in=BURN_IN, start=START, units=None):
        if kind not in KINDS:
            raise ValueError('Unknown kind %r, expected one of %s' %
                             (kind, ', '.join(KINDS)))
        if innovation not in INNOVATIONS:
            raise ValueError('Unknown innovation %r, expected one of %s' %
                             (innovation, ', '.join(INNOVATIONS)))
        if n_units < 1 or n_periods < 2:
            raise ValueError('Need at least 1 unit and 2 periods')
        if innovation == 'student_t' and df <= 2:
            raise ValueError('Student-t innovations need df > 2')
        self.kind = kind
        self.n_units = int(n_units)
        self.n_periods = int(n_periods)
        self.seed = seed
        self.fixed_effect_scale = float(fixed_effect_scale)
        self.unit_root = bool(unit_root)
        self.theta = np.atleast_1d(np.asarray(theta, dtype=float))
        self.theta_spread = float(theta_spread)
        low, high = phi
        if low > high:
            raise ValueError('phi must be (low, high)')
        self.phi = (float(low), float(high))
        self.short_run = float(short_run)
        self.noise_scale = float(noise_scale)
        self.innovation = innovation
        self.df = df
        self.burn_in = int(burn_in)
        self.start = to_period(start)
        if units is not None and len(units) != self.n_units:
            raise ValueError('Need %d unit names, got %d' %
                             (self.n_units, len(units)))
        self._units = None if units is None else tuple(map(str, units))
        if kind == 'panel_var':
            if coefs is None:
                coefs = [.5 * np.eye(2)]
            self.coefs = np.asarray(coefs, dtype=float)
            if self.coefs.ndim == 2:
                self.coefs = self.coefs[None]
            m = self.coefs.shape[1]
            moduli = np.abs(np.linalg.eigvals(companion_matrix(
                list(self.coefs))))
            if moduli.max() >= 1 and not self.unit_root:
                raise ValueError('Panel VAR is not stable (largest modulus '
                                 '%.4f); set unit_root to allow it' %
                                 moduli.max())
        else:
            self.coefs = None
            if kind == 'cointegrated_ecm':
                m = len(self.theta) + 1
            elif cov is not None:
                m = np.atleast_2d(cov).shape[0]
            elif variables is not None:
                m = len(variables)
            else:
                m = 2
        if variables is None:
            if kind == 'cointegrated_ecm':
                variables = ['y'] + ['x%d' % (r + 1) for r in range(m - 1)]
            else:
                variables = ['y%d' % (r + 1) for r in range(m)]
        self.variables = tuple(variables)
        if kind == 'panel_var' and cov is not None and \
                np.atleast_2d(cov).shape[0] != m:
            raise ValueError('Covariance does not match the VAR')
        if len(self.variables) != m:
            raise ValueError('Expected %d variable names, got %d' %
                             (m, len(self.variables)))
        width = m - 1 if kind == 'cointegrated_ecm' else m
        self.cov = np.eye(width) if cov is None else \
            np.atleast_2d(np.asarray(cov, dtype=float))
        if kind == 'cointegrated_ecm' and self.cov.shape[0] != width:
            raise ValueError('Regressor covariance must be %d x %d' %
                             (width, width))
        if not np.allclose(self.cov, self.cov.T) or \
                np.linalg.eigvalsh(self.cov).min() <= 0:
            raise ValueError('Innovation covariance must be symmetric '
                             'positive definite')
        if regressor_scales is None:
            regressor_scales = [1.] * self.n_units
        if len(regressor_scales) != self.n_units:
            raise ValueError('Need one regressor scale per unit')
        self.regressor_scales = tuple(float(s) for s in regressor_scales)

    @classmethod
    def from_dict(cls, mapping):
        """The inverse of :meth:`to_dict`; the informational ``generator``
        entry is ignored.
        """
        mapping = dict(mapping)
        mapping.pop('generator', None)
        return cls(**mapping)

    def to_dict(self):
        return collections.OrderedDict([
            ('kind', self.kind), ('n_units', self.n_units),
            ('n_periods', self.n_periods), ('seed', self.seed),
            ('coefs', None if self.coefs is None else self.coefs.tolist()),
            ('cov', self.cov.tolist()), ('variables', list(self.variables)),
            ('fixed_effect_scale', self.fixed_effect_scale),
            ('unit_root', self.unit_root), ('theta', self.theta.tolist()),
            ('theta_spread', self.theta_spread), ('phi', list(self.phi)),
            ('short_run', self.short_run), ('noise_scale', self.noise_scale),
            ('regressor_scales', list(self.regressor_scales)),
            ('innovation', self.innovation), ('df', self.df),
            ('burn_in', self.burn_in), ('start', str(self.start)),
            ('units', self.units),
            ('generator', generator_name()),
        ])

    @property
    def units(self):
        if self._units is not None:
            return list(self._units)
        width = len(str(self.n_units))
        return ['U%0*d' % (width, i + 1) for i in range(self.n_units)]

    def unit_thetas(self):
        if self.n_units == 1 or not self.theta_spread:
            return np.tile(self.theta, (self.n_units, 1))
        offsets = np.linspace(-self.theta_spread, self.theta_spread,
                              self.n_units)
        return self.theta[None, :] + offsets[:, None]

    def __repr__(self):
        return '<%s %s N=%d T=%d seed=%r>' % (type(self).__name__, self.kind,
                                              self.n_units, self.n_periods,
                                              self.seed)


Simulation = collections.namedtuple('Simulation', ['dataset', 'truth',
                                                   'innovations'])


def _innovations(rng, config, size, cov):
    m = cov.shape[0]
    if config.innovation == 'student_t':
        z = rng.standard_t(config.df, size=(size, m))
        z *= np.sqrt((config.df - 2.) / config.df)
    else:
        z = rng.standard_normal((size, m))
    return z @ np.linalg.cholesky(cov).T


def _truth_rows(rows, name, unit, values):
    for index, value in np.ndenumerate(np.asarray(values, dtype=float)):
        suffix = ''.join('[%d]' % i for i in index)
        rows.append((name + suffix, unit, float(value)))


def draw(config, initial_state=0.):
    """Draws a panel and its true parameters.

    :param initial_state: the value every series starts from before the
                          burn-in.
    :returns: a :class:`Simulation` of the dataset, a ``parameter, unit,
              value`` frame of true parameters and the kept innovations as
              an ``(N, T, m)`` array.

    """
    rng = _generator(config.seed)
    units, t, burn = config.units, config.n_periods, config.burn_in
    total = burn + t
    m = len(config.variables)
    truth = []
    effects = config.fixed_effect_scale * rng.standard_normal(
        (config.n_units, m))
    blocks, kept = [], []
    if config.kind == 'panel_var':
        p = config.coefs.shape[0]
        _truth_rows(truth, 'A', '', config.coefs)
        _truth_rows(truth, 'sigma', '', config.cov)
        for i, unit in enumerate(units):
            e = _innovations(rng, config, total, config.cov)
            y = np.empty((total + p, m))
            y[:p] = initial_state
            for s in range(total):
                y[p + s] = effects[i] + e[s]
                for k in range(p):
                    y[p + s] += config.coefs[k] @ y[p + s - 1 - k]
            blocks.append(y[p + burn:])
            kept.append(e[burn:])
            _truth_rows(truth, 'alpha', unit, effects[i])
    elif config.kind == 'cointegrated_ecm':
        thetas = config.unit_thetas()
        phis = rng.uniform(config.phi[0], config.phi[1], config.n_units)
        for i, unit in enumerate(units):
            e = _innovations(rng, config, total, config.cov) * \
                config.regressor_scales[i]
            u = config.noise_scale * rng.standard_normal(total)
            x = initial_state + np.cumsum(e, axis=0)
            dx = np.vstack([e[:1], np.diff(x, axis=0)])
            y = np.empty(total)
            previous = initial_state
            for s in range(total):
                y[s] = previous + effects[i, 0] + phis[i] * (
                    previous - thetas[i] @ x[s]) + \
                    config.short_run * dx[s].sum() + u[s]
                previous = y[s]
            blocks.append(np.column_stack([y, x])[burn:])
            kept.append(np.column_stack([u, e])[burn:])
            _truth_rows(truth, 'theta', unit, thetas[i])
            _truth_rows(truth, 'phi', unit, phis[i])
            _truth_rows(truth, 'mu', unit, effects[i, 0])
        _truth_rows(truth, 'theta_mean', '', thetas.mean(axis=0))
        _truth_rows(truth, 'short_run', '', config.short_run)
    else:
        walk = config.kind == 'independent_random_walks'
        for i, unit in enumerate(units):
            e = _innovations(rng, config, total, config.cov)
            y = initial_state + np.cumsum(e, axis=0) if walk else e.copy()
            blocks.append(y[burn:] + effects[i])
            kept.append(e[burn:])
            _truth_rows(truth, 'alpha', unit, effects[i])
        _truth_rows(truth, 'sigma', '', config.cov)
    periods = pd.period_range(config.start, periods=t, freq='M')
    index = pd.MultiIndex.from_product([units, periods],
                                       names=['unit', 'period'])
    frame = pd.DataFrame(np.vstack(blocks), index=index,
                         columns=list(config.variables))
    logger.debug('Simulated %r with %s', config, generator_name())
    truth = pd.DataFrame(truth, columns=['parameter', 'unit', 'value'])
    return Simulation(PanelDataset.from_frame(frame), truth,
                      np.stack(kept))


def generate(config):
    """Draws a panel from ``config``."""
    return draw(config).dataset


def generate_constituents(n_firms=13, n_periods=165, sector='MAN',
                          countries=('HR', 'SI', 'RS', 'BA', 'ME', 'MK'),
                          seed=42, start=START, gap_rate=.02,
                          late_listing_rate=.2, volatility=.08,
                          log_levels=None):
    """Synthetic listed companies for index construction, with shares
    outstanding reported every January, occasional no-trade months and late
    listings.  The first firm of every country trades every month.

    Prices are geometric random walks, or, given ``log_levels`` (a mapping
    of country to a log price path), that path plus a firm level and
    independent noise of standard deviation ``volatility``.

    """
    rng = _generator(seed)
    periods = pd.period_range(start, periods=n_periods, freq='M')
    reports = pd.PeriodIndex([p for p in periods
                              if p.month == 1 or p == periods[0]], freq='M')
    constituents = []
    for f in range(n_firms):
        country = countries[f % len(countries)]
        level = rng.uniform(0, 3)
        noise = volatility * rng.standard_normal(n_periods)
        if log_levels is None:
            prices = 10. * np.exp(level + np.cumsum(noise + .002))
        else:
            path = np.asarray(log_levels[country], dtype=float)
            prices = np.exp(path[:n_periods] + level + noise)
        present = rng.uniform(size=n_periods) >= gap_rate
        if f >= len(countries) and rng.uniform() < late_listing_rate:
            present[:int(rng.integers(1, n_periods // 2))] = False
        if f < len(countries):
            present[:] = True
        changes = rng.integers(0, 2, size=len(reports)) * \
            rng.integers(0, 100000, size=len(reports))
        shares = np.cumsum(changes) + int(rng.integers(100000, 10000000))
        constituents.append(ConstituentSeries(
            '%s%02d' % (sector[:3], f + 1), country, sector,
            pd.Series(prices[present], index=periods[present]),
            pd.Series(shares.astype(float), index=reports)))
    return constituents
