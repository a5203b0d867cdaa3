# -*- coding: utf-8 -*-
"""
   assetchannel
   ~~~~~~~~~~~~

   Panel econometrics of the asset price channel of monetary policy: sectoral
   stock indices, panel unit roots, panel VAR with orthogonalized impulse
   responses, panel cointegration and pooled mean group estimation.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
from .__about__ import __version__  # noqa
from .backends import choose_backend


__all__ = [
    # environment
    'Environment', 'setup', 'global_env',
    # default values
    'ALPHA', 'MQIC_R',
    # panel data
    'PanelDataset', 'PanelError', 'TransformSpec', 'load_panel_csv',
    'write_panel_csv', 'apply_transform', 'balance',
    # sectoral indices
    'ConstituentSeries', 'SectorIndexSeries', 'compute_weights',
    'build_index', 'build_sector_indices', 'market_depth_indicators',
    # unit roots
    'adf_test', 'fisher_adf', 'fisher_combine',
    # panel VAR
    'PvarSpec', 'PvarFit', 'fit_pvar', 'select_lag',
    'companion_eigenvalues', 'orthogonalized_irf',
    # cointegration
    'kao_test',
    # panel ARDL
    'ArdlSpec', 'fit_unit_ardl', 'fit_pmg', 'fit_mg', 'half_life',
    'ConvergenceError',
    # simulation
    'DgpConfig', 'generate', 'draw',
]


#: Default significance level of every test decision.
ALPHA = .05
#: Default constant of the quasi Hannan-Quinn moment selection criterion.
MQIC_R = 2.1


class Environment(object):
    """Holds the toolkit-wide constants and the distribution functions of a
    numeric backend.  Every function turning a statistic into a p-value
    accepts ``env`` and falls back to the global environment::

       env = Environment(alpha=0.10, backend='scipy')
       adf_test(series, env=env)

    :param alpha: the significance level used for reject decisions and
                  significance reports.
    :param mqic_r: the constant ``R`` of the MQIC penalty
                   ``R (q - k) ln ln n``.
    :param backend: the name of a backend which implements the normal and
                    chi-square distribution functions.  See
                    :mod:`assetchannel.backends` for more details.  Defaults
                    to ``None``.

    """

    def __init__(self, alpha=ALPHA, mqic_r=MQIC_R, backend=None):
        if not 0 < alpha < 1:
            raise ValueError('alpha must be in (0, 1), got %r' % (alpha,))
        self.alpha = alpha
        self.mqic_r = mqic_r
        self.backend = backend
        functions = choose_backend(backend)
        self.cdf = functions.cdf
        self.ppf = functions.ppf
        self.chi2_cdf = functions.chi2_cdf
        self.chi2_sf = functions.chi2_sf

    def stars(self, p_value):
        """Significance stars: ``***`` at 1%, ``**`` at 5%, ``*`` at 10%."""
        for level, mark in ((.01, '***'), (.05, '**'), (.10, '*')):
            if p_value < level:
                return mark
        return ''

    def two_sided_p(self, z):
        return 2. * (1. - self.cdf(abs(z)))

    def make_as_global(self):
        """Registers the environment as the global environment."""
        return setup(env=self)

    def __repr__(self):
        c = type(self)
        return '%s.%s(alpha=%.3f, mqic_r=%.3f, backend=%r)' % (
            c.__module__, c.__name__, self.alpha, self.mqic_r, self.backend)


def global_env():
    """Gets the :class:`Environment` object which is the global
    environment.
    """
    try:
        global_env.__environment__
    except AttributeError:
        # setup the default environment
        setup()
    return global_env.__environment__


def setup(alpha=ALPHA, mqic_r=MQIC_R, backend=None, env=None):
    """Setups the global environment.

    :param env: the specific :class:`Environment` object to be the global
                environment.  It is optional.

    >>> setup(alpha=0.10)  #doctest: +ELLIPSIS
    assetchannel.Environment(alpha=0.100, ...)

    """
    if env is None:
        env = Environment(alpha, mqic_r, backend)
    global_env.__environment__ = env
    return env


# the estimators look the global environment up through this package
from .panel import (  # noqa
    PanelDataset, PanelError, TransformSpec, load_panel_csv, write_panel_csv,
    apply_transform, balance)
from .index import (  # noqa
    ConstituentSeries, SectorIndexSeries, compute_weights, build_index,
    build_sector_indices, market_depth_indicators)
from .unitroot import adf_test, fisher_adf, fisher_combine  # noqa
from .pvar import (  # noqa
    PvarSpec, PvarFit, fit_pvar, select_lag, companion_eigenvalues,
    orthogonalized_irf)
from .coint import kao_test  # noqa
from .ardl import (  # noqa
    ArdlSpec, fit_unit_ardl, fit_pmg, fit_mg, half_life, ConvergenceError)
from .simulate import DgpConfig, generate, draw  # noqa
