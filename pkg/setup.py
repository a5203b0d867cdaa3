# -*- coding: utf-8 -*-
"""
assetchannel
~~~~~~~~~~~~

Panel econometrics of the asset price channel of monetary policy: sectoral
market-cap weighted stock indices, Fisher-ADF panel unit roots, a panel VAR
estimated by GMM with Cholesky impulse responses, Kao's cointegration test
and the pooled mean group / mean group estimators, driven by one YAML
configuration.

.. sourcecode:: python

   from assetchannel import PanelDataset, PvarSpec, fit_pvar, \\
       orthogonalized_irf
   fit = fit_pvar(ds, PvarSpec(['d_irs', 'd_log_index_fin'], lags=2))
   irf = orthogonalized_irf(fit, horizon=24, seed=42)

Or from the shell::

   $ assetchannel simulate --fixture fixture
   $ assetchannel run fixture/config.yaml
   $ assetchannel report fixture/bundle

"""
import os

from setuptools import setup

try:
    from setuptools.command.test import test
except ImportError:
    cmdclass = {}
else:
    # use pytest instead.
    class PyTest(test):
        def run_tests(self):
            raise SystemExit(__import__('pytest').main(['-v']))
    cmdclass = {'test': PyTest}


# include __about__.py.
__dir__ = os.path.dirname(__file__)
about = {}
with open(os.path.join(__dir__, 'assetchannel', '__about__.py')) as f:
    exec(f.read(), about)


setup(
    name='assetchannel',
    version=about['__version__'],
    license=about['__license__'],
    author=about['__author__'],
    author_email=about['__author_email__'],
    url=about['__url__'],
    description=about['__description__'],
    long_description=__doc__,
    platforms='any',
    packages=['assetchannel'],
    python_requires='>=3.8',
    classifiers=['Development Status :: 3 - Alpha',
                 'Intended Audience :: Science/Research',
                 'License :: OSI Approved :: BSD License',
                 'Operating System :: OS Independent',
                 'Programming Language :: Python',
                 'Programming Language :: Python :: 3',
                 'Programming Language :: Python :: Implementation :: CPython',
                 'Topic :: Office/Business :: Financial',
                 'Topic :: Scientific/Engineering :: Mathematics'],
    install_requires=['numpy>=1.20', 'pandas>=1.5', 'PyYAML>=5.1',
                      'matplotlib>=3.3'],
    extras_require={'scipy': ['scipy>=1.6'], 'mpmath': ['mpmath>=0.17']},
    tests_require=['pytest>=2.8.5', 'almost>=0.1.5', 'mpmath>=0.17',
                   'statsmodels>=0.12'],
    entry_points={'console_scripts': [
        'assetchannel = assetchannel.cli:main']},
    cmdclass=cmdclass,
)
