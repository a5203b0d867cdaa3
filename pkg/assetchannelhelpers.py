# -*- coding: utf-8 -*-
from contextlib import contextmanager
import logging

import numpy as np
import pandas as pd

import assetchannel
from assetchannel import PanelDataset


__all__ = ['substituted_env', 'panel_from_arrays', 'replicate',
           'captured_logs']


@contextmanager
def substituted_env(*args, **kwargs):
    """Setup the global environment only within the context::

       assert global_env().alpha == 0.05
       with substituted_env(alpha=0.10):
           assert global_env().alpha == 0.10
    """
    env = assetchannel.global_env()
    params = [['alpha', env.alpha], ['mqic_r', env.mqic_r],
              ['backend', env.backend]]
    # merge settings with previous Environment object
    for x, arg in enumerate(args):
        params[x][1] = arg
    params = dict(params)
    for kw, arg in kwargs.items():
        params[kw] = arg
    try:
        # setup the environment
        yield assetchannel.setup(**params)
    finally:
        # revert the environment
        assetchannel.setup(env=env)


def panel_from_arrays(arrays, variables, start='2010-01'):
    """A :class:`PanelDataset` from a mapping of unit to a ``(T, m)``
    array.
    """
    frames = []
    for unit, values in arrays.items():
        values = np.asarray(values, dtype=float).reshape(len(values), -1)
        periods = pd.period_range(start, periods=len(values), freq='M')
        index = pd.MultiIndex.from_product([[unit], periods],
                                           names=['unit', 'period'])
        frames.append(pd.DataFrame(values, index=index,
                                   columns=list(variables)))
    return PanelDataset.from_frame(pd.concat(frames))


def replicate(f, seeds):
    """Runs ``f(seed)`` for every seed and collects the results."""
    return [f(seed) for seed in seeds]


@contextmanager
def captured_logs(name='assetchannel', level=logging.INFO):
    """Collects the messages logged under ``name`` within the context."""
    records = []
    class Collector(logging.Handler):
        def emit(self, record):
            records.append(record.getMessage())
    handler = Collector(level)
    logger = logging.getLogger(name)
    previous = logger.level
    logger.addHandler(handler)
    logger.setLevel(level)
    try:
        yield records
    finally:
        logger.removeHandler(handler)
        logger.setLevel(previous)
