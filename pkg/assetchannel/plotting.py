# -*- coding: utf-8 -*-
"""
   assetchannel.plotting
   ~~~~~~~~~~~~~~~~~~~~~

   Minimal SVG figures: companion eigenvalues on the unit circle and impulse
   responses with their bands.  The SVG writer is pinned (hash salt, no
   date, text kept as text) so identical inputs give identical files.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import matplotlib
matplotlib.use('Agg')  # noqa
import matplotlib.pyplot as plt
import numpy as np


__all__ = ['plot_eigenvalues', 'plot_irf', 'SVG_RC']


#: Settings making SVG output reproducible.
SVG_RC = {'svg.hashsalt': 'assetchannel', 'svg.fonttype': 'none',
          'path.simplify': False}


def _save(fig, path):
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)
    return path


def plot_eigenvalues(stability, path, title='Companion eigenvalues'):
    """Eigenvalues as dots against the unit circle."""
    with matplotlib.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        angle = np.linspace(0, 2 * np.pi, 361)
        ax.plot(np.cos(angle), np.sin(angle), color='0.4', linewidth=1)
        ax.axhline(0, color='0.8', linewidth=.5)
        ax.axvline(0, color='0.8', linewidth=.5)
        ax.scatter(stability.eigenvalues.real, stability.eigenvalues.imag,
                   s=14, color='tab:blue', zorder=3)
        limit = max(1.1, float(np.max(stability.moduli, initial=0)) * 1.1)
        ax.set_xlim(-limit, limit)
        ax.set_ylim(-limit, limit)
        ax.set_aspect('equal')
        ax.set_xlabel('Real')
        ax.set_ylabel('Imaginary')
        ax.set_title('%s (%s)' % (title, 'stable' if stability.stable
                                  else 'not stable'))
        return _save(fig, path)


def plot_irf(irf, response, shock, path, unit=False):
    """The response of ``response`` to ``shock`` with its shaded band.

    :param unit: plot the unit-impact normalization instead of the
                 one-standard-deviation shock.

    """
    i, j = irf.variables.index(response), irf.variables.index(shock)
    if unit:
        point, lower, upper = (irf.unit_responses[i, j], irf.unit_lower[i, j],
                               irf.unit_upper[i, j])
    else:
        point, lower, upper = (irf.responses[i, j], irf.lower[i, j],
                               irf.upper[i, j])
    with matplotlib.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        horizons = irf.horizons
        ax.fill_between(horizons, lower, upper, color='tab:blue', alpha=.2,
                        linewidth=0)
        ax.plot(horizons, point, color='tab:blue', linewidth=1.5)
        ax.axhline(0, color='0.3', linewidth=.75)
        ax.set_xlim(horizons[0], horizons[-1])
        ax.set_xlabel('Months')
        ax.set_title('%s to %s shock (%d%% band)' % (
            response, shock, round(100 * irf.band_level)))
        return _save(fig, path)
