# -*- coding: utf-8 -*-
"""
   assetchannel.backends
   ~~~~~~~~~~~~~~~~~~~~~

   Provides the statistical distribution backend chooser.  Every test in the
   toolkit ends in a normal or chi-square tail probability; this module
   supplies them from an internal implementation, mpmath or scipy.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import math


__all__ = ['available_backends', 'choose_backend', 'Backend', 'cdf', 'ppf',
           'gammainc', 'chi2_cdf', 'chi2_sf']


#: Relative tolerance of the internal incomplete gamma function.
GAMMAINC_TOLERANCE = 1e-12
#: Iteration cap of the series and continued fraction expansions.
GAMMAINC_MAX_ITERATIONS = 10000

_TINY = 1e-300


def _gen_erfcinv(erfc, math=math):
    """Generates the inverse function of erfc by the given erfc function and
    math module.
    """
    def erfcinv(y):
        """The inverse function of erfc."""
        if y >= 2:
            return -100.
        elif y <= 0:
            return 100.
        zero_point = y < 1
        if not zero_point:
            y = 2 - y
        t = math.sqrt(-2 * math.log(y / 2.))
        x = -0.70711 * \
            ((2.30753 + t * 0.27061) / (1. + t * (0.99229 + t * 0.04481)) - t)
        for i in range(2):
            err = erfc(x) - y
            x += err / (1.12837916709551257 * math.exp(-(x ** 2)) - x * err)
        return x if zero_point else -x
    return erfcinv


def _gen_ppf(erfc, math=math):
    """ppf is the inverse function of cdf.  This function generates ppf by the
    given erfc and math module.
    """
    erfcinv = _gen_erfcinv(erfc, math)
    def ppf(x, mu=0, sigma=1):
        """The inverse function of cdf."""
        return mu - sigma * math.sqrt(2) * erfcinv(2 * x)
    return ppf


def cdf(x, mu=0, sigma=1):
    """Cumulative distribution function of the normal distribution."""
    return 0.5 * math.erfc(-(x - mu) / (sigma * math.sqrt(2)))


ppf = _gen_ppf(math.erfc)


def _gammainc_series(a, x):
    term = total = 1. / a
    n = a
    for __ in range(GAMMAINC_MAX_ITERATIONS):
        n += 1
        term *= x / n
        total += term
        if abs(term) < abs(total) * GAMMAINC_TOLERANCE:
            break
    else:
        raise FloatingPointError('Incomplete gamma series did not converge '
                                 'for a=%r, x=%r' % (a, x))
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gammaincc_fraction(a, x):
    # modified Lentz evaluation of the continued fraction for Q(a, x)
    b = x + 1. - a
    c = 1. / _TINY
    d = 1. / b
    h = d
    for n in range(1, GAMMAINC_MAX_ITERATIONS):
        an = -n * (n - a)
        b += 2.
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1. / d
        delta = d * c
        h *= delta
        if abs(delta - 1.) < GAMMAINC_TOLERANCE:
            break
    else:
        raise FloatingPointError('Incomplete gamma fraction did not converge '
                                 'for a=%r, x=%r' % (a, x))
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammainc(a, x):
    """Regularized lower incomplete gamma function P(a, x)."""
    if a <= 0:
        raise ValueError('a must be positive')
    if x <= 0:
        return 0.
    if x == float('inf'):
        return 1.
    if x < a + 1:
        return _gammainc_series(a, x)
    return 1. - _gammaincc_fraction(a, x)


def _gammaincc(a, x):
    if x <= 0:
        return 1.
    if x == float('inf'):
        return 0.
    if x < a + 1:
        return 1. - _gammainc_series(a, x)
    return _gammaincc_fraction(a, x)


def chi2_cdf(x, dof):
    """Cumulative distribution function of the chi-square distribution."""
    return gammainc(dof / 2., x / 2.)


def chi2_sf(x, dof):
    """Upper tail probability of the chi-square distribution."""
    if dof <= 0:
        raise ValueError('dof must be positive')
    return _gammaincc(dof / 2., x / 2.)


class Backend(object):
    """The distribution functions of one backend."""

    def __init__(self, name, cdf, ppf, gammainc, chi2_cdf, chi2_sf):
        self.name = name
        self.cdf = cdf
        self.ppf = ppf
        self.gammainc = gammainc
        self.chi2_cdf = chi2_cdf
        self.chi2_sf = chi2_sf

    def __repr__(self):
        return '<%s %r>' % (type(self).__name__, self.name)


def _mpmath_backend():
    try:
        import mpmath
    except ImportError:
        raise ImportError('Install "mpmath" to use this backend')
    def mp_gammainc(a, x):
        return float(mpmath.gammainc(a, 0, x, regularized=True))
    def mp_chi2_cdf(x, dof):
        return mp_gammainc(dof / 2., x / 2.)
    def mp_chi2_sf(x, dof):
        if x <= 0:
            return 1.
        return float(mpmath.gammainc(dof / 2., x / 2., mpmath.inf,
                                     regularized=True))
    def mp_cdf(x, mu=0, sigma=1):
        return float(mpmath.ncdf(x, mu, sigma))
    mp_ppf = _gen_ppf(mpmath.erfc, math=mpmath)
    return Backend('mpmath', mp_cdf, lambda *a, **k: float(mp_ppf(*a, **k)),
                   mp_gammainc, mp_chi2_cdf, mp_chi2_sf)


def _scipy_backend():
    try:
        from scipy import special
        from scipy.stats import chi2, norm
    except ImportError:
        raise ImportError('Install "scipy" to use this backend')
    return Backend('scipy',
                   lambda x, mu=0, sigma=1: float(norm.cdf(x, mu, sigma)),
                   lambda x, mu=0, sigma=1: float(norm.ppf(x, mu, sigma)),
                   lambda a, x: float(special.gammainc(a, x)),
                   lambda x, dof: float(chi2.cdf(x, dof)),
                   lambda x, dof: float(chi2.sf(x, dof)))


def choose_backend(backend):
    """Returns a :class:`Backend` containing the distribution functions of
    the chosen backend.

    >>> choose_backend(None).chi2_sf(10.596634733096073, 4)
    0.03149158...
    >>> choose_backend('mpmath').name
    'mpmath'

    """
    if backend is None:  # fallback
        return Backend(None, cdf, ppf, gammainc, chi2_cdf, chi2_sf)
    elif backend == 'mpmath':
        return _mpmath_backend()
    elif backend == 'scipy':
        return _scipy_backend()
    raise ValueError('%r backend is not defined' % backend)


def available_backends():
    """Detects list of available backends.  All of defined backends are
    ``None`` -- internal implementation, "mpmath", "scipy".

    You can check if the backend is available in the current environment
    with this function::

       if 'mpmath' in available_backends():
           # mpmath can be used in the current environment
           setup(backend='mpmath')

    """
    backends = [None]
    for backend in ['mpmath', 'scipy']:
        try:
            __import__(backend)
        except ImportError:
            continue
        backends.append(backend)
    return backends
