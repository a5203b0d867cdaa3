# -*- coding: utf-8 -*-
"""
   assetchannel.index
   ~~~~~~~~~~~~~~~~~~

   Market-capitalization weighted sectoral stock indices built from company
   prices and shares outstanding, and the market depth ratios used to
   describe thin exchanges.

   The index is a chain of cap-weighted price relatives::

      Index_base = 100
      Index_t = Index_{t-1} * sum_j w_{j,t-1} * P_{j,t} / P_{j,t-1}

   where the weights are the prior-month market capitalization shares of the
   constituents priced in both months.  A company enters the chain from its
   second priced month, and a month without a price is an exit followed by a
   re-entry.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import collections
import logging
import math

import numpy as np
import pandas as pd

from .panel import PanelDataset, to_period


__all__ = ['ConstituentSeries', 'SectorIndexSeries', 'MarketDepth',
           'compute_weights', 'build_index', 'build_sector_indices',
           'market_depth_indicators', 'market_depth_table',
           'load_constituents', 'write_constituents', 'write_index_csv',
           'index_panel', 'SECTORS', 'WEIGHTINGS', 'SCOPES', 'BASE_VALUE']


logger = logging.getLogger(__name__)


#: Sector codes and their NACE Rev.2 sections.
SECTORS = collections.OrderedDict([
    ('MAN', 'C - Manufacturing'),
    ('TELECOM', 'J - Information and communication'),
    ('FIN', 'K - Financial and insurance activities'),
    ('ELEC', 'D - Electricity, gas, steam and air conditioning supply'),
])
#: ``monthly`` weights by the prior month's shares outstanding, ``base`` by
#: the shares outstanding of the base period.
WEIGHTINGS = ('monthly', 'base')
#: ``regional`` pools every country into one index per sector, ``country``
#: builds one index per sector and country.
SCOPES = ('regional', 'country')
#: Index level at the base period.
BASE_VALUE = 100.


class ConstituentSeries(object):
    """One listed company.

    :param ticker: the listing's identifier.
    :param country: the unit the listing belongs to.
    :param sector: a sector code of :data:`SECTORS`.
    :param prices: monthly closing prices, a :class:`pandas.Series` indexed
                   by month.
    :param shares_outstanding: reported share counts indexed by the month of
                               the report.  Counts carry forward until the
                               next report; months before the first report
                               use the first report.

    """

    def __init__(self, ticker, country, sector, prices, shares_outstanding):
        if sector not in SECTORS:
            raise ValueError('Unknown sector %r, expected one of %s' %
                             (sector, ', '.join(SECTORS)))
        self.ticker = ticker
        self.country = country
        self.sector = sector
        self.prices = _monthly(prices, 'prices of %s' % ticker)
        if (self.prices <= 0).any():
            month = self.prices.index[(self.prices <= 0).to_numpy()][0]
            raise ValueError('%s has a non-positive price at %s' %
                             (ticker, month))
        shares = _monthly(shares_outstanding, 'shares of %s' % ticker)
        if shares.empty:
            raise ValueError('%s has no shares outstanding' % ticker)
        if (shares <= 0).any() or (shares != np.round(shares)).any():
            raise ValueError('%s shares outstanding must be positive '
                             'integers' % ticker)
        self.shares_outstanding = shares
        self._price_map = dict(zip(self.prices.index, self.prices.to_numpy()))

    def price(self, month):
        """The price at ``month`` or ``None``."""
        return self._price_map.get(month)

    def shares(self, month):
        """Shares outstanding at ``month``: the latest report on or before
        it, or the first report.
        """
        position = self.shares_outstanding.index.searchsorted(month,
                                                              side='right')
        return float(self.shares_outstanding.iloc[max(position - 1, 0)])

    def market_cap(self, month, shares_month=None):
        price = self.price(month)
        if price is None:
            return None
        return price * self.shares(month if shares_month is None
                                   else shares_month)

    def with_prices(self, prices):
        return type(self)(self.ticker, self.country, self.sector, prices,
                          self.shares_outstanding)

    def __repr__(self):
        return '<%s %s %s/%s %d months>' % (type(self).__name__, self.ticker,
                                            self.country, self.sector,
                                            len(self.prices))


def _monthly(series, what):
    series = pd.Series(series, dtype=float).dropna()
    index = pd.PeriodIndex([to_period(p) for p in series.index], freq='M')
    if index.has_duplicates:
        raise ValueError('Duplicate months in %s' % what)
    return pd.Series(series.to_numpy(), index=index).sort_index()


class SectorIndexSeries(object):
    """A sectoral index normalized to 100 at its base period.

    :attr values: index levels, a :class:`pandas.Series` indexed by month.
    :attr constituents_per_month: the tickers whose weights enter each month.
    :attr weights_per_month: the weights applied to reach each month's level
                             (for the base period, its own cap weights).

    """

    def __init__(self, sector, values, base_period, constituents_per_month,
                 weights_per_month, weighting='monthly', country=None):
        self.sector = sector
        self.values = values
        self.base_period = base_period
        self.constituents_per_month = constituents_per_month
        self.weights_per_month = weights_per_month
        self.weighting = weighting
        self.country = country

    @property
    def variable(self):
        return 'index_%s' % self.sector.lower()

    def to_frame(self):
        frame = pd.DataFrame({'sector': self.sector,
                              'date': [p.strftime('%Y-%m')
                                       for p in self.values.index],
                              'value': self.values.to_numpy()})
        if self.country is not None:
            frame.insert(0, 'unit', self.country)
        return frame

    def __repr__(self):
        return '<%s %s%s base=%s months=%d last=%.3f>' % (
            type(self).__name__, self.sector,
            '' if self.country is None else '/%s' % self.country,
            self.base_period, len(self.values), self.values.iloc[-1])


def compute_weights(constituents, month, shares_month=None):
    """Market-capitalization weights of the constituents priced at
    ``month``.

    :param shares_month: take shares outstanding from this month instead.
    :returns: an ordered dict of ticker to weight.
    :raises: :exc:`ValueError` when no constituent is priced.

    """
    month = to_period(month)
    caps = collections.OrderedDict()
    for c in constituents:
        cap = c.market_cap(month, shares_month)
        if cap is None:
            continue
        if c.ticker in caps:
            raise ValueError('Duplicate constituent %s' % c.ticker)
        caps[c.ticker] = cap
    if not caps:
        raise ValueError('empty sector-month %s' % month)
    total = math.fsum(caps.values())
    return collections.OrderedDict((t, cap / total)
                                   for t, cap in caps.items())


def _sector_of(constituents):
    if not constituents:
        raise ValueError('No constituents')
    sectors = set(c.sector for c in constituents)
    if len(sectors) != 1:
        raise ValueError('Constituents span sectors %s' %
                         ', '.join(sorted(sectors)))
    return sectors.pop()


def build_index(constituents, base_period, weighting='monthly'):
    """Chains the cap-weighted price relatives from ``base_period`` to the
    last priced month.

    :param weighting: ``'monthly'`` uses the prior month's shares
                      outstanding; ``'base'`` holds each company's shares at
                      their base-period value.
    :raises: :exc:`ValueError` for a month without any company priced in it
             and the month before and for duplicate tickers.

    """
    if weighting not in WEIGHTINGS:
        raise ValueError('Unknown weighting %r, expected one of %s' %
                         (weighting, ', '.join(WEIGHTINGS)))
    sector = _sector_of(constituents)
    tickers = [c.ticker for c in constituents]
    duplicates = sorted(set(t for t in tickers if tickers.count(t) > 1))
    if duplicates:
        raise ValueError('Duplicate constituents: %s' % ', '.join(duplicates))
    base = to_period(base_period)
    base_weights = compute_weights(constituents, base)
    last = max(c.prices.index[-1] for c in constituents)
    months = pd.period_range(base, last, freq='M')
    levels = [BASE_VALUE]
    members = collections.OrderedDict([(base, tuple(base_weights))])
    weights = collections.OrderedDict([(base, base_weights)])
    for prev, month in zip(months[:-1], months[1:]):
        shares_month = prev if weighting == 'monthly' else base
        caps, relatives = collections.OrderedDict(), []
        for c in constituents:
            p0, p1 = c.price(prev), c.price(month)
            if p0 is None or p1 is None:
                continue
            caps[c.ticker] = p0 * c.shares(shares_month)
            relatives.append(p1 / p0)
        if not caps:
            raise ValueError('empty sector-month %s: no %s constituent is '
                             'priced in both %s and %s' %
                             (month, sector, prev, month))
        total = math.fsum(caps.values())
        w = collections.OrderedDict((t, cap / total)
                                    for t, cap in caps.items())
        levels.append(levels[-1] * math.fsum(
            wj * r for wj, r in zip(w.values(), relatives)))
        members[month] = tuple(w)
        weights[month] = w
    values = pd.Series(levels, index=months, name='index_%s' % sector.lower())
    countries = set(c.country for c in constituents)
    country = countries.pop() if len(countries) == 1 else None
    logger.debug('Built %s index over %d months from %d constituents',
                 sector, len(months), len(constituents))
    return SectorIndexSeries(sector, values, base, members, weights,
                             weighting, country)


def build_sector_indices(constituents, base_period, weighting='monthly',
                         scope='regional'):
    """Builds one index per sector (``scope='regional'``) or per sector and
    country (``scope='country'``).

    :returns: an ordered dict keyed by sector code, or by
              ``(sector, country)``.

    """
    if scope not in SCOPES:
        raise ValueError('Unknown scope %r, expected one of %s' %
                         (scope, ', '.join(SCOPES)))
    groups = collections.OrderedDict()
    for c in sorted(constituents, key=lambda c: (list(SECTORS).index(
            c.sector), c.country, c.ticker)):
        key = c.sector if scope == 'regional' else (c.sector, c.country)
        groups.setdefault(key, []).append(c)
    indices = collections.OrderedDict()
    for key, members in groups.items():
        series = build_index(members, base_period, weighting)
        if scope == 'regional':
            series.country = None
        indices[key] = series
    return indices


def load_constituents(prices_path, shares_path, sector_map_path):
    """Reads ``ticker,date,price``, ``ticker,date,shares_outstanding`` and
    ``ticker,country,sector`` files.  Mapped tickers without prices are
    skipped with a warning.
    """
    prices = pd.read_csv(prices_path, comment='#', dtype={'ticker': str})
    shares = pd.read_csv(shares_path, comment='#', dtype={'ticker': str})
    sectors = pd.read_csv(sector_map_path, comment='#', dtype=str)
    for name, frame, columns in [
            (prices_path, prices, ('ticker', 'date', 'price')),
            (shares_path, shares, ('ticker', 'date', 'shares_outstanding')),
            (sector_map_path, sectors, ('ticker', 'country', 'sector'))]:
        missing = [c for c in columns if c not in frame.columns]
        if missing:
            raise ValueError('%s: missing columns %s' %
                             (name, ', '.join(missing)))
    unmapped = sorted(set(prices['ticker']) - set(sectors['ticker']))
    if unmapped:
        raise ValueError('%s: tickers without a sector: %s' %
                         (prices_path, ', '.join(unmapped)))
    constituents = []
    for ticker, country, sector in sectors[['ticker', 'country', 'sector']] \
            .itertuples(index=False, name=None):
        own = prices[prices['ticker'] == ticker]
        if own.empty:
            logger.warning('%s has no prices and is omitted', ticker)
            continue
        own_shares = shares[shares['ticker'] == ticker]
        if own_shares.empty:
            raise ValueError('%s: no shares outstanding for %s' %
                             (shares_path, ticker))
        constituents.append(ConstituentSeries(
            ticker, country, sector,
            pd.Series(own['price'].to_numpy(), index=own['date'].to_numpy()),
            pd.Series(own_shares['shares_outstanding'].to_numpy(),
                      index=own_shares['date'].to_numpy())))
    logger.info('Loaded %d constituents', len(constituents))
    return constituents


def write_constituents(constituents, prices_path, shares_path,
                       sector_map_path):
    """Writes the three files read by :func:`load_constituents`."""
    prices, shares, sectors = [], [], []
    for c in constituents:
        sectors.append((c.ticker, c.country, c.sector))
        prices.extend((c.ticker, p.strftime('%Y-%m'), repr(float(v)))
                      for p, v in c.prices.items())
        shares.extend((c.ticker, p.strftime('%Y-%m'), int(v))
                      for p, v in c.shares_outstanding.items())
    for path, rows, columns in [
            (prices_path, prices, ['ticker', 'date', 'price']),
            (shares_path, shares, ['ticker', 'date', 'shares_outstanding']),
            (sector_map_path, sectors, ['ticker', 'country', 'sector'])]:
        pd.DataFrame(rows, columns=columns).to_csv(
            path, index=False, lineterminator='\n')


def write_index_csv(indices, path, comments=()):
    """Writes ``sector,date,value`` rows (prefixed by ``unit`` for country
    indices).
    """
    frame = pd.concat([s.to_frame() for s in indices.values()],
                      ignore_index=True)
    frame['value'] = frame['value'].map(repr)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for comment in comments:
            f.write('# %s\n' % comment)
        frame.to_csv(f, index=False, lineterminator='\n')
    return path


def index_panel(indices, units):
    """Turns indices into panel variables ``index_<sector>``.  A regional
    index is attached to every unit; a country index to its own unit.
    """
    columns = collections.OrderedDict()
    for series in indices.values():
        targets = units if series.country is None else [series.country]
        for unit in targets:
            for month, value in series.values.items():
                columns.setdefault(series.variable, {})[(unit, month)] = value
    frame = pd.DataFrame(columns)
    frame.index = pd.MultiIndex.from_tuples(frame.index,
                                            names=['unit', 'period'])
    return PanelDataset.from_frame(frame)


MarketDepth = collections.namedtuple(
    'MarketDepth', ['cap_to_gdp', 'turnover_to_gdp', 'firms_per_10k'])


def market_depth_indicators(mcap, turnover, gdp, listings, population):
    """Market capitalization and turnover relative to GDP, and listed firms
    per 10 000 inhabitants.

    >>> market_depth_indicators(27, 0, 100, 200, 1000000)
    MarketDepth(cap_to_gdp=0.27, turnover_to_gdp=0.0, firms_per_10k=2.0)

    """
    if not gdp > 0:
        raise ValueError('gdp must be positive, got %r' % (gdp,))
    if not population > 0:
        raise ValueError('population must be positive, got %r' %
                         (population,))
    return MarketDepth(mcap / float(gdp), turnover / float(gdp),
                       listings / (population / 10000.))


def market_depth_table(frame):
    """Per-country averages of the market depth ratios over the rows of a
    ``country,year,mcap,turnover,gdp,listings,population`` frame.
    """
    rows = []
    for row in frame.itertuples(index=False):
        depth = market_depth_indicators(row.mcap, row.turnover, row.gdp,
                                        row.listings, row.population)
        rows.append((row.country,) + tuple(depth))
    table = pd.DataFrame(rows, columns=('country',) + MarketDepth._fields)
    return table.groupby('country', sort=False).mean()
