# -*- coding: utf-8 -*-
"""
   assetchannel.panel
   ~~~~~~~~~~~~~~~~~~

   The panel data model: units observed over gap-free months with named
   real-valued variables.  Absent cells are simply not observed; every
   estimator states what it does about them.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import datetime
import logging
import math
import re
import warnings

import numpy as np
import pandas as pd


__all__ = ['PanelDataset', 'PanelError', 'TransformSpec', 'load_panel_csv',
           'write_panel_csv', 'apply_transform', 'balance', 'to_period',
           'TRANSFORMS', 'BALANCE_POLICIES', 'COLUMNS']


logger = logging.getLogger(__name__)


#: Columns of the long CSV format.
COLUMNS = ('unit', 'date', 'variable', 'value')
#: Supported transformations.
TRANSFORMS = ('log', 'first_difference', 'per_unit_demean')
#: Supported balancing policies.
BALANCE_POLICIES = ('drop_incomplete_periods', 'drop_incomplete_units')

_DATE_PATTERN = re.compile(r'^\s*(\d{4})-(\d{1,2})(?:-(\d{1,2}))?\s*$')
_OUTPUT_PREFIXES = {'log': 'log_', 'first_difference': 'd_',
                    'per_unit_demean': 'dm_'}


class PanelError(ValueError):
    """Invalid panel data."""


def to_period(value):
    """Converts ``'YYYY-MM'`` (or a :class:`pandas.Period`) to a monthly
    period.
    """
    if isinstance(value, pd.Period):
        return value.asfreq('M')
    if isinstance(value, (pd.Timestamp, datetime.date)):
        return pd.Period(value, freq='M')
    match = _DATE_PATTERN.match(str(value))
    if match is None:
        raise PanelError('Unparseable month %r, expected YYYY-MM' % (value,))
    year, month = int(match.group(1)), int(match.group(2))
    if not 1 <= month <= 12:
        raise PanelError('Unparseable month %r, expected YYYY-MM' % (value,))
    return pd.Period(year=year, month=month, freq='M')


class PanelDataset(object):
    """Units x months x variables.  Construct it with :meth:`from_frame` or
    :func:`load_panel_csv`; it is never modified afterwards and every
    operation returns a new dataset.

    :param frame: a wide :class:`pandas.DataFrame` indexed by
                  ``(unit, period)`` with one column per variable.  Absent
                  cells are missing.
    :param dropped: cells removed by :func:`balance`, if any.

    """

    frequency = 'M'

    def __init__(self, frame, dropped=()):
        self._frame = self._validate(frame)
        self.dropped = tuple(dropped)

    @classmethod
    def from_frame(cls, frame):
        frame = frame.copy()
        if not isinstance(frame.index, pd.MultiIndex):
            raise PanelError('Index must be (unit, period)')
        units = frame.index.get_level_values(0).astype(str)
        periods = pd.PeriodIndex([to_period(p) for p in
                                  frame.index.get_level_values(1)], freq='M')
        frame.index = pd.MultiIndex.from_arrays([units, periods],
                                                names=['unit', 'period'])
        return cls(frame)

    @staticmethod
    def _validate(frame):
        if frame.columns.has_duplicates:
            dup = frame.columns[frame.columns.duplicated()].tolist()
            raise PanelError('Duplicate variable names: %s' % ', '.join(dup))
        if frame.index.has_duplicates:
            unit, period = frame.index[frame.index.duplicated()][0]
            raise PanelError('Duplicate observation (%s, %s)' %
                             (unit, period))
        frame = frame.astype(float).sort_index()
        frame.columns = pd.Index([str(c) for c in frame.columns],
                                 name='variable')
        if np.isinf(frame.to_numpy()).any():
            raise PanelError('Infinite values are not observations')
        # only months with at least one observation are kept
        frame = frame[frame.notna().any(axis=1)]
        for unit, periods in _unit_periods(frame):
            ordinals = np.asarray([p.ordinal for p in periods])
            gaps = np.flatnonzero(np.diff(ordinals) != 1)
            if len(gaps):
                listed = ', '.join('%s..%s' % (periods[g], periods[g + 1])
                                   for g in gaps)
                raise PanelError('Unit %s has non-monthly gaps: %s' %
                                 (unit, listed))
        return frame

    @property
    def units(self):
        return tuple(self._frame.index.get_level_values('unit').unique())

    @property
    def variables(self):
        return tuple(self._frame.columns)

    @property
    def periods(self):
        """All months observed for any unit, sorted."""
        return self._frame.index.get_level_values('period') \
            .unique().sort_values()

    @property
    def n_obs(self):
        """The number of observed cells."""
        return int(self._frame.notna().to_numpy().sum())

    def __len__(self):
        return self.n_obs

    def counts(self):
        """Observed cells per unit and variable."""
        return self._frame.notna().groupby(level='unit').sum().astype(int)

    @property
    def balanced(self):
        counts = self.counts().to_numpy()
        return counts.size > 0 and bool((counts == counts.flat[0]).all())

    def unit_periods(self, unit):
        return self._frame.loc[unit].index

    def series(self, unit, variable):
        """The observed values of one variable for one unit."""
        self._require(variable)
        return self._frame.loc[unit][variable].dropna().copy()

    def unit_block(self, unit, variables):
        """Returns ``(periods, values)`` for the complete rows of the given
        variables.  Leading and trailing rows with absent cells are trimmed;
        an absent cell in between is an error.
        """
        variables = list(variables)
        self._require(*variables)
        block = self._frame.loc[unit][variables]
        complete = block.notna().all(axis=1).to_numpy()
        if not complete.any():
            raise PanelError('Unit %s has no complete observation of %s' %
                             (unit, ', '.join(variables)))
        first = int(np.argmax(complete))
        last = len(complete) - int(np.argmax(complete[::-1]))
        if not complete[first:last].all():
            hole = block.index[first:last][~complete[first:last]][0]
            raise PanelError('Unit %s misses %s at %s; balance() the panel '
                             'first' % (unit, ', '.join(variables), hole))
        block = block.iloc[first:last]
        return block.index, block.to_numpy(dtype=float)

    def select(self, variables):
        variables = list(variables)
        self._require(*variables)
        return type(self)(self._frame[variables])

    def merge(self, other):
        """Adds the variables of ``other``.  Variable names must not clash."""
        clash = set(self.variables) & set(other.variables)
        if clash:
            raise PanelError('Variables already present: %s' %
                             ', '.join(sorted(clash)))
        frame = self._frame.join(other._frame, how='outer')
        return type(self)(frame)

    def with_column(self, name, values):
        if name in self._frame.columns:
            raise PanelError('Variable %s already exists' % name)
        frame = self._frame.copy()
        frame[name] = values
        return type(self)(frame)

    def to_frame(self):
        return self._frame.copy()

    def to_long(self):
        frame = self._frame.copy()
        frame.columns = list(frame.columns)
        long = frame.reset_index().melt(
            id_vars=['unit', 'period'], var_name='variable',
            value_name='value').dropna(subset=['value'])
        long.columns = list(COLUMNS)
        long['date'] = long['date'].map(lambda p: p.strftime('%Y-%m'))
        return long.sort_values(['unit', 'date', 'variable'],
                                kind='mergesort').reset_index(drop=True)

    def _require(self, *variables):
        missing = [v for v in variables if v not in self._frame.columns]
        if missing:
            raise PanelError('Unknown variables: %s' % ', '.join(missing))

    def __eq__(self, other):
        if not isinstance(other, PanelDataset):
            return NotImplemented
        return self._frame.equals(other._frame)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self):
        periods = self.periods
        span = '%s..%s' % (periods[0], periods[-1]) if len(periods) else '-'
        return '<%s units=%d periods=%d (%s) variables=%s>' % (
            type(self).__name__, len(self.units), len(periods), span,
            ','.join(self.variables))


def _unit_periods(frame):
    for unit, part in frame.groupby(level='unit', sort=True):
        yield unit, list(part.index.get_level_values('period'))


def load_panel_csv(path, schema=None):
    """Loads a long CSV with the columns ``unit,date,variable,value``.

    :param schema: maps the canonical column names to the file's column
                   names, e.g. ``{'unit': 'country'}``.
    :raises: :exc:`PanelError` for an empty file, unparseable rows,
             duplicated ``(unit, date, variable)`` triples or gaps.

    """
    mapping = dict(zip(COLUMNS, COLUMNS))
    mapping.update(schema or {})
    try:
        raw = pd.read_csv(path, dtype=str, comment='#',
                          keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise PanelError('%s: no observations' % (path,))
    missing = [mapping[c] for c in COLUMNS if mapping[c] not in raw.columns]
    if missing:
        raise PanelError('%s: missing columns %s' % (path,
                                                     ', '.join(missing)))
    raw = raw[[mapping[c] for c in COLUMNS]]
    raw.columns = list(COLUMNS)
    if raw.empty:
        raise PanelError('%s: no observations' % (path,))
    rejected, rows, day_dropped = [], [], False
    # line 1 is the header
    for line, (unit, date, variable, value) in enumerate(
            raw.itertuples(index=False, name=None), 2):
        match = _DATE_PATTERN.match(date)
        try:
            period = to_period(date)
            number = float(value)
        except (PanelError, ValueError):
            rejected.append((line, unit, date, variable, value))
            continue
        if not unit or not variable or not math.isfinite(number):
            rejected.append((line, unit, date, variable, value))
            continue
        day_dropped = day_dropped or match.group(3) is not None
        rows.append((unit.strip(), period, variable.strip(), number))
    if rejected:
        listed = '; '.join('line %d: %s' % (r[0], ','.join(r[1:]))
                           for r in rejected[:10])
        more = len(rejected) - 10
        raise PanelError('%s: %d unparseable row%s (%s%s)' % (
            path, len(rejected), '' if len(rejected) == 1 else 's', listed,
            ', and %d more' % more if more > 0 else ''))
    if day_dropped:
        message = '%s: day-of-month ignored, dates read as months' % (path,)
        logger.warning(message)
        warnings.warn(message)
    long = pd.DataFrame(rows, columns=['unit', 'period', 'variable', 'value'])
    duplicated = long.duplicated(['unit', 'period', 'variable'])
    if duplicated.any():
        unit, period, variable, __ = long[duplicated].iloc[0]
        raise PanelError('%s: duplicate observation (%s, %s, %s)' %
                         (path, unit, period, variable))
    frame = long.set_index(['unit', 'period', 'variable'])['value'] \
        .unstack('variable')
    frame.columns.name = None
    dataset = PanelDataset(frame)
    logger.info('Loaded %r from %s', dataset, path)
    return dataset


def write_panel_csv(ds, path, comments=()):
    """Writes ``ds`` in the long format :func:`load_panel_csv` reads.  Floats
    are written with round-trip precision; ``comments`` become ``#`` lines
    above the header.
    """
    long = ds.to_long()
    long['value'] = long['value'].map(repr)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for comment in comments:
            f.write('# %s\n' % comment)
        long.to_csv(f, index=False, lineterminator='\n')
    return path


class TransformSpec(object):
    """A transformation of one variable into a new one.

    :param kind: one of ``'log'``, ``'first_difference'``,
                 ``'per_unit_demean'``.
    :param applied_to: the input variable.
    :param output_name: the new variable.  Defaults to ``log_<name>``,
                        ``d_<name>`` or ``dm_<name>``.

    """

    def __init__(self, kind, applied_to, output_name=None):
        if kind not in TRANSFORMS:
            raise ValueError('Unknown transform %r, expected one of %s' %
                             (kind, ', '.join(TRANSFORMS)))
        self.kind = kind
        self.applied_to = applied_to
        if output_name is None:
            output_name = _OUTPUT_PREFIXES[kind] + applied_to
        if output_name == applied_to:
            raise ValueError('Output must be a new variable')
        self.output_name = output_name

    def __repr__(self):
        return '%s(%r, %r, %r)' % (type(self).__name__, self.kind,
                                   self.applied_to, self.output_name)


def apply_transform(ds, spec):
    """Appends ``spec.output_name`` computed from ``spec.applied_to``."""
    ds._require(spec.applied_to)
    column = ds._frame[spec.applied_to]
    if spec.kind == 'log':
        bad = column[column <= 0]
        if len(bad):
            unit, period = bad.index[0]
            raise PanelError('log of non-positive %s=%r at (%s, %s)' % (
                spec.applied_to, bad.iloc[0], unit, period))
        values = np.log(column)
    elif spec.kind == 'first_difference':
        values = column.groupby(level='unit').diff()
    else:
        values = column - column.groupby(level='unit').transform('mean')
    logger.debug('%r applied to %r', spec, ds)
    return ds.with_column(spec.output_name, values)


def _longest_run(periods):
    best, start = (0, 0), 0
    ordinals = [p.ordinal for p in periods]
    for x in range(1, len(ordinals) + 1):
        if x == len(ordinals) or ordinals[x] != ordinals[x - 1] + 1:
            if x - start > best[1] - best[0]:
                best = (start, x)
            start = x
    return periods[best[0]:best[1]]


def balance(ds, policy):
    """Makes every unit/variable carry the same observations.

    ``drop_incomplete_periods`` keeps the longest run of months in which
    every unit observes every variable; ``drop_incomplete_units`` keeps the
    units that observe every variable in every month of the panel.  The
    removed ``(unit, month)`` cells are attached as ``dropped``.

    """
    if policy not in BALANCE_POLICIES:
        raise ValueError('Unknown policy %r, expected one of %s' %
                         (policy, ', '.join(BALANCE_POLICIES)))
    frame = ds._frame
    complete = frame.notna().all(axis=1)
    if policy == 'drop_incomplete_periods':
        common = None
        for unit in ds.units:
            rows = complete.loc[unit]
            months = set(rows.index[rows.to_numpy()])
            common = months if common is None else common & months
        kept = _longest_run(sorted(common or ()))
        if len(kept) < 2:
            raise PanelError('Balancing leaves %d common complete month%s' %
                             (len(kept), '' if len(kept) == 1 else 's'))
        keep = frame.index.get_level_values('period').isin(kept)
    else:
        span = len(ds.periods)
        if span < 2:
            raise PanelError('Balancing leaves fewer than 2 periods')
        per_unit = complete.groupby(level='unit').sum()
        survivors = per_unit.index[per_unit.to_numpy() == span]
        if not len(survivors):
            raise PanelError('No unit observes every variable in every month')
        keep = frame.index.get_level_values('unit').isin(survivors)
    dropped = [(unit, str(period)) for unit, period in frame.index[~keep]]
    if dropped:
        logger.info('balance(%s) dropped %d unit-months', policy,
                    len(dropped))
    return PanelDataset(frame[keep], dropped=dropped)
