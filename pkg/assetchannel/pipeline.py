# -*- coding: utf-8 -*-
"""
   assetchannel.pipeline
   ~~~~~~~~~~~~~~~~~~~~~

   Runs the whole analysis from one YAML configuration: sectoral indices,
   unit roots, lag selection, panel VAR, stability, impulse responses, the
   Kao test and the pooled mean group and mean group estimators.  Every
   table is a CSV headed by ``#`` lines naming the settings used, and a
   ``manifest.json`` records the materialized configuration, the software
   versions and a SHA-256 of every input and artifact.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import collections
import contextlib
import copy
import hashlib
import json
import logging
import os

import matplotlib
import numpy as np
import pandas as pd
import yaml

from . import Environment, __version__
from .ardl import (ArdlSpec, FOOTNOTES, fit_mg, fit_pmg, half_life_note,
                   mg_table, pmg_table)
from .coint import CALIBRATIONS, VARIANT, kao_table
from .index import (build_sector_indices, index_panel, load_constituents,
                    SCOPES, SECTORS, WEIGHTINGS, write_constituents,
                    write_index_csv)
from .panel import (BALANCE_POLICIES, balance, load_panel_csv, TRANSFORMS,
                    TransformSpec, apply_transform, write_panel_csv)
from .plotting import plot_eigenvalues, plot_irf
from .pvar import (companion_eigenvalues, DEFAULT_ORDERING, eigenvalue_frame,
                   fit_pvar, orthogonalized_irf, PvarSpec, select_lag)
from .pvar import TRANSFORMS as PVAR_TRANSFORMS
from .simulate import DgpConfig, draw, generate_constituents, generator_name
from .unitroot import DETERMINISTICS, LAG_RULES, unit_root_table


__all__ = ['PipelineConfig', 'ConfigError', 'StageError', 'load_config',
           'run_pipeline', 'report', 'write_table', 'make_fixture',
           'DEFAULTS', 'MANIFEST', 'STAGES']


logger = logging.getLogger(__name__)


#: Every configuration key and its default.  ``None`` under ``balance``
#: means the key is required.
DEFAULTS = collections.OrderedDict([
    ('inputs', collections.OrderedDict([
        ('panel', None), ('prices', None), ('shares', None),
        ('sector_map', None)])),
    ('index', collections.OrderedDict([
        ('base_period', None), ('weighting', 'monthly'),
        ('scope', 'regional')])),
    ('balance', None),
    ('transforms', []),
    ('unit_root', collections.OrderedDict([
        ('variables', None), ('deterministic', 'constant'),
        ('max_lags', 12), ('lag_rule', 'aic')])),
    ('pvar', collections.OrderedDict([
        ('variables', list(DEFAULT_ORDERING)), ('lags', 'auto'),
        ('max_lag', 4), ('criterion', 'maic'),
        ('transform', 'forward_orthogonal_deviations'),
        ('instrument_lags', [2, 4])])),
    ('irf', collections.OrderedDict([
        ('horizon', 24), ('draws', 500), ('seed', 42), ('band', .90),
        ('shocks', None)])),
    ('kao', collections.OrderedDict([
        ('systems', None), ('residual_lags', 1), ('bandwidth', None),
        ('calibration', 'simulated')])),
    ('ardl', collections.OrderedDict([
        ('systems', collections.OrderedDict()), ('lags', [1, 1])])),
    ('environment', collections.OrderedDict([
        ('alpha', .05), ('mqic_r', 2.1), ('backend', None)])),
    ('output', 'bundle'),
])
#: Stages in the order they run.
STAGES = ('build-index', 'unit-root', 'select-lag', 'pvar-fit', 'stability',
          'irf', 'kao', 'pmg', 'mg')
MANIFEST = 'manifest.json'
CRITERIA = ('mbic', 'maic', 'mqic')
CAVEATS = (
    'Impulse responses are identified recursively by the Cholesky factor '
    'in the stated ordering; simultaneity and reverse causality beyond the '
    'ordering are not addressed.',
) + FOOTNOTES


class ConfigError(ValueError):
    """Raised for an invalid pipeline configuration."""


class StageError(RuntimeError):
    """Raised when a pipeline stage fails.  The stage is :attr:`stage`."""

    def __init__(self, stage, cause):
        super(StageError, self).__init__('stage %s failed: %s' %
                                         (stage, cause))
        self.stage = stage
        self.cause = cause


def _merge(defaults, given, path=''):
    if given is None:
        return copy.deepcopy(defaults)
    if not isinstance(defaults, dict) or not defaults:
        return copy.deepcopy(given)
    if not isinstance(given, dict):
        raise ConfigError('%s must be a mapping' % (path or 'config'))
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise ConfigError('Unknown %s: %s' % (
            'keys under %s' % path if path else 'top-level keys',
            ', '.join(map(str, unknown))))
    merged = collections.OrderedDict()
    for key, default in defaults.items():
        merged[key] = _merge(default, given.get(key),
                             '%s.%s' % (path, key) if path else key)
    return merged


def _choice(value, choices, what):
    if value not in choices:
        raise ConfigError('%s must be one of %s, got %r' %
                          (what, ', '.join(map(str, choices)), value))
    return value


class PipelineConfig(object):
    """A materialized pipeline configuration.

    :param mapping: the parsed YAML document.
    :param base_dir: the directory relative paths are resolved against.

    """

    def __init__(self, mapping=None, base_dir='.'):
        self.data = _merge(DEFAULTS, mapping or {})
        self.base_dir = base_dir
        self._check_shape()

    def _check_shape(self):
        data = self.data
        if data['inputs']['panel'] is None:
            raise ConfigError('inputs.panel is required')
        index_inputs = [data['inputs'][k]
                        for k in ('prices', 'shares', 'sector_map')]
        if any(index_inputs) and not all(index_inputs):
            raise ConfigError('inputs.prices, inputs.shares and '
                              'inputs.sector_map go together')
        if data['balance'] is None:
            raise ConfigError('balance must name a policy explicitly: %s' %
                              ', '.join(BALANCE_POLICIES))
        _choice(data['balance'], BALANCE_POLICIES, 'balance')
        _choice(data['index']['weighting'], WEIGHTINGS, 'index.weighting')
        _choice(data['index']['scope'], SCOPES, 'index.scope')
        ur = data['unit_root']
        _choice(ur['deterministic'], list(DETERMINISTICS) +
                list(DETERMINISTICS.values()), 'unit_root.deterministic')
        _choice(ur['lag_rule'], LAG_RULES, 'unit_root.lag_rule')
        pv = data['pvar']
        _choice(pv['criterion'], CRITERIA, 'pvar.criterion')
        _choice(pv['transform'], PVAR_TRANSFORMS, 'pvar.transform')
        _choice(data['kao']['calibration'], CALIBRATIONS, 'kao.calibration')
        if pv['lags'] != 'auto' and not (isinstance(pv['lags'], int) and
                                         pv['lags'] >= 1):
            raise ConfigError('pvar.lags must be "auto" or a positive '
                              'integer, got %r' % (pv['lags'],))
        if pv['lags'] == 'auto' and pv['transform'] != \
                'forward_orthogonal_deviations':
            raise ConfigError('pvar.lags "auto" needs forward orthogonal '
                              'deviations')
        try:
            self.pvar_spec(1)
        except ValueError as exc:
            raise ConfigError('pvar: %s' % exc)
        irf = data['irf']
        if not 0 < irf['band'] < 1:
            raise ConfigError('irf.band must be in (0, 1)')
        if irf['draws'] < 0 or irf['horizon'] < 0:
            raise ConfigError('irf.draws and irf.horizon must be '
                              'nonnegative')
        for t in data['transforms']:
            if not isinstance(t, dict) or 'kind' not in t or \
                    'applied_to' not in t:
                raise ConfigError('Every transform needs kind and '
                                  'applied_to, got %r' % (t,))
            unknown = set(t) - set(['kind', 'applied_to', 'output_name'])
            if unknown:
                raise ConfigError('Unknown transform keys: %s' %
                                  ', '.join(sorted(unknown)))
            _choice(t['kind'], TRANSFORMS, 'transforms.kind')
        for name, system in self.ardl_systems().items():
            try:
                self.ardl_spec(name, system)
            except (TypeError, ValueError) as exc:
                raise ConfigError('ardl.systems.%s: %s' % (name, exc))
        try:
            Environment(**data['environment'])
        except (ImportError, ValueError) as exc:
            raise ConfigError('environment: %s' % exc)

    def path(self, key):
        value = self.data['inputs'][key]
        if value is None:
            return None
        return os.path.join(self.base_dir, value)

    @property
    def output_dir(self):
        return os.path.join(self.base_dir, self.data['output'])

    @property
    def environment(self):
        return Environment(**self.data['environment'])

    def pvar_spec(self, lags=None):
        pv = self.data['pvar']
        if lags is None:
            lags = pv['lags']
        return PvarSpec(pv['variables'], lags, pv['transform'],
                        tuple(pv['instrument_lags']))

    def ardl_systems(self):
        return self.data['ardl']['systems'] or collections.OrderedDict()

    def ardl_spec(self, name, system, estimator='PMG'):
        lags = system.get('lags', self.data['ardl']['lags'])
        return ArdlSpec(system['dependent'], system['regressors'],
                        tuple(lags), estimator)

    def kao_systems(self):
        systems = self.data['kao']['systems']
        if systems is None:
            systems = self.ardl_systems()
        return collections.OrderedDict(
            (name, (s['dependent'], list(s['regressors'])))
            for name, s in systems.items())

    def unit_root_variables(self):
        variables = self.data['unit_root']['variables']
        if variables is not None:
            return list(variables)
        seen = []
        for dependent, regressors in self.kao_systems().values():
            for v in [dependent] + regressors:
                if v not in seen:
                    seen.append(v)
        return seen

    def irf_shocks(self):
        shocks = self.data['irf']['shocks']
        if shocks is None:
            return [self.data['pvar']['variables'][0]]
        return list(shocks)

    def validate(self, available):
        """Checks every referenced variable against the ``available`` ones
        and the transform outputs.

        :returns: the variables known after the transforms.

        """
        known = list(available)
        for t in self.data['transforms']:
            if t['applied_to'] not in known:
                raise ConfigError('Transform of unknown variable %s' %
                                  t['applied_to'])
            known.append(TransformSpec(t['kind'], t['applied_to'],
                                       t.get('output_name')).output_name)
        referenced = [('pvar.variables', v)
                      for v in self.data['pvar']['variables']]
        referenced += [('unit_root.variables', v)
                       for v in self.unit_root_variables()]
        for name, (dependent, regressors) in self.kao_systems().items():
            referenced += [('kao/ardl system %s' % name, v)
                           for v in [dependent] + regressors]
        referenced += [('irf.shocks', v) for v in self.irf_shocks()]
        missing = [(where, v) for where, v in referenced if v not in known]
        if missing:
            raise ConfigError('Unknown variables: %s' % '; '.join(
                '%s in %s' % (v, where) for where, v in missing))
        shocks = [v for v in self.irf_shocks()
                  if v not in self.data['pvar']['variables']]
        if shocks:
            raise ConfigError('irf.shocks not in pvar.variables: %s' %
                              ', '.join(shocks))
        return known

    def to_dict(self):
        return json.loads(json.dumps(self.data))


def load_config(path):
    """Reads a YAML pipeline configuration.  Relative paths in it are
    relative to the file.
    """
    try:
        with open(path, encoding='utf-8') as f:
            mapping = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError('Cannot read %s: %s' % (path, exc))
    if mapping is not None and not isinstance(mapping, dict):
        raise ConfigError('%s must hold a mapping' % path)
    return PipelineConfig(mapping, os.path.dirname(os.path.abspath(path)))


def write_table(frame, path, comments=()):
    """Writes a CSV preceded by ``# `` comment lines."""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for comment in comments:
            f.write('# %s\n' % comment)
        frame.to_csv(f, index=False, lineterminator='\n', float_format='%.10g')
    return path


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def software_versions():
    return collections.OrderedDict([
        ('assetchannel', __version__), ('numpy', np.__version__),
        ('pandas', pd.__version__), ('matplotlib', matplotlib.__version__),
        ('pyyaml', yaml.__version__), ('generator', generator_name())])


class _Bundle(object):
    """The artifacts written so far and the manifest describing them."""

    def __init__(self, config):
        self.config = config
        self.directory = config.output_dir
        self.artifacts = []
        self.completed = []
        self.specs = collections.OrderedDict()
        os.makedirs(self.directory, exist_ok=True)

    def path(self, name):
        self.artifacts.append(name)
        return os.path.join(self.directory, name)

    @contextlib.contextmanager
    def stage(self, name):
        logger.info('Stage %s', name)
        try:
            yield
        except Exception as exc:
            logger.error('Stage %s failed: %s', name, exc)
            self.write_manifest(failed=name, error=str(exc))
            raise StageError(name, exc) from exc
        self.completed.append(name)

    def write_manifest(self, failed=None, error=None):
        inputs = collections.OrderedDict()
        for key in ('panel', 'prices', 'shares', 'sector_map'):
            path = self.config.path(key)
            if path is not None:
                inputs[key] = collections.OrderedDict([
                    ('path', self.config.data['inputs'][key]),
                    ('sha256', _sha256(path))])
        manifest = collections.OrderedDict([
            ('config', self.config.to_dict()),
            ('software', software_versions()),
            ('inputs', inputs),
            ('specifications', self.specs),
            ('stages_completed', self.completed),
            ('failed_stage', failed),
            ('error', error),
            ('artifacts', [collections.OrderedDict([
                ('path', name),
                ('sha256', _sha256(os.path.join(self.directory, name)))])
                for name in self.artifacts]),
        ])
        with open(os.path.join(self.directory, MANIFEST), 'w',
                  encoding='utf-8', newline='\n') as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write('\n')


def _index_variables(config):
    sectors = pd.read_csv(config.path('sector_map'), comment='#', dtype=str)
    if 'sector' not in sectors.columns:
        raise ConfigError('%s has no sector column' %
                          config.data['inputs']['sector_map'])
    return ['index_%s' % s.lower() for s in SECTORS
            if s in set(sectors['sector'])]


def run_pipeline(config):
    """Runs every stage and returns the output directory.

    :raises: :exc:`ConfigError` before any computation, :exc:`StageError`
             naming the failed stage after persisting the completed
             artifacts and the manifest.

    """
    if not isinstance(config, PipelineConfig):
        config = PipelineConfig(config)
    data = config.data
    env = config.environment
    try:
        panel = load_panel_csv(config.path('panel'))
    except (OSError, ValueError) as exc:
        raise ConfigError('inputs.panel: %s' % exc)
    available = list(panel.variables)
    if config.path('prices'):
        available += _index_variables(config)
    config.validate(available)
    bundle = _Bundle(config)
    specs = bundle.specs

    with bundle.stage('build-index'):
        if config.path('prices'):
            constituents = load_constituents(config.path('prices'),
                                             config.path('shares'),
                                             config.path('sector_map'))
            base = data['index']['base_period'] or str(panel.periods[0])
            indices = build_sector_indices(constituents, base,
                                           data['index']['weighting'],
                                           data['index']['scope'])
            specs['index'] = ('Laspeyres cap-weighted chain, base %s = 100, '
                              'weighting=%s, scope=%s' %
                              (base, data['index']['weighting'],
                               data['index']['scope']))
            write_index_csv(indices, bundle.path('indices.csv'),
                            [specs['index']])
            panel = panel.merge(index_panel(indices, panel.units))
        panel = balance(panel, data['balance'])
        specs['balance'] = '%s, %d unit-months dropped' % (
            data['balance'], len(panel.dropped))
        for t in data['transforms']:
            panel = apply_transform(panel, TransformSpec(
                t['kind'], t['applied_to'], t.get('output_name')))

    with bundle.stage('unit-root'):
        ur = data['unit_root']
        table = unit_root_table(panel, config.unit_root_variables(),
                                ur['deterministic'], ur['max_lags'],
                                ur['lag_rule'], env)
        specs['unit_root'] = ('Fisher-ADF, deterministic=%s, lag rule=%s, '
                              'max lags=%d' % (ur['deterministic'],
                                               ur['lag_rule'],
                                               ur['max_lags']))
        write_table(table, bundle.path('unit_roots.csv'),
                    [specs['unit_root'],
                     'null: unit root in every unit; level_p and '
                     'difference_p are chi-square p-values'])

    pv = data['pvar']
    with bundle.stage('select-lag'):
        selection = select_lag(panel, config.pvar_spec(1), pv['max_lag'],
                               env)
        lags = pv['lags']
        if lags == 'auto':
            lags = selection.chosen_lag(pv['criterion'])
        spec = config.pvar_spec(lags)
        specs['select_lag'] = ('MMSC over lags 1..%d, MQIC R=%.2f, chosen '
                               'by %s: %d' % (pv['max_lag'], env.mqic_r,
                                              pv['criterion'], lags))
        write_table(selection.to_frame(), bundle.path('lag_selection.csv'),
                    [specs['select_lag'], spec.describe(),
                     'empty criteria: lag not estimable'])

    with bundle.stage('pvar-fit'):
        fit = fit_pvar(panel, spec)
        specs['pvar'] = spec.describe()
        write_table(fit.coefficient_frame(),
                    bundle.path('pvar_coefficients.csv'),
                    [spec.describe(), 'J=%.6g moments=%d parameters=%d '
                     'n=%d' % (fit.j_statistic, fit.n_moments,
                               fit.n_params, fit.n_obs)])

    with bundle.stage('stability'):
        stability = companion_eigenvalues(fit)
        write_table(eigenvalue_frame(stability),
                    bundle.path('eigenvalues.csv'),
                    [spec.describe(), 'stable: %s' % stability.stable])
        plot_eigenvalues(stability, bundle.path('eigenvalues.svg'))

    with bundle.stage('irf'):
        irf_cfg = data['irf']
        irf = orthogonalized_irf(fit, spec.variables, irf_cfg['horizon'],
                                 irf_cfg['draws'], irf_cfg['seed'],
                                 irf_cfg['band'])
        specs['irf'] = ('Cholesky ordering %s, horizon %d, %d draws, seed '
                        '%r, %.0f%% percentile bands' % (
                            ','.join(spec.variables), irf_cfg['horizon'],
                            irf_cfg['draws'], irf_cfg['seed'],
                            100 * irf_cfg['band']))
        write_table(irf.to_frame(), bundle.path('irf.csv'),
                    [specs['irf'], 'point: one standard deviation shock; '
                     'unit_point: shock moving its own variable by 1 on '
                     'impact', CAVEATS[0]])
        for shock in config.irf_shocks():
            for response in spec.variables:
                plot_irf(irf, response, shock, bundle.path(
                    'irf_%s__%s.svg' % (response, shock)))

    kao_systems = config.kao_systems()
    with bundle.stage('kao'):
        if kao_systems:
            kao = kao_table(panel, kao_systems, data['kao']['residual_lags'],
                            data['kao']['bandwidth'], env,
                            data['kao']['calibration'])
            specs['kao'] = ('Kao %s, pooled regression with unit fixed '
                            'effects, residual lags %d, %s p-values' %
                            (VARIANT, data['kao']['residual_lags'],
                             data['kao']['calibration']))
            write_table(kao, bundle.path('kao.csv'), [specs['kao']])

    tables = collections.OrderedDict([('pmg', []), ('mg', [])])
    notes = []
    for stage, estimator in (('pmg', 'PMG'), ('mg', 'MG')):
        with bundle.stage(stage):
            for name, system in config.ardl_systems().items():
                ardl = config.ardl_spec(name, system, estimator)
                if estimator == 'PMG':
                    result = fit_pmg(panel, ardl)
                    frame = pmg_table(result, env)
                    notes.append('%s: %s' % (name, half_life_note(
                        result.pooled_phi)))
                else:
                    frame = mg_table(fit_mg(panel, ardl), env)
                frame.insert(0, 'system', name)
                frame.insert(1, 'specification', ardl.describe())
                tables[stage].append(frame)
            if tables[stage]:
                comments = ['%s long-run coefficients' % estimator]
                comments += list(FOOTNOTES)
                if estimator == 'PMG':
                    comments += notes
                write_table(pd.concat(tables[stage], ignore_index=True),
                            bundle.path('%s.csv' % stage), comments)
    specs['caveats'] = list(CAVEATS) + notes
    bundle.write_manifest()
    logger.info('Bundle written to %s', bundle.directory)
    return bundle.directory


def _read_table(path):
    comments = []
    with open(path, encoding='utf-8') as f:
        for line in f:
            if not line.startswith('#'):
                break
            comments.append(line[1:].strip())
    return comments, pd.read_csv(path, comment='#')


def report(directory):
    """A plain-text summary of a bundle."""
    with open(os.path.join(directory, MANIFEST), encoding='utf-8') as f:
        manifest = json.load(f)
    lines = ['assetchannel %s bundle' % manifest['software']['assetchannel'],
             'stages completed: %s' % ', '.join(manifest['stages_completed'])]
    if manifest['failed_stage']:
        lines.append('FAILED at %s: %s' % (manifest['failed_stage'],
                                           manifest['error']))
    for name in manifest['artifacts']:
        if not name['path'].endswith('.csv') or name['path'] == 'irf.csv':
            continue
        comments, frame = _read_table(os.path.join(directory, name['path']))
        lines.append('')
        lines.append('== %s ==' % name['path'])
        lines.extend('  %s' % c for c in comments)
        lines.append(frame.to_string(index=False))
    caveats = manifest['specifications'].get('caveats', CAVEATS)
    lines.append('')
    lines.append('Caveats:')
    lines.extend('- %s' % c for c in caveats)
    return '\n'.join(lines)


def make_fixture(directory, seed=42, n_periods=165):
    """Writes a synthetic six-country panel, four sectors of listed
    companies whose prices share a long-run relation with the macro
    variables, the true parameters and a ``config.yaml`` running the full
    pipeline on them.
    """
    os.makedirs(directory, exist_ok=True)
    countries = ('BA', 'HR', 'ME', 'MK', 'RS', 'SI')
    macro = ('irs', 'err', 'ip', 'cpi')
    dgp = DgpConfig('cointegrated_ecm', n_units=len(countries),
                    n_periods=n_periods, seed=seed, units=countries,
                    variables=('level',) + macro,
                    theta=(-.4, .5, .8, .6), phi=(-.3, -.15),
                    cov=np.diag([.1, .01, .01, .003]) ** 2 * 4,
                    noise_scale=.02, fixed_effect_scale=.05)
    simulation = draw(dgp)
    frame = simulation.dataset.to_frame()
    levels = {c: 4.6 + frame.loc[c]['level'].to_numpy() for c in countries}
    write_panel_csv(simulation.dataset.select(macro),
                    os.path.join(directory, 'panel.csv'),
                    ['generator: %s' % generator_name(),
                     'cointegrated_ecm seed=%r' % seed])
    write_table(simulation.truth, os.path.join(directory, 'truth.csv'),
                ['true parameters of the level each sector index follows'])
    constituents = []
    for s, sector in enumerate(SECTORS):
        constituents += generate_constituents(
            12, n_periods, sector, countries, seed + 1 + s,
            start=str(dgp.start), volatility=.03, log_levels=levels)
    write_constituents(constituents, os.path.join(directory, 'prices.csv'),
                       os.path.join(directory, 'shares.csv'),
                       os.path.join(directory, 'sectors.csv'))
    transforms, systems = [], collections.OrderedDict()
    for sector in SECTORS:
        index = 'index_%s' % sector.lower()
        transforms.append({'kind': 'log', 'applied_to': index})
        transforms.append({'kind': 'first_difference',
                           'applied_to': 'log_' + index})
        systems[sector.lower()] = {'dependent': 'log_' + index,
                                   'regressors': list(macro)}
    for name in macro:
        transforms.append({'kind': 'first_difference', 'applied_to': name})
    ordering = ['d_irs', 'd_err'] + [
        'd_log_index_%s' % s for s in ('telecom', 'man', 'elec', 'fin')] + [
        'd_ip', 'd_cpi']
    config = collections.OrderedDict([
        ('inputs', {'panel': 'panel.csv', 'prices': 'prices.csv',
                    'shares': 'shares.csv', 'sector_map': 'sectors.csv'}),
        ('index', {'base_period': str(dgp.start), 'scope': 'country'}),
        ('balance', 'drop_incomplete_periods'),
        ('transforms', transforms),
        ('pvar', {'variables': ordering, 'lags': 'auto', 'max_lag': 4,
                  'instrument_lags': [1, 4]}),
        ('irf', {'horizon': 24, 'draws': 200, 'seed': seed}),
        ('ardl', {'systems': systems, 'lags': [1, 1]}),
        ('output', 'bundle'),
    ])
    with open(os.path.join(directory, 'config.yaml'), 'w',
              encoding='utf-8') as f:
        yaml.safe_dump(json.loads(json.dumps(config)), f, sort_keys=False,
                       default_flow_style=False)
    return os.path.join(directory, 'config.yaml')
