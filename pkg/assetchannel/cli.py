# -*- coding: utf-8 -*-
"""
   assetchannel.cli
   ~~~~~~~~~~~~~~~~

   The ``assetchannel`` command.  Each stage of the pipeline is also a
   subcommand working on a panel CSV; ``run`` chains them from a YAML
   configuration and ``report`` summarizes a finished bundle.

   Exit codes: 0 on success, 1 when a stage fails, 2 for usage and
   configuration errors.

   :copyright: (c) 2024 by the assetchannel authors.
   :license: BSD, see LICENSE for more details.

"""
import argparse
import logging
import os
import sys

from . import __version__, Environment
from .ardl import ArdlSpec, fit_mg, fit_pmg, mg_table, pmg_table
from .coint import CALIBRATIONS, kao_table
from .index import (build_sector_indices, load_constituents, SCOPES,
                    WEIGHTINGS, write_index_csv)
from .panel import (apply_transform, balance, BALANCE_POLICIES,
                    load_panel_csv, PanelError, TRANSFORMS, TransformSpec,
                    write_panel_csv)
from .pipeline import (ConfigError, load_config, make_fixture, report,
                       run_pipeline, StageError, write_table)
from .plotting import plot_eigenvalues, plot_irf
from .pvar import (companion_eigenvalues, eigenvalue_frame, fit_pvar,
                   INSTRUMENT_LAGS, IRF_BAND, IRF_DRAWS, IRF_HORIZON,
                   IRF_SEED, orthogonalized_irf, PvarSpec, select_lag)
from .pvar import TRANSFORMS as PVAR_TRANSFORMS
from .simulate import DgpConfig, draw, generator_name, KINDS
from .unitroot import DETERMINISTICS, LAG_RULES, MAX_ADF_LAGS, \
    unit_root_table


__all__ = ['main', 'build_parser']


logger = logging.getLogger(__name__)


def _names(text):
    return [name.strip() for name in text.split(',') if name.strip()]


def _transform(text):
    kind, sep, variable = text.partition(':')
    if not sep or kind not in TRANSFORMS:
        raise argparse.ArgumentTypeError(
            'expected KIND:VARIABLE with KIND one of %s' %
            ', '.join(TRANSFORMS))
    return TransformSpec(kind, variable)


def _emit(frame, out, comments=()):
    if out in (None, '-'):
        for comment in comments:
            sys.stdout.write('# %s\n' % comment)
        frame.to_csv(sys.stdout, index=False, lineterminator='\n',
                     float_format='%.10g')
    else:
        write_table(frame, out, comments)
        logger.info('Wrote %s', out)


def _panel(args):
    ds = load_panel_csv(args.panel)
    if args.balance:
        ds = balance(ds, args.balance)
    for spec in args.transform:
        ds = apply_transform(ds, spec)
    return ds


def _env(args):
    return Environment(args.alpha, args.mqic_r, args.backend)


def cmd_build_index(args):
    constituents = load_constituents(args.prices, args.shares, args.sectors)
    indices = build_sector_indices(constituents, args.base, args.weighting,
                                   args.scope)
    comment = ('Laspeyres cap-weighted chain, base %s = 100, weighting=%s, '
               'scope=%s' % (args.base, args.weighting, args.scope))
    write_index_csv(indices, args.out, [comment])
    logger.info('Wrote %s', args.out)


def cmd_unit_root(args):
    table = unit_root_table(_panel(args), args.var, args.deterministic,
                            args.max_lags, args.lag_rule, _env(args))
    if not args.diff:
        table = table[['variable', 'level_statistic', 'level_p']]
    _emit(table, args.out, [
        'Fisher-ADF, deterministic=%s, lag rule=%s, max lags=%d' % (
            args.deterministic, args.lag_rule, args.max_lags)])


def _pvar_spec(args, lags=1):
    return PvarSpec(args.vars, lags, args.pvar_transform,
                    tuple(args.instrument_lags))


def cmd_pvar_fit(args):
    spec = _pvar_spec(args, args.lags)
    fit = fit_pvar(_panel(args), spec)
    _emit(fit.coefficient_frame(), args.out,
          [spec.describe(), 'J=%.6g moments=%d parameters=%d n=%d' % (
              fit.j_statistic, fit.n_moments, fit.n_params, fit.n_obs)])
    if args.eigenvalues:
        stability = companion_eigenvalues(fit)
        write_table(eigenvalue_frame(stability), args.eigenvalues,
                    [spec.describe(), 'stable: %s' % stability.stable])
        plot_eigenvalues(stability,
                         os.path.splitext(args.eigenvalues)[0] + '.svg')


def cmd_pvar_select_lag(args):
    spec = _pvar_spec(args)
    table = select_lag(_panel(args), spec, args.max, _env(args))
    _emit(table.to_frame(), args.out, [
        spec.describe(), 'chosen: %s' % ', '.join(
            '%s=%s' % item for item in table.chosen.items()),
        'empty criteria: lag not estimable'])


def cmd_pvar_irf(args):
    spec = _pvar_spec(args, args.lags)
    fit = fit_pvar(_panel(args), spec)
    irf = orthogonalized_irf(fit, spec.variables, args.horizon, args.draws,
                             args.seed, args.band)
    _emit(irf.to_frame(), args.out, [
        spec.describe(), 'Cholesky ordering %s, horizon %d, %d draws, seed '
        '%r, %.0f%% percentile bands' % (','.join(spec.variables),
                                         args.horizon, args.draws, args.seed,
                                         100 * args.band)])
    if args.plots:
        os.makedirs(args.plots, exist_ok=True)
        for shock in args.shocks or spec.variables[:1]:
            for response in spec.variables:
                plot_irf(irf, response, shock, os.path.join(
                    args.plots, 'irf_%s__%s.svg' % (response, shock)))


def cmd_kao(args):
    table = kao_table(_panel(args), {args.dep: (args.dep, args.regressors)},
                      args.residual_lags, args.bandwidth, _env(args),
                      args.calibration)
    _emit(table, args.out)


def _ardl(args, estimator):
    spec = ArdlSpec(args.dep, args.regressors, (args.p, args.q), estimator)
    ds = _panel(args)
    if estimator == 'PMG':
        frame = pmg_table(fit_pmg(ds, spec), _env(args))
    else:
        frame = mg_table(fit_mg(ds, spec), _env(args))
    _emit(frame, args.out, [spec.describe()])


def cmd_pmg(args):
    _ardl(args, 'PMG')


def cmd_mg(args):
    _ardl(args, 'MG')


def cmd_simulate(args):
    if args.fixture:
        path = make_fixture(args.fixture, args.seed, args.periods)
        print(path)
        return
    config = DgpConfig(args.kind, args.units, args.periods, args.seed)
    simulation = draw(config)
    comments = ['generator: %s' % generator_name(),
                '%s seed=%r' % (args.kind, args.seed)]
    write_panel_csv(simulation.dataset, args.out, comments)
    truth = os.path.splitext(args.out)[0] + '_truth.csv'
    write_table(simulation.truth, truth, comments)
    logger.info('Wrote %s and %s', args.out, truth)


def cmd_run(args):
    config = load_config(args.config)
    if args.output:
        config.data['output'] = os.path.abspath(args.output)
    print(run_pipeline(config))


def cmd_report(args):
    print(report(args.bundle))


def _panel_parser(parser):
    parser.add_argument('--panel', required=True, help='long panel CSV')
    parser.add_argument('--balance', choices=BALANCE_POLICIES,
                        help='balance the panel first')
    parser.add_argument('--transform', type=_transform, action='append',
                        default=[], metavar='KIND:VARIABLE',
                        help='derive a variable, e.g. log:index_fin')
    parser.add_argument('--alpha', type=float, default=.05)
    parser.add_argument('--mqic-r', type=float, default=2.1)
    parser.add_argument('--backend', default=None)
    parser.add_argument('--out', default='-',
                        help='output CSV (default: stdout)')


def _pvar_parser(parser):
    _panel_parser(parser)
    parser.add_argument('--vars', type=_names, required=True,
                        help='comma-separated variables in Cholesky order')
    parser.add_argument('--transform-fe', dest='pvar_transform',
                        choices=PVAR_TRANSFORMS,
                        default='forward_orthogonal_deviations')
    parser.add_argument('--instrument-lags', type=int, nargs=2,
                        default=list(INSTRUMENT_LAGS),
                        metavar=('FIRST', 'LAST'))


def _ardl_parser(parser):
    _panel_parser(parser)
    parser.add_argument('--dep', required=True)
    parser.add_argument('--regressors', type=_names, required=True)
    parser.add_argument('--p', type=int, default=1)
    parser.add_argument('--q', type=int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='assetchannel',
        description='Asset price channel panel econometrics.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log debug messages')
    parser.add_argument('-q', '--quiet', action='store_true',
                        help='log warnings only')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    p = commands.add_parser('build-index', help='sectoral stock indices')
    p.add_argument('--prices', required=True)
    p.add_argument('--shares', required=True)
    p.add_argument('--sectors', required=True, help='ticker sector map CSV')
    p.add_argument('--base', required=True, help='base month, YYYY-MM')
    p.add_argument('--weighting', choices=WEIGHTINGS, default='monthly')
    p.add_argument('--scope', choices=SCOPES, default='regional')
    p.add_argument('--out', default='indices.csv')
    p.set_defaults(func=cmd_build_index)

    p = commands.add_parser('unit-root', help='Fisher-ADF unit root tests')
    _panel_parser(p)
    p.add_argument('--var', type=_names, required=True)
    p.add_argument('--diff', action='store_true',
                   help='also test first differences')
    p.add_argument('--deterministic', choices=list(DETERMINISTICS.values()),
                   default='constant')
    p.add_argument('--max-lags', type=int, default=MAX_ADF_LAGS)
    p.add_argument('--lag-rule', choices=LAG_RULES, default='aic')
    p.set_defaults(func=cmd_unit_root)

    pvar = commands.add_parser('pvar', help='panel VAR').add_subparsers(
        dest='pvar_command', metavar='COMMAND')
    pvar.required = True
    p = pvar.add_parser('fit', help='GMM estimation')
    _pvar_parser(p)
    p.add_argument('--lags', type=int, required=True)
    p.add_argument('--eigenvalues', help='eigenvalue CSV; an SVG is written '
                                         'next to it')
    p.set_defaults(func=cmd_pvar_fit)
    p = pvar.add_parser('select-lag', help='moment selection criteria')
    _pvar_parser(p)
    p.add_argument('--max', type=int, default=4)
    p.set_defaults(func=cmd_pvar_select_lag)
    p = pvar.add_parser('irf', help='orthogonalized impulse responses')
    _pvar_parser(p)
    p.add_argument('--lags', type=int, required=True)
    p.add_argument('--horizon', type=int, default=IRF_HORIZON)
    p.add_argument('--draws', type=int, default=IRF_DRAWS)
    p.add_argument('--seed', type=int, default=IRF_SEED)
    p.add_argument('--band', type=float, default=IRF_BAND)
    p.add_argument('--shocks', type=_names)
    p.add_argument('--plots', help='directory of SVG panels')
    p.set_defaults(func=cmd_pvar_irf)

    p = commands.add_parser('kao', help='Kao panel cointegration test')
    _panel_parser(p)
    p.add_argument('--dep', required=True)
    p.add_argument('--regressors', type=_names, required=True)
    p.add_argument('--residual-lags', type=int, default=1)
    p.add_argument('--bandwidth', type=int)
    p.add_argument('--calibration', choices=CALIBRATIONS,
                   default='simulated',
                   help='p-values from the simulated null or the normal '
                        'limit')
    p.set_defaults(func=cmd_kao)

    p = commands.add_parser('pmg', help='pooled mean group estimator')
    _ardl_parser(p)
    p.set_defaults(func=cmd_pmg)
    p = commands.add_parser('mg', help='mean group estimator')
    _ardl_parser(p)
    p.set_defaults(func=cmd_mg)

    p = commands.add_parser('simulate', help='synthetic panels')
    p.add_argument('--kind', choices=KINDS, default='cointegrated_ecm')
    p.add_argument('--units', type=int, default=6)
    p.add_argument('--periods', type=int, default=165)
    p.add_argument('--seed', type=int, default=42)
    p.add_argument('--out', default='panel.csv')
    p.add_argument('--fixture', metavar='DIR',
                   help='write a complete pipeline fixture instead')
    p.set_defaults(func=cmd_simulate)

    p = commands.add_parser('run', help='the full pipeline')
    p.add_argument('config', help='YAML configuration')
    p.add_argument('--output', help='override the output directory')
    p.set_defaults(func=cmd_run)

    p = commands.add_parser('report', help='summarize a bundle')
    p.add_argument('bundle', help='output directory of run')
    p.set_defaults(func=cmd_report)
    return parser


def _configure_logging(args):
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    stage = args.command
    if stage == 'pvar':
        stage = 'pvar %s' % args.pvar_command
    try:
        args.func(args)
    except StageError as exc:
        logger.error('%s', exc)
        return 1
    except (ConfigError, argparse.ArgumentTypeError, OSError) as exc:
        logger.error('%s: %s', stage, exc)
        return 2
    except (PanelError, ArithmeticError, ValueError) as exc:
        logger.error('stage %s failed: %s', stage, exc)
        return 1
    return 0
