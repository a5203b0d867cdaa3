# -*- coding: utf-8 -*-
import json
import math
import os
import warnings

from almost import Approximate
import numpy as np
import pandas as pd
from pytest import importorskip, raises, warns
import yaml

from assetchannelhelpers import (captured_logs, panel_from_arrays, replicate,
                                 substituted_env)
from conftest import various_backends
import assetchannel as a
from assetchannel import (
    adf_test, apply_transform, ArdlSpec, balance, build_index,
    companion_eigenvalues, compute_weights, ConstituentSeries,
    ConvergenceError, DgpConfig, draw, Environment, fisher_adf,
    fisher_combine, fit_mg, fit_pmg, fit_pvar, fit_unit_ardl, generate,
    global_env, half_life, kao_test, load_panel_csv, market_depth_indicators,
    orthogonalized_irf, PanelError, PvarFit, PvarSpec, select_lag,
    TransformSpec, write_panel_csv)
from assetchannel.ardl import half_life_note, mg_table, pmg_table
from assetchannel.backends import (available_backends, chi2_sf,
                                   choose_backend, gammainc)
from assetchannel.cli import main
from assetchannel.coint import kao_table, null_distribution
from assetchannel.index import (build_sector_indices, index_panel,
                                market_depth_table)
from assetchannel.mathematics import (companion_matrix, RankError,
                                      long_run_covariance)
from assetchannel.pipeline import (ConfigError, load_config, make_fixture,
                                   MANIFEST, PipelineConfig, report,
                                   run_pipeline, StageError, STAGES)
from assetchannel.plotting import plot_eigenvalues, plot_irf
from assetchannel.pvar import eigenvalue_frame, forward_orthogonal_deviations
from assetchannel.simulate import generate_constituents, generator_name
from assetchannel.unitroot import mackinnon_p, unit_root_table


warnings.simplefilter('always')


class almost(Approximate):

    def normalize(self, value):
        if isinstance(value, np.ndarray):
            return self.normalize(value.tolist())
        elif isinstance(value, np.generic):
            return self.normalize(value.item())
        return super(almost, self).normalize(value)


def quiet(f, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        return f(*args, **kwargs)


def var_panel(seed, coefs, cov=None, n_units=6, n_periods=165, **kwargs):
    config = DgpConfig('panel_var', n_units, n_periods, seed, coefs=coefs,
                       cov=cov, **kwargs)
    return generate(config)


# environment


def test_environment_defaults():
    env = Environment()
    assert env.alpha == 0.05
    assert env.mqic_r == 2.1
    assert repr(env) == \
        'assetchannel.Environment(alpha=0.050, mqic_r=2.100, backend=None)'


def test_setup_global_environment():
    assert global_env().alpha == 0.05
    with substituted_env(alpha=0.10):
        assert global_env().alpha == 0.10
    assert global_env().alpha == 0.05
    env = Environment(alpha=0.01)
    with substituted_env():
        env.make_as_global()
        assert global_env() is env
    assert global_env() is not env


def test_invalid_environment():
    with raises(ValueError):
        Environment(alpha=1.5)
    with raises(ValueError):
        Environment(backend='not-a-backend')


def test_stars():
    env = Environment()
    assert env.stars(0.001) == '***'
    assert env.stars(0.03) == '**'
    assert env.stars(0.07) == '*'
    assert env.stars(0.2) == ''


def test_backend():
    assert None in available_backends()
    with raises(ValueError):
        choose_backend('numpy')
    assert choose_backend(None).name is None


def test_internal_gammainc_matches_mpmath():
    mpmath = importorskip('mpmath')
    for a_, x in [(.5, .1), (2., 5.3), (6., 6.), (24., 3.), (3., 40.)]:
        expected = float(mpmath.gammainc(a_, 0, x, regularized=True))
        assert abs(gammainc(a_, x) - expected) < 1e-12
    for x, dof in [(.5, 1), (3., 2), (10.5966, 4), (40., 12)]:
        expected = float(mpmath.gammainc(dof / 2., x / 2., mpmath.inf,
                                         regularized=True))
        assert abs(chi2_sf(x, dof) - expected) < 1e-10


@various_backends
def test_fisher_combine():
    statistic, dof, p_value = fisher_combine([0.05, 0.10])
    assert abs(statistic + 2 * (math.log(.05) + math.log(.10))) < 1e-10
    assert almost(statistic, 4) == 10.5966
    assert dof == 4
    assert abs(p_value - 0.0315) < 5e-5
    assert fisher_combine([1., 1., 1.]) == (0., 6, 1.)


@various_backends
def test_fisher_combine_zero_p_value():
    statistic, dof, p_value = fisher_combine([0., 0.5])
    assert math.isfinite(statistic)
    assert 0 <= p_value < 1e-100
    with raises(ValueError):
        fisher_combine([])
    with raises(ValueError):
        fisher_combine([1.2])


def test_fisher_combine_order_and_null_units():
    p_values = [.02, .4, .13, .77, .05]
    statistic, dof, p_value = fisher_combine(p_values)
    assert fisher_combine(p_values[::-1]) == (statistic, dof, p_value)
    assert fisher_combine(sorted(p_values)) == (statistic, dof, p_value)
    more, more_dof, more_p = fisher_combine(p_values + [1.])
    assert more <= statistic
    assert more_dof == dof + 2
    assert more_p >= p_value


# panel data


def write_long(path, rows, header='unit,date,variable,value'):
    path.write_text('\n'.join([header] + rows) + '\n')
    return str(path)


def test_load_panel_shape(tmp_path):
    ds = draw(DgpConfig('independent_random_walks', 6, 165, 1,
                        variables=('irs', 'err', 'ip', 'cpi'))).dataset
    path = str(tmp_path / 'panel.csv')
    write_panel_csv(ds, path, ['generator: %s' % generator_name()])
    loaded = load_panel_csv(path)
    assert len(loaded.units) == 6
    assert len(loaded.periods) == 165
    assert loaded.variables == ('cpi', 'err', 'ip', 'irs')
    assert loaded.balanced
    assert loaded.n_obs == 6 * 165 * 4
    assert np.array_equal(loaded.series('U1', 'irs').to_numpy(),
                          ds.series('U1', 'irs').to_numpy())


def test_load_empty_panel(tmp_path):
    empty = tmp_path / 'empty.csv'
    empty.write_text('')
    with raises(PanelError) as exc:
        load_panel_csv(str(empty))
    assert 'no observations' in str(exc.value)
    header_only = write_long(tmp_path / 'header.csv', [])
    with raises(PanelError) as exc:
        load_panel_csv(header_only)
    assert 'no observations' in str(exc.value)


def test_load_minimal_panel(tmp_path):
    path = write_long(tmp_path / 'p.csv',
                      ['HR,2010-01,irs,1.5', 'HR,2010-02,irs,1.25'])
    ds = load_panel_csv(path)
    assert ds.n_obs == 2
    assert ds.units == ('HR',)


def test_load_panel_errors(tmp_path):
    duplicated = write_long(tmp_path / 'dup.csv', [
        'HR,2010-01,irs,1', 'HR,2010-01,irs,2'])
    with raises(PanelError) as exc:
        load_panel_csv(duplicated)
    assert 'HR' in str(exc.value) and 'irs' in str(exc.value)
    assert '2010-01' in str(exc.value)
    gap = write_long(tmp_path / 'gap.csv', [
        'HR,2010-01,irs,1', 'HR,2010-04,irs,2'])
    with raises(PanelError) as exc:
        load_panel_csv(gap)
    assert '2010-01..2010-04' in str(exc.value)
    broken = write_long(tmp_path / 'broken.csv', [
        'HR,2010-01,irs,1', 'HR,2010-13,irs,2', 'HR,2010-03,irs,abc'])
    with raises(PanelError) as exc:
        load_panel_csv(broken)
    assert 'line 3' in str(exc.value) and 'line 4' in str(exc.value)


def test_load_panel_schema_and_days(tmp_path):
    path = write_long(tmp_path / 'p.csv', [
        'SI,2012-05-31,cpi,101', 'SI,2012-06-30,cpi,102'],
        header='country,date,variable,value')
    with warns(UserWarning):
        ds = load_panel_csv(path, {'unit': 'country'})
    assert [str(p) for p in ds.periods] == ['2012-05', '2012-06']


def test_first_difference():
    ds = panel_from_arrays({'HR': [100., 110., 121.]}, ['x'])
    out = apply_transform(ds, TransformSpec('first_difference', 'x'))
    values = out.to_frame()['d_x'].to_numpy()
    assert math.isnan(values[0])
    assert list(values[1:]) == [10., 11.]
    assert len(out.series('HR', 'd_x')) == len(ds.series('HR', 'x')) - 1


def test_cumulated_difference_rebuilds_series():
    ds = generate(DgpConfig('independent_random_walks', 3, 50, 4,
                            variables=('x',)))
    out = apply_transform(ds, TransformSpec('first_difference', 'x'))
    for unit in ds.units:
        level = ds.series(unit, 'x').to_numpy()
        diff = out.series(unit, 'd_x').to_numpy()
        rebuilt = level[0] + np.concatenate([[0.], np.cumsum(diff)])
        assert np.abs(rebuilt - level).max() < 1e-9


def test_transforms_leave_input_alone():
    ds = panel_from_arrays({'HR': [1., 2., 4.], 'SI': [3., 9., 27.]}, ['x'])
    before = ds.to_frame()
    for kind in ('log', 'first_difference', 'per_unit_demean'):
        out = apply_transform(ds, TransformSpec(kind, 'x'))
        assert len(out.variables) == 2
    assert ds.variables == ('x',)
    assert ds.to_frame().equals(before)


def test_panel_csv_round_trip(tmp_path):
    ds = draw(DgpConfig('panel_var', 4, 30, 9,
                        coefs=[[.5, .1], [0., .3]])).dataset
    first = str(tmp_path / 'first.csv')
    second = str(tmp_path / 'second.csv')
    write_panel_csv(ds, first, ['generator: %s' % generator_name()])
    loaded = load_panel_csv(first)
    assert loaded == ds
    write_panel_csv(loaded, second, ['generator: %s' % generator_name()])
    with open(first, 'rb') as f, open(second, 'rb') as g:
        assert f.read() == g.read()


def test_per_unit_demean_and_log():
    ds = panel_from_arrays({'HR': [5., 5., 5.], 'SI': [1., math.e,
                                                       math.e ** 2]}, ['x'])
    out = apply_transform(ds, TransformSpec('per_unit_demean', 'x'))
    assert list(out.series('HR', 'dm_x')) == [0., 0., 0.]
    out = apply_transform(ds, TransformSpec('log', 'x', 'lx'))
    assert almost(out.series('SI', 'lx').to_numpy(), 12) == [0., 1., 2.]


def test_log_of_nonpositive():
    ds = panel_from_arrays({'HR': [1., 2.], 'RS': [3., -1.]}, ['x'])
    with raises(PanelError) as exc:
        apply_transform(ds, TransformSpec('log', 'x'))
    assert 'RS' in str(exc.value) and '2010-02' in str(exc.value)
    with raises(ValueError):
        TransformSpec('sqrt', 'x')


def test_balance_identity():
    ds = panel_from_arrays({'HR': np.ones((4, 2)), 'SI': np.ones((4, 2))},
                           ['x', 'y'])
    for policy in ('drop_incomplete_periods', 'drop_incomplete_units'):
        balanced = balance(ds, policy)
        assert balanced == ds
        assert balanced.dropped == ()


def test_balance_drops_final_month():
    ds = panel_from_arrays({'HR': np.ones(5), 'SI': np.ones(4)}, ['x'])
    assert not ds.balanced
    balanced = balance(ds, 'drop_incomplete_periods')
    assert balanced.balanced
    assert [str(p) for p in balanced.periods][-1] == '2010-04'
    assert balanced.dropped == (('HR', '2010-05'),)
    by_units = balance(ds, 'drop_incomplete_units')
    assert by_units.units == ('HR',)


def test_balance_disjoint_units():
    frame = pd.concat([
        panel_from_arrays({'HR': np.ones(3)}, ['x']).to_frame(),
        panel_from_arrays({'SI': np.ones(3)}, ['x'],
                          start='2012-01').to_frame()])
    ds = a.PanelDataset.from_frame(frame)
    with raises(PanelError):
        balance(ds, 'drop_incomplete_periods')
    with raises(ValueError):
        balance(ds, 'interpolate')


def test_unit_block_requires_balance():
    frame = panel_from_arrays({'HR': np.arange(1., 6.)}, ['x']).to_frame()
    frame['y'] = [1., 2., np.nan, 4., 5.]
    ds = a.PanelDataset.from_frame(frame)
    with raises(PanelError) as exc:
        ds.unit_block('HR', ['x', 'y'])
    assert 'balance' in str(exc.value)


# sectoral indices


def months(n, start='2015-01'):
    return pd.period_range(start, periods=n, freq='M')


def firm(ticker, prices, shares, sector='FIN', country='HR',
         start='2015-01'):
    prices = pd.Series(prices, index=months(len(prices), start))
    return ConstituentSeries(ticker, country, sector, prices.dropna(),
                             pd.Series([shares], index=months(1, start)))


def test_compute_weights():
    two = [firm('A', [75.], 1), firm('B', [25.], 1)]
    assert list(compute_weights(two, '2015-01').values()) == [.75, .25]
    assert list(compute_weights(two[:1], '2015-01').values()) == [1.]
    three = [firm(t, [10.], 3) for t in 'ABC']
    assert almost(list(compute_weights(three, '2015-01').values()),
                  12) == [1 / 3.] * 3
    with raises(ValueError) as exc:
        compute_weights(two, '2016-01')
    assert 'empty sector-month' in str(exc.value)


def test_build_index_examples():
    up = [firm('A', [10., 11.], 5), firm('B', [20., 22.], 5)]
    series = build_index(up, '2015-01')
    assert series.values.iloc[0] == 100.
    assert almost(series.values.iloc[1], 10) == 110.
    doubles = [firm('A', [25., 50.], 1), firm('B', [75., 75.], 1)]
    assert almost(build_index(doubles, '2015-01').values.iloc[1],
                  10) == 125.


def test_single_constituent_index():
    prices = [10., 12., 9., 15.]
    series = build_index([firm('A', prices, 7)], '2015-01')
    assert almost(series.values.to_numpy(), 12) == \
        [100. * p / prices[0] for p in prices]


def test_index_entry_and_exit():
    constituents = [firm('A', [10., 11., 12., 13., 14.], 10),
                    firm('B', [None, None, 5., 6., 6.], 10),
                    firm('C', [8., 8., None, 8., 8.], 10)]
    series = build_index(constituents, '2015-01')
    members = {str(m): set(t) for m, t in
               series.constituents_per_month.items()}
    assert members['2015-02'] == set('AC')
    # B is priced from March, C misses March
    assert members['2015-03'] == set('A')
    assert members['2015-04'] == set('AB')
    assert members['2015-05'] == set('ABC')
    for weights in series.weights_per_month.values():
        assert abs(math.fsum(weights.values()) - 1) < 1e-12
        assert min(weights.values()) >= 0
    assert (series.values > 0).all()


def test_index_duplicate_tickers():
    constituents = [firm('A', [10., 11., 12.], 10),
                    firm('A', [None, 5., 6.], 10, country='SI')]
    with raises(ValueError) as exc:
        build_index(constituents, '2015-01')
    assert 'Duplicate constituents: A' in str(exc.value)


def test_index_empty_sector_month():
    constituents = [firm('A', [10., None, 12.], 1)]
    with raises(ValueError) as exc:
        build_index(constituents, '2015-01')
    assert 'empty sector-month' in str(exc.value)


def brute_force_index(constituents, base, weighting='monthly'):
    """A loop over a dense price and share grid."""
    grid = pd.period_range(base, max(c.prices.index[-1]
                                     for c in constituents), freq='M')
    prices = pd.DataFrame({c.ticker: c.prices.reindex(grid)
                           for c in constituents})
    shares = pd.DataFrame({
        c.ticker: c.shares_outstanding.reindex(
            c.shares_outstanding.index.union(grid)).ffill().bfill()
        .reindex(grid) for c in constituents})
    levels = [100.]
    for t in range(1, len(grid)):
        both = prices.iloc[t].notna() & prices.iloc[t - 1].notna()
        s = shares.iloc[t - 1 if weighting == 'monthly' else 0][both]
        p0, p1 = prices.iloc[t - 1][both], prices.iloc[t][both]
        caps = p0 * s
        levels.append(levels[-1] * (caps * p1 / p0).sum() / caps.sum())
    return np.array(levels)


def test_index_matches_brute_force():
    constituents = generate_constituents(13, 165, 'MAN', seed=7)
    for weighting in ('monthly', 'base'):
        series = build_index(constituents, '2010-01', weighting)
        expected = brute_force_index(constituents, '2010-01', weighting)
        values = series.values.to_numpy()
        assert len(values) == 165
        assert np.abs(values / expected - 1).max() < 1e-9
        for weights in series.weights_per_month.values():
            assert abs(math.fsum(weights.values()) - 1) < 1e-12


def test_index_scale_invariance():
    constituents = generate_constituents(13, 60, 'TELECOM', seed=3)
    series = build_index(constituents, '2010-01')
    scaled = [c.with_prices(c.prices * 37.5) for c in constituents]
    rescaled = build_index(scaled, '2010-01')
    assert np.abs(rescaled.values.to_numpy() /
                  series.values.to_numpy() - 1).max() < 1e-12


def test_index_split_invariance():
    constituents = generate_constituents(6, 60, 'ELEC', seed=5)
    series = build_index(constituents, '2010-01')
    first = constituents[0]
    shares = first.shares_outstanding * 2
    halves = [ConstituentSeries(first.ticker + suffix, first.country,
                                first.sector, first.prices, shares / 2)
              for suffix in ('a', 'b')]
    doubled = [ConstituentSeries(c.ticker, c.country, c.sector, c.prices,
                                 c.shares_outstanding * 2)
               for c in constituents[1:]]
    split = build_index(halves + doubled, '2010-01')
    assert np.abs(split.values.to_numpy() /
                  series.values.to_numpy() - 1).max() < 1e-12


def test_sector_indices_scopes():
    constituents = generate_constituents(12, 24, 'FIN', ('HR', 'SI'), 9) + \
        generate_constituents(4, 24, 'MAN', ('HR', 'SI'), 10)
    regional = build_sector_indices(constituents, '2010-01')
    assert list(regional) == ['MAN', 'FIN']
    assert regional['FIN'].country is None
    by_country = build_sector_indices(constituents, '2010-01',
                                      scope='country')
    assert list(by_country) == [('MAN', 'HR'), ('MAN', 'SI'),
                                ('FIN', 'HR'), ('FIN', 'SI')]
    panel = index_panel(by_country, ['HR', 'SI'])
    assert panel.variables == ('index_man', 'index_fin')
    assert panel.units == ('HR', 'SI')
    panel = index_panel(regional, ['HR', 'SI'])
    assert np.array_equal(panel.series('HR', 'index_fin').to_numpy(),
                          panel.series('SI', 'index_fin').to_numpy())


def test_invalid_constituent():
    with raises(ValueError):
        firm('A', [10., -1.], 1)
    with raises(ValueError):
        firm('A', [10.], 1, sector='MINING')
    with raises(ValueError):
        firm('A', [10.], 1.5)


def test_market_depth():
    depth = market_depth_indicators(27, 0, 100, 200, 1000000)
    assert depth.cap_to_gdp == .27
    assert depth.turnover_to_gdp == 0
    assert depth.firms_per_10k == 2.
    with raises(ValueError):
        market_depth_indicators(27, 0, 0, 200, 1000000)
    with raises(ValueError):
        market_depth_indicators(27, 0, 100, 200, -1)
    frame = pd.DataFrame({'country': ['HR', 'HR', 'BA'],
                          'year': [2005, 2006, 2005],
                          'mcap': [27., 33., 10.], 'turnover': [2., 4., 0.],
                          'gdp': [100., 100., 50.],
                          'listings': [150, 170, 200],
                          'population': [4e6, 4e6, 1e6]})
    table = market_depth_table(frame)
    assert almost(table.loc['HR', 'cap_to_gdp'], 10) == .30
    assert table.loc['BA', 'firms_per_10k'] == 2.


# unit roots


def random_walk(seed, n=165):
    return np.cumsum(np.random.default_rng(seed).standard_normal(n))


def test_adf_size():
    p_values = replicate(lambda s: adf_test(random_walk(s)).p_value,
                         range(1000))
    assert np.mean(np.array(p_values) > .05) >= .93


def test_adf_power():
    def p(seed):
        return adf_test(np.random.default_rng(seed).standard_normal(165)) \
            .p_value
    assert np.mean(np.array(replicate(p, range(100))) < .05) >= .95


def test_adf_exact_trend():
    with warns(UserWarning):
        result = adf_test(np.arange(1., 166.))
    assert not result.rejects()
    assert 0 <= result.p_value <= 1


def test_adf_result_fields():
    result = adf_test(random_walk(1), 'ct', max_lags=6)
    assert result.deterministic == 'constant_trend'
    assert 0 <= result.lags_used <= 6
    assert 0 <= result.p_value <= 1
    fixed = adf_test(random_walk(1), 'none', max_lags=3, lag_rule='fixed')
    assert fixed.lags_used == 3
    assert fixed.n_obs == 165 - 1 - 3


def test_adf_errors():
    with raises(ValueError) as exc:
        adf_test(np.ones(100))
    assert 'constant series' in str(exc.value)
    with raises(ValueError) as exc:
        adf_test(random_walk(0, 15))
    assert 'too short' in str(exc.value)
    with raises(ValueError):
        adf_test(random_walk(0), 'quadratic')


def test_adf_scale_invariance():
    y = random_walk(11)
    tau = adf_test(y).tau
    assert abs(adf_test(3.7 * y).tau - tau) < 1e-10
    assert abs(adf_test(.02 * y + 5.).tau - tau) < 1e-10


def test_adf_matches_statsmodels():
    stattools = importorskip('statsmodels.tsa.stattools')
    for seed, regression, deterministic in [(3, 'c', 'c'), (4, 'ct', 'ct'),
                                            (5, 'ct', 'ct')]:
        y = random_walk(seed)
        tau, p_value = stattools.adfuller(y, maxlag=4, regression=regression,
                                          autolag=None)[:2]
        result = adf_test(y, deterministic, max_lags=4, lag_rule='fixed')
        assert abs(result.tau - tau) < 1e-8
        assert abs(result.p_value - p_value) < 1e-6


@various_backends
def test_mackinnon_p_bounds():
    assert mackinnon_p(-25., 'c') == 0.
    assert mackinnon_p(5., 'c') == 1.
    assert almost(mackinnon_p(-2.86, 'c'), 2) == .05
    assert almost(mackinnon_p(-3.43, 'c'), 2) == .01


def walks(seed, kind='independent_random_walks'):
    return generate(DgpConfig(kind, 6, 165, seed, variables=('y',)))


def test_fisher_adf_statistic():
    ds = walks(1)
    result = fisher_adf(ds, 'y')
    p_values = [r.p_value for r in result.per_unit.values()]
    assert abs(result.statistic + 2 * math.fsum(map(math.log, p_values))) \
        < 1e-10
    assert result.dof == 12
    assert list(result.per_unit) == list(ds.units)


def test_fisher_adf_levels_and_differences():
    levels, differences = [], []
    for seed in range(10):
        table = unit_root_table(walks(seed), ['y'])
        levels.append(table['level_p'][0])
        differences.append(table['difference_p'][0])
    assert sum(p > .05 for p in levels) >= 7
    assert max(differences) < .01


def test_fisher_adf_white_noise():
    rejections = [fisher_adf(walks(s, 'white_noise'), 'y').rejects()
                  for s in range(40)]
    assert np.mean(rejections) >= .95


def test_fisher_adf_names_failing_unit():
    ds = panel_from_arrays({'HR': random_walk(1), 'SI': random_walk(2),
                            'BA': np.full(165, 3.)}, ['y'])
    with raises(ValueError) as exc:
        fisher_adf(ds, 'y')
    assert 'unit BA' in str(exc.value)
    with raises(PanelError):
        fisher_adf(panel_from_arrays({'HR': random_walk(1)}, ['y']), 'y')


def test_unit_root_table_layout():
    ds = apply_transform(walks(3), TransformSpec('first_difference', 'y'))
    with captured_logs() as logs:
        table = unit_root_table(ds, ['y'], 'constant', 4, 'fixed')
    assert list(table.columns) == ['variable', 'level_statistic', 'level_p',
                                   'difference_statistic', 'difference_p']
    assert any('deterministic=constant' in log for log in logs)


# panel VAR


def test_fod_examples():
    ds = panel_from_arrays({'HR': [2., 2., 2., 2.], 'SI': [3., 7.]}, ['x'])
    out = forward_orthogonal_deviations(ds, ['x'])
    assert list(out.series('HR', 'x')) == [0., 0., 0.]
    assert almost(list(out.series('SI', 'x')), 12) == \
        [math.sqrt(.5) * (3. - 7.)]
    with raises(PanelError):
        forward_orthogonal_deviations(
            panel_from_arrays({'HR': [1.]}, ['x']), ['x'])


def test_fod_preserves_variance():
    x = np.random.default_rng(0).standard_normal((200, 500))
    transformed = a.mathematics.forward_orthogonal_deviations(x)
    assert abs(transformed.var() - 1.) < .02


def test_within_demean_single_unit_equals_ols():
    ds = var_panel(3, [[.5, .1], [.2, .3]], n_units=1, n_periods=120)
    fit = fit_pvar(ds, PvarSpec(('y1', 'y2'), 1, 'within_demean'))
    __, values = ds.unit_block('U1', ['y1', 'y2'])
    design = np.column_stack([np.ones(len(values) - 1), values[:-1]])
    coef, __, __, __ = np.linalg.lstsq(design, values[1:], rcond=None)
    assert np.abs(fit.coefs[0] - coef[1:].T).max() < 1e-8


def test_pvar_recovers_var1():
    truth = np.array([[.5, .1], [0., .3]])
    estimates = np.array(replicate(
        lambda s: fit_pvar(var_panel(s, [truth]),
                           PvarSpec(('y1', 'y2'), 1)).coefs[0],
        range(200)))
    mean, sd = estimates.mean(axis=0), estimates.std(axis=0, ddof=1)
    assert (np.abs(mean - truth) < 3 * sd / math.sqrt(len(estimates))).all()


def test_pvar_null_dgp():
    estimates = np.array(replicate(
        lambda s: fit_pvar(var_panel(s, [np.zeros((2, 2))]),
                           PvarSpec(('y1', 'y2'), 1)).coefs[0],
        range(30)))
    assert np.abs(estimates.mean(axis=0)).mean() < .05


def test_pvar_fit_properties():
    ds = var_panel(5, [[.4, .1], [.1, .2]], cov=[[1., .3], [.3, .5]])
    spec = PvarSpec(('y1', 'y2'), 2)
    fit = fit_pvar(ds, spec)
    assert fit.coefs.shape == (2, 2, 2)
    assert np.allclose(fit.sigma, fit.sigma.T)
    assert np.linalg.eigvalsh(fit.sigma).min() >= -1e-10
    means = fit.residuals.to_frame().groupby(level='unit').mean()
    assert np.abs(means.to_numpy()).max() < 1e-8
    assert fit.n_moments == 16 and fit.n_params == 8
    assert fit.overidentification == 8
    assert 0 <= fit.j_pvalue() <= 1
    frame = fit.coefficient_frame()
    assert list(frame.columns) == ['equation', 'regressor', 'lag',
                                   'estimate', 'se', 'z']
    assert len(frame) == 8
    assert np.allclose(fit.coefs_from_params(fit.params), fit.coefs)


def test_pvar_errors():
    short = var_panel(1, [[.5]], n_units=2, n_periods=5, variables=('y',))
    with raises(PanelError) as exc:
        fit_pvar(short, PvarSpec(('y',), 1))
    assert 'Insufficient time depth' in str(exc.value)
    with raises(ValueError):
        PvarSpec(('y', 'y'), 1)
    with raises(ValueError):
        PvarSpec(('y',), 0)
    with raises(ValueError):
        PvarSpec(('y',), 1, instrument_lags=(3, 2))


def test_select_lag_table_shape():
    ds = var_panel(2, [[.5, .1], [.2, .3]])
    assert PvarSpec(('y1', 'y2')).instrument_lags == (2, 4)
    table = select_lag(ds, PvarSpec(('y1', 'y2')), 4)
    frame = table.to_frame()
    assert list(frame['lag']) == [1, 2, 3, 4]
    assert frame.loc[:1, 'maic'].notna().all()
    assert frame.loc[2:, ['j', 'mbic', 'maic', 'mqic']].isna().all().all()
    assert table.chosen_lag('maic') in (1, 2)
    wide = select_lag(ds, PvarSpec(('y1', 'y2'), instrument_lags=(1, 4)), 4)
    frame = wide.to_frame()
    assert frame.loc[:2, 'maic'].notna().all()
    assert frame.loc[3, ['j', 'mbic', 'maic', 'mqic']].isna().all()
    assert wide.chosen_lag('maic') in (1, 2, 3)


def test_select_lag_var2():
    coefs = [.3 * np.eye(2), .5 * np.eye(2)]
    chosen, estimates = [], []
    for seed in range(100):
        ds = var_panel(seed, coefs)
        chosen.append(select_lag(ds, PvarSpec(('y1', 'y2')), 3)
                      .chosen_lag('maic'))
        if seed < 40:
            estimates.append(fit_pvar(ds, PvarSpec(('y1', 'y2'), 2)).coefs)
    assert np.mean(np.array(chosen) == 2) >= .8
    estimates = np.array(estimates)
    mean, sd = estimates.mean(axis=0), estimates.std(axis=0, ddof=1)
    tolerance = np.maximum(3 * sd / math.sqrt(len(estimates)), .05)
    assert (np.abs(mean - np.array(coefs)) < tolerance).all()


def test_select_lag_var1():
    picks = {'mbic': [], 'maic': [], 'mqic': []}
    for seed in range(20):
        ds = var_panel(seed, [[.5, 0.], [.2, .4]], n_units=30)
        table = select_lag(ds, PvarSpec(('y1', 'y2')), 3)
        for criterion in picks:
            picks[criterion].append(table.chosen_lag(criterion))
    assert all(p == 1 for p in picks['mbic'])
    assert np.mean(np.array(picks['mqic']) == 1) >= .9
    assert np.mean(np.array(picks['maic']) == 1) >= .7


def known_fit(coefs, sigma, coef_cov=None, variables=None):
    coefs = np.asarray(coefs, dtype=float)
    if coefs.ndim == 2:
        coefs = coefs[None]
    if variables is None:
        variables = ['v%d' % i for i in range(coefs.shape[1])]
    return PvarFit.from_coefficients(variables, coefs, sigma, coef_cov)


def test_companion_eigenvalues_closed_forms():
    stability = companion_eigenvalues(known_fit([[.5]], [[1.]]))
    assert abs(stability.moduli[0] - .5) < 1e-12
    assert stability.stable
    stability = companion_eigenvalues(known_fit(np.eye(3), np.eye(3)))
    assert np.allclose(stability.moduli, 1., atol=1e-12)
    assert not stability.stable
    stability = companion_eigenvalues(known_fit(np.zeros((2, 2, 2)),
                                                np.eye(2)))
    assert np.abs(stability.moduli).max() < 1e-6
    # z^2 - .5 z - .24 = (z - .8)(z + .3)
    stability = companion_eigenvalues(known_fit([[[.5]], [[.24]]], [[1.]]))
    assert np.abs(stability.moduli - [.8, .3]).max() < 1e-12
    stability = companion_eigenvalues(known_fit([[.9, .4], [0., -.2]],
                                                np.eye(2)))
    assert np.abs(stability.moduli - [.9, .2]).max() < 1e-12
    assert list(eigenvalue_frame(stability).columns) == ['real', 'imag',
                                                         'modulus']
    assert companion_matrix([np.eye(2), np.eye(2)]).shape == (4, 4)


def test_irf_ar1_closed_form():
    rho = .7
    irf = orthogonalized_irf(known_fit([[rho]], [[1.]]), horizon=30,
                             n_draws=0)
    assert np.abs(irf.responses[0, 0] - rho ** np.arange(31)).max() < 1e-10


def test_irf_impact_is_cholesky():
    sigma = np.array([[2., .6, .2], [.6, 1., .3], [.2, .3, .5]])
    fit = known_fit(np.diag([.5, .4, .3]), sigma)
    irf = orthogonalized_irf(fit, n_draws=0)
    impact = irf.responses[:, :, 0]
    assert np.abs(impact @ impact.T - sigma).max() < 1e-12
    assert all(impact[i, j] == 0. for i in range(3) for j in range(i + 1, 3))
    assert np.allclose(np.diag(irf.unit_responses[:, :, 0]), 1.)
    reordered = orthogonalized_irf(fit, ['v2', 'v0', 'v1'], n_draws=0)
    assert reordered.variables == ('v2', 'v0', 'v1')
    assert reordered.responses[1, 0, 0] != 0.
    assert reordered.responses[0, 1, 0] == 0.


def test_irf_decoupled_system():
    fit = known_fit(np.diag([.6, .2]), np.diag([1., 4.]))
    irf = orthogonalized_irf(fit, horizon=12, n_draws=0)
    assert (irf.responses[0, 1] == 0.).all()
    assert (irf.responses[1, 0] == 0.).all()


def test_irf_bands():
    fit = known_fit([[.5, .1], [.2, .3]], [[1., .2], [.2, .5]],
                    coef_cov=.01 * np.eye(4))
    first = orthogonalized_irf(fit, horizon=10, n_draws=200, seed=42)
    second = orthogonalized_irf(fit, horizon=10, n_draws=200, seed=42)
    assert np.array_equal(first.lower, second.lower)
    assert np.array_equal(first.upper, second.upper)
    other = orthogonalized_irf(fit, horizon=10, n_draws=200, seed=7)
    assert not np.array_equal(first.lower, other.lower)
    assert (first.lower <= first.responses).all()
    assert (first.responses <= first.upper).all()
    frame = first.to_frame()
    assert list(frame.columns[:6]) == ['response', 'shock', 'horizon',
                                       'point', 'lower', 'upper']
    assert len(frame) == 2 * 2 * 11


def test_irf_dies_out():
    fit = known_fit([[[.5, .1], [.2, .3]], [[.1, 0.], [0., .1]]], np.eye(2))
    irf = orthogonalized_irf(fit, horizon=100, n_draws=0)
    assert np.abs(irf.responses[:, :, 100]).max() < 1e-6


def test_irf_errors():
    with raises(ValueError) as exc:
        orthogonalized_irf(known_fit(np.eye(2) * .5, [[1., 2.], [2., 1.]]),
                           n_draws=0)
    assert 'smallest eigenvalue' in str(exc.value)
    with warns(UserWarning):
        orthogonalized_irf(known_fit([[1.1]], [[1.]]), horizon=5, n_draws=0)
    with raises(ValueError):
        orthogonalized_irf(known_fit([[.5]], [[1.]]), ['v0', 'v1'])


def test_irf_policy_shock_shape():
    ds = var_panel(11, [[.8, 0.], [.4, .6]], cov=[[1., .5], [.5, 1.]],
                   variables=('irs', 'index_fin'))
    fit = fit_pvar(ds, PvarSpec(('irs', 'index_fin'), 1))
    irf = orthogonalized_irf(fit, horizon=24, n_draws=300, seed=42)
    point, lower, upper = irf.response('index_fin', 'irs')
    assert (lower[:7] > 0).all()
    peak = int(np.argmax(point))
    assert peak <= 6
    assert point[12] < point[peak]
    assert abs(point[24]) < .25 * point[peak]


def test_figures_are_reproducible(tmp_path):
    fit = known_fit([[.5, .1], [.2, .3]], [[1., .2], [.2, .5]],
                    coef_cov=.01 * np.eye(4))
    paths = []
    for name in ('a.svg', 'b.svg'):
        path = str(tmp_path / name)
        plot_eigenvalues(companion_eigenvalues(fit), path)
        paths.append(path)
    contents = [open(p, 'rb').read() for p in paths]
    assert contents[0] == contents[1]
    assert b'<svg' in contents[0]
    irf = orthogonalized_irf(fit, horizon=8, n_draws=50)
    path = plot_irf(irf, 'v1', 'v0', str(tmp_path / 'irf.svg'), unit=True)
    assert os.path.getsize(path) > 0


# cointegration


def cointegrated_pair(seed, n_units=6, n_periods=165):
    rng = np.random.default_rng(seed)
    arrays = {}
    for i in range(n_units):
        x = np.cumsum(rng.standard_normal(n_periods))
        y = 2 * x + rng.standard_normal(n_periods) + i
        arrays['U%d' % (i + 1)] = np.column_stack([y, x])
    return panel_from_arrays(arrays, ['y', 'x'])


def test_kao_power():
    rejections = [kao_test(cointegrated_pair(s), 'y', ['x']).rejects()
                  for s in range(500)]
    assert np.mean(rejections) >= .8


def test_kao_size():
    def rejects(seed):
        ds = generate(DgpConfig('independent_random_walks', 6, 165, seed,
                                variables=('y', 'x')))
        result = kao_test(ds, 'y', ['x'])
        assert 0 <= result.p_value <= 1
        return result.rejects()
    assert .03 <= np.mean(replicate(rejects, range(500))) <= .07


@various_backends
def test_kao_asymptotic_calibration():
    ds = cointegrated_pair(4)
    simulated = kao_test(ds, 'y', ['x'])
    asymptotic = kao_test(ds, 'y', ['x'], calibration='asymptotic')
    assert simulated.calibration == 'simulated'
    assert asymptotic.statistic == simulated.statistic
    expected = global_env().cdf(simulated.statistic)
    assert abs(asymptotic.p_value - expected) < 1e-12
    assert abs(simulated.asymptotic_p_value - expected) < 1e-12
    with raises(ValueError):
        kao_test(ds, 'y', ['x'], calibration='bootstrap')


def test_kao_null_distribution():
    null_distribution.cache_clear()
    draws = null_distribution(3, 40, 1, 0, 2, replications=50)
    assert len(draws) == 50
    assert (np.diff(draws) >= 0).all()
    null_distribution.cache_clear()
    assert np.array_equal(null_distribution(3, 40, 1, 0, 2, replications=50),
                          draws)
    other = null_distribution(3, 40, 2, 0, 2, replications=50)
    assert not np.array_equal(other, draws)


def test_kao_statistic_invariance():
    ds = generate(DgpConfig('independent_random_walks', 6, 165, 7,
                            variables=('y', 'x')))
    frame = ds.to_frame()
    shift = frame.index.get_level_values('unit').str[1:].astype(float)
    frame['y'] = 3. * frame['y'] - 2. * frame['x'] + shift
    frame['x'] = .5 * frame['x'] + 10.
    moved = a.PanelDataset.from_frame(frame)
    before = kao_test(ds, 'y', ['x'], calibration='asymptotic')
    after = kao_test(moved, 'y', ['x'], calibration='asymptotic')
    assert abs(before.statistic - after.statistic) < 1e-8


def test_kao_result():
    result = kao_test(cointegrated_pair(1), 'y', ['x'], residual_lags=2)
    assert result.variant == 'ADF'
    assert result.residual_lags == 2
    assert (result.n_units, result.n_periods) == (6, 165)
    assert result.bandwidth == 4
    assert almost(result.beta[0], 1) == 2.
    assert result.sigma_v2 > 0 and result.sigma_0v2 > 0
    table = kao_table(cointegrated_pair(1), {'fin': ('y', ['x'])})
    assert list(table['system']) == ['fin']
    assert table['p_value'][0] < .01


def test_kao_errors():
    ds = cointegrated_pair(2)
    frame = ds.to_frame().iloc[:-1]
    with raises(PanelError) as exc:
        kao_test(a.PanelDataset.from_frame(frame), 'y', ['x'])
    assert 'balance' in str(exc.value)
    frame = ds.to_frame()
    frame['x'] = frame.index.get_level_values('unit').str[1:].astype(float)
    with raises(RankError):
        kao_test(a.PanelDataset.from_frame(frame), 'y', ['x'])


def test_long_run_covariance_white_noise():
    w = np.random.default_rng(0).standard_normal((20000, 2))
    omega = long_run_covariance(w, 4)
    assert np.abs(omega - np.eye(2)).max() < .05


# panel ARDL


def test_half_life():
    assert half_life(-.5) == 1.
    assert abs(half_life(-.0301) - 22.68) < .1
    assert abs(half_life(-.0549) - 12.28) < .1
    for phi in (0., .1, -1., -1.5):
        with raises(ValueError) as exc:
            half_life(phi)
        assert 'no stable half-life' in str(exc.value)
    assert 'outside the 1.5-3 year range' in half_life_note(-.0549)
    assert 'outside' not in half_life_note(-.0301)


def unit_ecm(seed, phi=-.5, beta=1., n=165, x=None):
    rng = np.random.default_rng(seed)
    if x is None:
        x = rng.standard_normal(n)
    y = np.zeros(n)
    for t in range(1, n):
        y[t] = (1 + phi) * y[t - 1] + beta * x[t] + rng.standard_normal()
    return np.column_stack([y, x])


def test_unit_ardl_recovery():
    spec = ArdlSpec('y', ['x'], (1, 0))
    fit = fit_unit_ardl(unit_ecm(4), spec, 'U1')
    assert abs(fit.theta[0] - 2.) < 3 * fit.theta_se[0]
    assert abs(fit.phi + .5) < 3 * fit.phi_se
    assert not fit.non_converging
    assert list(fit.short_run) == ['const']


def test_unit_ardl_identity():
    x = np.random.default_rng(0).standard_normal(100)
    fit = fit_unit_ardl(pd.DataFrame({'x': x, 'y': x}),
                        ArdlSpec('y', ['x'], (1, 0)))
    assert almost(fit.theta[0], 8) == 1.
    assert almost(fit.phi, 8) == -1.
    assert np.abs(fit.resid).max() < 1e-10


def test_unit_ardl_without_error_correction():
    spec = ArdlSpec('y', ['x'], (1, 1))
    def flagged(seed):
        rng = np.random.default_rng(seed)
        data = np.column_stack([np.cumsum(rng.standard_normal(165)),
                                rng.standard_normal(165)])
        return quiet(fit_unit_ardl, data, spec, seed).non_converging
    assert np.mean(replicate(flagged, range(200))) >= .9
    # an explosive unit has phi > 0
    rng = np.random.default_rng(0)
    x = rng.standard_normal(100)
    y = np.empty(100)
    y[0] = 1.
    for t in range(1, 100):
        y[t] = 1.05 * y[t - 1] + rng.standard_normal()
    with warns(UserWarning):
        fit = fit_unit_ardl(np.column_stack([y, x]), spec)
    assert fit.non_converging and fit.phi > 0


def test_unit_ardl_collinear():
    rng = np.random.default_rng(1)
    x = np.cumsum(rng.standard_normal(80))
    data = np.column_stack([x + rng.standard_normal(80), x, 2 * x])
    with raises(RankError) as exc:
        fit_unit_ardl(data, ArdlSpec('y', ['x1', 'x2'], (1, 1)))
    assert exc.value.columns


def test_ardl_spec():
    spec = ArdlSpec('y', ['a', 'b'], (2, {'a': 0, 'b': 3}))
    assert spec.q == (0, 3)
    assert spec.start == 3
    assert spec.describe() == 'ARDL(2,0,3) y on a,b'
    with raises(ValueError):
        ArdlSpec('y', ['y'])
    with raises(ValueError):
        ArdlSpec('y', ['a'], (0, 1))
    with raises(ValueError):
        ArdlSpec('y', ['a'], estimator='FE')


def ecm_panel(seed, theta=(.6, -.8), **kwargs):
    config = DgpConfig('cointegrated_ecm', 6, 165, seed, theta=theta,
                       variables=('y', 'x1', 'x2')[:len(theta) + 1],
                       **kwargs)
    return draw(config)


def test_pmg_coverage():
    spec = ArdlSpec('y', ['x1', 'x2'])
    covered = []
    for seed in range(200):
        fit = quiet(fit_pmg, ecm_panel(seed).dataset, spec)
        lower, upper = fit.confidence_interval(.95)
        covered.append((lower <= [.6, -.8]) & ([.6, -.8] <= upper))
    assert (np.mean(covered, axis=0) >= .90).all()


def test_pmg_fit():
    simulation = ecm_panel(3)
    fit = fit_pmg(simulation.dataset, ArdlSpec('y', ['x1', 'x2']))
    assert fit.pooled_phi < 0
    assert all(phi < 0 for phi in fit.phi.values())
    assert all(np.array_equal(f.theta, fit.theta) for f in fit.per_unit)
    assert fit.iterations == len(fit.trajectory) - 1
    assert np.abs(fit.theta - [.6, -.8]).max() < .1
    table = pmg_table(fit)
    assert list(table['term']) == ['x1', 'x2', 'ect', 'half_life_months',
                                   'half_life_years', 'log_likelihood']
    assert table['display'][0].endswith('***')
    assert table['display_se'][0].startswith('(')


def test_pmg_single_unit_equals_unit_ardl():
    data = unit_ecm(8, phi=-.3, x=np.cumsum(
        np.random.default_rng(80).standard_normal(165)))
    ds = panel_from_arrays({'HR': data}, ['y', 'x'])
    spec = ArdlSpec('y', ['x'], (1, 1))
    unit = fit_unit_ardl(data, spec, 'HR')
    pooled = fit_pmg(ds, spec)
    assert abs(pooled.theta[0] - unit.theta[0]) < 1e-8
    assert abs(pooled.pooled_phi - unit.phi) < 1e-8


def test_pmg_convergence_error():
    simulation = ecm_panel(5)
    with raises(ConvergenceError) as exc:
        quiet(fit_pmg, simulation.dataset, ArdlSpec('y', ['x1', 'x2']),
              theta0=[40., 40.], max_iterations=1)
    assert len(exc.value.trajectory) == 2
    assert list(exc.value.trajectory[0]) == [40., 40.]


def test_pmg_failed_line_search(monkeypatch):
    dataset = ecm_panel(6).dataset
    spec = ArdlSpec('y', ['x1', 'x2'])
    optimum = quiet(fit_pmg, dataset, spec)
    monkeypatch.setattr('assetchannel.ardl._line_search',
                        lambda units, theta, step, loglik: (None, None))
    with raises(ConvergenceError) as exc:
        quiet(fit_pmg, dataset, spec, theta0=[40., 40.])
    assert 'no ascent' in str(exc.value)
    assert len(exc.value.trajectory) == 1
    # at the optimum there is nowhere left to climb
    again = quiet(fit_pmg, dataset, spec, theta0=optimum.theta)
    assert again.iterations == 0
    assert np.array_equal(again.theta, optimum.theta)


def test_mg_identical_units():
    data = unit_ecm(2, x=np.cumsum(
        np.random.default_rng(20).standard_normal(165)))
    ds = panel_from_arrays({'HR': data, 'SI': data, 'RS': data}, ['y', 'x'])
    spec = ArdlSpec('y', ['x'], (1, 1), 'MG')
    fit = fit_mg(ds, spec)
    unit = fit_unit_ardl(data, spec)
    assert almost(fit.theta_mg, 10) == unit.theta
    assert abs(fit.se[0]) < 1e-12
    assert fit.n_units == 3


def test_mg_mean_of_unit_thetas():
    rng = np.random.default_rng(0)
    arrays = {}
    for unit, theta in (('HR', 1.), ('SI', 3.)):
        x = np.cumsum(rng.standard_normal(100))
        arrays[unit] = np.column_stack([theta * x, x])
    ds = panel_from_arrays(arrays, ['y', 'x'])
    fit = fit_mg(ds, ArdlSpec('y', ['x'], (1, 0), 'MG'))
    assert abs(fit.theta_mg[0] - 2.) < 1e-8
    simulation = ecm_panel(1)
    fit = fit_mg(simulation.dataset, ArdlSpec('y', ['x1', 'x2']))
    thetas = np.mean([f.theta for f in fit.per_unit], axis=0)
    assert np.abs(fit.theta_mg - thetas).max() < 1e-12
    table = mg_table(fit)
    assert list(table['term']) == ['x1', 'x2', 'ect', 'n_units']


def test_mg_excludes_failing_unit():
    rng = np.random.default_rng(0)
    arrays = {}
    for unit in ('HR', 'SI', 'RS'):
        x = np.cumsum(rng.standard_normal(60))
        arrays[unit] = np.column_stack([x + rng.standard_normal(60), x])
    arrays['BA'] = np.column_stack([rng.standard_normal(60), np.ones(60)])
    ds = panel_from_arrays(arrays, ['y', 'x'])
    with warns(UserWarning):
        fit = fit_mg(ds, ArdlSpec('y', ['x'], (1, 1), 'MG'))
    assert fit.excluded == ['BA']
    assert fit.n_units == 3


def test_mg_and_pmg_diverge_under_heterogeneity():
    spec = ArdlSpec('y', ['x'])
    mg, pmg = [], []
    for seed in range(30):
        ds = draw(DgpConfig('cointegrated_ecm', 6, 165, seed, theta=(1.,),
                            theta_spread=.8, phi=(-.4, -.2),
                            regressor_scales=(.25, .5, 1., 1.5, 2., 3.),
                            variables=('y', 'x'))).dataset
        mg.append(quiet(fit_mg, ds, spec).theta_mg[0])
        pmg.append(quiet(fit_pmg, ds, spec).theta[0])
    assert abs(np.mean(mg) - 1.) < .15
    assert np.mean(pmg) - 1. > .25


# simulation


def test_simulation_is_seeded():
    config = DgpConfig('panel_var', 6, 165, 42, coefs=[[.5, .1], [0, .2]])
    assert generate(config) == generate(config)
    other = DgpConfig('panel_var', 6, 165, 43, coefs=[[.5, .1], [0, .2]])
    assert generate(config) != generate(other)
    assert 'PCG64' in generator_name()
    again = DgpConfig.from_dict(config.to_dict())
    assert generate(again) == generate(config)


def test_unstable_dgp():
    with raises(ValueError):
        DgpConfig('panel_var', coefs=[[1.2]])
    ds = generate(DgpConfig('panel_var', 2, 20, 1, coefs=[[1.]],
                            unit_root=True))
    assert ds.variables == ('y1',)


def test_truth_sidecar():
    simulation = ecm_panel(1, theta_spread=.2)
    truth = simulation.truth
    assert list(truth.columns) == ['parameter', 'unit', 'value']
    thetas = truth[truth['parameter'] == 'theta[0]']
    assert len(thetas) == 6
    assert almost(thetas['value'].mean(), 10) == .6
    assert simulation.innovations.shape == (6, 165, 3)


def test_student_t_innovations():
    ds = generate(DgpConfig('white_noise', 3, 2000, 1, innovation='student_t',
                            df=5, fixed_effect_scale=0.))
    values = ds.to_frame().to_numpy()
    assert abs(values.var() - 1.) < .15
    with raises(ValueError):
        DgpConfig('white_noise', innovation='student_t', df=2)


def test_innovation_moments():
    cov = np.array([[.5, .1], [.1, .25]])
    for kind in ('white_noise', 'panel_var'):
        config = DgpConfig(kind, 6, 165, 11, cov=cov,
                           coefs=[[.4, 0.], [.1, .2]])
        e = draw(config).innovations.reshape(-1, 2)
        bound = 3. / math.sqrt(6 * 165)
        assert np.abs(e.mean(axis=0)).max() < bound
        assert np.abs(e.T @ e / len(e) - cov).max() < bound


def test_burn_in_forgets_initial_state():
    config = DgpConfig('panel_var', 4, 60, 5, coefs=[[.5, .1], [0., .3]])
    near = draw(config, initial_state=0.).dataset.to_frame()
    far = draw(config, initial_state=100.).dataset.to_frame()
    assert np.abs(near.to_numpy() - far.to_numpy()).max() < 1e-6


# pipeline


def test_pipeline_end_to_end(tmp_path):
    path = make_fixture(str(tmp_path / 'fixture'))
    config = load_config(path)
    bundle = quiet(run_pipeline, config)
    names = ['indices.csv', 'unit_roots.csv', 'lag_selection.csv',
             'pvar_coefficients.csv', 'eigenvalues.csv', 'eigenvalues.svg',
             'irf.csv', 'kao.csv', 'pmg.csv', 'mg.csv', MANIFEST]
    for name in names:
        assert os.path.exists(os.path.join(bundle, name)), name
    with open(os.path.join(bundle, MANIFEST)) as f:
        manifest = json.load(f)
    assert manifest['stages_completed'] == list(STAGES)
    assert manifest['failed_stage'] is None
    assert manifest['config']['irf']['seed'] == 42
    assert manifest['config']['unit_root']['max_lags'] == 12
    assert manifest['software']['generator'] == generator_name()
    assert set(manifest['inputs']) == {'panel', 'prices', 'shares',
                                       'sector_map'}
    for artifact in manifest['artifacts']:
        assert len(artifact['sha256']) == 64
    with open(os.path.join(bundle, 'lag_selection.csv')) as f:
        header = f.readline()
    assert header.startswith('# ')
    lags = pd.read_csv(os.path.join(bundle, 'lag_selection.csv'),
                       comment='#')
    assert list(lags['lag']) == [1, 2, 3, 4]
    assert lags['maic'].isna().tolist() == [False, False, False, True]
    kao = pd.read_csv(os.path.join(bundle, 'kao.csv'), comment='#')
    assert list(kao['system']) == ['man', 'telecom', 'fin', 'elec']
    pmg = pd.read_csv(os.path.join(bundle, 'pmg.csv'), comment='#')
    assert (pmg[pmg['term'] == 'ect']['estimate'] < 0).all()
    text = report(bundle)
    assert 'Cholesky' in text
    assert 'half-life' in text
    assert 'labels the two the other way round' in text
    # rerunning gives the same bytes
    snapshot = {}
    for name in sorted(os.listdir(bundle)):
        with open(os.path.join(bundle, name), 'rb') as f:
            snapshot[name] = f.read()
    quiet(run_pipeline, load_config(path))
    for name, content in snapshot.items():
        with open(os.path.join(bundle, name), 'rb') as f:
            assert f.read() == content, name


def fixture_mapping(directory, n_periods=60):
    path = make_fixture(directory, seed=1, n_periods=n_periods)
    with open(path) as f:
        return yaml.safe_load(f)


def test_pipeline_rejects_unknown_variable(tmp_path):
    directory = str(tmp_path)
    mapping = fixture_mapping(directory)
    mapping['pvar']['variables'].append('d_gdp')
    config = PipelineConfig(mapping, directory)
    with raises(ConfigError) as exc:
        run_pipeline(config)
    assert 'd_gdp' in str(exc.value)
    assert not os.path.exists(os.path.join(directory, 'bundle'))


def test_pipeline_config_validation(tmp_path):
    directory = str(tmp_path)
    mapping = fixture_mapping(directory)
    with raises(ConfigError):
        PipelineConfig(dict(mapping, colour='blue'), directory)
    with raises(ConfigError):
        PipelineConfig(dict(mapping, balance=None), directory)
    with raises(ConfigError):
        PipelineConfig(dict(mapping, pvar={'lags': 'many'}), directory)
    with raises(ConfigError):
        PipelineConfig(dict(mapping, index={'weighting': 'equal'}),
                       directory)
    broken = tmp_path / 'broken.yaml'
    broken.write_text('inputs: [unclosed\n')
    with raises(ConfigError):
        load_config(str(broken))
    config = PipelineConfig(mapping, directory)
    assert config.data['irf']['band'] == .90
    assert config.data['kao']['residual_lags'] == 1
    assert config.data['kao']['calibration'] == 'simulated'
    assert config.data['pvar']['instrument_lags'] == [1, 4]
    assert config.pvar_spec(1).instrument_lags == (1, 4)
    with raises(ConfigError):
        PipelineConfig(dict(mapping, kao={'calibration': 'exact'}),
                       directory)
    assert config.irf_shocks() == ['d_irs']


def test_pipeline_stage_failure(tmp_path):
    directory = str(tmp_path)
    mapping = fixture_mapping(directory)
    mapping['pvar']['instrument_lags'] = [1, 100]
    with raises(StageError) as exc:
        quiet(run_pipeline, PipelineConfig(mapping, directory))
    assert exc.value.stage == 'select-lag'
    bundle = os.path.join(directory, 'bundle')
    with open(os.path.join(bundle, MANIFEST)) as f:
        manifest = json.load(f)
    assert manifest['failed_stage'] == 'select-lag'
    assert manifest['stages_completed'] == ['build-index', 'unit-root']
    assert os.path.exists(os.path.join(bundle, 'unit_roots.csv'))
    assert 'FAILED at select-lag' in report(bundle)


# command line


def test_cli_simulate_and_unit_root(tmp_path):
    panel = str(tmp_path / 'panel.csv')
    assert main(['-q', 'simulate', '--kind', 'independent_random_walks',
                 '--units', '3', '--periods', '80', '--seed', '1',
                 '--out', panel]) == 0
    assert os.path.exists(str(tmp_path / 'panel_truth.csv'))
    with open(panel) as f:
        assert 'PCG64' in f.readline()
    out = str(tmp_path / 'roots.csv')
    assert main(['-q', 'unit-root', '--panel', panel, '--var', 'y1,y2',
                 '--diff', '--out', out]) == 0
    table = pd.read_csv(out, comment='#')
    assert list(table['variable']) == ['y1', 'y2']
    assert (table['difference_p'] < .05).all()
    assert main(['-q', 'unit-root', '--panel', panel, '--var', 'y1',
                 '--out', out]) == 0
    assert 'difference_p' not in pd.read_csv(out, comment='#').columns


def test_cli_estimators(tmp_path):
    panel = str(tmp_path / 'panel.csv')
    write_panel_csv(ecm_panel(2).dataset, panel)
    out = str(tmp_path / 'out.csv')
    assert main(['-q', 'kao', '--panel', panel, '--dep', 'y',
                 '--regressors', 'x1,x2', '--out', out]) == 0
    assert len(pd.read_csv(out, comment='#')) == 1
    assert main(['-q', 'pmg', '--panel', panel, '--dep', 'y',
                 '--regressors', 'x1,x2', '--out', out]) == 0
    assert 'ect' in list(pd.read_csv(out, comment='#')['term'])
    assert main(['-q', 'mg', '--panel', panel, '--dep', 'y',
                 '--regressors', 'x1,x2', '--out', out]) == 0
    assert main(['-q', 'pvar', 'select-lag', '--panel', panel,
                 '--transform', 'first_difference:y',
                 '--transform', 'first_difference:x1',
                 '--vars', 'd_x1,d_y', '--max', '3', '--out', out]) == 0
    eigenvalues = str(tmp_path / 'eig.csv')
    assert main(['-q', 'pvar', 'fit', '--panel', panel,
                 '--transform', 'first_difference:y',
                 '--transform', 'first_difference:x1',
                 '--vars', 'd_x1,d_y', '--lags', '1', '--out', out,
                 '--eigenvalues', eigenvalues]) == 0
    assert os.path.exists(str(tmp_path / 'eig.svg'))
    plots = str(tmp_path / 'plots')
    assert main(['-q', 'pvar', 'irf', '--panel', panel,
                 '--transform', 'first_difference:y',
                 '--transform', 'first_difference:x1',
                 '--vars', 'd_x1,d_y', '--lags', '1', '--draws', '20',
                 '--horizon', '6', '--out', out, '--plots', plots]) == 0
    assert sorted(os.listdir(plots)) == ['irf_d_x1__d_x1.svg',
                                         'irf_d_y__d_x1.svg']


def test_cli_exit_codes(tmp_path):
    assert main(['-q', 'run', str(tmp_path / 'missing.yaml')]) == 2
    panel = str(tmp_path / 'panel.csv')
    write_panel_csv(ecm_panel(2).dataset, panel)
    assert main(['-q', 'kao', '--panel', panel, '--dep', 'y',
                 '--regressors', 'gdp']) == 1
    directory = str(tmp_path / 'fixture')
    mapping = fixture_mapping(directory)
    mapping['pvar']['instrument_lags'] = [1, 100]
    path = os.path.join(directory, 'failing.yaml')
    with open(path, 'w') as f:
        yaml.safe_dump(mapping, f)
    assert quiet(main, ['-q', 'run', path]) == 1
    assert main(['-q', 'report', os.path.join(directory, 'bundle')]) == 0
    with raises(SystemExit):
        main(['pvar'])


def test_cli_build_index(tmp_path):
    directory = str(tmp_path)
    make_fixture(directory, seed=3, n_periods=30)
    out = str(tmp_path / 'indices.csv')
    assert main(['-q', 'build-index', '--prices',
                 os.path.join(directory, 'prices.csv'), '--shares',
                 os.path.join(directory, 'shares.csv'), '--sectors',
                 os.path.join(directory, 'sectors.csv'), '--base', '2010-01',
                 '--out', out]) == 0
    frame = pd.read_csv(out, comment='#')
    assert list(frame.columns) == ['sector', 'date', 'value']
    assert (frame[frame['date'] == '2010-01']['value'] == 100.).all()
