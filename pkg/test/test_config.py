import os

import pytest
from asserts import assert_equal, assert_false, assert_raises, assert_true

from gzl.configutils import RunConfig, Setting, fixtures, get_outputdir, load_options
from gzl.configutils import parse_config, read_config
from gzl.exception import ConfigInvalid
from test import get_asset_path, read_asset


class TestSetting:

    def test_fixtures(self):
        assert_equal(fixtures.smoke.q, 2)
        assert_equal(fixtures['default'].c, (0, 0, 0, -1, 1))

    def test_locked(self):
        with assert_raises(ValueError):
            fixtures.huge.q = 5

    def test_unlocked_subsettings(self):
        Setting.unlock()
        try:
            cfg = Setting()
            cfg.curve.q = 7
            assert_equal(cfg['curve']['q'], 7)
        finally:
            Setting.lock()


class TestRunConfig:

    def test_defaults(self):
        cfg = RunConfig()
        assert_equal((cfg.q, cfg.N, cfg.D, cfg.n), (3, 160, 6, (1, 2, 3)))
        assert_equal(RunConfig.from_config('smoke').c, (0, 0, 1, 1, 1))

    def test_missing_fixture(self):
        with assert_raises(ConfigInvalid):
            RunConfig.from_config('large')

    @pytest.mark.parametrize('bad', [
        {'q': 6},
        {'N': 4},
        {'M': 0},
        {'D': -1},
        {'n': (0, 1)},
        {'suite': 'everything'},
        {'threads': 0},
        {'c': (0, 0, 0, 0, 0)},
    ])
    def test_invalid(self, bad):
        with assert_raises(ConfigInvalid):
            RunConfig(**bad)

    def test_scalar_n_is_a_tuple(self):
        assert_equal(RunConfig(n=2).n, (2,))

    def test_digest_tracks_every_field(self):
        cfg = RunConfig()
        assert_equal(cfg.digest(), RunConfig().digest())
        assert_true(cfg.digest() != cfg.override(seed=1).digest())
        assert_equal(cfg.override(seed=None), cfg)
        assert_equal(len(cfg.digest()), 64)

    def test_to_json_lists(self):
        data = RunConfig().to_json()
        assert_equal(data['c'], [0, 0, 0, -1, 1])
        assert_equal(data['threads'], None)


class TestConfigFile:

    def test_parse(self):
        text = read_asset('smoke.cfg')
        assert_equal(parse_config(text), {
            'q': 2, 'c': (0, 0, 1, 1, 1), 'N': 40, 'Dt': 12, 'D': 3, 'n': (1, 2), 'suite': 'kernel',
        })

    @pytest.mark.parametrize('text', [
        'q = 3',
        '[curve]\nq: 3',
        '[field]\nq = 3',
        '[curve]\nN = 40',
        '[precision]\nN = 40, 50',
        '[run]\nsuite = all suites',
    ])
    def test_parse_errors(self, text):
        with assert_raises(ConfigInvalid):
            parse_config(text)

    def test_read_precedence(self, monkeypatch):
        monkeypatch.delenv('GZL_THREADS', raising=False)
        cfg = read_config(get_asset_path('smoke.cfg'))
        assert_equal((cfg.q, cfg.N, cfg.suite, cfg.threads), (2, 40, 'kernel', None))
        cfg = read_config(get_asset_path('smoke.cfg'), N=48, threads=2)
        assert_equal((cfg.N, cfg.threads), (48, 2))
        assert_equal(read_config(fixture='smoke').q, 2)

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv('GZL_THREADS', '3')
        assert_equal(read_config().threads, 3)
        assert_equal(read_config(threads=1).threads, 1)
        monkeypatch.setenv('GZL_THREADS', 'many')
        with assert_raises(ConfigInvalid):
            read_config()

    def test_missing_file(self, tmp_path):
        with assert_raises(ConfigInvalid):
            read_config(tmp_path / 'absent.cfg')

    def test_file_overrides_validate(self, tmp_path, monkeypatch):
        monkeypatch.delenv('GZL_THREADS', raising=False)
        path = tmp_path / 'bad.cfg'
        path.write_text('[precision]\nN = 6\n')
        with assert_raises(ConfigInvalid):
            read_config(path)


def test_load_options():

    @load_options
    def run(options=None, config=None, **kwargs):
        return options, kwargs

    opts, kw = run('smoke', N=40, verbose=True)
    assert_equal((opts.q, opts.N), (2, 40))
    assert_equal(kw, {'verbose': True})
    opts, _ = run(RunConfig(N=64))
    assert_equal(opts.N, 64)
    opts, _ = run({'q': 3, 'D': 1})
    assert_equal(opts.D, 1)
    assert_false(run()[0].q == 2)


def test_output_dir(tmp_path, monkeypatch):
    target = tmp_path / 'reports'
    monkeypatch.setenv('GZL_OUTPUT_DIR', str(target))
    assert_equal(get_outputdir().dir, str(target))
    assert_true(os.path.isdir(target))


if __name__ == '__main__':
    pytest.main([__file__])
