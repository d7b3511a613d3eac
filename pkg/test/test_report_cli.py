import json
from types import SimpleNamespace

import pytest
from asserts import assert_equal, assert_in, assert_raises, assert_true

from gzl.cli import COMMANDS, _tsv, build_parser, compute, main
from gzl.curveutils import KElem
from gzl.exception import IoError
from gzl.report import REGISTRY, CheckRecord, Report, SuiteContext, carlitz_goss, emit, psi_cocycle
from gzl.report import verify_suite


@pytest.fixture
def report():
    records = [
        CheckRecord('kernel.scalar_inverse', 'kernel', 'x * x^-1 = 1', 'pass', '39', '39', seconds=0.5),
        CheckRecord('zeta.three_way', 'zeta', 'three values agree', 'fail', '2', '4'),
        CheckRecord('drinfeld.galois_table', 'drinfeld', 'sigma table', 'skipped', reason='h = 1'),
    ]
    return Report('all', {'q': 2}, 'ab' * 32, records, ['O'], {'seconds': {'kernel.scalar_inverse': 0.5}})


def test_counts_and_exit_code(report):
    assert_equal(report.counts(), {'pass': 1, 'fail': 1, 'skipped': 1})
    assert_equal(report.exit_code, 1)
    assert_equal([r.id for r in report.failures], ['zeta.three_way'])


def test_json_schema(report, tmp_path):
    path = tmp_path / 'report.json'
    text = emit(report, 'json', path)
    data = json.loads(path.read_text())
    assert_equal(text, path.read_text())
    assert_equal(set(data), {'schema', 'suite', 'config', 'digest', 'branches', 'checks', 'metadata'})
    assert_true(all('seconds' not in c for c in data['checks']))
    back = Report.from_json(data)
    assert_equal(back.records, report.records)
    assert_equal(back.to_json(), report.to_json())


def test_tsv_rows(report, tmp_path):
    text = emit(report, 'tsv', tmp_path / 'report.tsv')
    lines = text.splitlines()
    assert_equal(len(lines), 4)
    assert_equal(lines[0].split('\t')[:3], ['id', 'suite', 'status'])
    assert_equal(lines[2].split('\t')[2], 'fail')


def test_human_puts_failures_first(report, tmp_path):
    text = emit(report, 'human', tmp_path / 'report.txt')
    lines = text.splitlines()
    assert_in('1 passed, 1 failed, 1 skipped', lines[0])
    assert_true(lines[1].startswith('FAIL'))
    assert_true(lines[2].startswith('SKIPPED'))
    assert_in('[residual 2 / 4]', lines[1])


def test_emit_errors(report, tmp_path):
    with assert_raises(ValueError):
        emit(report, 'xml', tmp_path / 'report.xml')
    with assert_raises(IoError):
        emit(report, 'json', tmp_path / 'missing' / 'report.json')


def test_kernel_suite(smoke_config):
    rep = verify_suite('kernel', smoke_config, threads=1, cases=3)
    assert_equal(len(rep.records), len(REGISTRY['kernel']))
    assert_equal(rep.counts()['fail'], 0)
    assert_equal(rep.exit_code, 0)
    assert_equal(rep.digest, smoke_config.digest())
    assert_true(all(r.id.startswith('kernel.') for r in rep.records))


def test_unknown_suite(smoke_config):
    with assert_raises(ValueError):
        verify_suite('everything', smoke_config)


def test_compute(smoke_config):
    info = compute('curve-info', smoke_config)
    assert_equal((info['q'], info['h'], info['points']), (2, 1, 1))
    group = compute('class-group', smoke_config)
    assert_equal(group['ideals_by_degree'], [1, 0, 2, 4])
    assert_equal(group['table'], [[0]])
    assert_equal(_tsv(group), '0\n')
    with assert_raises(ValueError):
        compute('plot', smoke_config)


def _context(config, field):
    ctx = SuiteContext(config)
    ctx._cache.update(curve=field.curve, field=field)
    return ctx


def test_carlitz_goss_recognizes_each_branch_in_K(default_config, default_drinfeld, monkeypatch):
    import gzl.report
    _, field = default_drinfeld
    seen = []

    def recognize_multiple(x, base, curve, *args, **kwargs):
        seen.append(x)
        return KElem(curve, curve.one)

    monkeypatch.setattr(gzl.report, 'recognize_multiple', recognize_multiple)
    monkeypatch.setattr(gzl.report, 'omega_and_periods',
                        lambda M, n: {'periods': SimpleNamespace(pi_rho=M.curve.tower.one())})
    rec = carlitz_goss(_context(default_config, field), None)
    assert_equal(rec.status, 'pass')
    assert_equal(len(seen), field.h)


def test_psi_cocycle_covers_every_pair(smoke_config, smoke_drinfeld, monkeypatch):
    _, field = smoke_drinfeld
    degrees = []
    psi = field.psi

    def spy(I):
        degrees.append(I.degree)
        return psi(I)

    monkeypatch.setattr(field, 'psi', spy)
    rec = psi_cocycle(_context(smoke_config, field), None)
    assert_equal(rec.status, 'pass')
    assert_in(4, degrees)


def test_parser():
    parser = build_parser()
    args = parser.parse_args(['zeta', '--n', '1,2', '--c', '0,0,1,1,1', '--target', 'chi:1'])
    assert_equal((args.n, args.c, args.target), ((1, 2), (0, 0, 1, 1, 1), 'chi:1'))
    assert_equal(set(COMMANDS) | {'verify'}, set(parser._actions[1].choices))


def test_main_curve_info(capsys):
    assert_equal(main(['curve-info', '--fixture', 'smoke', '--N', '40']), 0)
    data = json.loads(capsys.readouterr().out)
    assert_equal(data['h'], 1)


def test_main_zeta_tsv(tmp_path):
    path = tmp_path / 'zeta.tsv'
    code = main(['zeta', '--fixture', 'smoke', '--N', '40', '--D', '2', '--n', '1', '--target', 'A',
                 '--format', 'tsv', '--output', str(path)])
    assert_equal(code, 0)
    header, row = path.read_text().splitlines()
    assert_equal(header.split('\t')[:3], ['label', 'n', 'D'])
    assert_equal(row.split('\t')[0], 'zeta_A(1)')


def test_main_exit_codes(capsys):
    assert_equal(main(['curve-info', '--N', '4']), 2)
    assert_in('invalid config', capsys.readouterr().err)
    assert_equal(main(['zeta', '--fixture', 'smoke', '--N', '40', '--D', '1', '--target', 'riemann']), 2)
    with assert_raises(SystemExit):
        main(['curve-info', '--format', 'human'])


if __name__ == '__main__':
    pytest.main([__file__])
