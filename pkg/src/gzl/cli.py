"""Command line front end: `gzl <command> [--config FILE] [flags]`

Exit codes: 0 success (every check passed), 1 a failed check or a
computation error, 2 an invalid config or usage.
"""
import argparse
import json
import logging
import os
import sys

from gzl.configutils import SUITES, RunConfig, fixtures, get_outputdir, read_config
from gzl.drinfeldutils import solve_drinfeld
from gzl.exception import ConfigInvalid, GzlError, IoError, print_exception
from gzl.idealutils import enumerate_ideals
from gzl.motiveutils import theta_specialize, trivialization_build
from gzl.report import emit, verify_suite
from gzl.tensorutils import TensorModule, omega_and_periods
from gzl.zetautils import GossTable, ZetaRequest, ZetaValue, zeta_partial

logger = logging.getLogger(__name__)

__all__ = [
    'COMMANDS',
    'compute',
    'build_parser',
    'main',
]

COMMANDS = ('curve-info', 'class-group', 'drinfeld', 'periods', 'motive', 'zeta')


def _curve_info(config: RunConfig, args) -> dict:
    C = config.curve()
    return {'q': C.q, 'coefficients': list(C.params.c), 'points': len(C.rational_points()),
            'h': C.class_number, 'discriminant': C.params.discriminant}


def _class_group(config: RunConfig, args) -> dict:
    C = config.curve()
    pts = C.rational_points()
    table = [[C.point_index(C.add(P, Q)) for Q in pts] for P in pts]
    counts = [len(enumerate_ideals(C, d)) for d in range(config.D + 1)]
    return {'order': len(pts), 'points': [repr(P) for P in pts], 'orders': [C.order(P) for P in pts],
            'table': table, 'ideals_by_degree': counts}


def _drinfeld(config: RunConfig, args) -> dict:
    module, field = solve_drinfeld(config.curve())
    out = {'h': field.h, 'branches': [repr(b) for b in field.branches],
           'x1': [x.to_json() for x in field.generator],
           'rho_t': [c.to_json() for c in module.rho_t.coeffs],
           'identity_residuals': {k: str(v) for k, v in module.identity_residuals().items()}}
    if field.h > 1:
        out['galois_table'] = {repr(Q): repr(S) for Q, S in field.galois_table.items()}
    out['min_poly'] = [a.to_json() for a in field.min_poly]
    return out


def _periods(config: RunConfig, args) -> dict:
    module, _ = solve_drinfeld(config.curve())
    return {str(n): omega_and_periods(TensorModule(module, n), n)['periods'].to_json() for n in config.n}


def _motive(config: RunConfig, args) -> dict:
    module, _ = solve_drinfeld(config.curve())
    out = {}
    for n in config.n:
        tm = TensorModule(module, n)
        data = omega_and_periods(tm, n)
        mm = trivialization_build(tm, data['series'], data['periods'].Pi, trunc=config.Dt)
        spec = theta_specialize(mm)
        out[str(n)] = {'residuals': {k: str(v) for k, v in mm.residuals.items()},
                       'period_coords': [x.to_json() for x in spec['period_coords']]}
    return out


def _zeta(config: RunConfig, args) -> dict:
    C = config.curve()
    req = ZetaRequest(config.n[0], config.D, getattr(args, 'target', None) or 'sigma')
    field = solve_drinfeld(C)[1] if req.kind == 'anderson' else None
    table = GossTable(C, field, config.threads)
    result = zeta_partial(table, req)
    if isinstance(result, ZetaValue):
        return {'values': [result.to_json()]}
    return {'values': [{'class': repr(Q), **v.to_json()} for Q, v in result.items()]}


_COMPUTE = {
    'curve-info': _curve_info,
    'class-group': _class_group,
    'drinfeld': _drinfeld,
    'periods': _periods,
    'motive': _motive,
    'zeta': _zeta,
}


def compute(command: str, config: RunConfig, args=None) -> dict:
    """JSON-ready result of a computation command"""
    if command not in _COMPUTE:
        raise ValueError(f'unknown command {command}')
    return _COMPUTE[command](config, args or argparse.Namespace())


def _tsv(result: dict) -> str:
    """One row per value for zeta, per table row for class-group, key/value otherwise"""
    if 'values' in result:
        rows = result['values']
        cols = list(rows[0]) if rows else []
        lines = ['\t'.join(cols)] + ['\t'.join(json.dumps(r[c]) if not isinstance(r[c], str) else r[c]
                                              for c in cols) for r in rows]
    elif 'table' in result:
        lines = ['\t'.join(str(x) for x in row) for row in result['table']]
    else:
        lines = [f'{k}\t{json.dumps(v)}' for k, v in result.items()]
    return '\n'.join(lines) + '\n'


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='gzl', description='Drinfeld modules, motives and zeta values on an elliptic curve')
    parser.add_argument('command', choices=(*COMMANDS, 'verify'))
    parser.add_argument('--config', help='config file ([curve], [precision], [run] sections)')
    parser.add_argument('--fixture', default='default', choices=sorted(fixtures))
    parser.add_argument('--q', type=int)
    parser.add_argument('--c', type=lambda s: tuple(int(x) for x in s.split(',')), help='c1,c2,c3,c4,c6')
    parser.add_argument('--N', type=int, help='series precision')
    parser.add_argument('--Dt', type=int, help='t-truncation')
    parser.add_argument('--D', type=int, help='ideal degree cutoff')
    parser.add_argument('--n', type=lambda s: tuple(int(x) for x in s.split(',')), help='n or n1,n2,..')
    parser.add_argument('--target', help='zeta target: A, sigma, prime:i, delta, chi:k, anderson:k, subfield:i,j')
    parser.add_argument('--suite', choices=SUITES)
    parser.add_argument('--threads', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--format', default=None, choices=('json', 'tsv', 'human'))
    parser.add_argument('--output', help='write to this file; "-" for stdout, "auto" for the output dir')
    parser.add_argument('--log', default=os.getenv('GZL_LOG', 'WARNING'), help='log level')
    return parser


def _output_path(output: str | None, name: str, fmt: str):
    if output in (None, '-'):
        return None
    if output == 'auto':
        return os.path.join(get_outputdir().dir, f'{name}.{fmt}')
    return output


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log).upper(), logging.WARNING),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        config = read_config(args.config, args.fixture, q=args.q, c=args.c, N=args.N, Dt=args.Dt,
                             D=args.D, n=args.n, suite=args.suite, threads=args.threads, seed=args.seed)
    except ConfigInvalid as exc:
        print(f'gzl: invalid config: {exc}', file=sys.stderr)
        return 2
    try:
        if args.command == 'verify':
            fmt = args.format or 'human'
            report = verify_suite(config.suite, config)
            emit(report, fmt, _output_path(args.output, f'verify-{config.suite}', fmt))
            return report.exit_code
        fmt = args.format or 'json'
        if fmt == 'human':
            parser.error('computation commands emit json or tsv')
        result = compute(args.command, config, args)
        text = json.dumps(result, indent=2) + '\n' if fmt == 'json' else _tsv(result)
        path = _output_path(args.output, args.command, fmt)
        if path is None:
            sys.stdout.write(text)
        else:
            try:
                with open(path, 'w') as fh:
                    fh.write(text)
            except OSError as exc:
                raise IoError(f'cannot write {path}: {exc}') from exc
        return 0
    except (ConfigInvalid, ValueError) as exc:
        print(f'gzl: {exc}', file=sys.stderr)
        return 2
    except GzlError as exc:
        logger.error(f'{args.command} failed: {exc}')
        if logger.isEnabledFor(logging.DEBUG):
            print_exception(exc, short=False)
        return 1


if __name__ == '__main__':
    sys.exit(main())
