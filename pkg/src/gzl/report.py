"""Verification suites and their reports.

Checks register themselves per suite with :func:`check`; each returns a
boolean or a pair (residual, required) and is turned into a
:class:`CheckRecord` that never raises. Reports serialize to a versioned
JSON schema, to TSV with one row per check, or to a human summary.
"""
import hashlib
import io
import json
import logging
import math
import sys
import threading
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np
import wrapt

from gzl.configutils import SUITES, RunConfig
from gzl.curveutils import PointX
from gzl.divisorutils import Divisor, rr_space
from gzl.drinfeldutils import drinfeld_divisor_shtuka, solve_drinfeld
from gzl.exception import GzlError, IoError, ModuleTooLarge, RecognitionFailure
from gzl.exception import UnsupportedField
from gzl.idealutils import class_and_generator, enumerate_ideals, enumerate_ideals_hnf
from gzl.idealutils import goss_bracket, ideal_class, quotient_size
from gzl.motiveutils import extension_block, hj_verify, theta_specialize, trivialization_build
from gzl.rand import random_scalar, random_unit, random_vector
from gzl.recogutils import recognize_K, recognize_multiple
from gzl.scalarutils import unit_root
from gzl.tensorutils import TensorModule, anderson_gen, log_coeffs, omega_and_periods, period_ratio
from gzl.thread import ordered_map
from gzl.zetautils import GossTable, _min_valuation, anderson_linearity, character_inversion
from gzl.zetautils import character_table, det_zeta, euler_factor_check, euler_product_LA
from gzl.zetautils import frobenius_relation, galois_equivariance, log_algebraic, negative_special
from gzl.zetautils import power_coords, prime_rescaling, primes_of_degree, zeta_anderson, zeta_subfield

logger = logging.getLogger(__name__)

__all__ = [
    'SCHEMA_VERSION',
    'CheckRecord',
    'Report',
    'SuiteContext',
    'SkipCheck',
    'REGISTRY',
    'check',
    'verify_suite',
    'emit',
]

SCHEMA_VERSION = 1
KERNEL_CASES = 100
STATUSES = ('pass', 'fail', 'skipped')

REGISTRY = {name: [] for name in SUITES if name != 'all'}


class SkipCheck(Exception):
    """Raised by a check that does not apply to the configured run"""


def _fmt(x) -> str | None:
    if x is None:
        return None
    if x == math.inf:
        return 'inf'
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return str(int(x)) if x.is_integer() else f'{x:.3f}'
    return str(x)


@dataclass
class CheckRecord:
    """Outcome of one check: id, suite, the identity it tests, status, residual"""

    id: str
    suite: str
    identity: str
    status: str
    residual: str | None = None
    required: str | None = None
    reason: str | None = None
    seconds: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status == 'fail'

    def to_json(self) -> dict:
        data = asdict(self)
        data.pop('seconds')
        return data


def _seed(config: RunConfig, check_id: str) -> np.random.Generator:
    salt = int.from_bytes(hashlib.sha256(check_id.encode()).digest()[:4], 'big')
    return np.random.default_rng([config.seed, salt])


def check(suite: str, identity: str):
    """Register a check `func(ctx, rng)` under `suite`; calls return a CheckRecord"""

    @wrapt.decorator
    def recorder(wrapped, instance, args, kwargs):
        ctx = args[0]
        check_id = f'{suite}.{wrapped.__name__}'
        start = time.perf_counter()
        rec = CheckRecord(check_id, suite, identity, 'pass')
        try:
            out = wrapped(ctx, _seed(ctx.config, check_id))
            if isinstance(out, tuple):
                residual, required = out
                rec.residual, rec.required = _fmt(residual), _fmt(required)
                ok = residual >= required
            else:
                ok = bool(out)
            rec.status = 'pass' if ok else 'fail'
        except SkipCheck as exc:
            rec.status, rec.reason = 'skipped', str(exc)
        except GzlError as exc:
            rec.status, rec.reason = 'fail', f'{type(exc).__name__}: {exc}'
        except Exception as exc:
            logger.debug(f'{check_id} raised', exc_info=True)
            rec.status, rec.reason = 'fail', f'{type(exc).__name__}: {exc}'
        rec.seconds = round(time.perf_counter() - start, 3)
        logger.info(f'{check_id}: {rec.status}')
        return rec

    def register(func):
        wrapped = recorder(func)
        REGISTRY[suite].append(wrapped)
        return wrapped
    return register


class SuiteContext:
    """Objects shared by the checks of a run, built once on first use"""

    def __init__(self, config: RunConfig, cases: int = KERNEL_CASES):
        self.config = config
        self.cases = cases
        self._lock = threading.RLock()
        self._cache = {}

    def _get(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    def built(self, key) -> bool:
        return key in self._cache

    @property
    def N(self) -> int:
        return self.config.N

    @property
    def tight(self) -> int:
        return max(self.N - 20, self.N // 2)

    @property
    def loose(self) -> int:
        return max(self.N - 40, self.N // 4)

    @property
    def curve(self):
        return self._get('curve', self.config.curve)

    @property
    def tower(self):
        return self.curve.tower

    @property
    def field(self):
        return self._get('field', lambda: solve_drinfeld(self.curve)[1])

    @property
    def module(self):
        return self.field.modules[0]

    @property
    def table(self) -> GossTable:
        return self._get('table', lambda: GossTable(self.curve, self.field, threads=1))

    @property
    def chars(self):
        return self._get('chars', lambda: character_table(self.curve))

    def ideals(self, d: int) -> list:
        """All enumerated ideals of degree <= d"""
        return [I for block in self.table.blocks(d) for I in block]

    def tensor(self, n: int) -> TensorModule:
        return self._get(('tensor', n), lambda: TensorModule(self.module, n))

    def periods(self, n: int) -> dict:
        return self._get(('periods', n), lambda: omega_and_periods(self.tensor(n), n))

    def motive(self, n: int):
        def build():
            data = self.periods(n)
            return trivialization_build(self.tensor(n), data['series'], data['periods'].Pi, check=False)
        return self._get(('motive', n), build)

    def require_cutoff(self):
        if self.config.D == 0:
            raise SkipCheck('cutoff D = 0 leaves only the tail')

    def require_classes(self):
        if self.curve.class_number == 1:
            raise SkipCheck('h = 1: the Galois group is trivial')


def _rel(a, b) -> object:
    """Relative residual of a against b"""
    d = (a - b).residual()
    return d - b.valuation() if not b.is_zero() else d


def _worst(values) -> float:
    return min(values, default=math.inf)


# == kernel

@check('kernel', 'x * x^-1 = 1')
def scalar_inverse(ctx, rng):
    worst = _worst((x * x.inv() - 1).residual() for x in (random_unit(ctx.tower, rng) for _ in range(ctx.cases)))
    return worst, ctx.N - 1


@check('kernel', '(x y)^(1) = x^(1) y^(1)')
def scalar_frobenius(ctx, rng):
    T = ctx.tower
    worst = math.inf
    for _ in range(ctx.cases):
        x, y = random_unit(T, rng), random_unit(T, rng)
        worst = min(worst, ((x * y).frobenius(1) - x.frobenius(1) * y.frobenius(1)).residual())
    return worst, ctx.N - 1


@check('kernel', 'unit_root(x^m, m) = x for 1-units')
def scalar_unit_root(ctx, rng):
    T = ctx.tower
    m = 2 if T.p != 2 else 3
    worst = _worst((unit_root(x ** m, m) - x).residual()
                   for x in (random_unit(T, rng).one_unit() for _ in range(ctx.cases)))
    return worst, ctx.tight


@check('kernel', '(x^p)^(1/p) = x')
def scalar_pth_root(ctx, rng):
    T = ctx.tower
    worst = _worst(((x ** T.p).pth_root() - x).residual() for x in (random_unit(T, rng) for _ in range(ctx.cases)))
    return worst, Fraction(ctx.N, T.p) - 1


@check('kernel', 'digits beyond precision change nothing')
def scalar_precision(ctx, rng):
    T = ctx.tower
    cut = ctx.N // 2
    for _ in range(ctx.cases):
        x = random_scalar(T, 0, ctx.N, rng)
        z = random_unit(T, rng)
        a = x.truncate(cut)
        b = (x + T.monomial(1, cut + 1)).truncate(cut)
        az, bz = a * z, b * z
        if not (a == b and az == bz) or az.absprec > cut:
            return False
    return True


# == curve

@check('curve', '|X(F_q)| = h and |h - q - 1| <= 2 sqrt(q)')
def rational_points(ctx, rng):
    C = ctx.curve
    pts = C.rational_points()
    q, h = C.q, C.class_number
    return all(C.on_curve(P) for P in pts[1:]) and len(pts) == h and (h - q - 1) ** 2 <= 4 * q


@check('curve', 'group law: identity, inverse, associativity')
def group_law(ctx, rng):
    C = ctx.curve
    pts = C.rational_points()
    O = PointX.inf()
    for P in pts:
        if C.add(P, O) != P or not C.add(P, C.neg(P)).is_inf:
            return False
        for Q in pts:
            for R in pts:
                if C.add(C.add(P, Q), R) != C.add(P, C.add(Q, R)):
                    return False
    return True


@check('curve', '|X(F_q^2)| = q^2 + 1 - (a^2 - 2q), a = q + 1 - h')
def frobenius_count(ctx, rng):
    C = ctx.curve
    a = C.q + 1 - C.class_number
    return len(C.rational_points(2)) == C.q ** 2 + 1 - (a * a - 2 * C.q)


@check('curve', 'dim L(k inf) = k for k >= 1')
def riemann_roch(ctx, rng):
    C = ctx.curve
    return all(len(rr_space(C, Divisor([(PointX.inf(), k)]))) == k for k in range(1, 6))


@check('curve', 'div(f) = (Xi) + (V1) - (V) - (inf) and V - V1 = Xi')
def shtuka_divisor(ctx, rng):
    for M in ctx.field.modules:
        drinfeld_divisor_shtuka(M, check=True)
    return True


# == ideals

@check('ideals', 'enumeration count = Hermite-form count')
def ideal_count(ctx, rng):
    C = ctx.curve
    return all(len(enumerate_ideals(C, d)) == len(enumerate_ideals_hnf(C, d)) for d in range(min(ctx.config.D, 3) + 1))


@check('ideals', '|A/I| = q^deg I')
def ideal_norm(ctx, rng):
    q = ctx.curve.q
    return all(quotient_size(I.ideal) == q ** I.degree for I in ctx.ideals(min(ctx.config.D, 2)))


@check('ideals', 'class of I from its points = enumeration class')
def ideal_classes(ctx, rng):
    return all(ideal_class(I.ideal).point == I.cls.point for I in ctx.ideals(min(ctx.config.D, 2)))


@check('ideals', 'class map is a homomorphism')
def class_homomorphism(ctx, rng):
    C = ctx.curve
    ideals = ctx.ideals(min(ctx.config.D, 1))
    return all(ideal_class(I.ideal * J.ideal).point == C.add(I.cls.point, J.cls.point)
               for I in ideals for J in ideals)


@check('ideals', '[I]_A from I^h = xA equals a_I [P_Q]_A')
def goss_bracket_split(ctx, rng):
    h = ctx.curve.class_number
    table = ctx.table
    worst = _worst(_rel(goss_bracket(I.ideal, h), table.bracket(I)) for I in ctx.ideals(min(ctx.config.D, 2)))
    return worst, ctx.loose


# == drinfeld

@check('drinfeld', 'rho_t rho_y = rho_y rho_t and the Weierstrass relation in tau')
def module_identities(ctx, rng):
    worst = _worst(min(M.identity_residuals().values()) for M in ctx.field.modules)
    return worst, ctx.tight


@check('drinfeld', 'class -> sigma is a bijective homomorphism with sigma order = class order')
def galois_table(ctx, rng):
    ctx.require_classes()
    return all(ctx.field.galois_checks().values())


@check('drinfeld', 'psi(I) from the shtuka = psi(I) from the right gcd')
def psi_two_ways(ctx, rng):
    F = ctx.field
    worst = math.inf
    for I in ctx.ideals(min(ctx.config.D, 2)):
        a, b = F.psi(I), F.psi_by_gcrd(I)
        worst = min(worst, _worst(_rel(x, y) for x, y in zip(a, b)))
    return worst, ctx.loose


@check('drinfeld', 'psi(IJ) = sigma_J(psi(I)) psi(J)')
def psi_cocycle(ctx, rng):
    F = ctx.field
    ideals = ctx.ideals(min(ctx.config.D, 2))
    worst = math.inf
    for I in ideals:
        for J in ideals:
            lhs = F.psi(I.ideal * J.ideal)
            rhs = F.act(J, F.psi(I)) * F.psi(J)
            worst = min(worst, _worst(_rel(x, y) for x, y in zip(lhs, rhs)))
    return worst, ctx.loose


@check('drinfeld', 'prod over branches of psi(I) generates I^h')
def psi_norm(ctx, rng):
    C = ctx.curve
    F = ctx.field
    worst = math.inf
    for I in ctx.ideals(min(ctx.config.D, 1)):
        norm = F.psi(I).norm()
        gen = class_and_generator(I.ideal ** C.class_number)['generator']
        want = C.embed_infinity(gen)
        norm = norm / C.tower.constant(norm.sgn())
        worst = min(worst, _rel(norm, want / C.tower.constant(want.sgn())))
    return worst, ctx.loose


@check('drinfeld', 'x1 is integral over A')
def hilbert_generator(ctx, rng):
    return len(ctx.field.min_poly) == ctx.curve.class_number + 1


# == tensor

@check('tensor', 'a_j = b_(n-j), a_n = b_n^q, d[t] d[y] = d[y] d[t], N nilpotent')
def structure(ctx, rng):
    worst = _worst(min(ctx.tensor(n).structure_checks().values()) for n in ctx.config.n)
    return worst, ctx.tight


@check('tensor', 'P_i by residues at Xi = P_i by inverting Exp')
def log_pipeline(ctx, rng):
    ns = [n for n in ctx.config.n if n >= 2]
    if not ns:
        raise SkipCheck('no n >= 2 configured')
    for n in ns:
        log_coeffs(ctx.periods(n)['series'], check=True)
    return True


@check('tensor', 'Exp(Pi_n) = 0')
def period_lattice(ctx, rng):
    return _worst(ctx.periods(n)['periods'].exp_residual for n in ctx.config.n), ctx.loose


@check('tensor', 'p_n / pi_rho^n lies in H')
def period_ratios(ctx, rng):
    for n in ctx.config.n:
        period_ratio(ctx.field, n)
    return True


@check('tensor', 'Res_theta(E_u dt) = -u and RES_Xi(G_u) = -u')
def anderson_residues(ctx, rng):
    worst = math.inf
    for n in ctx.config.n:
        series = ctx.periods(n)['series']
        for _ in range(max(1, ctx.cases // 10)):
            u = random_vector(ctx.tower, n, 1, ctx.N // 2, rng)
            E = anderson_gen(series, u)
            for got in (E.res_theta(), E.res_xi_G()):
                worst = min(worst, _worst(_rel(a, -b) for a, b in zip(got, u)))
    return worst, ctx.loose


# == motive

def _motive_inputs(ctx, rng):
    for n in ctx.config.n:
        mm = ctx.motive(n)
        for _ in range(max(1, ctx.cases // 20)):
            yield n, mm, random_vector(ctx.tower, n, 1, ctx.N // 2, rng)


@check('motive', 'V(-1) Phi = Theta^T V, Upsilon(1) = Theta Upsilon, det Phi = (-(t - theta))^n')
def trivialization(ctx, rng):
    return _worst(min(ctx.motive(n).residuals.values()) for n in ctx.config.n), ctx.loose


@check('motive', 'X(1) = Theta X + f_v and Psi_v(-1) = Phi_v Psi_v')
def extension(ctx, rng):
    worst = _worst(min(extension_block(mm, u, check=False).residuals.values()) for _, mm, u in _motive_inputs(ctx, rng))
    return worst, ctx.loose


@check('motive', 'g_(v,1)(theta) = u_n - v_n and -[Psi^-1]_(1,1)(theta) = p_n')
def theta_values(ctx, rng):
    worst = math.inf
    for n, mm, u in _motive_inputs(ctx, rng):
        out = theta_specialize(mm, u)
        p_n = ctx.periods(n)['periods'].p_n
        worst = min(worst, out['g_v1_residual'], _rel(out['period_coords'][0], p_n))
    return worst, ctx.loose


@check('motive', 'Exp(delta0(P_i)) = 0 and Exp(delta0(P_zeta + V f_v)) = v')
def delta_calculus(ctx, rng):
    worst = math.inf
    for _, mm, u in _motive_inputs(ctx, rng):
        out = hj_verify(mm, u)
        worst = min(worst, _worst(r for k, r in out.items() if k != 'lattice_element'))
    return worst, ctx.loose


# == zeta

@check('zeta', 'zeta_A(sigma_p, n) = (psi(p)/[p])^n sum_(sigma_I = sigma_p) psi(I)^-n')
def prime_rescaled(ctx, rng):
    ctx.require_cutoff()
    D = ctx.config.D
    table = ctx.table
    worst = _worst(prime_rescaling(table, Q, n, D) for n in ctx.config.n for Q in table.classes[1:])
    if worst == math.inf and not table.classes[1:]:
        raise SkipCheck('no affine rational points')
    return worst, min(n * (D + 1) for n in ctx.config.n)


@check('zeta', 'character orthogonality and Z(n, delta) = |Delta|^-1 sum_chi chi(delta)^-1 L(n, chi)')
def character_sums(ctx, rng):
    ctx.require_cutoff()
    chars = ctx.chars
    if not chars.orthogonality():
        return False
    n = ctx.config.n[0]
    D = ctx.config.D
    sums = ctx.table.class_sums(n, D)
    return character_inversion(chars, sums), n * (D + 1)


@check('zeta', 'zeta_B(1): character product = Euler product = det zeta_rho')
def three_way(ctx, rng):
    ctx.require_cutoff()
    D = ctx.config.D
    table = ctx.table
    values = [zeta_subfield(table, ctx.chars, [], 1, D), euler_product_LA(table, D), det_zeta(table, 1, D)]
    worst = math.inf
    need = math.inf
    for i, a in enumerate(values):
        for b in values[i + 1:]:
            worst = min(worst, a.residual(b))
            need = min(need, a.tail, b.tail)
    return worst, need


@check('zeta', 'Euler factor: char poly of rho_t on B/P = norm(a - 1), residue degree = class order')
def euler_factors(ctx, rng):
    ctx.require_cutoff()
    C = ctx.curve
    out = []
    try:
        for d in (1, 2):
            for P in primes_of_degree(C, d)[:2]:
                out.append(euler_factor_check(ctx.field, P))
    except UnsupportedField as exc:
        raise SkipCheck(str(exc)) from exc
    except ModuleTooLarge as exc:
        raise SkipCheck(str(exc)) from exc
    done = [r for r in out if 'skipped' not in r]
    if not done:
        raise SkipCheck('no prime with a squarefree reduction')
    return all(r['charpoly'] and r['residue_degree'] for r in done)


def _bs(ctx):
    w = ctx.field.generator
    return [w ** 0, w, w ** 2]


@check('zeta', 'exp_rho(zeta_rho(b, 1)) is integral over A, b in {1, w, w^2}')
def log_algebraicity(ctx, rng):
    ctx.require_cutoff()
    return all(log_algebraic(ctx.table, b, ctx.config.D)['certified'] for b in _bs(ctx))


@check('zeta', 'zeta_rho(1, q - 1) / pi_rho^(q - 1) lies in K on every branch')
def carlitz_goss(ctx, rng):
    ctx.require_cutoff()
    C = ctx.curve
    F = ctx.field
    n = C.q - 1
    z = zeta_anderson(ctx.table, F.generator ** 0, n, ctx.config.D)
    for M, x in zip(F.modules, z.value):
        pi = omega_and_periods(M, 1)['periods'].pi_rho
        k = recognize_multiple(x.truncate(int(z.tail)), pi ** n, C)
        logger.debug(f'zeta_rho(1, {n}) / pi_rho^{n} = {k!r} on {M!r}')
    return True


@check('zeta', 'recognition rejects random series')
def no_false_positives(ctx, rng):
    C = ctx.curve
    for _ in range(20):
        try:
            recognize_K(random_unit(ctx.tower, rng), C)
        except RecognitionFailure:
            continue
        return False
    return True


@check('zeta', 'Z_A(-n; z) has coefficients in A and vanishes past some degree')
def negative_values(ctx, rng):
    ctx.require_cutoff()
    return all(negative_special(ctx.table, n, ctx.config.D)['stable_from'] is not None for n in (1, 2))


@check('zeta', 'zeta_rho(b, p n) = sum_k a_k zeta_rho(w^k, n)^p for b = sum_k a_k w^(k p)')
def frobenius_power(ctx, rng):
    ctx.require_cutoff()
    p = ctx.curve.fq.p
    D = ctx.config.D
    worst, need = math.inf, math.inf
    for j in (0, 1):
        b = ctx.field.generator ** j
        worst = min(worst, frobenius_relation(ctx.table, power_coords(ctx.field, j), 1, D))
        need = min(need, p * (D + 1 + _min_valuation(b)))
    return worst, need


@check('zeta', 'zeta_rho(a b, n) = a zeta_rho(b, n) and zeta_rho(sigma_J b, n) = sum_Q sigma_Q(b) S_(Q - J)')
def anderson_symmetries(ctx, rng):
    ctx.require_cutoff()
    C = ctx.curve
    D = ctx.config.D
    b = ctx.field.generator
    need = D + 1 + _min_valuation(b) - C.t.deg
    worst = anderson_linearity(ctx.table, b, C.t, 1, D)
    if C.class_number > 1:
        worst = min(worst, galois_equivariance(ctx.table, b, 1, D))
    return worst, need


# == running and emitting

@dataclass
class Report:
    """Records of one run, with run metadata; timings live apart from the checks"""

    suite: str
    config: dict
    digest: str
    records: list
    branches: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    schema: int = SCHEMA_VERSION

    @property
    def failures(self) -> list:
        return [r for r in self.records if r.failed]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def counts(self) -> dict:
        return {s: sum(r.status == s for r in self.records) for s in STATUSES}

    def to_json(self) -> dict:
        return {
            'schema': self.schema,
            'suite': self.suite,
            'config': self.config,
            'digest': self.digest,
            'branches': self.branches,
            'checks': [r.to_json() for r in self.records],
            'metadata': self.metadata,
        }

    @classmethod
    def from_json(cls, data: dict) -> 'Report':
        seconds = data.get('metadata', {}).get('seconds', {})
        records = [CheckRecord(**r, seconds=seconds.get(r['id'], 0.0)) for r in data['checks']]
        return cls(data['suite'], data['config'], data['digest'], records, data.get('branches', []),
                   data.get('metadata', {}), data.get('schema', SCHEMA_VERSION))


def verify_suite(name: str, config: RunConfig, threads: int | None = None, cases: int = KERNEL_CASES) -> Report:
    """Run a named suite (or `all`) and collect one record per check"""
    names = [s for s in SUITES if s != 'all'] if name == 'all' else [name]
    if any(s not in REGISTRY for s in names):
        raise ValueError(f'unknown suite {name}')
    ctx = SuiteContext(config, cases)
    threads = threads or config.threads
    records = []
    for suite in names:
        records.extend(ordered_map(lambda f: f(ctx), REGISTRY[suite], threads, desc=suite))
    branches = [repr(b) for b in ctx.field.branches] if ctx.built('field') else []
    metadata = {
        'generated': datetime.now(timezone.utc).isoformat(timespec='seconds'),
        'seconds': {r.id: r.seconds for r in records},
    }
    report = Report(name, config.to_json(), config.digest(), records, branches, metadata)
    logger.info(f'suite {name}: {report.counts()}')
    return report


def _tsv(report: Report) -> str:
    cols = ('id', 'suite', 'status', 'residual', 'required', 'reason', 'identity')
    lines = ['\t'.join(cols)]
    for r in report.records:
        lines.append('\t'.join('' if getattr(r, c) is None else str(getattr(r, c)) for c in cols))
    return '\n'.join(lines) + '\n'


def _human(report: Report) -> str:
    order = {'fail': 0, 'skipped': 1, 'pass': 2}
    buf = io.StringIO()
    counts = report.counts()
    buf.write(f'suite {report.suite}: {counts["pass"]} passed, {counts["fail"]} failed, '
              f'{counts["skipped"]} skipped (config {report.digest[:12]})\n')
    for r in sorted(report.records, key=lambda r: order[r.status]):
        line = f'{r.status.upper():8} {r.id:32} {r.identity}'
        if r.residual is not None:
            line += f'  [residual {r.residual} / {r.required}]'
        if r.reason:
            line += f'  ({r.reason})'
        buf.write(line + '\n')
    return buf.getvalue()


def emit(report: Report, fmt: str = 'json', path: str | Path | None = None, stream=None) -> str:
    """Render a report as json, tsv or human text, to a file or a stream"""
    if fmt == 'json':
        text = json.dumps(report.to_json(), indent=2) + '\n'
    elif fmt == 'tsv':
        text = _tsv(report)
    elif fmt == 'human':
        text = _human(report)
    else:
        raise ValueError(f'unknown report format {fmt}')
    try:
        if path is not None:
            Path(path).write_text(text)
        else:
            (stream or sys.stdout).write(text)
    except OSError as exc:
        raise IoError(f'cannot write report: {exc}') from exc
    return text


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
