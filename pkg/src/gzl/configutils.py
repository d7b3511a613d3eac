"""Run configuration: shipped curve fixtures, config files and environment.

Run parameters come from a shipped fixture, a config file, a dict or
keyword overrides, in that order of precedence from lowest to highest.
"""
import hashlib
import json
import logging
import os
from abc import ABC
from dataclasses import asdict, dataclass, fields, replace
from functools import partial, wraps
from pathlib import Path

import galois
import regex
from platformdirs import PlatformDirs

from gzl.curveutils import Curve, CurveParams
from gzl.exception import ConfigInvalid
from gzl.fieldutils import FqConfig
from gzl.scalarutils import Tower

logger = logging.getLogger(__name__)

__all__ = [
    'Setting',
    'ConfigOptions',
    'RunConfig',
    'SUITES',
    'fixtures',
    'load_options',
    'parse_config',
    'read_config',
    'get_outputdir',
]

SUITES = ('kernel', 'curve', 'ideals', 'drinfeld', 'tensor', 'motive', 'zeta', 'all')


class Setting(dict):
    """Fixture tree with attribute access; missing keys become sub-trees while unlocked.

    The lock is class-wide, so shipped fixtures stay read-only once loaded.

    >>> cfg = Setting()
    >>> cfg.unlock()
    >>> cfg.tiny.q = 5
    >>> cfg.tiny.q
    5
    >>> cfg.lock()
    >>> cfg.tiny.c = (0, 0, 0, 1, 1)
    Traceback (most recent call last):
     ...
    ValueError: This Setting object is locked from editing
    """

    _locked = False

    def __init__(self, *args, **kwargs):
        dict.__init__(self, *args, **kwargs)

    def __getattr__(self, name):
        if name not in self:
            if self._locked:
                raise ValueError('This Setting object is locked from editing')
            self[name] = Setting()
        return self[name]

    def __setattr__(self, name, val):
        if self._locked:
            raise ValueError('This Setting object is locked from editing')
        self[name] = val

    @staticmethod
    def lock():
        Setting._locked = True

    @staticmethod
    def unlock():
        Setting._locked = False


def iflocked(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        was_locked = Setting._locked
        Setting.unlock()
        try:
            return func(*args, **kwargs)
        finally:
            if was_locked:
                Setting.lock()
    return wrapper


@iflocked
def _fixtures() -> Setting:
    fx = Setting()
    fx.default.q = 3
    fx.default.c = (0, 0, 0, -1, 1)
    fx.smoke.q = 2
    fx.smoke.c = (0, 0, 1, 1, 1)
    return fx


fixtures = _fixtures()
Setting.lock()


class ConfigOptions(ABC):
    """Load from a fixture name in `fixtures` (or another Setting tree)"""

    @classmethod
    def from_config(cls, setting: str, config=None):
        this = config if config is not None else fixtures
        for level in setting.split('.'):
            if level not in this:
                raise ConfigInvalid(f'no fixture named {setting}')
            this = this[level]
        return cls(**this)


@dataclass(frozen=True)
class RunConfig(ConfigOptions):
    """Validated, immutable parameters of one run

    >>> cfg = RunConfig()
    >>> cfg.q, cfg.c, cfg.N
    (3, (0, 0, 0, -1, 1), 160)
    >>> RunConfig.from_config('smoke').curve().class_number
    1
    >>> RunConfig(N=4)
    Traceback (most recent call last):
     ...
    gzl.exception.ConfigInvalid: precision N=4 is below 8
    """

    q: int = 3
    c: tuple = (0, 0, 0, -1, 1)
    N: int = 160
    M: int = 2
    s: int = 1
    Dt: int = 32
    D: int = 6
    n: tuple = (1, 2, 3)
    suite: str = 'all'
    threads: int | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'c', tuple(int(x) for x in self.c))
        n = (self.n,) if isinstance(self.n, int) else tuple(int(x) for x in self.n)
        object.__setattr__(self, 'n', n)
        if not galois.is_prime_power(self.q):
            raise ConfigInvalid(f'q={self.q} is not a prime power')
        if self.N < 8:
            raise ConfigInvalid(f'precision N={self.N} is below 8')
        for name in ('M', 's', 'Dt'):
            if getattr(self, name) < 1:
                raise ConfigInvalid(f'{name} must be positive')
        if self.D < 0:
            raise ConfigInvalid(f'ideal cutoff D={self.D} is negative')
        if not self.n or any(k < 1 for k in self.n):
            raise ConfigInvalid(f'n={self.n} must be positive integers')
        if self.suite not in SUITES:
            raise ConfigInvalid(f'unknown suite {self.suite}; choose from {", ".join(SUITES)}')
        if self.threads is not None and self.threads < 1:
            raise ConfigInvalid('threads must be positive')
        self.params()

    def fq(self) -> FqConfig:
        (p,), (r,) = galois.factors(self.q)
        return FqConfig(p, r, s=self.s)

    def params(self) -> CurveParams:
        return CurveParams(self.fq(), self.c)

    def tower(self) -> Tower:
        return Tower(self.fq(), N=self.N, M=self.M)

    def curve(self) -> Curve:
        return Curve(self.params(), self.tower())

    def override(self, **kwargs) -> 'RunConfig':
        """Copy with the non-None keyword values replaced"""
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def to_json(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}

    def digest(self) -> str:
        """SHA-256 of the canonical JSON

        >>> RunConfig().digest() == RunConfig(q=3).digest()
        True
        """
        text = json.dumps(self.to_json(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(text.encode()).hexdigest()


def load_options(func=None, *, cls=RunConfig):
    """Wrapper that builds dataclass options from a fixture, dict or kwargs.

    Standard interface:
        options: str | dict | ConfigOptions | None
        config: Setting tree of fixtures (defaults to `fixtures`)
        kwargs: additional kw-args to pass to function

    >>> @load_options
    ... def size(options=None, config=None, **kwargs):
    ...     return options.q, options.N
    >>> size('smoke')
    (2, 160)
    >>> size({'q': 3, 'N': 40})
    (3, 40)
    >>> size(N=40)
    (3, 40)
    """
    def _load(options=None, /, config=None, **kwargs):
        names = {f.name for f in fields(cls)}
        over = {k: kwargs.pop(k) for k in list(kwargs) if k in names}
        if isinstance(options, dict):
            options = cls(**options)
        if isinstance(options, str):
            options = cls.from_config(options, config=config)
        if options is None:
            options = cls(**over)
        elif over:
            options = options.override(**over)
        return options, config, kwargs

    if func is None:
        return partial(load_options, cls=cls)

    @wraps(func)
    def func_wrapper(options=None, /, config=None, **kwargs):
        options, config, kw = _load(options, config, **kwargs)
        return func(options, config=config, **kw)

    return func_wrapper


# == config file grammar

_SECTION = regex.compile(r'^\[(?<name>\w+)\]$')
_ENTRY = regex.compile(r'^(?<key>\w+)\s*=\s*(?<value>[^#]*?)\s*$')
_INTLIST = regex.compile(r'^-?\d+(\s*,\s*-?\d+)*$')
_WORD = regex.compile(r'^[\w.-]+$')

_KEYS = {
    'curve': {'q', 'c'},
    'precision': {'N', 'M', 's', 'Dt'},
    'run': {'D', 'n', 'suite', 'threads', 'seed'},
}
_LISTS = {'c', 'n'}


def _value(key: str, text: str, lineno: int):
    if _INTLIST.match(text):
        vals = tuple(int(x) for x in text.split(','))
        if key in _LISTS:
            return vals
        if len(vals) != 1:
            raise ConfigInvalid(f'line {lineno}: {key} takes a single integer')
        return vals[0]
    if _WORD.match(text):
        return text
    raise ConfigInvalid(f'line {lineno}: cannot read value {text!r}')


def parse_config(text: str) -> dict:
    """Keyword dict from config text: [section] headers, key = value lines, # comments

    >>> parse_config('''
    ... [curve]
    ... q = 2       # smoke
    ... c = 0, 0, 1, 1, 1
    ... [run]
    ... suite = kernel
    ... ''')
    {'q': 2, 'c': (0, 0, 1, 1, 1), 'suite': 'kernel'}
    >>> parse_config('q = 3')
    Traceback (most recent call last):
     ...
    gzl.exception.ConfigInvalid: line 1: entry outside a section
    """
    out = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if m := _SECTION.match(line):
            section = m['name']
            if section not in _KEYS:
                raise ConfigInvalid(f'line {lineno}: unknown section [{section}]')
            continue
        m = _ENTRY.match(line)
        if m is None:
            raise ConfigInvalid(f'line {lineno}: expected key = value')
        if section is None:
            raise ConfigInvalid(f'line {lineno}: entry outside a section')
        key = m['key']
        if key not in _KEYS[section]:
            raise ConfigInvalid(f'line {lineno}: unknown key {key} in [{section}]')
        out[key] = _value(key, m['value'], lineno)
    return out


def read_config(path: str | Path | None = None, fixture: str = 'default', **overrides) -> RunConfig:
    """Fixture, then file, then GZL_THREADS, then explicit overrides"""
    base = RunConfig.from_config(fixture)
    data = {}
    if path is not None:
        try:
            data = parse_config(Path(path).read_text())
        except OSError as exc:
            raise ConfigInvalid(f'cannot read config {path}: {exc}') from exc
    if env := os.getenv('GZL_THREADS'):
        if not env.isdigit():
            raise ConfigInvalid(f'GZL_THREADS={env} is not a positive integer')
        data.setdefault('threads', int(env))
    try:
        cfg = replace(base, **data).override(**overrides)
    except TypeError as exc:
        raise ConfigInvalid(str(exc)) from exc
    logger.debug(f'config {cfg.digest()[:12]}: {cfg.to_json()}')
    return cfg


__dirs = PlatformDirs(appname='gzl', roaming=True)


@iflocked
def get_outputdir() -> Setting:
    """Report directory: GZL_OUTPUT_DIR or the user data dir"""
    output = Setting()
    if os.getenv('GZL_OUTPUT_DIR'):
        output.dir = os.path.abspath(os.path.expandvars(os.path.expanduser(os.getenv('GZL_OUTPUT_DIR'))))
    else:
        output.dir = Path(__dirs.user_data_dir).as_posix()
    Path(output.dir).mkdir(parents=True, exist_ok=True)
    return output


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
