import logging
import os
import site

import pytest

logger = logging.getLogger(__name__)

HERE = os.path.dirname(os.path.abspath(__file__))
site.addsitedir(HERE)


def pytest_addoption(parser):
    parser.addoption(
        '--log',
        action='store',
        default='INFO',
        help='set logging level',
    )


@pytest.fixture(scope='session')
def logger(request):
    import logging

    loglevel = request.config.getoption('--log')

    numeric_level = getattr(logging, loglevel.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError('Invalid log level: %s' % loglevel)

    logging.basicConfig()
    logger = logging.getLogger(__name__)
    logger.setLevel(numeric_level)
    return logger


@pytest.fixture(scope='session')
def smoke_config():
    from gzl.configutils import RunConfig
    return RunConfig.from_config('smoke').override(N=40, Dt=12, D=3, n=(1, 2), threads=1)


@pytest.fixture(scope='session')
def default_config():
    from gzl.configutils import RunConfig
    return RunConfig.from_config('default').override(N=40, Dt=12, D=2, n=(1,), threads=1)


@pytest.fixture(scope='session')
def smoke_curve(smoke_config):
    return smoke_config.curve()


@pytest.fixture(scope='session')
def default_curve(default_config):
    return default_config.curve()


@pytest.fixture(scope='session')
def smoke_drinfeld(smoke_curve):
    from gzl.drinfeldutils import solve_drinfeld
    return solve_drinfeld(smoke_curve)


@pytest.fixture(scope='session')
def default_drinfeld(default_curve):
    from gzl.drinfeldutils import solve_drinfeld
    return solve_drinfeld(default_curve)
