import logging
import os

logger = logging.getLogger(__name__)

ASSETS = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'assets')


def get_asset_path(name):
    return os.path.join(ASSETS, name)


def read_asset(name):
    """Text of a config or report file under test/assets"""
    with open(get_asset_path(name)) as fh:
        return fh.read()
