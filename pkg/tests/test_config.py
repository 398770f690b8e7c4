# -*- coding: utf-8 -*-
import json

import pytest

from quditfuse.config import Config, ConfigAttribute
from quditfuse.exceptions import ConfigError


class Holder(object):
    threads = ConfigAttribute('THREADS')

    def __init__(self):
        self.config = Config(THREADS=1, LOG_LEVEL='info', VERBOSE=False, RANK_TOL=1e-10)


def test_config_attribute():
    holder = Holder()
    assert holder.threads == 1
    holder.threads = 4
    assert holder.config['THREADS'] == 4
    assert isinstance(Holder.threads, ConfigAttribute)


def test_from_mapping():
    config = Holder().config
    config.from_mapping({'threads': '3', 'rank_tol': 1e-8, 'verbose': 'yes'})
    assert config['THREADS'] == 3
    assert config['RANK_TOL'] == 1e-8
    assert config['VERBOSE'] is True
    with pytest.raises(ConfigError):
        config.from_mapping({'colour': 'red'})
    with pytest.raises(ConfigError):
        config.from_mapping({'threads': 'many'})


def test_from_json(tmpdir):
    config = Holder().config
    filename = tmpdir.join('settings.json')
    filename.write(json.dumps({'threads': 2, 'log_level': 'warning'}))
    config.from_json(str(filename))
    assert config['THREADS'] == 2
    assert config['LOG_LEVEL'] == 'warning'
    filename.write('[1]')
    with pytest.raises(ConfigError):
        config.from_json(str(filename))
    filename.write('{oops')
    with pytest.raises(ConfigError):
        config.from_json(str(filename))
    with pytest.raises(ConfigError):
        config.from_json(str(tmpdir.join('missing.json')))


def test_from_env():
    config = Holder().config
    config.from_env(environ={
        'QUDITFUSE_THREADS': '5', 'QUDITFUSE_VERBOSE': '0', 'QUDITFUSE_OTHER': 'x',
        'THREADS': '9',
    })
    assert config['THREADS'] == 5
    assert config['VERBOSE'] is False
    assert 'OTHER' not in config
