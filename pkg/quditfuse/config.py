# -*- coding: utf-8 -*-

import io
import json
import os

from quditfuse.exceptions import ConfigError


class ConfigAttribute(object):
    """
    让一个属性指向一个配置
    """

    def __init__(self, name):
        self.__name__ = name

    def __get__(self, obj, type=None):
        if obj is None:
            return self
        return obj.config[self.__name__]

    def __set__(self, obj, value):
        obj.config[self.__name__] = value


class Config(dict):
    def from_mapping(self, mapping):
        """
        从一个 ``dict`` 中读取配置，key 会被转换为大写。
        只接受已经存在的 key，未知的 key 会抛出 :class:`ConfigError`。

        :param mapping: 一个 ``dict`` 对象
        """
        for key, value in mapping.items():
            key = key.upper()
            if key not in self:
                raise ConfigError("Unknown config key {}".format(key))
            self[key] = _coerce(self[key], value, key)
        return True

    def from_json(self, filename):
        """
        在一个 JSON 文件中读取配置。

        :param filename: JSON 文件的文件名
        """
        try:
            with io.open(filename, encoding='utf-8') as f:
                mapping = json.load(f)
        except (IOError, OSError, ValueError) as e:
            raise ConfigError("{}: {}".format(filename, e))
        if not isinstance(mapping, dict):
            raise ConfigError("{} is not a JSON object".format(filename))
        return self.from_mapping(mapping)

    def from_env(self, prefix='QUDITFUSE_', environ=None):
        """
        读取以 ``prefix`` 开头的环境变量，例如 ``QUDITFUSE_THREADS=4``。

        :param prefix: 环境变量前缀
        :param environ: 用来读取的环境，默认为 ``os.environ``
        """
        if environ is None:
            environ = os.environ
        for name, value in environ.items():
            if not name.startswith(prefix):
                continue
            key = name[len(prefix):]
            if key in self:
                self[key] = _coerce(self[key], value, name)
        return True


def _coerce(current, value, key):
    if current is None or isinstance(value, type(current)):
        return value
    try:
        if isinstance(current, bool):
            if isinstance(value, str):
                return value.lower() in ('1', 'true', 'yes', 'on')
            return bool(value)
        return type(current)(value)
    except (TypeError, ValueError):
        raise ConfigError("{} expects {}, got {!r}".format(
            key, type(current).__name__, value
        ))
