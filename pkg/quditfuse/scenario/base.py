# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

from quditfuse.exceptions import ConfigError


class RegistryMetaClass(type):
    """
    按 ``__type__`` 注册子类。每个子元类应当声明自己的 ``TYPES``，
    否则会和其他注册表共用同一个字典。
    """
    TYPES = {}

    def __init__(cls, name, bases, attrs):
        keys = attrs.get('__type__')
        if keys is not None:
            for key in keys if isinstance(keys, list) else [keys]:
                if key in cls.TYPES:
                    raise ConfigError("{!r} is already registered by {}".format(
                        key, cls.TYPES[key].__name__
                    ))
                cls.TYPES[key] = cls
        super(RegistryMetaClass, cls).__init__(name, bases, attrs)

    def lookup(cls, key):
        try:
            return cls.TYPES[key]
        except KeyError:
            raise ConfigError("unknown {} {!r}, expected one of {}".format(
                cls.__name__, key, ', '.join(sorted(cls.TYPES))
            ))
