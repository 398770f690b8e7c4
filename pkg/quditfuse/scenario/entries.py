# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

import six

from quditfuse.exceptions import ConfigError
from quditfuse.utils import to_text


def get_value(instance, path, default=None):
    value = instance.document
    for entry in path.split('.'):
        if not isinstance(value, dict):
            return default
        value = value.get(entry)
        if value is None:
            return default
    return value


class BaseEntry(object):
    def __init__(self, entry, default=None):
        self.entry = entry
        self.default = default

    def convert(self, value):
        return value

    def __get__(self, instance, owner):
        if instance is None:
            return self
        value = get_value(instance, self.entry, self.default)
        if value is None:
            return None
        try:
            return self.convert(value)
        except (TypeError, ValueError):
            raise ConfigError("{} must be {}, got {!r}".format(
                self.entry, self.kind, value
            ))


class IntEntry(BaseEntry):
    kind = 'an integer'

    def convert(self, value):
        if isinstance(value, bool) or isinstance(value, float) and not value.is_integer():
            raise TypeError()
        return int(value)


class FloatEntry(BaseEntry):
    kind = 'a number'

    def convert(self, value):
        if isinstance(value, bool):
            raise TypeError()
        return float(value)


class StringEntry(BaseEntry):
    kind = 'a string'

    def convert(self, value):
        if not isinstance(value, six.string_types + (six.binary_type, )):
            raise TypeError()
        return to_text(value)


class BoolEntry(BaseEntry):
    kind = 'a boolean'

    def convert(self, value):
        if not isinstance(value, bool):
            raise TypeError()
        return value


class ListEntry(BaseEntry):
    kind = 'a list'

    def convert(self, value):
        if not isinstance(value, list):
            raise TypeError()
        return list(value)
