# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

import os

import numpy as np
import six

from quditfuse.exceptions import ConfigError, DimensionError
from quditfuse.fock import Interferometer, preset_unitary, read_unitary
from quditfuse.scenario.base import RegistryMetaClass
from quditfuse.scenario.entries import IntEntry, ListEntry, StringEntry
from quditfuse.utils import pairs_to_matrix


class SourceMetaClass(RegistryMetaClass):
    TYPES = {}


@six.add_metaclass(SourceMetaClass)
class UnitarySource(object):
    """
    场景里 ``unitary`` 一项的解释方式，按 ``source`` 选择子类。
    """
    keys = ()

    def __init__(self, document, base_dir=None):
        unknown = set(document) - {'source'} - set(self.keys)
        if unknown:
            raise ConfigError("unknown keys {} for unitary source {!r}".format(
                sorted(unknown), self.__type__
            ))
        self.document = document
        self.base_dir = base_dir

    @classmethod
    def from_mapping(cls, document, base_dir=None):
        if not isinstance(document, dict):
            raise ConfigError("unitary must be a mapping")
        return cls.lookup(document.get('source'))(document, base_dir)

    def validate(self):
        pass

    def matrix(self, size, seed):
        raise NotImplementedError()

    def build(self, size, seed=0):
        u = self.matrix(size, seed)
        if not isinstance(u, Interferometer):
            u = Interferometer(u)
        if u.size != size:
            raise ConfigError("{} unitary has {} modes, the scenario needs {}".format(
                self.__type__, u.size, size
            ))
        return u

    def to_mapping(self):
        return dict(self.document)


class PresetSource(UnitarySource):
    __type__ = 'preset'
    keys = ('name', )
    name = StringEntry('name')

    def validate(self):
        if self.name is None:
            raise ConfigError("preset unitary needs a name")

    def matrix(self, size, seed):
        try:
            return preset_unitary(self.name)
        except KeyError as e:
            raise ConfigError(str(e))


class HaarSource(UnitarySource):
    """
    没有自己的 ``seed`` 时使用场景的种子。
    """
    __type__ = 'haar'
    keys = ('seed', )
    seed = IntEntry('seed')

    def matrix(self, size, seed):
        from quditfuse.optimize import HaarSampler
        return HaarSampler(seed if self.seed is None else self.seed).unitary(size)


class FileSource(UnitarySource):
    __type__ = 'file'
    keys = ('path', )
    path = StringEntry('path')

    def validate(self):
        if self.path is None:
            raise ConfigError("file unitary needs a path")

    @property
    def filename(self):
        if self.base_dir and not os.path.isabs(self.path):
            return os.path.join(self.base_dir, self.path)
        return self.path

    def matrix(self, size, seed):
        if not os.path.exists(self.filename):
            raise ConfigError("unitary file {} does not exist".format(self.filename))
        try:
            return read_unitary(self.filename)
        except DimensionError as e:
            raise ConfigError("unitary file {}: {}".format(self.filename, e))


class IdentitySource(UnitarySource):
    __type__ = 'identity'

    def matrix(self, size, seed):
        return np.eye(size, dtype=complex)


class InlineSource(UnitarySource):
    __type__ = 'inline'
    keys = ('matrix', )
    rows = ListEntry('matrix')

    def validate(self):
        if not self.rows:
            raise ConfigError("inline unitary needs a matrix")

    def matrix(self, size, seed):
        try:
            return pairs_to_matrix(self.rows)
        except (TypeError, ValueError) as e:
            raise ConfigError("bad inline matrix: {}".format(e))
