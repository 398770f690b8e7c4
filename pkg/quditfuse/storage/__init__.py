# -*- coding: utf-8 -*-
import os


class ReportStorage(object):
    """
    按 id 保存渲染好的报告。``id`` 通常是 ``<command>`` 或
    ``<command>-<table>``。
    """
    suffix = ''

    def __init__(self, directory='.'):
        self.directory = directory

    def path(self, id):
        return os.path.join(self.directory, id + self.suffix)

    def get(self, id):
        raise NotImplementedError()

    def set(self, id, value):
        raise NotImplementedError()

    def delete(self, id):
        raise NotImplementedError()

    def __getitem__(self, id):
        return self.get(id)

    def __setitem__(self, id, value):
        self.set(id, value)

    def __delitem__(self, id):
        self.delete(id)
