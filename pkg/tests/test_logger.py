# -*- coding: utf-8 -*-
import io
import logging

from quditfuse.logger import enable_pretty_logging, timed


def _logger(name):
    log = logging.getLogger('quditfuse-test-{}'.format(name))
    log.handlers = []
    log.propagate = False
    return log


def test_pretty_logging_format():
    stream = io.StringIO()
    log = enable_pretty_logging(_logger('format'), 'debug', stream=stream)
    log.debug("hello %s", "world")
    log.info("two\nlines")
    lines = stream.getvalue().splitlines()
    assert lines[0].startswith('[D ')
    assert lines[0].endswith('hello world')
    assert 'test_logger:' in lines[0]
    assert lines[1].startswith('[I ')
    assert lines[2] == '    lines'


def test_single_handler_and_level():
    log = _logger('level')
    enable_pretty_logging(log, 'info', stream=io.StringIO())
    enable_pretty_logging(log, logging.WARNING)
    assert len(log.handlers) == 1
    assert log.level == logging.WARNING


def test_exceptions_are_indented():
    stream = io.StringIO()
    log = enable_pretty_logging(_logger('exc'), stream=stream)
    try:
        raise ValueError("boom")
    except ValueError:
        log.exception("failed")
    text = stream.getvalue()
    assert text.startswith('[E ')
    assert '\n    Traceback' in text
    assert 'ValueError: boom' in text


def test_timed():
    stream = io.StringIO()
    log = enable_pretty_logging(_logger('timed'), stream=stream)
    with timed(log, 'sweep'):
        pass
    lines = stream.getvalue().splitlines()
    assert lines[0].endswith('sweep started')
    assert 'sweep finished in' in lines[1]
