# -*- coding: utf-8 -*-
import json
import math
from collections import OrderedDict

from quditfuse.reports import OutcomeRow, RunReport, render_csv
from quditfuse.storage.csvstorage import CsvStorage
from quditfuse.storage.jsonstorage import JsonStorage


def _rows():
    return [
        OutcomeRow('0-2', 0.125, True, 2, math.log(2), 0.0, float('nan')),
        OutcomeRow('0-1', 0.0, True, None, None, None, None),
        OutcomeRow('1-1', 0.125, False, 1, 0.0, 0.7071067811865476, 0.7071067811865476),
    ]


def test_render_csv():
    lines = render_csv(_rows()).splitlines()
    assert lines[0] == 'pattern,probability,relevant,rank,entropy,residual,residual_other'
    assert lines[1] == '0-2,0.125,true,2,{},0,'.format('%.17g' % math.log(2))
    assert lines[2] == '0-1,0,true,,,,'
    assert lines[3].startswith('1-1,0.125,false,1,0,')
    assert render_csv([]) == ''


def test_render_row():
    assert _rows()[0].render().splitlines()[0].startswith('pattern,')
    assert _rows()[0].args['rank'] == 2


def test_entropy_base_is_display_only():
    rows = _rows()
    lines = render_csv(rows, entropy_base=2).splitlines()
    assert lines[1].split(',')[4] == '1'
    assert rows[0].entropy == math.log(2)


def test_run_report():
    report = RunReport(
        'fuse', {'d': 2}, OrderedDict(outcomes=_rows()), {'max_rank': 2},
        seed=4, extra={'unitary': [[[1.0, 0.0]]]}
    )
    assert report.passed
    assert report.table == report.tables['outcomes']
    document = json.loads(report.render_json())
    assert document['command'] == 'fuse'
    assert document['config'] == {'d': 2}
    assert document['seed'] == 4
    assert document['version']
    assert document['unitary'] == [[[1.0, 0.0]]]
    assert document['tables']['outcomes'][0]['residual_other'] is None
    assert document['tables']['outcomes'][1]['rank'] is None

    scaled = json.loads(report.render_json(entropy_base=2))
    assert scaled['entropy_base'] == 2
    assert scaled['tables']['outcomes'][0]['entropy'] == 1
    assert report.render_csv('outcomes') == render_csv(_rows())

    failing = RunReport('verify', {}, OrderedDict(), {}, violations=[{'check': 'x'}])
    assert not failing.passed
    assert failing.table == []


def test_json_storage(tmpdir):
    storage = JsonStorage(str(tmpdir.join('out')))
    assert storage.get('fuse') == {}
    storage['fuse'] = {'a': 1}
    assert storage['fuse'] == {'a': 1}
    storage.set('verify', '{"b": 2}\n')
    assert storage.get('verify') == {'b': 2}
    assert storage.path('fuse').endswith('fuse.json')
    del storage['fuse']
    assert storage.get('fuse') == {}
    storage.delete('fuse')


def test_csv_storage(tmpdir):
    storage = CsvStorage(str(tmpdir))
    assert storage.get('fuse-outcomes') == []
    storage['fuse-outcomes'] = _rows()
    rows = storage['fuse-outcomes']
    assert len(rows) == 3
    assert rows[0]['pattern'] == '0-2'
    assert rows[1]['rank'] == ''
    assert float(rows[0]['entropy']) == math.log(2)
    storage.set('text', 'a,b\n1,2\n')
    assert storage.get('text') == [{'a': '1', 'b': '2'}]
    del storage['text']
    assert storage.get('text') == []
