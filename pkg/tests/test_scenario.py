# -*- coding: utf-8 -*-
import json

import numpy as np
import pytest

from quditfuse.exceptions import ConfigError, NonUnitaryError
from quditfuse.fock import preset_unitary, write_unitary
from quditfuse.optimize import EntropyThresholdObjective, HaarSampler
from quditfuse.parser import (
    load_document, parse_run, parse_scan, parse_scenario, parse_verify, unwrap_report
)
from quditfuse.scenario.entries import IntEntry
from quditfuse.scenario.sources import PresetSource, UnitarySource
from quditfuse.utils import matrix_to_pairs


def test_pbs_scenario(scenario):
    config = parse_scenario(scenario(2, {'source': 'preset', 'name': 'qubit-type2-eq8'}))
    inputs = config.build_inputs()
    assert [inp.name for inp in inputs] == ['c1', 'c2']
    assert config.size(inputs) == 4
    assert np.allclose(config.build_unitary(inputs).matrix, preset_unitary('qubit-type2-eq8').matrix)
    assert isinstance(config.unitary_source, PresetSource)
    assert config.basis == 'schmidt'
    assert config.vacuum_pads == 0
    roles = config.build_unitary().mode_roles
    assert [r.kind for r in roles] == ['leg'] * 4
    assert [r.parent for r in roles] == [0, 0, 1, 1]


def test_scenario_from_json_text(scenario):
    config = parse_scenario(json.dumps(scenario(3)))
    assert config.d == 3
    assert np.allclose(config.build_unitary().matrix, np.eye(6))


@pytest.mark.parametrize("change", [
    {'d': 1},
    {'colour': 'blue'},
    {'clusters': []},
    {'basis': 'polar'},
    {'vacuum_pads': -1},
    {'ancillae': -2},
    {'ancillae': True},
    {'ancillae': [{'state': [[1, 0]], 'colour': 1}]},
    {'unitary': {'source': 'beamsplitter'}},
    {'unitary': {'source': 'preset'}},
    {'unitary': {'source': 'identity', 'name': 'x'}},
    {'unitary': {'source': 'file'}},
    {'unitary': {'source': 'inline'}},
    {'seed': 'seven'},
])
def test_invalid_scenarios(scenario, change):
    document = scenario(2)
    document.update(change)
    with pytest.raises(ConfigError):
        parse_scenario(document)


def test_invalid_clusters(scenario):
    document = scenario(2)
    document['clusters'][0]['colour'] = 'red'
    with pytest.raises(ConfigError):
        parse_scenario(document)
    document = scenario(2)
    del document['clusters'][1]['leg']
    with pytest.raises(ConfigError):
        parse_scenario(document)
    document = scenario(2)
    document['clusters'][0]['leg'] = 'q7'
    with pytest.raises(ConfigError):
        parse_scenario(document).build_inputs()
    for change in [{'vertices': 5}, {'edges': [3]}, {'edges': 'q0q1'}]:
        document = scenario(2)
        document['clusters'][0]['graph'].update(change)
        with pytest.raises(ConfigError):
            parse_scenario(document).build_inputs()


def test_amplitude_cap_is_a_config_error(scenario):
    document = scenario(3)
    with pytest.raises(ConfigError):
        parse_scenario(document).build_inputs(cap=8)


def test_unknown_preset_fails_on_build(scenario):
    config = parse_scenario(scenario(2, {'source': 'preset', 'name': 'dft-x'}))
    with pytest.raises(ConfigError):
        config.build_unitary()


def test_preset_size_mismatch(scenario):
    config = parse_scenario(scenario(3, {'source': 'preset', 'name': 'qubit-type2-eq8'}))
    with pytest.raises(ConfigError):
        config.build_unitary()


def test_haar_source_uses_scenario_seed(scenario):
    config = parse_scenario(scenario(2, {'source': 'haar'}, seed=5))
    assert np.array_equal(config.build_unitary().matrix, HaarSampler(5).unitary(4))
    config = parse_scenario(scenario(2, {'source': 'haar', 'seed': 8}, seed=5))
    assert np.array_equal(config.build_unitary().matrix, HaarSampler(8).unitary(4))


def test_file_source_is_relative_to_document(tmpdir, scenario):
    u = HaarSampler(3).unitary(4)
    write_unitary(str(tmpdir.join('u.txt')), u)
    config = parse_scenario(scenario(2, {'source': 'file', 'path': 'u.txt'}), str(tmpdir))
    assert np.array_equal(config.build_unitary().matrix, u)
    config = parse_scenario(scenario(2, {'source': 'file', 'path': 'missing.txt'}), str(tmpdir))
    with pytest.raises(ConfigError):
        config.build_unitary()


def test_inline_source(scenario):
    config = parse_scenario(scenario(2, {'source': 'inline', 'matrix': matrix_to_pairs(np.eye(4))}))
    assert np.allclose(config.build_unitary().matrix, np.eye(4))
    bad = parse_scenario(scenario(2, {'source': 'inline', 'matrix': matrix_to_pairs(np.ones((4, 4)))}))
    with pytest.raises(NonUnitaryError):
        bad.build_unitary()


def test_ancillae(scenario):
    config = parse_scenario(scenario(2, ancillae=2))
    inputs = config.build_inputs()
    assert [inp.name for inp in inputs] == ['c1', 'c2', 'a1', 'a2']
    assert config.size(inputs) == 6

    config = parse_scenario(scenario(
        2, ancillae=[{'state': [[0, 0], [1, 0]]}], basis='physical', vacuum_pads=1
    ))
    inputs = config.build_inputs()
    assert np.allclose(inputs[2].leg_state, [0, 1])
    assert config.size(inputs) == 7

    config = parse_scenario(scenario(3, ancillae=[{'state': [[1, 0]]}]))
    with pytest.raises(ConfigError):
        config.build_inputs()
    for state in ['abc', 7, [[1, 0], 'ab', [0, 0]], [[1, 0], [0], [0, 0]]]:
        config = parse_scenario(scenario(3, ancillae=[{'state': state}]))
        with pytest.raises(ConfigError):
            config.build_inputs()


def test_scenario_mapping_round_trip(scenario):
    document = scenario(2, {'source': 'preset', 'name': 'dft-4'}, seed=3)
    config = parse_scenario(document)
    assert config.to_mapping() == document
    assert parse_scenario(config.to_mapping()).to_mapping() == document


def test_unitary_source_registry():
    assert UnitarySource.lookup('preset') is PresetSource
    with pytest.raises(ConfigError):
        UnitarySource.from_mapping({'source': 'random'})
    with pytest.raises(ConfigError):
        UnitarySource.from_mapping(['identity'])


def test_run_document(scenario):
    run = parse_run({
        'scenario': scenario(3),
        'objective': {'mode': 'entropy-threshold', 'entropy_threshold': 0.6},
        'budget': 50, 'restarts': 2, 'seed': 4,
    })
    assert run.budget == 50
    assert run.restarts == 2
    assert run.certificate_start
    assert not run.tradeoff
    objective = run.build_objective()
    assert isinstance(objective, EntropyThresholdObjective)
    assert objective.entropy_threshold == 0.6
    assert parse_run(run.to_mapping()).to_mapping() == run.to_mapping()


def test_bare_scenario_is_a_run(scenario):
    run = parse_run(scenario(2))
    assert run.budget == 1000
    assert run.build_objective().mode == 'full-entanglement'
    assert run.scenario.d == 2


@pytest.mark.parametrize("change", [
    {'budget': 0},
    {'restarts': 0},
    {'thresholds': [0.5, 0.1]},
    {'thresholds': []},
    {'thresholds': ['low']},
    {'search_ancillas': True},
    {'objective': {'mode': 'max-fidelity'}},
    {'objective': {'mode': 'entropy-threshold', 'entropy_threshold': 1.5}},
    {'objective': {'mode': 'entropy-threshold', 'weight': 1}},
    {'colour': 1},
])
def test_invalid_runs(scenario, change):
    document = {'scenario': scenario(3)}
    document.update(change)
    with pytest.raises(ConfigError):
        parse_run(document)


def test_tradeoff_run(scenario):
    run = parse_run({'scenario': scenario(2), 'thresholds': [0, 0.2, 0.4]})
    assert run.tradeoff
    assert run.thresholds == [0, 0.2, 0.4]


def test_run_with_scenario_path(tmpdir, scenario):
    tmpdir.join('scenario.json').write(json.dumps(scenario(2)))
    tmpdir.join('run.json').write(json.dumps({'scenario': 'scenario.json', 'budget': 7}))
    document, base_dir = load_document(str(tmpdir.join('run.json')))
    run = parse_run(document, base_dir)
    assert run.budget == 7
    assert run.scenario.d == 2
    assert run.to_mapping()['scenario'] == scenario(2)


def test_scan_document(scenario):
    scan = parse_scan({'scenario': scenario(2), 'trials': 12, 'seed': 3})
    assert scan.trials == 12
    assert scan.seed == 3
    assert scan.build_objective().mode == 'full-entanglement'
    assert parse_scan(scenario(2)).trials == 100
    with pytest.raises(ConfigError):
        parse_scan({'scenario': scenario(2), 'trials': 0})
    with pytest.raises(ConfigError):
        parse_scan({'trials': 3})


def test_verify_document():
    verify = parse_verify({})
    assert verify.dims == [3]
    assert verify.ancillae == [0]
    assert verify.trials == 100
    verify = parse_verify({'d': 4, 'ancillae': [0, 1], 'trials': 5, 'seed': 9})
    assert verify.dims == [4]
    assert verify.ancillae == [0, 1]
    assert verify.to_mapping()['d'] == [4]
    for bad in ({'d': [1]}, {'d': []}, {'ancillae': -1}, {'trials': 0}, {'mode': 'x'}, {'d': [True]}):
        with pytest.raises(ConfigError):
            parse_verify(bad)


def test_documents_from_reports(tmpdir, scenario):
    report = {'command': 'fuse', 'version': '0.3.0', 'config': scenario(2), 'tables': {}}
    assert unwrap_report(report) == scenario(2)
    tmpdir.join('fuse.json').write(json.dumps(report))
    document, _ = load_document(str(tmpdir.join('fuse.json')))
    assert document == scenario(2)
    with pytest.raises(ConfigError):
        load_document(str(tmpdir.join('nothing.json')))
    tmpdir.join('bad.json').write('{not json')
    with pytest.raises(ConfigError):
        load_document(str(tmpdir.join('bad.json')))
    with pytest.raises(ConfigError):
        parse_scenario('[1, 2]')


def test_entries():
    class Holder(object):
        count = IntEntry('a.b', 3)

        def __init__(self, document):
            self.document = document

    assert Holder({}).count == 3
    assert Holder({'a': {'b': 4}}).count == 4
    assert Holder({'a': {'b': 4.0}}).count == 4
    assert Holder({'a': 5}).count == 3
    with pytest.raises(ConfigError):
        Holder({'a': {'b': True}}).count
    with pytest.raises(ConfigError):
        Holder({'a': {'b': 4.5}}).count
