# -*- coding: utf-8 -*-
import numpy as np
import pytest

from quditfuse.fock import preset_unitary
from quditfuse.fusion import pair_cluster_inputs
from quditfuse.lab import QuditLab
from quditfuse.optimize import HaarSampler, haar_sample


def pair_cluster(d, name=None):
    cluster = {
        'graph': {'vertices': ['q0', 'q1'], 'edges': [['q0', 'q1']]},
        'leg': 'q1',
    }
    if name:
        cluster['name'] = name
    return cluster


def pair_scenario(d, unitary=None, **kwargs):
    document = {
        'd': d,
        'clusters': [pair_cluster(d), pair_cluster(d)],
        'unitary': unitary or {'source': 'identity'},
    }
    document.update(kwargs)
    return document


@pytest.fixture
def pbs():
    return preset_unitary('qubit-type2-eq8')


@pytest.fixture
def qubit_inputs():
    return pair_cluster_inputs(2)


@pytest.fixture
def qutrit_inputs():
    return pair_cluster_inputs(3)


@pytest.fixture
def haar():
    def sample(size, seed=0):
        return haar_sample(HaarSampler(seed), size)

    return sample


@pytest.fixture
def lab():
    return QuditLab(environ={})


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def scenario():
    return pair_scenario
