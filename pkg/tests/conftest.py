import numpy as np
import pytest

from formsense.appeal import AppealModel, Observation
from formsense.core.fixtures import (
    fixture_products,
    fixture_session,
    load_fixture_appeal,
    load_fixture_dims,
    load_fixture_matrix,
    load_fixture_rules,
    load_fixture_template,
)
from formsense.geometry import ProfileTemplate

# the reference study's published appeal-model coefficients
REFERENCE_A = np.array([3.6, 0.12, 13.6, -1.52, 0.02, -0.13, -0.01, -1.71, 0.01, 82.36])
REFERENCE_K = np.array([-0.01, 14.15, 0.01])


@pytest.fixture(scope="session")
def fixture_matrix():
    return load_fixture_matrix()


@pytest.fixture(scope="session")
def fixture_appeal():
    return load_fixture_appeal()


@pytest.fixture(scope="session")
def fixture_rules():
    return load_fixture_rules()


@pytest.fixture(scope="session")
def fixture_dims():
    return load_fixture_dims()


@pytest.fixture(scope="session")
def products():
    return fixture_products()


@pytest.fixture()
def session():
    return fixture_session()


@pytest.fixture(scope="session")
def template():
    return ProfileTemplate.from_dict(load_fixture_template())


@pytest.fixture(scope="session")
def reference_model():
    return AppealModel(a=REFERENCE_A, k=REFERENCE_K)


@pytest.fixture(scope="session")
def observations(fixture_dims, fixture_appeal, fixture_rules):
    return [
        Observation(dims=fixture_dims[pid], appeal=fixture_appeal[pid],
                    deltas=fixture_rules.deltas(pid))
        for pid in sorted(fixture_dims)
    ]
