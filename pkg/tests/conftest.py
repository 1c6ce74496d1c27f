import pytest

from corrpoly import Configuration, hull, truth_table


def pytest_addoption(parser):
    parser.addoption(
        "--extended", action="store_true", default=False,
        help="also run the long extended acceptance cases",
    )


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "extended: long-running checks, enabled with --extended"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="pass --extended to run")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def config_2_2():
    return Configuration.uniform(2, 2)


@pytest.fixture(scope="session")
def config_2_3():
    return Configuration.uniform(2, 3)


@pytest.fixture(scope="session")
def config_3_2():
    return Configuration.uniform(3, 2)


@pytest.fixture(scope="session")
def hull_2_2(config_2_2):
    return hull(truth_table(config_2_2))


@pytest.fixture(scope="session")
def hull_2_3(config_2_3):
    return hull(truth_table(config_2_3))
