import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qlf import ExactSampler, demo


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\n[acceptance] {name}: {'PASS' if report.passed else 'FAIL'}")


@pytest.fixture(scope="session")
def demo_model():
    return demo.demo_model()


@pytest.fixture(scope="session")
def demo_data():
    return demo.demo_tangential_data()


@pytest.fixture(scope="session")
def demo_sampler(demo_model):
    return ExactSampler(demo_model)
