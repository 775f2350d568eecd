import pytest
from hypothesis import settings

from pqss import AxisConfig, BivariateOperator, PQPair

# sandbox machines can stall; wall-clock deadlines just make tests flaky
settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def worked_axis():
    # n=2, l=1, p=1, q=0.5, alpha=1, beta=2: [3]=1.75, [2]=1.5, D=3.5
    return AxisConfig(n=2, l=1, pq=PQPair(1.0, 0.5), alpha=1.0, beta=2.0)


@pytest.fixture
def worked_op(worked_axis):
    return BivariateOperator(worked_axis, worked_axis)
