import pytest

from semwiki import _kernel
from semwiki.store import init_store

FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"


@pytest.fixture(params=sorted(_kernel.available_backends()))
def kernel_cls(request):
    return _kernel.available_backends()[request.param]


@pytest.fixture
def store(kernel_cls):
    return init_store(kernel_cls=kernel_cls)


@pytest.fixture
def fresh_store():
    return init_store()


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture
def fixtures_dir():
    return FIXTURES
