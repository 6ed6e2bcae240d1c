import pytest

from trihate.toydata import generate_toy_dataset


@pytest.fixture(scope="session")
def toy_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("toy")
    generate_toy_dataset(out, seed=7)
    return out
