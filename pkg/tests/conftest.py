import pytest

from degprop.domain import MemberState, Registry, load_eu27

TOY_CSV = """code,name,population,seats_status_quo
A,Alpha,10000000,10
B,Beta,5000000,4
C,Gamma,1000000,2
"""


@pytest.fixture(scope="session")
def eu27():
    return load_eu27()


@pytest.fixture
def toy():
    return Registry(
        (
            MemberState("A", "Alpha", 10_000_000, 10),
            MemberState("B", "Beta", 5_000_000, 4),
            MemberState("C", "Gamma", 1_000_000, 2),
        )
    )


@pytest.fixture
def toy_csv(tmp_path):
    path = tmp_path / "toy.csv"
    path.write_text(TOY_CSV, encoding="utf-8")
    return path
