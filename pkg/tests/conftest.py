import pytest

from bitangents.curve import derive_section
from bitangents.dataset import builtin_klein
from bitangents.pairing import PairingTable


@pytest.fixture(scope="session")
def klein():
    return builtin_klein()


@pytest.fixture(scope="session")
def printed_sections(klein):
    """Sections of L1..L7 exactly as printed, in order."""
    return [klein.sections[f"L{k}"] for k in range(1, 8)]


@pytest.fixture(scope="session")
def printed_table(printed_sections):
    return PairingTable(printed_sections)


@pytest.fixture(scope="session")
def all_sections(klein):
    """One section per line for all 28 lines: printed where available, derived otherwise."""
    return [klein.sections.get(ln.name) or derive_section(klein.curve, ln) for ln in klein.lines]


@pytest.fixture(scope="session")
def full_table(all_sections):
    return PairingTable(all_sections)
