import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def e37a_document():
    return json.loads((FIXTURES / "e37a_p3.json").read_text())


@pytest.fixture(scope="session")
def e37a_table(e37a_document):
    from iwt.mazur_tate import ingest_modular_symbols
    return ingest_modular_symbols(e37a_document)


@pytest.fixture(scope="session")
def e37a_sequence(e37a_table):
    from iwt.mazur_tate import theta_sequence
    return theta_sequence(e37a_table, 4, 0, 12)
