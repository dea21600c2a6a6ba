import os

import pytest

from rtgevol.formats import import_dtd, parse_grammar, parse_xml
from rtgevol.mapping import parse_mapping

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_path(*parts):
    return os.path.join(DATA, *parts)


def read(*parts):
    with open(data_path(*parts), encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def rtg():
    return parse_grammar(read("hospital.rtg"))


@pytest.fixture(scope="session")
def ltg():
    return parse_grammar(read("hospital.ltg"))


@pytest.fixture(scope="session")
def service_grammars():
    return [import_dtd(read(f"{n}.dtd")) for n in ("patient", "insurance", "billing")]


@pytest.fixture(scope="session")
def fig3():
    return {k: parse_xml(read(f"fig3{k}.xml")) for k in "abc"}


@pytest.fixture(scope="session")
def hospital_script():
    return parse_mapping(read("hospital.map")).script


@pytest.fixture(scope="session")
def hospital_inverse_script():
    return parse_mapping(read("inverse.map")).script


# acceptance results are collected by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
