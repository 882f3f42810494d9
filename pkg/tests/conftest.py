import os

import pytest

from fusionlim.acceptance import EX2_GROUP, EX2_MODULE
from fusionlim.fusion import FusionContext, fusion_context, theorem_sets
from fusionlim.groups import symmetric_group


ACCEPTANCE_LINES: list[str] = []


def pytest_collection_modifyitems(config, items):
    if not os.environ.get("FUSIONLIM_SKIP_STRETCH"):
        return
    skip = pytest.mark.skip(reason="stretch criteria skipped by FUSIONLIM_SKIP_STRETCH")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ex2():
    return fusion_context(EX2_GROUP, module_spec=EX2_MODULE)


@pytest.fixture(scope="session")
def ex2_sets(ex2):
    return theorem_sets(ex2)


@pytest.fixture(scope="session")
def s4():
    return FusionContext(symmetric_group(4), 2, group_spec="Sym(4)")
