import pytest

from fourbody_efimov.system import ModelParams, build_system


@pytest.fixture(scope="session")
def unit():
    """Equal unit masses, the reference system for most oracle values."""
    return build_system(1.0, 1.0)


@pytest.fixture(scope="session")
def params():
    return ModelParams()


@pytest.fixture
def minimal_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# illustrative masses\nm_A = 100\nm_B = 100\n")
    return path


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
