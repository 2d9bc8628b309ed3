import re
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent
GOLDEN = ROOT / "golden"

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_results: dict = {}
_notes: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = _CRITERION.search(item.nodeid)
        if m and item.function.__doc__:
            _notes[int(m.group(1))] = item.function.__doc__.strip()


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(key, (m.group(2), "PASS"))
        state = "PASS" if report.outcome == "passed" and prev[1] == "PASS" else "FAIL"
        if report.when == "setup" and report.outcome == "skipped":
            state = "SKIP"
        _results[key] = (m.group(2), state)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_results):
        name, state = _results[key]
        tr.write_line(f"criterion {key:2d}  {state}  {name}  [{_notes.get(key, '')}]")


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process; returns ``(code, stdout, stderr)``."""
    from zimin.cli import dispatch

    def run(*argv, manifest=False):
        args = list(argv) if manifest else ["--no-manifest", *argv]
        code = dispatch(args)
        out, err = capsys.readouterr()
        return code, out, err

    return run
