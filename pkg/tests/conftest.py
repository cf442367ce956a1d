import os
import sys
from pathlib import Path

# Every Smith form computed under test is checked by exact multiplication.
os.environ.setdefault("SAPC_CHECK_SNF", "1")
sys.path.insert(0, str(Path(__file__).resolve().parent))

import pytest  # noqa: E402
from hypothesis import HealthCheck, settings  # noqa: E402

from sapc import corpus  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


@pytest.fixture
def acceptance_record(request):
    """record(cid, title, passed, note) for the end-of-run acceptance table."""
    table = request.config.stash[ACCEPTANCE_KEY]

    def record(cid, title, passed, note=""):
        table[cid] = (title, bool(passed), note)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    table = config.stash.get(ACCEPTANCE_KEY, {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(table):
        title, passed, note = table[cid]
        line = f"[{'PASS' if passed else 'FAIL'}] {cid:>2} {title}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))


@pytest.fixture(scope="session")
def docs():
    return {name: corpus.document(name) for name in corpus.NAMES}


@pytest.fixture(scope="session")
def manifolds():
    return {name: corpus.load(name) for name in corpus.NAMES if name != "rp2_6"}
