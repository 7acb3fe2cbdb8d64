from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
MODULES = sorted(ROOT.glob("*.py"))


@pytest.mark.parametrize("path", MODULES, ids=lambda p: p.name)
def test_no_runs_of_three_blank_lines(path):
    assert "\n\n\n\n" not in path.read_text(encoding="utf-8")
