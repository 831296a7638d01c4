import importlib.util

import pytest

from conftest import DATASETS, ROOT


@pytest.fixture(scope="module")
def validate_samples():
    spec = importlib.util.spec_from_file_location("validate_samples", ROOT / "scripts" / "validate_samples.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_bundled_samples_are_clean(validate_samples):
    assert validate_samples.check_samples(DATASETS / "regression_sample.csv") == []


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("x,y\n0,1\n", "only 1 distinct x"),
        ("x,y,z\n0,1,0\n1,2,0\n", "identically zero"),
        ("x,y\n0,1\n0,2\n", "DuplicateX"),
        ("a,b\n0,1\n", "ParseError"),
    ],
)
def test_issues_are_reported(validate_samples, write_csv, text, fragment):
    issues = validate_samples.check_samples(write_csv("s.csv", text))
    assert len(issues) == 1
    assert fragment in issues[0]


def test_main_exit_codes(validate_samples, monkeypatch, tmp_path, capsys):
    monkeypatch.setattr("sys.argv", ["validate_samples.py", str(tmp_path / "missing.csv")])
    with pytest.raises(SystemExit) as info:
        validate_samples.main()
    assert info.value.code == 3

    monkeypatch.setattr("sys.argv", ["validate_samples.py", str(DATASETS / "regression_sample.csv")])
    with pytest.raises(SystemExit) as info:
        validate_samples.main()
    assert info.value.code == 0
    assert "OK" in capsys.readouterr().out
