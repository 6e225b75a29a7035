import pytest

from ragabench.runner import main
from ragalib.notation import load_corpus


@pytest.fixture
def corpus():
    return load_corpus()


@pytest.fixture(autouse=True)
def _no_seed_env(monkeypatch):
    monkeypatch.delenv("RAGA_SEED", raising=False)


def parse_kv(stdout: str) -> dict[str, str]:
    """Collect every `key=value` token printed to standard output."""
    pairs = {}
    for line in stdout.splitlines():
        for token in line.split():
            if "=" in token:
                key, value = token.split("=", 1)
                pairs[key] = value
    return pairs


@pytest.fixture
def run_cli(capsys):
    """Run the runner in-process; returns (exit status, key=value dict, stdout).

    Standard error of the latest call is kept on `run_cli.err`.
    """

    def _run(*argv):
        code = main([str(a) for a in argv])
        captured = capsys.readouterr()
        _run.err = captured.err
        return code, parse_kv(captured.out), captured.out

    _run.err = ""

    return _run
