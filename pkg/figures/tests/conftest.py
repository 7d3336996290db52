import shutil
import subprocess

import pytest


@pytest.fixture(scope="session")
def bundle(tmp_path_factory):
    """A real figure1 bundle produced through the command-line interface.

    The producer is consumed strictly as an external program writing
    files; nothing from it is imported.
    """
    exe = shutil.which("levyspec")
    if exe is None:
        pytest.skip("levyspec CLI not on PATH; cannot produce input bundle")
    out = tmp_path_factory.mktemp("bundle")
    subprocess.run(
        [exe, "figure1", "--n", "300", "--reps", "3", "--seed", "7",
         "--out", str(out)],
        check=True,
        capture_output=True,
    )
    return out
