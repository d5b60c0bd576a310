import os
import subprocess
import sys

import numpy as np
import pytest

from forge import _kernels
from forge.surfaces import counterexample, flat_s3_integrate

SNIPPET = """
import numpy as np
from forge import _kernels
from forge.surfaces import counterexample, flat_s3_integrate
m = flat_s3_integrate(counterexample(), (-1, 1, -1, 1), 2e-2)
np.save({path!r}, m.f)
print(_kernels.USE_NUMBA)
"""


def _run(tmp_path, disable):
    path = str(tmp_path / f"f_{disable}.npy")
    env = dict(os.environ)
    env.pop("FORGE_DISABLE_JIT", None)
    if disable:
        env["FORGE_DISABLE_JIT"] = "1"
    out = subprocess.run([sys.executable, "-c", SNIPPET.format(path=path)], env=env,
                         capture_output=True, text=True, check=True)
    return out.stdout.strip(), np.load(path)


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
def test_env_flag_selects_fallback_with_same_results(tmp_path):
    flag_jit, a = _run(tmp_path, False)
    flag_np, b = _run(tmp_path, True)
    assert flag_jit == "True" and flag_np == "False"
    assert np.max(np.abs(a - b)) < 1e-12


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
def test_frame_march_kernels_agree_in_process():
    d = counterexample()
    saved = _kernels.USE_NUMBA
    try:
        _kernels.USE_NUMBA = True
        a = flat_s3_integrate(d, (-0.5, 0.5, -0.5, 0.5), 1e-2)
        _kernels.USE_NUMBA = False
        b = flat_s3_integrate(d, (-0.5, 0.5, -0.5, 0.5), 1e-2)
    finally:
        _kernels.USE_NUMBA = saved
    assert np.max(np.abs(a.frames - b.frames)) < 1e-12
    assert abs(a.drift - b.drift) < 1e-12


def test_reprojection_keeps_frames_orthonormal_in_induced_sense():
    m = flat_s3_integrate(counterexample(), (-2, 2, -2, 2), 5e-2)
    assert m.sphere_error() < 1e-12 and m.tangency_error() < 1e-12
    assert m.drift < 1e-6
