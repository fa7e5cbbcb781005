import numpy as np
import pytest
from scipy.integrate import solve_ivp

from blevans import LayerParams, solve_profile
from blevans import kernel
from blevans.eigensystem import coeff_matrix

BACKENDS = kernel.available_backends()


def _args(params, prof, lam, shift, adjoint, z0, x0, x1, atol=1e-10, rtol=1e-10):
    return (complex(lam), complex(shift), adjoint, params.gamma, params.a, prof.anchor, prof.offset_at(x0), x0, x1, z0, atol, rtol)


@pytest.fixture(scope="module")
def inflow():
    p = LayerParams.create(5 / 3, 1e-2, 0.4)
    return p, solve_profile(p)


@pytest.fixture(scope="module")
def outflow():
    p = LayerParams.create(1.4, 1e-3, 0.6, "outflow")
    return p, solve_profile(p)


def _reference(prof, lam, shift, adjoint, z0, x0, x1):
    def rhs(x, z):
        A = coeff_matrix(x, lam, prof)
        M = A.adjoint().entries + shift * np.eye(3) if adjoint else A.entries - shift * np.eye(3)
        return M @ z

    sol = solve_ivp(rhs, (x0, x1), np.asarray(z0, dtype=complex), method="DOP853", rtol=1e-12, atol=1e-14)
    return sol.y[:, -1]


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("lam", [0.5, 3 + 4j, 10j])
def test_adjoint_shot_matches_scipy(inflow, backend, lam):
    p, prof = inflow
    z0 = (0.1 + 0j, -1 + 0j, 0.3j)
    shift = 0.7 - 0.2j
    z, u, n, nrej, st = kernel.get_backend(backend)(*_args(p, prof, lam, shift, True, z0, prof.L, 0.0))
    assert st == kernel.STATUS_OK
    ref = _reference(prof, lam, shift, True, z0, prof.L, 0.0)
    assert np.linalg.norm(np.array(z) - ref) <= 1e-7 * np.linalg.norm(ref)
    assert p.v_plus + u == pytest.approx(p.v0, rel=1e-9)


@pytest.mark.parametrize("backend", BACKENDS)
def test_forward_shot_matches_scipy(outflow, backend):
    p, prof = outflow
    z0 = (0.2 + 0j, 0.1 + 0j, 1 + 0j)
    lam = 2 - 1j
    z, u, *_ , st = kernel.get_backend(backend)(*_args(p, prof, lam, 0.4, False, z0, -prof.L, 0.0))
    assert st == kernel.STATUS_OK
    ref = _reference(prof, lam, 0.4, False, z0, -prof.L, 0.0)
    assert np.linalg.norm(np.array(z) - ref) <= 1e-7 * np.linalg.norm(ref)
    assert 1.0 + u == pytest.approx(p.v0, rel=1e-9)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")
@pytest.mark.parametrize("lam", [1e-3, 2 + 2j, 9.5 - 3j])
def test_backends_agree_bit_for_bit(inflow, lam):
    p, prof = inflow
    args = _args(p, prof, lam, 0.3, True, (0j, -1 + 0j, 0.5 + 0j), prof.L, 0.0, 1e-6, 1e-8)
    a = kernel.get_backend("cython")(*args)
    b = kernel.get_backend("python")(*args)
    assert a[2:] == b[2:]
    np.testing.assert_allclose(a[0], b[0], rtol=1e-13, atol=0)
    assert a[1] == pytest.approx(b[1], rel=1e-13)


@pytest.mark.parametrize("backend", BACKENDS)
def test_status_codes(inflow, backend):
    p, prof = inflow
    shoot = kernel.get_backend(backend)
    args = list(_args(p, prof, 1.0, 0.0, True, (1 + 0j, 1 + 0j, 1 + 0j), prof.L, 0.0))
    assert shoot(*args, max_steps=3)[-1] == kernel.STATUS_MAX_STEPS
    args[1] = -40.0  # the wrong exponential weight blows the solution up
    assert shoot(*args)[-1] == kernel.STATUS_OVERFLOW


def test_backend_selection():
    assert kernel.BACKEND in BACKENDS
    assert kernel.get_backend("python") is not None
    with pytest.raises(ValueError):
        kernel.get_backend("fortran")


def test_pure_python_fallback_is_selectable():
    import os
    import subprocess
    import sys

    code = (
        "from blevans import kernel, EvansEvaluator, LayerParams;"
        "print(kernel.BACKEND);"
        "print(repr(EvansEvaluator(LayerParams.create(5/3, 1e-2, 0.4))(2+1j)))"
    )
    # Both runs start from empty frame caches. In this process earlier tests
    # have already continued frames along other paths, which moves D by about
    # the continuation tolerance.
    def run(pure):
        env = {k: v for k, v in os.environ.items() if k != "BLEVANS_PURE_PYTHON"}
        if pure:
            env["BLEVANS_PURE_PYTHON"] = "1"
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        return res.stdout.split()

    pure, compiled = run(True), run(False)
    assert pure[0] == "python"
    assert compiled[0] == kernel.BACKEND
    assert complex(pure[1]) == pytest.approx(complex(compiled[1]), rel=1e-12)


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    bench = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernel.py"
    mod = runpy.run_path(str(bench))
    assert mod["main"](["--points", "16", "--repeat", "1"]) == 0
    assert "ms/shot" in capsys.readouterr().out
