import numpy as np
import pytest

from oracles import central_fd, loop_gradient, loop_tv, smoothed_tv
from csface import _accel
from csface.errors import SolverDiverged
from csface.metrics import psnr
from csface.sampling import Measurements, build_mask, measure
from csface.transform import dct2
from csface.tv import (
    SolverConfig, _smoothed_tv_numba, _smoothed_tv_numpy, gradient_field, reconstruct,
    smoothed_tv_and_gradient, total_variation,
)


def test_constant_plane_has_no_gradient():
    dh, dv = gradient_field(np.full((4, 5), 3.0))
    assert not dh.any() and not dv.any()
    assert total_variation(np.full((4, 5), 3.0)) == 0.0


def test_two_by_two_example():
    x = np.array([[0.0, 1.0], [0.0, 1.0]])
    dh, dv = gradient_field(x)
    assert dh.tolist() == [[0, 0], [0, 0]]
    assert dv.tolist() == [[1, 0], [1, 0]]  # last column is the zero boundary
    assert total_variation(x) == 2.0


def test_loop_oracles_100_random_planes(rng):
    for _ in range(100):
        h, w = rng.integers(1, 9, size=2)
        x = rng.normal(size=(h, w)) * rng.uniform(0.1, 100)
        dh, dv = gradient_field(x)
        odh, odv = loop_gradient(x)
        assert np.array_equal(dh, odh) and np.array_equal(dv, odv)
        assert total_variation(x) == pytest.approx(loop_tv(x), abs=1e-12, rel=1e-12)


def test_random_6x6_tv(rng):
    x = rng.uniform(0, 1, size=(6, 6))
    assert abs(total_variation(x) - loop_tv(x)) <= 1e-12


def test_boundary_rows_zero(rng):
    dh, dv = gradient_field(rng.normal(size=(5, 7)))
    assert not dh[-1].any() and not dv[:, -1].any()


@pytest.mark.parametrize("eps", [0.1, 1.0, 10.0])
def test_smoothed_gradient_vs_finite_differences(eps, rng):
    for _ in range(5):
        x = rng.normal(size=(4, 4))
        value, grad = smoothed_tv_and_gradient(x, eps)
        assert value == pytest.approx(smoothed_tv(x, eps), rel=1e-12)
        fd = central_fd(lambda z: smoothed_tv(z, eps), x)
        rel = np.abs(grad - fd) / np.maximum(np.abs(fd), 1e-3)
        assert rel.max() <= 1e-4


def test_smoothed_constant_is_stationary():
    value, grad = smoothed_tv_and_gradient(np.full((5, 3), 2.0), 0.5)
    assert not grad.any()
    assert value == pytest.approx(15 * 0.5)


@pytest.mark.skipif(not _accel.HAS_NUMBA, reason="numba missing")
def test_numba_and_numpy_kernels_agree(rng):
    for shape in [(1, 1), (1, 7), (6, 1), (13, 9), (112, 92)]:
        x = rng.normal(size=shape)
        g1, g2 = np.empty(shape), np.empty(shape)
        v1 = _smoothed_tv_numpy(x, 0.01, g1)
        v2 = _smoothed_tv_numba(x, 0.01, g2)
        assert v1 == pytest.approx(v2, rel=1e-12)
        assert np.allclose(g1, g2, atol=1e-12)


def test_full_mask_reproduces_image(rng):
    img = rng.uniform(0, 255, size=(16, 12))
    res = reconstruct(measure(dct2(img), build_mask(12, 16, 100, 1, 0)))
    assert res.iterations_run == 0
    assert np.abs(res.image - img).max() <= 1e-8


def test_constant_image_exact():
    img = np.full((8, 8), 97.0)
    mask = build_mask(8, 8, 10, 1, seed=3)
    assert 0 in mask.flat.tolist()
    res = reconstruct(measure(dct2(img), mask))
    assert total_variation(res.image) <= 1e-6
    assert np.abs(res.image - img).max() <= 1e-6


def _problem(seed, shape=(16, 16), percent=30):
    g = np.random.default_rng(seed)
    yy, xx = np.mgrid[:shape[0], :shape[1]]
    img = 120 + 60 * (xx > shape[1] // 2) - 40 * ((yy - 5) ** 2 + (xx - 6) ** 2 < 12) + g.normal(0, 5, shape)
    img = np.clip(img, 0, 255)
    mask = build_mask(shape[1], shape[0], percent, 1, seed)
    return img, measure(dct2(img), mask)


@pytest.mark.parametrize("seed", range(20))
def test_descent_and_data_consistency(seed):
    img, m = _problem(seed, percent=[10, 20, 30, 50][seed % 4])
    res = reconstruct(m, SolverConfig(max_iters=200))
    trace = res.objective_trace
    assert len(trace) == res.iterations_run + 1
    assert np.all(np.diff(trace) <= 1e-9)
    assert np.abs(measure(dct2(res.image), m.mask).values - m.values).max() <= 1e-9


def test_reconstruction_improves_on_zero_fill():
    img, m = _problem(1, shape=(32, 32), percent=25)
    from csface.sampling import embed
    from csface.transform import idct2
    zero_fill = idct2(embed(m, 0.0))
    res = reconstruct(m)
    assert total_variation(res.image) < total_variation(zero_fill)
    assert psnr(img, res.image).psnr_db > psnr(img, zero_fill).psnr_db


def test_fixed_step_divergence_reported():
    img, m = _problem(2)
    with pytest.raises(SolverDiverged) as info:
        reconstruct(m, SolverConfig(step_size=1e308, line_search=False, max_iters=5))
    assert info.value.iteration >= 1


def test_config_validation():
    for kw in [dict(max_iters=0), dict(epsilon=0), dict(tol=-1), dict(step_size=0)]:
        with pytest.raises(ValueError):
            SolverConfig(**kw)


def test_tolerance_stops_early():
    img, m = _problem(3)
    loose = reconstruct(m, SolverConfig(tol=1e-2))
    tight = reconstruct(m, SolverConfig(tol=1e-7))
    assert loose.stop_reason == "tol"
    assert loose.iterations_run < tight.iterations_run
