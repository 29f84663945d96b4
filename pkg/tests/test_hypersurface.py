import math

import numpy as np
import pytest
import sympy as sp

from alhimcf import hypersurface as hs
from alhimcf.hypersurface import CrossSectionGrid, GraphState, torus_graph
from alhimcf.warped import AmbientModel, s_from_r

MODES = [((1, 0), 0.15, 0.0), ((1, 1), 0.0, 0.1)]


def _symbolic_graph(expr_u):
    """Callables for v_1, W and H of ``s = u(theta)`` in ``ds^2 + e^(2s) |dtheta|^2``.

    H is the divergence of the unit normal of the level set ``s - u = 0``,
    computed in the ambient coordinates; nothing is shared with the package.
    """
    s, t1, t2 = sp.symbols("s t1 t2", real=True)
    X = [s, t1, t2]
    u = expr_u(t1, t2)
    g = sp.diag(1, sp.exp(2 * s), sp.exp(2 * s))
    gi = g.inv()
    dF = [sp.diff(s - u, x) for x in X]
    grad = [sum(gi[i, j] * dF[j] for j in range(3)) for i in range(3)]
    norm = sp.sqrt(sum(grad[i] * dF[i] for i in range(3)))
    sqrt_g = sp.exp(2 * s)
    div = sum(sp.diff(sqrt_g * grad[i] / norm, X[i]) for i in range(3)) / sqrt_g
    v1 = sp.diff(u, t1) / sp.exp(u)
    W = sp.sqrt(1 + (sp.diff(u, t1) ** 2 + sp.diff(u, t2) ** 2) / sp.exp(2 * u))
    H = div.subs(s, u)
    return [sp.lambdify((t1, t2), e, "numpy") for e in (v1, W, H)]


def _u_expr(t1, t2):
    return 1 + 0.15 * sp.cos(t1) + 0.1 * sp.sin(t1 + t2)


@pytest.fixture(scope="module")
def oracle():
    return _symbolic_graph(_u_expr)


def _state(M):
    return torus_graph(AmbientModel(3, 0), M, 1.0, MODES)


def test_grid_basics():
    g = CrossSectionGrid(2, 16)
    assert g.spacing == pytest.approx(2 * math.pi / 16)
    assert g.area == pytest.approx(4 * math.pi**2)
    assert g.coordinates().shape == (2, 16, 16)
    with pytest.raises(ValueError):
        CrossSectionGrid(2, 7)


def test_state_validation():
    with pytest.raises(ValueError):
        GraphState(AmbientModel(3, -1, genus=2), np.zeros((16, 16)) + 2)
    with pytest.raises(ValueError):
        GraphState(AmbientModel(3, -1, genus=2), 0.5)
    with pytest.raises(ValueError):
        GraphState(AmbientModel(3, 0), np.zeros((16, 8)))
    with pytest.raises(ValueError):
        GraphState(AmbientModel(3, 0), np.full((16, 16), np.nan))
    st = _state(16)
    with pytest.raises(ValueError):
        st.u[0, 0] = 1.0


def test_constant_u_has_zero_derivatives():
    st = GraphState(AmbientModel(3, 0), np.full((16, 16), 0.7))
    vi, vij = hs.v_derivatives(st)
    assert np.all(vi == 0) and np.all(vij == 0)
    assert np.all(hs.w_factor(st) == 1.0)
    assert np.allclose(hs.mean_curvature(st), 2.0, atol=1e-15)


def test_v1_symbolic_and_order(oracle):
    v1, _, _ = oracle
    errs = []
    for M in (32, 64, 128):
        st = _state(M)
        t1, t2 = st.grid.coordinates()
        errs.append(np.max(np.abs(hs.v_derivatives(st)[0][0] - v1(t1, t2))))
    assert errs[1] < 1e-3
    for a, b in zip(errs, errs[1:]):
        assert a / b == pytest.approx(4.0, rel=0.1)


def test_w_symbolic(oracle):
    _, W, _ = oracle
    errs = []
    for M in (32, 64, 128):
        st = _state(M)
        t1, t2 = st.grid.coordinates()
        w = hs.w_factor(st)
        errs.append(np.max(np.abs(w - W(t1, t2))))
        vi, _ = hs.v_derivatives(st)
        assert np.max(np.abs(w**2 - 1 - np.sum(vi**2, axis=0))) < 1e-14
    assert errs[2] < 1e-4
    assert errs[0] / errs[1] > 3.5 and errs[1] / errs[2] > 3.5


def test_w_at_quarter_turn():
    # u = 1 + 0.3 cos(theta_1): at theta_1 = pi/2 the height is 1
    errs = []
    for M in (64, 128, 256):
        st = torus_graph(AmbientModel(3, 0), M, 1.0, [((1, 0), 0.3, 0.0)])
        w = hs.w_factor(st)[M // 4, 0]
        errs.append(abs(w - math.sqrt(1 + (0.3 / math.e) ** 2)))
    assert errs[-1] < 5e-6
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_mean_curvature_symbolic(oracle):
    _, _, H = oracle
    errs = []
    for M in (32, 64, 128):
        st = _state(M)
        t1, t2 = st.grid.coordinates()
        errs.append(np.max(np.abs(hs.mean_curvature(st) - H(t1, t2))))
    assert errs[2] < 1e-3
    for a, b in zip(errs, errs[1:]):
        assert a / b == pytest.approx(4.0, rel=0.15)


def test_mean_curvature_self_convergence():
    ref = hs.mean_curvature(_state(256))
    H64 = hs.mean_curvature(_state(64))
    H128 = hs.mean_curvature(_state(128))
    e64 = np.max(np.abs(H64 - ref[::4, ::4]))
    e128 = np.max(np.abs(H128 - ref[::2, ::2]))
    assert e64 / e128 > 3.0


def test_slices():
    flat = GraphState(AmbientModel(3, 0), 0.0)
    assert hs.mean_curvature(flat) == 2.0
    assert hs.support_function(flat) == 1.0
    assert hs.area(flat) == pytest.approx((2 * math.pi) ** 2)
    assert hs.umbilicity(flat) == 0.0
    assert hs.extrinsic_scalar(flat) == pytest.approx(1.0)
    hyp = GraphState(AmbientModel(3, -1, genus=2), s_from_r(2.0, -1))
    assert hs.mean_curvature(hyp) == pytest.approx(math.sqrt(3.0), rel=1e-14)
    assert hs.support_function(hyp) == pytest.approx(2.0, rel=1e-14)
    assert hs.area(hyp) == pytest.approx(16 * math.pi, rel=1e-14)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_flat_slice_extrinsic_scalar(n):
    st = GraphState(AmbientModel(n, 0), 0.4)
    assert hs.mean_curvature(st) == pytest.approx(n - 1)
    assert hs.extrinsic_scalar(st) == pytest.approx((n - 1) * (n - 2) / 2)


def test_grid_slice_shape_operator():
    st = GraphState(AmbientModel(3, 0), np.full((16, 16), 0.3))
    a = hs.shape_operator(st)
    assert np.allclose(a[0, 0], 1.0) and np.allclose(a[1, 1], 1.0)
    assert np.allclose(a[0, 1], 0.0)
    assert np.max(hs.umbilicity(st)) == 0.0


def _random_state(rng, M=48, n=3):
    amb = AmbientModel(n, 0)
    modes = []
    for _ in range(3):
        k = tuple(int(x) for x in rng.integers(-2, 3, size=n - 1))
        modes.append((k, rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)))
    return torus_graph(amb, M, rng.uniform(0.0, 1.0), modes)


@pytest.mark.parametrize("n", [3, 4])
def test_pointwise_algebra(n):
    rng = np.random.default_rng(11)
    for _ in range(5):
        st = _random_state(rng, M=24 if n == 4 else 48, n=n)
        g = st.geometry
        H = hs.mean_curvature(st)
        assert np.max(np.abs(g.trace_a - H)) < 1e-12
        assert np.all(g.norm_a2 - H**2 / (n - 1) >= -1e-12)
        assert np.all(2 * hs.extrinsic_scalar(st) <= (n - 2) / (n - 1) * H**2 + 1e-12)
        lam_u = np.exp(st.u)
        assert np.max(np.abs(hs.support_function(st) * hs.w_factor(st) - lam_u)) < 1e-12 * np.max(lam_u)


def test_area_spectral():
    ref = hs.area(_state(256))
    assert abs(hs.area(_state(64)) - ref) < 1e-10 * ref


def test_laplacian_constants_and_symmetry():
    rng = np.random.default_rng(2)
    st = _random_state(rng, M=32)
    assert np.max(np.abs(hs.laplace_beltrami(st, np.full(st.u.shape, 3.0)))) < 1e-12
    f = rng.standard_normal(st.u.shape)
    g = rng.standard_normal(st.u.shape)
    dA = hs.area_element(st)
    lhs = np.sum(f * hs.laplace_beltrami(st, g) * dA)
    rhs = np.sum(g * hs.laplace_beltrami(st, f) * dA)
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_laplacian_eigenfunction_on_slice():
    errs = []
    for M in (32, 64):
        st = GraphState(AmbientModel(3, 0), np.full((M, M), 0.5))
        t1, _ = st.grid.coordinates()
        lap = hs.laplace_beltrami(st, np.cos(t1))
        errs.append(np.max(np.abs(lap + np.cos(t1) / math.exp(1.0))))
    assert errs[1] < 1e-3
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)


def test_minkowski():
    flat = GraphState(AmbientModel(3, 0), np.full((16, 16), 0.8))
    assert hs.minkowski_residual(flat) < 1e-12
    res = [hs.minkowski_residual(_state(M)) for M in (32, 64, 128)]
    orders = [math.log2(res[0] / res[1]), math.log2(res[1] / res[2])]
    assert min(orders) >= 1.8
    st = _state(64)
    shifted = st.replace(u=np.roll(st.u, (5, -3), axis=(0, 1)))
    assert hs.minkowski_residual(shifted) == pytest.approx(hs.minkowski_residual(st), rel=1e-12)


def test_symmetric_mode_rejects_grid_ops():
    st = GraphState(AmbientModel(3, 0), 0.0)
    with pytest.raises(ValueError):
        hs.v_derivatives(st)
    with pytest.raises(ValueError):
        hs.laplace_beltrami(st, 1.0)


def test_field_csv_round_trip(tmp_path):
    st = _state(16)
    path = tmp_path / "u.csv"
    hs.field_to_csv(path, st.u)
    back = hs.field_from_csv(path, 2)
    assert np.array_equal(back, st.u)
    first_row = np.loadtxt(path, delimiter=",")[0]
    assert np.array_equal(first_row, st.u[:, 0])  # theta_1 varies fastest
