import math

import numpy as np
import pytest

from alhimcf import kottler as kt
from alhimcf import mass as ms
from alhimcf.warped import AmbientModel, rho
from conftest import metric_scalar_curvature_fd


def amb(n, eps):
    return AmbientModel(n, eps, theta=None if eps == 0 else 4 * math.pi)


def kottler_profile(n, eps, m):
    return ms.RadialMetricProfile.kottler(kt.KottlerParams(amb(n, eps), m))


def perturbed_profile(n, eps, m):
    """``psi^2 = r^2 + eps - 2m r^(2-n) + r^(-n)``."""
    return ms.RadialMetricProfile.from_deviation(
        amb(n, eps),
        lambda r: 2 * m * np.asarray(r, float) ** (2 - n) - np.asarray(r, float) ** (-n),
        lambda r: -2 * (n - 2) * m * np.asarray(r, float) ** (1 - n) + n * np.asarray(r, float) ** (-n - 1),
        bracket=(1.0, 50.0),
        label="perturbed",
    )


def test_flux_kottler_flat():
    prof = kottler_profile(3, 0, 4.0)
    assert ms.flux_mass_at(prof, 100.0) == pytest.approx(4.0, rel=1e-3)
    assert ms.flux_mass_limit(prof) == pytest.approx(4.0, rel=1e-3)


def test_flux_kottler_hyperbolic_monotone():
    prof = kottler_profile(3, -1, 3.0)
    vals = [ms.flux_mass_at(prof, r) for r in (10.0, 100.0, 1000.0)]
    gaps = [abs(v - 3.0) for v in vals]
    assert gaps[0] > gaps[1] > gaps[2]
    assert ms.extrapolate_power_law(vals) == pytest.approx(3.0, abs=1e-3)


def test_flux_zero_perturbation():
    prof = ms.RadialMetricProfile(amb(3, -1), lambda r: 0.0 * r, lambda r: 0.0 * r, 1.0)
    for r in (2.0, 10.0, 1e3):
        assert ms.flux_mass_at(prof, r) == 0.0


def test_flux_linearization_guard():
    prof = kottler_profile(3, 0, 4.0)
    with pytest.raises(ms.LinearizationError):
        ms.flux_mass_at(prof, 2.05)


def test_extrapolation_exact_power_law():
    r = np.array([10.0, 100.0, 1000.0])
    assert ms.extrapolate_power_law(2.5 + 7.0 * r**-1.3) == pytest.approx(2.5, rel=1e-12)


def test_theta_graph_basic():
    a = amb(3, -1)
    r = np.linspace(1.5, 30.0, 40)
    assert np.allclose(ms.theta_graph(a, r, np.zeros_like(r)), rho(r, -1))
    rng = np.random.default_rng(0)
    th = ms.theta_graph(a, r, rng.uniform(-3, 3, r.size))
    assert np.all(th <= rho(r, -1))


@pytest.mark.parametrize("n,eps,m", [(3, 0, 4.0), (3, -1, 3.0), (4, -1, 6.0)])
def test_theta_on_kottler_graph(n, eps, m):
    p = kt.KottlerParams(amb(n, eps), m)
    tab = kt.embedding_profile(p, 50.0, 1e-2)[1:]
    th = ms.theta_graph(p.ambient, tab[:, 0], tab[:, 2])
    assert np.max(np.abs(th - kt.rho_m(tab[:, 0], p))) < 1e-8


def test_theta_finite_difference_normal():
    # normal of tau = u(r) in rho^2 dtau^2 + dr^2/rho^2 built from a tabulated u
    p = kt.KottlerParams(amb(3, -1), 3.0)
    tab = kt.embedding_profile(p, 20.0, 1e-3)
    for k in (500, 3000, 12000):
        r = tab[k, 0]
        h = tab[k + 1, 0] - r
        slope = (tab[k - 2, 1] - 8 * tab[k - 1, 1] + 8 * tab[k + 1, 1] - tab[k + 2, 1]) / (12 * h)
        rr = rho(r, -1)
        g = np.diag([rr**2, 1 / rr**2])
        dF = np.array([1.0, -slope])
        N = np.linalg.solve(g, dF)
        N /= math.sqrt(dF @ N)
        theta_fd = (g @ N)[0]
        assert ms.theta_graph(p.ambient, r, tab[k, 2]) == pytest.approx(theta_fd, rel=1e-7)


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("eps", [0, -1])
def test_scalar_curvature_kottler(n, eps):
    prof = kottler_profile(n, eps, 2.5)
    r = np.linspace(prof.r_min * 1.001, 200.0, 50)
    assert np.max(np.abs(ms.scalar_curvature_symmetric(prof)(r) + n * (n - 1))) < 1e-10
    ref = ms.RadialMetricProfile(amb(n, eps), lambda x: 0.0 * x, lambda x: 0.0 * x, 1.0)
    assert np.max(np.abs(ms.scalar_curvature_symmetric(ref)(r) + n * (n - 1))) < 1e-12


@pytest.mark.parametrize("eps", [0, -1])
def test_scalar_curvature_fd_oracle(eps):
    prof = perturbed_profile(3, eps, 2.0)
    R = ms.scalar_curvature_symmetric(prof)

    def metric(x):
        r, _, y = x
        conf = 1.0 if eps == 0 else 1.0 / y**2
        return np.diag([1.0 / float(prof.psi2(r)), r * r * conf, r * r * conf])

    for r in (prof.r_min + 0.3, 3.0, 5.0):
        val = R(r)
        assert val + 6.0 > 0
        assert val == pytest.approx(metric_scalar_curvature_fd(metric, [r, 0.2, 1.3]), abs=1e-6)


@pytest.mark.parametrize("n,eps,m", [(3, -1, 3.0), (3, 0, 4.0), (4, -1, 6.0), (5, 0, 1.0)])
def test_mass_formula_kottler(n, eps, m):
    dec = ms.graph_mass_formula(kottler_profile(n, eps, m))
    assert abs(dec.bulk) < 1e-6
    assert dec.boundary == pytest.approx(m, abs=1e-6)
    assert dec.total == pytest.approx(m, abs=1e-6)


@pytest.mark.parametrize("eps", [0, -1])
def test_mass_formula_perturbed(eps):
    prof = perturbed_profile(3, eps, 2.0)
    dec = ms.graph_mass_formula(prof)
    assert dec.bulk > 0
    assert dec.total >= dec.boundary
    flux = ms.flux_mass_limit(prof)
    assert dec.total == pytest.approx(flux, rel=5e-3)


def test_penrose_certificates():
    for n, eps, m in [(3, 0, 4.0), (3, -1, 3.0), (4, -1, 6.0)]:
        prof = kottler_profile(n, eps, m)
        area = prof.ambient.theta * prof.r_min ** (n - 1)
        cert = ms.penrose_certificate(area, prof.ambient, ms.graph_mass_formula(prof).total)
        assert abs(cert.deficit) < 1e-6 and cert.passed and cert.effective
    prof = perturbed_profile(3, -1, 2.0)
    area = prof.ambient.theta * prof.r_min**2
    cert = ms.penrose_certificate(area, prof.ambient, ms.graph_mass_formula(prof).total)
    assert cert.deficit > 0


def test_penrose_non_effective():
    a = AmbientModel(3, -1, genus=2)
    cert = ms.penrose_certificate(0.5 * a.theta, a, 0.01)
    assert not cert.effective
    assert "bound non-effective" in cert.text()
    assert cert.haw == pytest.approx(kt.haw_bound(0.5 * a.theta, 2))


def test_penrose_violation():
    a = AmbientModel(3, 0)
    cert = ms.penrose_certificate(4 * a.theta, a, 3.0)
    assert not cert.passed and "FAIL" in cert.text()


def test_profile_csv_kottler(tmp_path):
    p = kt.KottlerParams(amb(3, -1), 3.0)
    tab = kt.embedding_profile(p, 50.0, 0.01)
    path = tmp_path / "k.csv"
    with open(path, "w") as fh:
        fh.write("# kottler\nr,u,dudr\n")
        for row in tab:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    prof = ms.profile_from_csv(path, p.ambient)
    assert prof.r_min == 2.0
    assert ms.graph_mass_formula(prof).total == pytest.approx(3.0, abs=1e-3)


def test_profile_csv_psi2(tmp_path):
    a = amb(3, 0)
    r = np.linspace(2.0, 40.0, 2000)
    path = tmp_path / "p.csv"
    np.savetxt(path, np.column_stack([r, r * r - 8.0 / r]), delimiter=",", header="r,psi2", comments="")
    prof = ms.profile_from_csv(path, a)
    assert ms.graph_mass_formula(prof).total == pytest.approx(4.0, abs=1e-3)
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\n")
    with pytest.raises(ValueError):
        ms.profile_from_csv(bad, a)


def test_dudr_rejects_non_graph():
    prof = ms.RadialMetricProfile(amb(3, 0), lambda r: -1.0 + 0.0 * r, lambda r: 0.0 * r, 1.0)
    with pytest.raises(ValueError):
        prof.dudr(3.0)
