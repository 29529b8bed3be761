import math
import re

import pytest

rptip = pytest.importorskip("rptip")


def test_version_string():
    assert re.fullmatch(r"\d+\.\d+\.\d+", rptip.__version__)


def vdp_reference(x, y, mu, alpha, beta, d):
    damp = 1.0 - x**2 + alpha * x**4 - beta * x**6
    return y, mu * damp * y - x - d * (y - x)


def gly_reference(x, y, v, sigma_i, K=10.0, L=3.6e6, sigma_M=10.0, n=5, q=1.0, k_s=0.06):
    phi = x * (1 + x) * (1 + y) ** 2 / (L + (1 + x) ** 2 * (1 + y) ** 2)
    fb = sigma_i * y**n / (K**n + y**n)
    return v + fb - sigma_M * phi, q * sigma_M * phi - k_s * y - q * fb


@pytest.mark.parametrize("x,y", [(0.0, 0.0), (1.0, 2.0), (-3.5, 0.7), (6.2, -4.1)])
def test_vdp_rhs_matches_reference(x, y):
    got = rptip.vdp_rhs(x, y, 1.52, 0.093, 0.0019, -0.03)
    want = vdp_reference(x, y, 1.52, 0.093, 0.0019, -0.03)
    assert got == pytest.approx(want, rel=1e-14, abs=1e-14)


@pytest.mark.parametrize("x,y", [(75.71, 2.76), (10.0, 15.0), (0.5, 0.1)])
def test_gly_rhs_matches_reference(x, y):
    got = rptip.gly_rhs(x, y, 0.275, 1.226)
    want = gly_reference(x, y, 0.275, 1.226)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-14)


def test_vdp_three_cycle_picture():
    pic = rptip.vdp_picture(0.6, 0.114, 0.003, -0.1)
    assert pic["gamma2_amplitude"] is not None
    assert pic["theta_period"] is not None
    assert pic["gamma2_amplitude"] < pic["gamma1_amplitude"]
    roots = rptip.vdp_amplitude_roots(0.6, 0.114, 0.003, -0.1)
    assert len(roots) == 3
    assert roots[-1] == pytest.approx(pic["gamma1_amplitude"], rel=0.15)


def test_weak_vdp_period_near_two_pi():
    pic = rptip.vdp_picture(0.05, 1e-12, 1e-15, 0.0)
    assert pic["gamma1_period"] == pytest.approx(2 * math.pi, rel=2e-3)
    assert pic["gamma1_amplitude"] == pytest.approx(2.0, rel=1e-2)
