import math

import numpy as np
import pytest

import thermal_cylinder as tc


def test_thermal_kernel_closed_form():
    params = tc.ModelParams(mass=1.0, beta=2.0, circumference=2.0)
    nu = tc.dispersion(0.5, 1.0)
    expect = 1.0 / math.tanh(params.beta * nu / 2.0) / (2.0 * nu)
    assert tc.thermal_covariance_kernel(0.5, params) == pytest.approx(expect, rel=1e-14)
    assert tc.matsubara_covariance(0.5, 0.0, params, 200000) == pytest.approx(expect, rel=1e-5)


def test_wightman_matches_euclidean_propagator():
    params = tc.ModelParams(mass=0.8, beta=3.0, circumference=3.0)
    w = tc.free_wightman(complex(0.0, -1.1), 0.4, params)
    assert w.real == pytest.approx(tc.free_euclidean_propagator(1.1, 0.4, params), rel=1e-10)
    assert abs(w.imag) < 1e-14


def test_bessel_k0_real_axis():
    assert tc.bessel_k0(1.0).real == pytest.approx(0.42102443824070834, rel=1e-14)
    with pytest.raises(tc.DomainError):
        tc.bessel_k0(0.0)


def test_lattice_covariance_inverts_laplacian():
    spec = tc.LatticeSpec(n_t=8, n_x=6, a_t=0.5, a_x=0.5)
    lam = tc.lattice_eigenvalues(spec, 1.0)
    cov = tc.exact_lattice_covariance(spec, 1.0)
    assert lam.shape == (8, 6) and cov.shape == (8, 6)
    expect = np.fft.ifft2(1.0 / lam).real / (spec.a_t * spec.a_x)
    np.testing.assert_allclose(cov, expect, rtol=1e-12, atol=1e-15)


def test_gff_sampling_is_seeded():
    spec = tc.LatticeSpec(n_t=4, n_x=4)
    a = tc.sample_gff(spec, 1.0, 7)
    assert np.array_equal(a, tc.sample_gff(spec, 1.0, 7))
    assert not np.array_equal(a, tc.sample_gff(spec, 1.0, 8))


def test_wick_order_quartic():
    coeffs = tc.wick_order(tc.Polynomial.quartic(1.0), 0.5)
    assert coeffs == pytest.approx([3 * 0.25, 0.0, -6 * 0.5, 0.0, 1.0])


def test_invalid_parameters_raise():
    with pytest.raises(tc.InvalidParameter):
        tc.ModelParams(mass=-1.0, beta=1.0, circumference=1.0)
    with pytest.raises(tc.FormatError):
        tc.parse_manifest("[mc]\nseed = twelve\n")


def test_free_oracle_gap():
    manifest = tc.parse_manifest(
        "[model]\nmass = 0.7\nbeta = 3\ncircumference = 3\nP = [0]\n[oracle]\nk_max = 1\nn_max = 3\n"
    )
    result = tc.run_oracle(manifest)
    assert result.gap == pytest.approx(0.7, rel=1e-12)
    assert all(r.passed() for r in result.reports)


def test_small_simulation_is_reproducible():
    text = (
        "[model]\nmass = 1\nbeta = 4\ncircumference = 4\nP = [0, 0, 0, 0, 0.5]\n"
        "[lattice]\nn_t = 8\nn_x = 8\n[mc]\nseed = 3\nn_therm = 100\nn_sweeps = 1000\nn_chains = 2\n"
    )
    manifest = tc.parse_manifest(text)
    a = tc.run_simulation(manifest, threads=1)
    b = tc.run_simulation(manifest, threads=2)
    assert a["manifest_hash"] == manifest.manifest_hash
    assert np.array_equal(a["correlator"], b["correlator"])
    assert a["correlator"].shape == (8, 8)
    assert {r["name"] for r in a["reports"]}
