import json
import math

import pytest

import sdlab


def test_theta_at_i():
    value, tail, terms = sdlab.theta(1j)
    assert abs(value - math.pi ** 0.25 / math.gamma(0.75)) < 1e-14
    assert tail < 1e-14


def test_lattice_factorizes():
    tau = 0.3 + 0.7j
    assert abs(sdlab.lattice_sum(2, 1, 30, tau) - sdlab.theta_product(2, 1, tau)) < 1e-10


def test_taub_nut_weights():
    alpha, beta = sdlab.weights("taub-nut-1")
    assert alpha == pytest.approx(-1 / 30, rel=1e-5)
    assert beta == pytest.approx(7 / 15, rel=1e-5)


def test_epstein_at_zero():
    gens = [1.0, 0.2, 0, 0, 0, 1.3, 0, 0, 0, 0, 0.9, 0.1, 0, 0, 0, 1.1]
    assert sdlab.epstein_zeta(gens, 0.0) == pytest.approx(-1.0, abs=1e-12)
    assert sdlab.torus_zeta_zero(gens, 2) == pytest.approx(-6.0, abs=1e-10)


def test_catalog_and_cli():
    assert len(sdlab.catalog_names()) == 6
    code, out, err = sdlab.run(["--json", "--no-cache", "integrate", "--manifold", "flat-torus"])
    assert code == 0
    assert json.loads(out)["results"]["I_gb"] == 0.0


def test_errors_are_raised():
    with pytest.raises(sdlab.SdlabError):
        sdlab.theta(0.5 - 1j)
    assert sdlab.run(["theta"])[0] == 64


def test_gaussian_factor():
    assert abs(sdlab.pathology(2j) - 2 ** -0.5) < 1e-15
