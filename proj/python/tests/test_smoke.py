from fractions import Fraction

import pytest

import specgeo


def test_j_at_i():
    re, im = specgeo.j(0, 1)
    assert abs(float(re) - 1728) < 1e-12
    assert abs(float(im)) < 1e-12


def test_exact_inputs_are_accepted():
    re, _ = specgeo.j(Fraction(3, 2), Fraction(1, 2))
    assert abs(float(re) - 1728) < 1e-9
    re, _ = specgeo.j("2", "1")
    assert abs(float(re) - 1728) < 1e-9


def test_invert_j_round_trip():
    x, y = specgeo.invert_j(1728, 0)
    assert abs(float(x)) < 1e-20
    assert abs(float(y) - 1) < 1e-20


def test_lambda_at_i():
    re, im = specgeo.modular_lambda(0, 1)
    assert abs(float(re) - 0.5) < 1e-20
    assert abs(float(im)) < 1e-20


def test_classes():
    cs = specgeo.classes(5)
    assert cs["N"] == "5"
    assert len(cs["tilde_pairs"]) == 2
    assert all(isinstance(e, str) for rep in cs["reps"] for row in rep for e in row)
    with pytest.raises(ValueError):
        specgeo.classes(4)


def test_pell_and_automorph():
    assert specgeo.pell_min(2) == (3, 2)
    assert specgeo.fundamental_automorph([[1, 1], [1, -1]]) == ((5, 2), (2, 1))


def test_phi2():
    c = specgeo.phi_coefficients(2)
    assert c[(2, 2)] == -1
    assert c[(0, 0)] == -157464000000000
    assert c[(1, 2)] == c[(2, 1)] == 1488


def test_lemniscate():
    assert float(specgeo.lemniscate_residual(100)) < 1e-12


def test_algtest_vertical():
    out = specgeo.algtest(0, dmax=3)
    assert out["verdict"] == "WeaklyBialgebraic(1)"
    assert out["certificate"]["precision"] == "mpfr-256"
    with pytest.raises(TypeError):
        specgeo.algtest(0.5)


def test_cli_exit_codes():
    code, out, _ = specgeo.run_cli(["j", "0", "1"])
    assert code == specgeo.EXIT_OK
    assert abs(float(out.split()[0]) - 1728) < 1e-12
    assert specgeo.run_cli(["classes", "0"])[0] == specgeo.EXIT_USAGE
    assert specgeo.run_cli(["--prec", "64", "--tol", "1e-30", "lemniscate"])[0] == specgeo.EXIT_VERIFY_FAILED
