import numpy as np
import pytest

from generators import rand_form, rand_poly, seeded
from mongeampere import (DomainError, GenSection, PolyVectorField, courant_bracket, divergent_type,
                         ext_d, gcs_from_hitchin_pair, gcs_integrability_residual,
                         generalized_solution_check, pairing, parse_form, parse_poly,
                         symplectic_context, SampledSurface)
from mongeampere import catalog, linalg
from mongeampere.exterior import Form, exterior_derivative_of_function
from mongeampere.gcs import assemble_unchecked, pairing_matrix, residual_is_zero
from mongeampere.invariants import endo_from_two_form
from mongeampere.polynomial import Poly


def sec(vec, form="0"):
    """Section from a list of 4 vector components (strings) and a 1-form string."""
    x = PolyVectorField(2, [parse_poly(c, 2) for c in vec])
    xi = parse_form(form, 2) if form != "0" else Form.zero(2, 1)
    return GenSection(2, x, xi)


def rand_section(rng):
    x = PolyVectorField(2, [rand_poly(rng, 4, max_terms=2) for _ in range(4)])
    return GenSection(2, x, rand_form(rng, 2, 1, max_terms=3))


def tricomi_closed():
    w = catalog.tricomi(2, 3, "q1^2")
    return w + symplectic_context(2).omega * divergent_type(w).mu


# -- pairing ----------------------------------------------------------------------

def test_pairing_examples():
    assert pairing(sec(["1", "0", "0", "0"], "dq1"), sec(["1", "0", "0", "0"], "dq1")) == Poly.one(4)
    assert pairing(sec(["1", "0", "0", "0"]), sec(["0", "1", "0", "0"])).is_zero()
    assert pairing(sec(["q2", "0", "0", "0"]), sec(["0", "0", "0", "0"], "dq1")) == parse_poly("q2/2", 2)


def test_pairing_symmetric_and_isotropic():
    rng = seeded(1)
    for _ in range(50):
        a, b = rand_section(rng), rand_section(rng)
        assert pairing(a, b) == pairing(b, a)
        va = GenSection(2, a.X, Form.zero(2, 1))
        vb = GenSection(2, b.X, Form.zero(2, 1))
        fa = GenSection(2, PolyVectorField.zero(2), a.xi)
        fb = GenSection(2, PolyVectorField.zero(2), b.xi)
        assert pairing(va, vb).is_zero() and pairing(fa, fb).is_zero()


def test_pairing_signature():
    s = linalg.signature_exact(pairing_matrix(2))
    assert (s.positive, s.negative, s.zero) == (4, 4, 0)


# -- Courant bracket ----------------------------------------------------------------

def test_courant_coordinate_fields_commute():
    assert courant_bracket(sec(["1", "0", "0", "0"]), sec(["0", "1", "0", "0"])).is_zero()


def test_courant_vector_with_form():
    got = courant_bracket(sec(["1", "0", "0", "0"]), sec(["0", "0", "0", "0"], "q1*dq2"))
    assert got == sec(["0", "0", "0", "0"], "dq2")


def test_courant_antisymmetric():
    rng = seeded(2)
    for _ in range(30):
        a, b = rand_section(rng), rand_section(rng)
        assert courant_bracket(a, b) == -courant_bracket(b, a)


def test_courant_closed_forms_are_central():
    rng = seeded(3)
    for _ in range(30):
        f, g = rand_poly(rng, 4, max_deg=3), rand_poly(rng, 4, max_deg=3)
        df = GenSection(2, PolyVectorField.zero(2), exterior_derivative_of_function(f, 2))
        dg = GenSection(2, PolyVectorField.zero(2), exterior_derivative_of_function(g, 2))
        assert courant_bracket(df, dg).is_zero()


# -- structures from Hitchin pairs ----------------------------------------------------

def test_zero_form_gives_standard_structure():
    j = gcs_from_hitchin_pair(Form.zero(2, 2))
    om_t = linalg.transpose([list(r) for r in symplectic_context(2).omega_matrix])
    inv = linalg.inverse(om_t)
    expected = [[0] * 4 + inv[i] for i in range(4)] + [[-x for x in om_t[i]] + [0] * 4 for i in range(4)]
    assert [[c.constant_value() for c in row] for row in j.matrix] == expected
    assert j.A.is_zero()
    assert residual_is_zero(gcs_integrability_residual(j))


def test_laplace_structure():
    w = catalog.laplace_2d()
    j = gcs_from_hitchin_pair(w, symplectic_context(2))
    assert j.A == endo_from_two_form(w)
    assert j.A @ j.A == -j.A.identity(2)
    # (1 + A^2) = 0, so wtilde vanishes
    assert j.wtilde.is_zero()
    assert j.squares_to_minus_one() and j.pairing_compatible()
    assert residual_is_zero(gcs_integrability_residual(j))


def test_normalized_tricomi_structure():
    w = tricomi_closed()
    assert ext_d(w).is_zero()
    j = gcs_from_hitchin_pair(w)
    assert not j.A.is_constant()
    assert j.squares_to_minus_one() and j.pairing_compatible()
    assert residual_is_zero(gcs_integrability_residual(j))


def test_random_closed_forms_are_integrable():
    rng = seeded(4)
    for _ in range(4):
        w = ext_d(rand_form(rng, 2, 1, max_terms=3, max_deg=2))
        j = gcs_from_hitchin_pair(w)
        assert residual_is_zero(gcs_integrability_residual(j))


def test_born_infeld_assembly_is_not_integrable():
    j = assemble_unchecked(catalog.born_infeld())
    assert j.squares_to_minus_one()
    assert not residual_is_zero(gcs_integrability_residual(j))


def test_hitchin_pair_requires_closed_form():
    with pytest.raises(DomainError, match="divergent_type"):
        gcs_from_hitchin_pair(catalog.born_infeld())
    with pytest.raises(DomainError):
        gcs_from_hitchin_pair(parse_form("dq1", 2))
    with pytest.raises(DomainError):
        gcs_from_hitchin_pair(catalog.laplace_2d(), symplectic_context(3))


def test_apply_matches_matrix():
    j = gcs_from_hitchin_pair(tricomi_closed())
    for k in range(8):
        image = j.apply(GenSection.frame(2, k)).as_vector()
        assert image == [j.matrix[i][k] for i in range(8)]


# -- sampled surfaces --------------------------------------------------------------------

GRID = [(0.1 + 0.2 * i, -0.9 + 0.2 * k) for i in range(10) for k in range(10)]


def direct_values(w, surface):
    """|w(t1, t2)| and |Omega(t1, t2)| evaluated from the forms themselves."""
    om = symplectic_context(2).omega
    out = []
    for p, t in zip(surface.points, surface.tangents):
        vals = []
        for form in (w, om):
            total = 0.0
            for (a, b), c in form.coeffs.items():
                total += c.evaluate_float(list(p)) * (t[0][a] * t[1][b] - t[0][b] * t[1][a])
            vals.append(abs(total))
        out.append(vals)
    return out


@pytest.mark.parametrize("f, harmonic", [("q1*q2", True), ("q1^3 - 3*q1*q2^2", True), ("q1^2", False)])
def test_gradient_graphs_under_laplace(f, harmonic):
    w = catalog.laplace_2d()
    j = gcs_from_hitchin_pair(w)
    surface = SampledSurface.graph_of_gradient(parse_poly(f, 2), GRID)
    reports = generalized_solution_check(j, surface)
    assert len(reports) == 100
    for r, (w_abs, om_abs) in zip(reports, direct_values(w, surface)):
        assert r.lagrangian and om_abs < 1e-12
        assert r.passed == harmonic
        assert r.omega_vanishes == r.passed == (w_abs < 1e-9)
        assert r.a_closed == r.passed


def test_zero_section_passes():
    # no dq^dq terms: the zero section is Omega-lagrangian and A-invariant
    w = parse_form("dq1^dp2 - dq2^dp1 + 3*dq1^dp1 + dp1^dp2", 2)
    j = gcs_from_hitchin_pair(w)
    rows = [[q1, q2, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0] for q1, q2 in GRID[:10]]
    reports = generalized_solution_check(j, SampledSurface.from_rows(rows))
    assert all(r.passed and r.lagrangian and r.a_closed for r in reports)


def test_degenerate_tangents_are_flagged():
    j = gcs_from_hitchin_pair(catalog.laplace_2d())
    s = SampledSurface.from_rows([[0, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0]])
    (r,) = generalized_solution_check(j, s)
    assert r.degenerate and not r.passed


def test_solution_check_needs_n2():
    j = gcs_from_hitchin_pair(Form.zero(3, 2))
    s = SampledSurface.from_rows([[0] * 12])
    with pytest.raises(DomainError):
        generalized_solution_check(j, s)


def test_surface_text_roundtrip(tmp_path):
    s = SampledSurface.graph_of_gradient(parse_poly("q1*q2 + q1^2/3", 2), GRID[:7])
    path = tmp_path / "surface.txt"
    path.write_text("# comment line\n\n" + s.to_text())
    back = SampledSurface.from_file(path)
    assert np.array_equal(back.points, s.points) and np.array_equal(back.tangents, s.tangents)
    assert len(back) == 7


@pytest.mark.parametrize("text, message", [
    ("1 2 3\n", "line 1"),
    ("0 0 0 0 1 0 0 0 0 1 0 0\n0 0 0 0 1 0 0 0 0 1 0 x\n", "line 2"),
    ("# nothing\n", "no samples"),
])
def test_surface_text_errors(text, message):
    with pytest.raises(DomainError, match=message):
        SampledSurface.from_text(text)


def test_surface_shape_checks():
    with pytest.raises(DomainError):
        SampledSurface(np.zeros((2, 3)), np.zeros((2, 2, 4)))
    with pytest.raises(DomainError):
        SampledSurface(np.zeros((2, 4)), np.zeros((3, 2, 4)))
