"""Transfer matrix, eigenvalues, series bounds, and certificates."""

import math

import numpy as np
import pytest

from stavskaya import (
    PHI,
    GeneratingParams,
    RngStream,
    SeriesDivergentError,
    build_dominating_matrix,
    build_matrix,
    certificate_from_json,
    certificate_to_json,
    certify_alpha,
    dominant_minors,
    evaluate_certificate,
    find_m_threshold,
    finite_vertex_bound,
    generating_sum,
    lambda_closed_form,
    max_certified_alpha,
    minor_shortcut_margin,
    optimize_pq,
    prob_all_zero_estimate,
    region_boundary_q,
    s_table_recurrence,
    series_bound,
    series_partial_sums,
    spectral_radius,
)

GOLDEN_RADIUS = (3.0 - math.sqrt(5.0)) / 2.0  # leading eigenvalue at alpha = 0


def test_region_boundary():
    assert region_boundary_q(PHI) == pytest.approx(1.0, abs=1e-12)
    assert region_boundary_q(1.5) == pytest.approx(1.0 / math.sqrt(0.75))
    with pytest.raises(ValueError):
        region_boundary_q(1.0)


def test_generating_params_validation():
    GeneratingParams(PHI, 1.0, 0.5)
    GeneratingParams(1.3, 1.2, 0.0)
    with pytest.raises(ValueError):
        GeneratingParams(1.0, 1.0, 0.1)        # p must exceed 1
    with pytest.raises(ValueError):
        GeneratingParams(1.7, 1.0, 0.1)        # p beyond the region
    with pytest.raises(ValueError):
        GeneratingParams(1.5, 0.9, 0.1)        # q below 1
    with pytest.raises(ValueError):
        GeneratingParams(1.5, 1.2, 0.1)        # q beyond the boundary
    with pytest.raises(ValueError):
        GeneratingParams(1.5, 1.0, 1.5)        # alpha outside [0, 1]
    gp = GeneratingParams.region(1.4, 0.2)
    assert gp.q == pytest.approx(region_boundary_q(1.4))


def test_matrix_structure():
    gp = GeneratingParams(PHI, 1.0, 0.0)
    m = build_matrix(gp).entries
    assert m[0].tolist() == pytest.approx([PHI**-2, 0.0, 0.0])
    assert m[0, 2] == 0.0 and m[2, 0] == 0.0
    assert m[0, 1] == m[1, 1] == m[2, 1] == 0.0  # every column-2 entry carries alpha
    m2 = build_matrix(GeneratingParams(1.4, 1.1, 0.3)).entries
    assert m2[0, 2] == 0.0 and m2[2, 0] == 0.0
    assert np.all(m2 >= 0.0)


def test_dominating_matrix_dominates():
    for alpha in (0.0, 0.05, 0.3):
        for p in (1.3, 1.5, PHI):
            gp = GeneratingParams.region(p, alpha)
            printed = build_matrix(gp).entries
            dom = build_dominating_matrix(gp).entries
            assert np.all(dom >= printed - 1e-15)
    # the two coincide when no erasure weight is present
    gp0 = GeneratingParams(PHI, 1.0, 0.0)
    assert np.array_equal(
        build_matrix(gp0).entries, build_dominating_matrix(gp0).entries
    )


def test_dominating_matrix_bounds_exact_two_step_transfer():
    # weighted level sums advance by at most one dominating transfer
    levels = s_table_recurrence(10)
    gp = GeneratingParams(PHI, 1.0, 0.07)
    m = build_dominating_matrix(gp).entries
    sums = [np.array(generating_sum(levels[n], gp.p, gp.q, gp.alpha)) for n in range(1, 11)]
    for n in range(8):
        assert np.all(sums[n + 2] <= sums[n] @ m + 1e-12)


def test_spectral_radius_diagonal():
    assert spectral_radius([[0.2, 0, 0], [0, 0.5, 0], [0, 0, 0.1]]) == pytest.approx(
        0.5, abs=1e-12
    )


def test_spectral_radius_degenerate_and_edge_cases():
    assert spectral_radius(np.zeros((3, 3))) == 0.0
    # nilpotent: radius zero despite a nonzero entry
    assert spectral_radius([[0, 1, 0], [0, 0, 0], [0, 0, 0]]) == pytest.approx(0.0, abs=1e-12)
    # oscillatory two-cycle: radius sqrt(2)
    assert spectral_radius([[0, 2, 0], [1, 0, 0], [0, 0, 0]]) == pytest.approx(
        math.sqrt(2.0), abs=1e-11
    )
    with pytest.raises(ValueError):
        spectral_radius([[-1, 0, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(ValueError):
        spectral_radius(np.ones((2, 2)))


def test_spectral_radius_at_region_endpoint():
    gp = GeneratingParams(PHI, 1.0, 0.0)
    assert spectral_radius(build_matrix(gp)) == pytest.approx(GOLDEN_RADIUS, abs=1e-12)
    gp = GeneratingParams(PHI, 1.0, 0.1142)
    assert spectral_radius(build_matrix(gp)) == pytest.approx(0.9995, abs=5e-4)


def test_closed_form_values():
    assert lambda_closed_form(0.0) == pytest.approx(GOLDEN_RADIUS, abs=1e-15)
    assert lambda_closed_form(0.1142) == pytest.approx(0.9995, abs=5e-4)
    assert lambda_closed_form(0.11) < 1.0 < lambda_closed_form(0.12)
    with pytest.raises(ValueError):
        lambda_closed_form(-0.2)


def test_closed_form_matches_eigensolver_on_grid():
    for alpha in np.linspace(0.0, 0.5, 101):
        gp = GeneratingParams(PHI, 1.0, float(alpha))
        lam = spectral_radius(build_matrix(gp))
        assert abs(lam - lambda_closed_form(float(alpha))) <= 1e-10


def test_radius_strictly_increasing_in_alpha():
    lams = [lambda_closed_form(a) for a in np.linspace(0.0, 0.5, 200)]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    # same monotonicity away from the region endpoint
    lams = [
        spectral_radius(build_matrix(GeneratingParams(1.4, 1.2, float(a))))
        for a in np.linspace(0.0, 0.5, 60)
    ]
    assert all(b > a for a, b in zip(lams, lams[1:]))


def test_minors_positive_iff_radius_below_one():
    for alpha in np.linspace(0.0, 0.5, 100):
        gp = GeneratingParams(PHI, 1.0, float(alpha))
        positive = all(d > 0 for d in dominant_minors(gp))
        assert positive == (spectral_radius(build_matrix(gp)) < 1.0)


def test_minors_sign_examples():
    assert all(d > 0 for d in dominant_minors(GeneratingParams(PHI, 1.0, 0.0)))
    assert any(d <= 0 for d in dominant_minors(GeneratingParams(PHI, 1.0, 0.5)))


def test_minor_shortcut_margin_formula():
    gp = GeneratingParams(1.5, 1.1, 0.2)
    expect = 1.0 - 1.5**-2 * 1.1**-2 - 0.2 / 1.5
    assert minor_shortcut_margin(gp) == pytest.approx(expect)
    # differs from the exact first minor, whose cross term runs against q
    assert minor_shortcut_margin(gp) != dominant_minors(gp)[0]


def test_series_bound_at_alpha_zero():
    # only the straight kind-1 path carries weight: the total is sum phi^-n = phi
    gp = GeneratingParams(PHI, 1.0, 0.0)
    assert series_bound(gp) == pytest.approx(PHI, abs=1e-12)
    partial = series_partial_sums(gp, 30)
    geometric = np.cumsum([PHI**-n for n in range(1, 31)])
    assert np.allclose(partial, geometric, atol=1e-9)
    assert partial[-1] <= series_bound(gp)


def test_series_bound_dominates_exact_truncations():
    levels = s_table_recurrence(12)
    for alpha in (0.0, 0.05):
        gp = GeneratingParams(PHI, 1.0, alpha)
        total = series_bound(gp)
        running = 0.0
        for n in range(1, 13):
            running += sum(generating_sum(levels[n], gp.p, gp.q, alpha))
            assert running <= total + 1e-12


def test_series_divergent_above_threshold():
    with pytest.raises(SeriesDivergentError):
        series_bound(GeneratingParams(PHI, 1.0, 0.12))


def test_find_m_threshold_arithmetic():
    gp = GeneratingParams(PHI, 1.0, 0.0)
    assert find_m_threshold(gp, series_total=0.9) == 1
    assert find_m_threshold(gp, series_total=10.0) == 3  # phi^-6 * 10 ~ 0.557
    assert find_m_threshold(gp) == 1  # phi^-2 * phi = phi^-1 < 1


def test_certificate_at_alpha_zero():
    cert = certify_alpha(0.0)
    assert cert is not None
    assert cert.p == PHI and cert.q == 1.0
    assert cert.lambda_pf == pytest.approx(GOLDEN_RADIUS, abs=1e-12)
    assert cert.revalidate()


def test_certificate_at_0_11():
    cert = certify_alpha(0.11)
    assert cert is not None
    assert cert.lambda_pf < 1.0
    assert cert.bound() < 1.0
    assert cert.m_threshold >= 1
    assert all(d > 0 for d in cert.minors)
    assert cert.revalidate()


def test_no_certificate_at_0_20():
    assert certify_alpha(0.20) is None


def test_certificate_json_round_trip():
    cert = certify_alpha(0.09)
    assert cert is not None
    text = certificate_to_json(cert)
    parsed = certificate_from_json(text)
    assert parsed == cert  # float-exact round trip through 17 significant digits
    assert parsed.revalidate()
    assert '"m_threshold": 3' in text


def test_certificate_bound_vs_monte_carlo():
    # the certified window bound dominates a direct estimate, with slack
    cert = certify_alpha(0.09)
    est = prob_all_zero_estimate(cert.m_threshold, 50, 0.09, 20_000, RngStream(99))
    assert est.estimate <= cert.bound() + 3.0 * est.stderr
    # same inequality at a wider window (bound shrinks by p^-2 per cell)
    est4 = prob_all_zero_estimate(4, 50, 0.09, 20_000, RngStream(100))
    assert est4.estimate <= cert.bound(4) + 3.0 * est4.stderr


def test_truncated_vertex_sum_below_window_bound():
    cert = certify_alpha(0.09)
    partial = finite_vertex_bound(1, 12, alpha=0.09).value
    assert partial <= cert.bound(1)


def test_max_certified_alpha_window():
    value = max_certified_alpha(1e-4)
    assert 0.1137 <= value <= 0.1147
    assert value > 0.11       # certified survival strictly above 0.11
    assert value < 0.2945     # and below the simulation estimate of the true threshold
    with pytest.raises(ValueError):
        max_certified_alpha(0.0)


def test_optimize_pq():
    opt = optimize_pq(0.05)
    assert abs(opt.params.p - PHI) <= 1e-2
    assert opt.certifiable
    # reported radius is the radius at the reported parameters
    assert opt.lambda_pf == pytest.approx(
        spectral_radius(build_matrix(opt.params)), abs=1e-11
    )
    assert optimize_pq(0.0).lambda_pf <= GOLDEN_RADIUS + 1e-12
    flagged = optimize_pq(0.2)
    assert not flagged.certifiable and flagged.lambda_pf >= 1.0


def test_evaluate_certificate_margin():
    # a radius inside the margin band is not certified
    assert evaluate_certificate(0.11, PHI, 1.0, margin=0.5) is None
    cert = evaluate_certificate(0.11, PHI, 1.0)
    assert cert is not None and cert.revalidate()
