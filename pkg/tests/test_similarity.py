import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbelief.arm import default_arm, end_effector, planar_2r_arm
from cbelief.similarity import (
    Covariance,
    DegenerateWeightsError,
    ImportanceWeights,
    SimilarityMeasure,
    WeightMatrix,
    importance_weights_free,
    importance_weights_obs,
    similarity,
    training_weights,
)
from cbelief.world import CollisionReport

from helpers import planar_2r_end_effector


# -- importance weights -------------------------------------------------------


def test_planar_2r_free_weights_match_hand_value():
    """Perturbing a revolute joint moves the end effector along a circle, so
    s_j = 2 R_j sin(h/2); for the straight 2R arm R = (2, 1)."""
    arm = planar_2r_arm(1.0, 1.0)
    w = importance_weights_free(arm, np.zeros(2))
    h = 0.01
    s_expected = np.array([2.0 * 2.0 * np.sin(h / 2), 2.0 * 1.0 * np.sin(h / 2)])
    np.testing.assert_allclose(
        w.omega, s_expected / np.linalg.norm(s_expected), atol=1e-12
    )
    np.testing.assert_allclose(w.omega, np.array([2.0, 1.0]) / np.sqrt(5), atol=1e-7)


def test_free_weights_via_independent_fk_oracle():
    arm = planar_2r_arm(1.3, 0.7)
    rng = np.random.default_rng(2)
    for _ in range(20):
        q = rng.uniform(-2, 2, 2)
        base = planar_2r_end_effector(1.3, 0.7, q)
        s = np.array([
            np.linalg.norm(
                planar_2r_end_effector(1.3, 0.7, q + 0.01 * np.eye(2)[j]) - base
            )
            for j in range(2)
        ])
        np.testing.assert_allclose(
            importance_weights_free(arm, q).omega, s / np.linalg.norm(s), atol=1e-10
        )


def test_unit_norm_and_nonnegative():
    arm = default_arm()
    rng = np.random.default_rng(5)
    for _ in range(50):
        q = rng.uniform(arm.lower, arm.upper)
        w = importance_weights_free(arm, q)
        assert abs(np.linalg.norm(w.omega) - 1.0) <= 1e-9
        assert np.all(w.omega >= 0.0)


def test_scale_invariance_of_normalization():
    w = ImportanceWeights(np.array([2.0, 1.0]) / np.sqrt(5))
    np.testing.assert_allclose(np.linalg.norm(w.omega), 1.0, atol=1e-12)


def test_obs_first_link_forces_unit_basis_vector():
    """l = 1: only joint 0 moves link 1, so normalization gives e0."""
    arm = default_arm()
    rng = np.random.default_rng(9)
    for _ in range(10):
        q = rng.uniform(arm.lower, arm.upper)
        report = CollisionReport(1, np.array([0.05, 0.02, 0.1]))
        w = importance_weights_obs(arm, q, report)
        np.testing.assert_array_equal(w.omega, np.eye(7)[0])


def test_obs_zero_tail(scenes, training_sets):
    _, arm = scenes["clutter"]
    ts = training_sets["clutter"]
    for q, rep in list(zip(ts.obs_samples, ts.reports))[::10]:
        w = importance_weights_obs(arm, q, rep)
        assert np.all(w.omega[rep.first_link_index:] == 0.0)
        assert abs(np.linalg.norm(w.omega) - 1.0) <= 1e-9


def test_obs_last_link_matches_free_weights_at_centroid():
    """With the last link hit, every joint participates: the centroid plays
    the end effector's role exactly."""
    arm = planar_2r_arm(1.0, 1.0)
    q = np.array([0.3, -0.5])
    ee = planar_2r_end_effector(1.0, 1.0, q)
    report = CollisionReport(2, ee)  # centroid exactly at the end effector
    w_obs = importance_weights_obs(arm, q, report)
    w_free = importance_weights_free(arm, q)
    np.testing.assert_allclose(w_obs.omega, w_free.omega, atol=1e-12)


def test_one_sided_matches_central_difference():
    """Single-joint perturbations are rigid rotations, so one-sided and
    centered chords agree to a uniform cos(h/2) factor that normalization
    removes."""
    arm = default_arm()
    rng = np.random.default_rng(11)
    h = 0.01
    for _ in range(25):
        q = rng.uniform(arm.lower, arm.upper)
        base_plus = importance_weights_free(arm, q).omega
        s_central = np.empty(7)
        for j in range(7):
            qp, qm = q.copy(), q.copy()
            qp[j] += h / 2
            qm[j] -= h / 2
            s_central[j] = np.linalg.norm(end_effector(arm, qp) - end_effector(arm, qm))
        central = s_central / np.linalg.norm(s_central)
        rel = np.abs(base_plus - central) / np.maximum(central, 1e-6)
        assert rel.max() <= 0.02


def test_degenerate_weights_raise():
    # single joint rotating about the axis through the end effector
    arm_axes = np.array([[0.0, 0.0, 1.0]])
    from cbelief.arm import ArmSpec

    arm = ArmSpec(arm_axes, np.array([[0.0, 0.0, 1.0]]), np.array([0.1]),
                  np.array([-1.0]), np.array([1.0]))
    with pytest.raises(DegenerateWeightsError):
        importance_weights_free(arm, np.zeros(1))


def test_training_weights_layout(scenes, training_sets):
    _, arm = scenes["clutter"]
    ts = training_sets["clutter"]
    sub = training_weights(arm, ts.__class__(
        ts.free_samples[:5], ts.obs_samples[:5], ts.reports[:5]))
    assert sub.shape == (10, 7)
    np.testing.assert_allclose(np.linalg.norm(sub, axis=1), 1.0, atol=1e-9)


# -- similarity measures -------------------------------------------------------


def test_identical_configurations_have_zero_similarity():
    cov = Covariance.from_samples(np.random.default_rng(0).normal(size=(50, 7)))
    q = np.arange(7.0)
    w = np.full(7, 1 / np.sqrt(7))
    for kind in ("euclidean", "mahalanobis"):
        m = SimilarityMeasure(kind, cov if kind == "mahalanobis" else None)
        assert similarity(m, q, q) == 0.0
    for kind in ("weighted-euclidean", "weighted-mahalanobis"):
        m = SimilarityMeasure(kind, cov if "mahalanobis" in kind else None)
        assert similarity(m, q, q, w) == 0.0


def test_euclidean_pythagorean():
    m = SimilarityMeasure("euclidean")
    q = np.zeros(7)
    qp = np.array([3.0, 4.0, 0, 0, 0, 0, 0])
    assert abs(similarity(m, q, qp) - 5.0) <= 5.0 * 1e-12


def test_weighted_euclidean_hand_value():
    m = SimilarityMeasure("weighted-euclidean")
    q = np.zeros(7)
    qp = np.array([3.0, 4.0, 0, 0, 0, 0, 0])
    w = np.array([1.0, 0, 0, 0, 0, 0, 0])
    assert abs(similarity(m, q, qp, w) - 3.0) <= 3.0 * 1e-12


def test_mahalanobis_identity_covariance_reduces_to_euclidean():
    samples = np.random.default_rng(1).normal(size=(4000, 7))
    cov = Covariance.from_samples(samples)
    m = SimilarityMeasure("mahalanobis", cov)
    q, qp = np.zeros(7), np.ones(7)
    expected = np.sqrt((qp @ cov.inverse @ qp))
    assert abs(similarity(m, q, qp) - expected) <= expected * 1e-12


def test_weighted_forms_use_training_sample_weights_asymmetrically():
    m = SimilarityMeasure("weighted-euclidean")
    q = np.array([1.0, 0, 0, 0, 0, 0, 0])
    qp = np.array([0.0, 2, 0, 0, 0, 0, 0])
    w_q = np.array([1.0, 0, 0, 0, 0, 0, 0])
    w_qp = np.array([0.0, 1, 0, 0, 0, 0, 0])
    # the weight belongs to the first (training) argument
    assert similarity(m, q, qp, w_q) == 1.0
    assert similarity(m, qp, q, w_qp) == 2.0


def test_symmetry_of_unweighted_measures():
    rng = np.random.default_rng(3)
    cov = Covariance.from_samples(rng.normal(size=(100, 7)))
    for kind in ("euclidean", "mahalanobis"):
        m = SimilarityMeasure(kind, cov if kind == "mahalanobis" else None)
        for _ in range(50):
            a, b = rng.normal(size=7), rng.normal(size=7)
            assert similarity(m, a, b) == pytest.approx(similarity(m, b, a), rel=1e-12)


def test_all_measures_finite_nonnegative_on_random_pairs():
    """Vectorized sweep standing in for 1e5 scalar evaluations per measure."""
    rng = np.random.default_rng(8)
    samples = rng.normal(size=(300, 7))
    cov = Covariance.from_samples(samples)
    n = 100_000
    a = rng.normal(size=(n, 7))
    b = rng.normal(size=(n, 7))
    w = np.abs(rng.normal(size=(n, 7)))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    v = a - b
    quads = {
        "euclidean": (v * v).sum(1),
        "weighted-euclidean": (v * v * w).sum(1),
        "mahalanobis": (v * (v @ cov.inverse)).sum(1),
        "weighted-mahalanobis": np.maximum((v * w * (v @ cov.inverse)).sum(1), 0.0),
    }
    for kind, quad in quads.items():
        sims = np.sqrt(quad)
        assert np.all(np.isfinite(sims)) and np.all(sims >= 0.0), kind
    # spot check the scalar API agrees with the vectorized forms
    for kind in quads:
        m = SimilarityMeasure(kind, cov if "mahalanobis" in kind else None)
        for i in range(0, n, n // 17):
            weight = w[i] if "weighted" in kind else None
            assert similarity(m, a[i], b[i], weight) == pytest.approx(
                float(np.sqrt(quads[kind][i])), rel=1e-9, abs=1e-12)


def test_weighted_mahalanobis_clamps_and_counts():
    rng = np.random.default_rng(4)
    base = rng.normal(size=(500, 2))
    base[:, 1] = 0.95 * base[:, 0] + 0.05 * base[:, 1]  # strong correlation
    cov = Covariance.from_samples(base)
    m = SimilarityMeasure("weighted-mahalanobis", cov)
    w = np.array([1.0, 0.0])
    v = np.array([1.0, 1.2])
    raw = float((v * w) @ cov.inverse @ v)
    assert raw < 0.0, "construction should produce a negative quadratic form"
    before = similarity.clamp_events
    assert similarity(m, v, np.zeros(2), w) == 0.0
    assert similarity.clamp_events == before + 1


def test_measure_validation():
    with pytest.raises(ValueError):
        SimilarityMeasure("manhattan")
    with pytest.raises(ValueError):
        SimilarityMeasure("mahalanobis")  # missing covariance
    m = SimilarityMeasure("euclidean")
    with pytest.raises(ValueError):
        similarity(m, np.zeros(2), np.zeros(2), np.ones(2))  # unexpected weights
    mw = SimilarityMeasure("weighted-euclidean")
    with pytest.raises(ValueError):
        similarity(mw, np.zeros(2), np.zeros(2))  # missing weights


def test_weight_matrix_wraps_omega():
    w = ImportanceWeights(np.eye(7)[0])
    mat = WeightMatrix.from_weights(w)
    np.testing.assert_array_equal(mat.diagonal, w.omega)
    np.testing.assert_array_equal(mat.as_matrix(), np.diag(w.omega))


# -- covariance ---------------------------------------------------------------


def test_covariance_degenerate_data_still_invertible():
    samples = np.tile(np.arange(7.0), (50, 1))
    cov = Covariance.from_samples(samples)
    assert np.all(np.isfinite(cov.inverse))
    assert np.abs(cov.sigma).max() <= 1e-10


def test_covariance_diagonal_matches_known_variance():
    rng = np.random.default_rng(6)
    target = np.array([1.0, 4.0, 0.25, 9.0, 1.0, 2.25, 0.5])
    samples = rng.normal(size=(10_000, 7)) * np.sqrt(target)
    cov = Covariance.from_samples(samples)
    np.testing.assert_allclose(np.diag(cov.sigma), target, rtol=0.05)


def test_mahalanobis_affine_invariance():
    """Rescaling the axes and refitting the covariance leaves distances fixed."""
    rng = np.random.default_rng(12)
    # mildly correlated, well-conditioned data: the fixed 1e-8 ridge term is
    # not itself affine-equivariant, so conditioning controls the residual
    samples = rng.normal(size=(2000, 7)) @ (np.eye(7) + 0.1 * rng.normal(size=(7, 7)))
    scale = np.array([2.0, 0.5, 1.5, 1.0, 0.7, 2.0, 1.2])
    cov1 = Covariance.from_samples(samples)
    cov2 = Covariance.from_samples(samples * scale)
    m1 = SimilarityMeasure("mahalanobis", cov1)
    m2 = SimilarityMeasure("mahalanobis", cov2)
    for _ in range(20):
        a, b = rng.normal(size=7), rng.normal(size=7)
        s1 = similarity(m1, a, b)
        s2 = similarity(m2, a * scale, b * scale)
        assert s2 == pytest.approx(s1, rel=1e-6)


def test_covariance_needs_enough_samples():
    with pytest.raises(ValueError):
        Covariance.from_samples(np.zeros((5, 7)))


def test_whitener_squares_to_inverse():
    rng = np.random.default_rng(13)
    cov = Covariance.from_samples(rng.normal(size=(500, 7)))
    np.testing.assert_allclose(cov.whitener @ cov.whitener, cov.inverse,
                               rtol=1e-9, atol=1e-12)
