"""
test_bonus.py
=============

Tests the version-space, elliptical and subsampled bonuses, the
consistency envelope and the oracles.
"""

import numpy as np
import pytest

from voql.bonus import (
    BonusError,
    BonusFn,
    SubsampledSet,
    bonus_from_gram,
    elliptical_bonus,
    enforce_consistency,
    make_oracle,
    sampling_probability,
    sensitivity_update,
    subsample_bonus,
    subsample_capacity,
    vs_bonus,
)
from voql.eluder import GramInverse, UncertaintyContext
from voql.env import gen_linear_mdp
from voql.fclass import (
    LevelDataset,
    build_linear_cover,
    linear_family,
    tabular_family,
    weighted_regression,
)

from .build_instances import (
    random_dataset,
    random_finite_class,
    single_point_class,
    small_tabular_mdp,
)


def test_vs_bonus_zero_radius() -> None:
    """
    With beta = 0 and a center no other member matches on the data, the
    version space is the center alone.
    """
    fclass = single_point_class([0.0, 1.0, 0.5])
    data = LevelDataset(0.5)
    data.append(0, 0, 0.0, 0, 1.0)
    assert vs_bonus(fclass, 0, data, 0.0)(0, 0) == 0.0


def test_vs_bonus_empty_data() -> None:
    """
    With no data every member is in the version space.
    """
    fclass = single_point_class([0.0, 1.0])
    b = vs_bonus(fclass, 0, LevelDataset(0.5), 1.0)
    assert b(0, 0) == pytest.approx(1.0)
    assert b.kind == "vs"
    with pytest.raises(BonusError):
        vs_bonus(fclass, 0, LevelDataset(0.5), -1.0)


def test_vs_bonus_width_cap() -> None:
    """
    The version-space bonus is at most D(z) sqrt(beta^2 + lam).
    """
    fclass = random_finite_class(50, nX=3, nA=2, seed=11)
    data = random_dataset(20, nX=3, nA=2, seed=12)
    center = weighted_regression(fclass, data, data.r, data.sigma_bar)
    beta, lam = 0.5, 1.0
    b = vs_bonus(fclass, center, data, beta)
    ctx = UncertaintyContext(fclass, lam)
    for x, a, s in zip(data.x, data.a, data.sigma_bar):
        ctx.append(x, a, s)
    cap = np.sqrt(ctx.dsq_table()) * np.sqrt(beta**2 + lam)
    assert np.all(b.table <= cap + 1e-12)


def test_vs_bonus_product_grid() -> None:
    """
    On a product grid an unobserved entry keeps the full deviation.
    """
    mdp = small_tabular_mdp(seed=0)
    fclass = tabular_family(mdp, grid_step=0.5).value[0]
    data = LevelDataset(0.5)
    for _ in range(50):
        data.append(0, 0, 0.0, 0, 1.0)
    b = vs_bonus(fclass, 0, data, beta=1.0)
    assert b(0, 0) == 0.0
    assert b(1, 1) == pytest.approx(1.0)


def test_elliptical_examples() -> None:
    """
    lam = 1 and B = 1/2 give Sigma = I: b(e1) = sqrt(3 + 1) = 2, and one
    unit-weight point along e1 halves the squared norm.
    """
    phi = np.array([[[1.0, 0.0]]])
    beta = np.sqrt(3.0)
    data = LevelDataset(0.5)
    b = elliptical_bonus(phi, data, beta, lam=1.0, B=0.5)
    assert b(0, 0) == pytest.approx(2.0)
    data.append(0, 0, 0.0, 0, 1.0)
    b = elliptical_bonus(phi, data, beta, lam=1.0, B=0.5)
    assert b(0, 0) == pytest.approx(np.sqrt(0.5) * 2.0)
    assert b.kind == "elliptical"


def test_elliptical_dominates_version_space() -> None:
    """
    The elliptical bonus dominates the exact version-space bonus over the
    cover of the same ball.
    """
    mdp = gen_linear_mdp(d=2, H=2, nX=4, nA=3, seed=13)
    assert mdp.phi is not None and mdp.B is not None
    lam, beta = 1.0, 1.0
    for seed in range(5):
        fclass = build_linear_cover(mdp.phi[0], float(mdp.B[0]), eps_c=0.2)
        data = random_dataset(30, nX=4, nA=3, seed=seed)
        center = weighted_regression(fclass, data, data.r, data.sigma_bar)
        exact = vs_bonus(fclass, center, data, beta)
        ell = elliptical_bonus(fclass.phi, data, beta, lam, fclass.B)
        assert np.all(ell.table >= exact.table - 1e-9)


def test_sampling_probability() -> None:
    """
    Smallest reciprocal integer at or above the threshold.
    """
    assert sampling_probability(0.3) == pytest.approx(1 / 3)
    assert sampling_probability(0.5) == pytest.approx(0.5)
    assert sampling_probability(1.0) == 1.0
    assert sampling_probability(2.5) == 1.0
    assert sampling_probability(0.0) == 0.0


def test_subsample_full_set_matches_version_space() -> None:
    """
    A set holding every point once gives the version-space bonus of radius
    10 beta.
    """
    fclass = random_finite_class(40, nX=3, nA=2, seed=14)
    data = random_dataset(25, nX=3, nA=2, seed=15)
    sset = SubsampledSet(fclass, s_max=100)
    for x, a, s in zip(data.x, data.a, data.sigma_bar):
        sset.add(x, a, s, 1)
    assert len(sset) == len(data)
    beta = 0.05
    center = weighted_regression(fclass, data, data.r, data.sigma_bar)
    sub = subsample_bonus(sset, center, beta)
    exact = vs_bonus(fclass, center, data, 10 * beta)
    assert np.allclose(sub.table, exact.table)


def test_subsample_empty_set() -> None:
    """
    An empty set keeps the whole class in the version space.
    """
    sset = SubsampledSet(single_point_class([0.0, 1.0]), s_max=1)
    assert subsample_bonus(sset, 0, 0.1)(0, 0) == pytest.approx(1.0)


def test_subsample_stream_sandwich() -> None:
    """
    A stream of identical points: one distinct entry, and the subsampled
    bonus stays between the version-space bonuses of radius beta and
    100 beta on nearly every seed.
    """
    fclass = single_point_class([0.0, 1.0])
    T, H, alpha, delta, C, beta = 500, 1, 0.5, 0.1, 1.0, 5.0
    log_N = float(np.log(2))
    s_max = subsample_capacity(C, T, log_N, delta, 1.0)
    good = 0
    seeds = 100
    for seed in range(seeds):
        rng = np.random.default_rng(seed)
        sset = SubsampledSet(fclass, s_max)
        data = LevelDataset(alpha)
        ok = True
        for n in range(1, T + 1):
            sensitivity_update(
                sset, (0, 0), 1.0, beta, alpha, C, delta, T, H, log_N, rng
            )
            data.append(0, 0, 0.0, 0, 1.0)
            if n in (20, 100, T):
                sub = subsample_bonus(sset, 0, beta).table
                low = vs_bonus(fclass, 0, data, beta).table
                high = vs_bonus(fclass, 0, data, 100 * beta).table
                ok = ok and bool(np.all(low <= sub) and np.all(sub <= high))
        assert len(sset) <= 1 <= s_max
        assert sset.overflow == 0
        good += int(ok)
    assert good >= 0.95 * seeds


def test_sensitivity_update_rejects_low_weight() -> None:
    """
    Weights below the floor are rejected.
    """
    sset = SubsampledSet(single_point_class([0.0, 1.0]), s_max=1)
    rng = np.random.default_rng(0)
    with pytest.raises(BonusError):
        sensitivity_update(
            sset, (0, 0), 0.1, 1.0, 0.5, 1.0, 0.1, 10, 1, 1.0, rng
        )


def test_enforce_consistency() -> None:
    """
    The envelope keeps the smaller value pointwise and counts the entries
    where the new bonus exceeded the old one.
    """
    previous = BonusFn(np.array([[0.5, 0.2]]), "vs", t=1)
    lower = BonusFn(np.array([[0.4, 0.1]]), "vs", t=2)
    out = enforce_consistency(lower, previous)
    assert np.array_equal(out.table, lower.table)
    assert out.raw_violations == 0
    higher = BonusFn(np.array([[0.6, 0.1]]), "vs", t=2)
    out = enforce_consistency(higher, previous)
    assert np.array_equal(out.table, [[0.5, 0.1]])
    assert out.raw_violations == 1
    with pytest.raises(BonusError):
        enforce_consistency(previous, higher)


def test_growing_radius_envelope() -> None:
    """
    With a radius growing faster than the data shrinks the norm, the raw
    elliptical sequence violates consistency and its envelope does not.
    """
    phi = np.array([[[1.0, 0.0]]])
    gram = GramInverse(2, 1.0)
    previous = None
    raw_violations = 0
    values = []
    for t in range(1, 101):
        gram.update(phi[0, 0], 1.0)
        raw = bonus_from_gram(phi, gram, beta=float(t), lam=1.0, t=t)
        env = enforce_consistency(raw, previous)
        raw_violations += env.raw_violations
        values.append(env(0, 0))
        previous = env
    assert raw_violations > 0
    assert np.all(np.diff(values) <= 0)


def test_make_oracle() -> None:
    """
    Oracles by name, and the elliptical oracle refuses non-linear classes.
    """
    for name in ("vs", "elliptical", "subsample", "zero"):
        assert make_oracle(name).name == name
    with pytest.raises(BonusError):
        make_oracle("ucb")
    oracle = make_oracle("elliptical")
    family = tabular_family(small_tabular_mdp(seed=0), grid_step=0.5)
    with pytest.raises(BonusError):
        oracle.prepare(family, T=10, H=3, alpha=0.5, delta=0.1, lam=1.0)


def test_oracle_family_support() -> None:
    """
    Enumerating oracles need a materialized linear cover and refuse a large
    one at prepare time; the elliptical oracle serves both.
    """
    mdp = gen_linear_mdp(d=3, H=2, nX=3, nA=2, seed=0)
    large = linear_family(mdp, T=2000)
    small = linear_family(mdp, eps_c=0.5)
    assert not large.value[0].is_materialized
    assert small.value[0].is_materialized
    for name in ("vs", "subsample"):
        oracle = make_oracle(name)
        oracle.check_family(small)
        with pytest.raises(BonusError):
            oracle.check_family(large)
        with pytest.raises(BonusError):
            oracle.prepare(large, T=2000, H=2, alpha=0.1, delta=0.1, lam=1.0)
    make_oracle("elliptical").check_family(large)
    make_oracle("zero").check_family(large)


def test_consistent_oracle_envelope() -> None:
    """
    The wrapped version-space oracle returns a non-increasing sequence per
    (level, slot).
    """
    mdp = small_tabular_mdp(seed=1)
    family = tabular_family(mdp, grid_step=0.25)
    oracle = make_oracle("vs")
    oracle.prepare(family, T=20, H=mdp.H, alpha=0.5, delta=0.1, lam=1.0)
    fclass = family.value[0]
    data = LevelDataset(0.5)
    rng = np.random.default_rng(3)
    previous = None
    for t in range(1, 21):
        center = int(rng.integers(fclass.size))
        b = oracle.bonus(0, 1, fclass, [center], data, data.sigma_bar, 1.0, t)
        if previous is not None:
            assert np.all(b.table <= previous.table)
        previous = b
        data.append(int(rng.integers(4)), int(rng.integers(2)), 0.0, 0, 1.0)
