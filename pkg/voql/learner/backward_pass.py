"""
backward_pass.py
================

Module containing the backward pass that builds the value functions of an
episode from the data of the previous ones.

For h = H - 1, ..., 0:

    fhat_1   weighted regression onto r + max f_1^{h+1}(x'), weights sigma_bar
    b_1      oracle slot 1, weights sigma_bar, radius beta_1
    f_1      = clip(fhat_1 + b_1 + eps, 0, 1)
    fhat_2   unweighted regression onto r + max f_2^{h+1}(x')
    fhat_-2  unweighted regression onto r + max f_-2^{h+1}(x')
    b_2      oracle slot 2, unit weights, radius beta_2
    f_2      = clip(fhat_2 + 2 b_1 + b_2 + 3 eps, 0, 2)
    f_-2     = clip(fhat_-2 - b_2 - eps, 0, L)
    ghat     unweighted regression of the squared targets over the
             second-moment class
"""

from ..bonus.bonus_oracle import SLOT_UNIT, SLOT_WEIGHTED
from ..fclass.class_family import ClassFamily
from ..fclass.clip_compose import clip_compose
from ..fclass.regression import weighted_regression
from .params import AnyOracle
from .voql_state import VoqlState


def backward_pass(
    state: VoqlState, family: ClassFamily, oracle: AnyOracle
) -> None:
    """
    Rebuild f_1, f_2, f_-2, ghat and the bonuses for the current episode.

    Parameters
    ----------
    state : VoqlState
        Run state, modified in place
    family : ClassFamily
        Value and second-moment classes
    oracle : BonusOracle | ConsistentOracle
        Bonus oracle, prepared for the run
    """
    p = state.params
    t = state.t
    beta1, beta2 = p.beta1(t), p.beta2(t)
    over_optimistic = p.second_moment_target == "over_optimistic"
    for h in range(state.H - 1, -1, -1):
        fc = family.value[h]
        data = state.datasets[h]
        sb = data.sigma_bar
        ones = data.unit_weights()

        y1 = data.targets(state.f1[h + 1])
        i1 = weighted_regression(fc, data, y1, sb, p.lam)
        state.fhat1[h] = fc.table(i1)
        b1 = oracle.bonus(h, SLOT_WEIGHTED, fc, [i1], data, sb, beta1, t)
        state.f1[h] = clip_compose(state.fhat1[h], b1.table, p.eps, 0.0, 1.0)

        y2 = data.targets(state.f2[h + 1])
        ym2 = data.targets(state.fm2[h + 1])
        i2 = weighted_regression(fc, data, y2, ones, p.lam)
        im2 = weighted_regression(fc, data, ym2, ones, p.lam)
        state.fhat2[h] = fc.table(i2)
        state.fhat_m2[h] = fc.table(im2)
        b2 = oracle.bonus(h, SLOT_UNIT, fc, [i2, im2], data, ones, beta2, t)
        state.f2[h] = clip_compose(
            state.fhat2[h], 2 * b1.table + b2.table, 3 * p.eps, 0.0, 2.0
        )
        state.fm2[h] = clip_compose(
            state.fhat_m2[h], -b2.table, -p.eps, 0.0, p.L
        )

        base = state.f2 if over_optimistic else state.f1
        sc = family.second[h]
        yg = data.targets(base[h + 1]) ** 2
        ig = weighted_regression(sc, data, yg, ones, p.lam)
        state.ghat[h] = sc.table(ig)

        state.centers[h] = (i1, i2, im2, ig)
        state.b1[h] = b1
        state.b2[h] = b2
