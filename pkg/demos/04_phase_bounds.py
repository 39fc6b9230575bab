"""Phase bounds and regime classification.

The partial eigenvalue sum of the aggregated Laplacian follows a linear
law in the noise level on either side of a critical value, which is
bracketed by computable bounds. With equal cluster sizes the bracket
collapses to a point.
"""

from mlsgc import (
    CorrelatedTwoLayerParams,
    NoiseSpec,
    generate_correlated_two_layer,
    phase_report,
    universal_lower_bound,
)

w = (0.5, 0.5)
for p in (0.15, 0.7):
    params = CorrelatedTwoLayerParams(sizes=(150, 150, 150), p1=p, p2=p, seed=1)
    g, truth = generate_correlated_two_layer(params)
    report = phase_report(g, truth, w, NoiseSpec(p=(p, p)))
    d = report.to_dict()
    print(f"\nbetween-cluster p = {p}")
    print(f"  aggregated noise level t_w     = {d['t_w']:.4f}")
    print(f"  bounds    [t_LB, t_UB]         = [{d['t_lb_w']:.4f}, {d['t_ub_w']:.4f}]")
    print(f"  universal lower bound          = {universal_lower_bound(g, truth):.4f}")
    print(f"  regime                         = {d['regime']}")
    lo, hi = d["predicted_s2k_per_n"]
    print(f"  predicted S_2:K / n            = [{lo:.4f}, {hi:.4f}]")
