"""Build a survival certificate and locate the certified threshold.

A certificate at rate alpha names weights (p, q) with spectral radius below
one, the converged series total, and the window size m at which
p^(-2m) * series_total drops below one.  That last number is an upper bound
on the probability of ever seeing m adjacent zeros, so the process cannot be
heading to the all-zero state.
"""

from stavskaya import (
    PHI,
    GeneratingParams,
    certificate_to_json,
    certify_alpha,
    dominant_minors,
    lambda_closed_form,
    max_certified_alpha,
    minor_shortcut_margin,
    optimize_pq,
)

cert = certify_alpha(0.11)
print("certificate at alpha = 0.11:")
print(certificate_to_json(cert))
print(f"window bound p^(-2m) * total = {cert.bound():.6f}  (m = {cert.m_threshold})")
print(f"revalidates bit for bit: {cert.revalidate()}\n")

threshold = max_certified_alpha(1e-4)
print(f"largest certifiable rate at the endpoint weights: {threshold:.4f}")
print(f"closed-form radius there: {lambda_closed_form(threshold):.6f} (just below 1)\n")

print("radius and minors of I - M along alpha at p = phi, q = 1:")
for alpha in (0.0, 0.05, 0.10, 0.1142, 0.13, 0.20):
    gp = GeneratingParams(PHI, 1.0, alpha)
    minors = dominant_minors(gp)
    print(
        f"  alpha={alpha:<7} radius={lambda_closed_form(alpha):.6f} "
        f"minors=({minors[0]:+.4f}, {minors[1]:+.4f}, {minors[2]:+.4f}) "
        f"shortcut margin={minor_shortcut_margin(gp):+.4f}"
    )

opt = optimize_pq(0.05)
print(
    f"\nbest weights at alpha=0.05: p={opt.params.p:.6f} (phi = {PHI:.6f}), "
    f"q={opt.params.q:.6f}, radius {opt.lambda_pf:.6f}"
)
print("the optimum sits at the region's right endpoint, which is why the")
print("closed-form radius is evaluated there")
