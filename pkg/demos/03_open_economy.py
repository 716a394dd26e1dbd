"""Two-country tradable/non-tradable model: weights and the optimal index.

The welfare weights follow the same principle as in the closed economy:
stickier sectors earn larger weights.  At the baseline calibration the
sectoral weights are exactly (0.7, 0.3) per country, the optimized
per-country inflation index reproduces the commitment allocation, and the
optimal index weight on non-traded inflation falls as the tradable sector
grows.
"""

import stabias as sb

params = sb.LiuPappaParams()
(w1, w2, kbar), _ = sb.lp_weights(params)
print(f"sectoral welfare weights at baseline: w1={w1}, w2={w2} (kappa_bar={kbar:.6f})")

model = sb.build_liu_pappa(params)
l_c = sb.unconditional_loss(sb.solve_commitment(model), model)
l_d = sb.unconditional_loss(sb.solve_discretion(model), model)
phi, rule = sb.optimize_rule(model)
l_r = sb.unconditional_loss(rule, model)
print(f"\ncommitment loss : {l_c.total:.10f}")
print(f"discretion loss : {l_d.total:.10f}")
print(f"rule loss       : {l_r.total:.10f}  at phi* = ({phi[0]:.4f}, {phi[1]:.4f})")
print("-> the optimized index replicates commitment; the bias is zero.")

print("\noptimal home index weight as the tradable share grows:")
for alpha in (0.1, 0.3, 0.5, 0.7, 0.9):
    m = sb.build_liu_pappa(sb.LiuPappaParams(alpha=alpha))
    phi, _ = sb.optimize_rule(m)
    print(f"  alpha={alpha:.1f}: phi* = {phi[0]:.4f}")
