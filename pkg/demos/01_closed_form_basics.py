"""Single-component basics: failure law, reliability, and its three axioms.

A component with an exponential failure law at rate 0.0025 per year has a
mean life of 400 years; this walk-through evaluates its CDF and survival
curve and then runs the property report that any reliability curve must
satisfy: it starts at 1, never increases, and eventually drops below any
threshold you pick.
"""

from rbdkit import FailureModel, cdf, check_reliability_axioms, log_reliability, reliability

model = FailureModel(rate=0.0025)

print("failure law: exponential, rate =", model.rate, "per unit time")
print("mean time to failure =", 1.0 / model.rate)
print()

print(" t      F(t)=P(fail<=t)   R(t)=P(survive>t)")
for t in (0.0, 10.0, 100.0, 400.0, 1000.0):
    print(f"{t:6.0f}  {cdf(model, t):16.6f}  {reliability(model, t):18.6f}")
print()

print("negative times never fail:", "F(-5) =", cdf(model, -5.0))
print("log-space value is exact:", "log R(100) =", log_reliability(model, 100.0))
print()

grid = [float(t) for t in range(0, 5001, 50)]
report = check_reliability_axioms(model, grid, epsilon=1e-3)
print(f"axioms on a {len(grid)}-point grid with epsilon=1e-3:")
for check in report.checks:
    print(f"  {check.name:12s} {'PASS' if check.passed else 'FAIL'}  {check.detail}")
print("overall:", "PASS" if report.passed else "FAIL")
