"""Weight-line sweep with the predicted critical weight.

Layer 1 is reliable (p1 = 0.2), layer 2 is not (p2 = 0.5). Detectability
jumps from chance to perfect as w1 crosses a critical value that the
layer statistics predict in closed form. Artifacts (CSV + SVG) land in
demos/output/.
"""

from pathlib import Path

from mlsgc import SweepSpec, float_range, run_weight_sweep

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

spec = SweepSpec(
    mode="weight-line",
    sizes=(100, 100, 100),
    p1=0.2,
    p2=0.5,
    w1_values=float_range(0.0, 1.0, 0.1),
    reps=5,
    seed_root=0,
    csv_path=out / "weight_line.csv",
    svg_path=out / "weight_line.svg",
)
rows = run_weight_sweep(spec)

print(f"{'w1':>5}  {'mean detect':>11}  {'std':>6}")
for row in rows:
    print(f"{row['w1']:>5.2f}  {row['detect_mean']:>11.3f}  {row['detect_std']:>6.3f}")

pred = rows[0]["w1_star_pred"]
print(f"\npredicted critical weight w1* = {pred:.3f}" if pred is not None
      else "\nno critical weight predicted for this instance")
print(f"wrote {spec.csv_path} and {spec.svg_path}")
