"""Noise-grid sweep: detectability heatmap over (p1, p2).

A coarse grid keeps this quick; the CLI exposes the same sweep at any
resolution. Cells below the predicted threshold detect reliably, cells
above it sit near chance. Artifacts land in demos/output/.
"""

from pathlib import Path

from mlsgc import SweepSpec, geometric_mean_rows, run_noise_sweep

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

spec = SweepSpec(
    mode="noise-grid",
    sizes=(60, 60, 60),
    p_values=(0.05, 0.3, 0.55, 0.8),
    w1_values=(0.5,),
    reps=3,
    seed_root=0,
    csv_path=out / "noise_grid.csv",
    svg_path=out / "noise_grid.svg",
)
rows = run_noise_sweep(spec)

print("p1    p2    detect  regime")
for row in rows:
    print(f"{row['p1']:<5.2f} {row['p2']:<5.2f} {row['detect_mean']:<7.3f} {row['regime']}")

geo = geometric_mean_rows(rows)
print(f"\ngeometric-mean summary over {len(geo)} cells; "
      f"best {max(r['detect_geomean'] for r in geo):.3f}, "
      f"worst {min(r['detect_geomean'] for r in geo):.3f}")
print(f"wrote {spec.csv_path} and {spec.svg_path}")
