"""run_sweeps.py - altitude and fleet-load sweeps, written to results/.

Each sweep reruns the full pipeline (synthesize, train, forecast, plan,
score) at every point and writes a metrics CSV plus a plain-text summary
via the standard reporting path.
"""

from pathlib import Path

from uavlc.harness import ExperimentConfig, report, sweep

RESULTS = Path(__file__).resolve().parent.parent / "results"


def height_sweep():
    # Small area so even the exhaustive lattice search stays tractable.
    config = ExperimentConfig(
        grid_side=16, cell_size=2.5, area_x=40.0, area_y=40.0, layers=1,
        kernel=5, feature_maps=(6,), hidden=24, seq_len=4, learn_rate=1.0,
        epochs=200, frames=12, users=6, fleet=2, seed=3,
        variants="proposed,actual-illum,persistence,center,"
                 "assoc-only,placement-only,exhaustive",
    )
    return sweep(config, "height", [22.0, 26.0, 30.0, 34.0])


def users_sweep():
    config = ExperimentConfig(
        grid_side=16, cell_size=5.0, layers=1, kernel=5, feature_maps=(6,),
        hidden=24, seq_len=4, learn_rate=1.0, epochs=200, frames=12,
        fleet=3, seed=5,
        variants="proposed,actual-illum,persistence,center,assoc-only",
    )
    return sweep(config, "users", [4.0, 8.0, 12.0])


def main():
    for name, runner in (("height", height_sweep), ("users", users_sweep)):
        print(f"running {name} sweep ...")
        rows = runner()
        failed = [r for r in rows if r.status != "ok"]
        for row in failed:
            print(f"  warning: {row.experiment_id} {row.sweep_var}="
                  f"{row.sweep_value:g}: {row.status}")
        paths = report(rows, RESULTS, name=f"sweep_{name}")
        for kind, path in paths.items():
            print(f"  {kind:8s} -> {path}")


if __name__ == "__main__":
    main()
