#!/usr/bin/env python3
"""Regenerates the synthetic stand-in datasets in data/synthetic/.

The files ship with the repository; rerun this only when changing the
generating process. Fixed seeds keep the output stable.
"""
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "synthetic"


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{v:.6g}" for v in row))
    path.write_text("\n".join(lines) + "\n")


def emissions(n=2000, seed=20240901):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        at = rng.uniform(0.0, 35.0)
        ah = rng.uniform(40.0, 100.0)
        afdp = rng.uniform(2.0, 8.0)
        gtep = rng.uniform(17.0, 40.0)
        co = (6.0 - 0.035 * ah + 0.0015 * (gtep - 25.0) ** 2
              + 0.08 * afdp - 0.01 * at + rng.gauss(0.0, 0.4))
        rows.append((at, ah, afdp, gtep, co))
    write_csv(OUT / "emissions.csv", ["AT", "AH", "AFDP", "GTEP", "CO"], rows)


def powerplant(n=4000, seed=20240902):
    rng = random.Random(seed)
    rows = []
    # V jumps to a different operating regime on hot days (AT >= 25) and
    # tracks AT inside it, but PE responds only to V's deviation from that
    # regime mean.  A linear fit on hot-day rows splits the AT effect with V,
    # so extrapolating to cold days (where V sits at its baseline) both
    # mis-ranks and under-calls the low-output class.  RH carries a regime-free
    # signal that identifies the low-output rows on cold days.
    def softplus(u):
        return math.log1p(math.exp(u)) if u < 30.0 else u

    for _ in range(n):
        at = rng.uniform(0.0, 35.0)
        ap = rng.uniform(993.0, 1033.0)
        rh = rng.uniform(25.0, 100.0)
        vbar = 25.0 + (8.0 if at >= 25.0 else 0.0) + 2.0 * max(at - 25.0, 0.0)
        v = vbar + rng.gauss(0.0, 3.0)
        pe = (465.0 + 3.9 * softplus((25.8 - at) / 1.3) - 2.4
              - 0.25 * (v - vbar) - 0.12 * (rh - 60.0)
              + 0.04 * (ap - 1013.0) + rng.gauss(0.0, 3.0))
        rows.append((at, ap, rh, v, pe))
    write_csv(OUT / "powerplant.csv", ["AT", "AP", "RH", "V", "PE"], rows)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    emissions()
    powerplant()
    print("wrote", OUT / "emissions.csv")
    print("wrote", OUT / "powerplant.csv")
