#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes the synthetic application fixture (fixtures/application).

A 4 km x 4 km region of 100 m tiles with four three-sector macro sites,
three small cells, a gentle hill and four land-use classes. Output is
deterministic.
"""
import json
import math
import pathlib

N = 40
TILE = 100.0
OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "application"


def ascii_grid(values, nodata=None):
    lines = [f"ncols {N}", f"nrows {N}", "xllcorner 0", "yllcorner 0", f"cellsize {TILE:g}"]
    if nodata is not None:
        lines.append(f"NODATA_value {nodata}")
    # first data row is the northern edge
    for row in reversed(range(N)):
        lines.append(" ".join(f"{values[row][col]:g}" for col in range(N)))
    return "\n".join(lines) + "\n"


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    sites = [("A", 900, 1100, 32), ("B", 3000, 900, 28), ("C", 1200, 3100, 35), ("D", 3100, 2900, 30)]
    rows = ["id,x,y,height,directional,azimuth,tilt,beam_h,beam_v,power,path_loss_exp,small"]
    for name, x, y, h in sites:
        for k, az in enumerate((0, 120, 240)):
            rows.append(f"{name}{k + 1},{x},{y},{h},true,{az},4,65,9,20,3.75,false")
    for k, (x, y) in enumerate([(2050, 2050), (1950, 1250), (2650, 3450)]):
        rows.append(f"S{k + 1},{x},{y},8,false,,,,,1,3.75,true")
    (OUT / "cells.csv").write_text("\n".join(rows) + "\n")

    elev = [[round(40 * math.exp(-(((c - 25) ** 2) + ((r - 14) ** 2)) / 80.0), 2) for c in range(N)]
            for r in range(N)]
    (OUT / "elevation.asc").write_text(ascii_grid(elev))

    frac = {k: [[0.0] * N for _ in range(N)] for k in ("residential", "commercial", "park", "water")}
    for r in range(N):
        for c in range(N):
            d = math.hypot(c - 20, r - 20)
            if c >= 36:
                frac["water"][r][c] = 1.0
            elif d < 6:
                frac["commercial"][r][c] = 0.75
                frac["residential"][r][c] = 0.25
            elif 8 <= c <= 13 and 24 <= r <= 31:
                frac["park"][r][c] = 1.0
            else:
                frac["residential"][r][c] = 0.5
                frac["park"][r][c] = 0.5
    for k, v in frac.items():
        (OUT / f"landuse_{k}.asc").write_text(ascii_grid(v))
    (OUT / "landuse_weights.csv").write_text(
        "class,weight\nresidential,2\ncommercial,5\npark,0.5\nwater,0\n")

    config = {
        "grid": {"origin": [0, 0], "tile_size": TILE, "n_cols": N, "n_rows": N},
        "cellplan": "cells.csv",
        "elevation": "elevation.asc",
        "landuse": {"weights": "landuse_weights.csv",
                    "rasters": {k: f"landuse_{k}.asc" for k in frac}},
        "dominance": {"S_mid": -92.5, "S_steep": 0.2, "min_dominance": 1e-5},
        "prior": {"kind": "composite", "pi": [0.2, 0.4, 0.4]},
        "likelihood": "strength",
        "voronoi": {"shift": 100},
        "ta": {"tau": 15, "b": 1},
        "output_dir": "out",
    }
    (OUT / "config.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
