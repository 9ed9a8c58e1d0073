"""Regenerate the built-in catalog JSON files.

Usage: python tools/build_catalog.py
"""
import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "submersion_chen" / "catalog"


def diag(items):
    return {f"{i + 1},{i + 1}": v for i, v in enumerate(items)}


def pairs(ps, n):
    """Skew structure tensor with f d_a = d_b and f d_b = -d_a for each (a, b)."""
    t = {}
    for a, b in ps:
        t[f"{b},{a}"] = 1
        t[f"{a},{b}"] = -1
    return t


def hopf():
    S = "(" + "+".join(f"x{i}^2" for i in range(1, 8)) + ")"
    a = [f"2*x{i}" for i in range(1, 5)]
    b = ["2*x5", "2*x6", "2*x7", f"({S}-1)"]
    nb = f"(4*x5^2+4*x6^2+4*x7^2+({S}-1)^2)"
    # components of a * conj(b) in the quaternions
    terms = [
        [(+1, 0, 0), (+1, 1, 1), (+1, 2, 2), (+1, 3, 3)],
        [(-1, 0, 1), (+1, 1, 0), (-1, 2, 3), (+1, 3, 2)],
        [(-1, 0, 2), (+1, 1, 3), (+1, 2, 0), (-1, 3, 1)],
        [(-1, 0, 3), (-1, 1, 2), (+1, 2, 1), (+1, 3, 0)],
    ]
    comps = []
    for row in terms:
        s = "".join(("+" if sg > 0 else "-") + f"({a[i]})*({b[j]})" for sg, i, j in row)
        comps.append(f"({s.lstrip('+')})/{nb}")
    return {
        "name": "hopf_s7_s4",
        "description": "Quaternionic Hopf fibration S7 -> S4(1/2), stereographic charts; totally geodesic S3 fibers",
        "n": 7, "m": 4,
        "metric_total": diag([f"4/(1+{S})^2"] * 7),
        "metric_base": diag(["1/(1+y1^2+y2^2+y3^2+y4^2)^2"] * 4),
        "map": comps,
        "domain": [f"{nb} > 0"],
        "model": {"family": "real", "c": 1},
        "points": [[0.1, 0.2, -0.3, 0.15, 0.25, -0.1, 0.2], [0.4, -0.3, 0.2, 0.1, -0.5, 0.3, 0.6]],
        "planes": {"vertical": [1, 2], "horizontal": [1, 2]},
        "theorems": ["rsf_thm36", "rsf_thm43", "thm32"],
    }


ENTRIES = [
    {
        "name": "girmednh",
        "description": "Warped metric on R6 over (R3, dy1^2 + y3^2 dy2^2 + y2^2 dy3^2); strict inequality",
        "n": 6, "m": 3,
        "parameters": {"alpha": math.pi / 4},
        "metric_total": diag(["exp(2*x4)", "exp(2*x6)", "1", "exp(2*x6)", "1", "exp(2*x4)"]),
        "metric_base": diag(["1", "y3^2", "y2^2"]),
        "map": ["x3*sin(alpha) - x5*cos(alpha)", "x4", "x6"],
        "points": [[0, 0, 0, 0, 0, 0], [0.3, -0.2, 0.1, 0.4, 0.2, 0.5]],
        "planes": {"vertical": [1, 2], "horizontal": [1, 2]},
        "theorems": ["thm31", "thm32", "thm41"],
    },
    {
        "name": "gigseh",
        "description": "R6 with g = x1^2 dx1^2 + dx2^2 + x3^2 dx3^2 + dx4^2 + x5^2 dx5^2 + dx6^2 onto (x2, x4, x6); equality",
        "n": 6, "m": 3,
        "metric_total": diag(["x1^2", "1", "x3^2", "1", "x5^2", "1"]),
        "metric_base": diag(["1", "1", "1"]),
        "map": ["x2", "x4", "x6"],
        "domain": ["x1 != 0", "x3 != 0", "x5 != 0"],
        "points": [[1, 1, 1, 1, 1, 1], [0.5, -1, 2, 0.3, -1.5, 0.7]],
        "planes": {"vertical": [1, 2], "horizontal": [1, 2]},
        "theorems": ["thm31", "thm32", "thm41"],
    },
    hopf(),
    {
        "name": "flat_product",
        "description": "Euclidean R5 projected onto its last two coordinates",
        "n": 5, "m": 2,
        "metric_total": diag(["1"] * 5),
        "metric_base": diag(["1", "1"]),
        "map": ["x4", "x5"],
        "model": {"family": "real", "c": 0},
        "points": [[0, 0, 0, 0, 0], [1, -2, 0.5, 3, 0.25]],
        "planes": {"vertical": [1, 2], "horizontal": [1, 2]},
        "theorems": ["thm31", "thm32", "thm41", "rsf_thm36", "rsf_thm43"],
    },
    {
        "name": "sphere_chart",
        "description": "Unit S4 as dt^2 + cos(t)^2 g_S3 (stereographic S3) mapped to the latitude t; umbilic S3 fibers",
        "n": 4, "m": 1,
        "metric_total": diag(["1"] + ["4*cos(x1)^2/(1+x2^2+x3^2+x4^2)^2"] * 3),
        "metric_base": diag(["1"]),
        "map": ["x1"],
        "domain": ["cos(x1) > 0"],
        "model": {"family": "real", "c": 1},
        "points": [[0.3, 0.1, -0.2, 0.4], [0, 0, 0, 0], [-0.9, 0.5, 0.2, -0.1]],
        "planes": {"vertical": [1, 2]},
        "theorems": ["thm31", "thm32", "rsf_thm36"],
    },
    {
        "name": "cosymplectic_r7",
        "description": "Flat cosymplectic R7 (phi pairs (1,2), (3,4), (5,6), xi = d7) onto (x3, x4, x5, x6)",
        "n": 7, "m": 4,
        "metric_total": diag(["1"] * 7),
        "metric_base": diag(["1"] * 4),
        "map": ["x3", "x4", "x5", "x6"],
        "structure": {"kind": "almost-contact", "tensor": pairs([(1, 2), (3, 4), (5, 6)], 7),
                      "xi": {"7": 1}, "eta": {"7": 1}},
        "model": {"family": "cosymplectic", "c": 0},
        "points": [[0] * 7, [0.2, -0.1, 0.3, 0.5, -0.4, 0.1, 0.7]],
        "planes": {"vertical": [1, 2], "horizontal": [1, 2]},
        "theorems": ["gssf_thm310", "gssf_thm47", "thm31", "thm41"],
    },
    {
        "name": "synthetic_complex_r6",
        "description": "Flat C3 (J d1 = d2, J d3 = d4, J d5 = d6) onto (x2, x4, x6)",
        "n": 6, "m": 3,
        "metric_total": diag(["1"] * 6),
        "metric_base": diag(["1"] * 3),
        "map": ["x2", "x4", "x6"],
        "structure": {"kind": "complex", "tensor": pairs([(1, 2), (3, 4), (5, 6)], 6)},
        "model": {"family": "complex", "c": 0},
        "points": [[0] * 6, [0.3, 0.1, -0.2, 0.4, 0.6, -0.5]],
        "planes": {"vertical": [1, 2], "horizontal": [1, 2]},
        "theorems": ["csf_thm38", "csf_thm45", "thm31", "thm41"],
    },
    {
        "name": "sasakian_r5",
        "description": "Sasakian space form R5(-3) onto (x1, x3); xi = 2 d5 is vertical",
        "n": 5, "m": 2,
        # coordinates (x1, x2, y1, y2, z) = (x1, x2, x3, x4, x5), eta = (dz - y1 dx1 - y2 dx2)/2
        "metric_total": {
            "1,1": "1/4 + x3^2/4", "1,2": "x3*x4/4", "1,5": "-x3/4",
            "2,2": "1/4 + x4^2/4", "2,5": "-x4/4",
            "3,3": "1/4", "4,4": "1/4", "5,5": "1/4",
        },
        "metric_base": diag(["1/4", "1/4"]),
        "map": ["x1", "x3"],
        "structure": {
            "kind": "almost-contact",
            "tensor": {"3,1": -1, "4,2": -1, "1,3": 1, "5,3": "x3", "2,4": 1, "5,4": "x4"},
            "xi": {"5": 2}, "eta": {"1": "-x3/2", "2": "-x4/2", "5": "1/2"},
        },
        "model": {"family": "sasakian", "c": -3},
        "points": [[0, 0, 0, 0, 0], [0.3, -0.2, 0.5, 0.1, 0.4]],
        "planes": {"vertical": [1, 2], "horizontal": [1, 2]},
        "theorems": ["gssf_thm310", "thm31", "thm32"],
    },
    {
        "name": "s2xs2",
        "description": "Product of two unit 2-spheres (stereographic) projected onto the second factor",
        "n": 4, "m": 2,
        "metric_total": diag(["4/(1+x1^2+x2^2)^2"] * 2 + ["4/(1+x3^2+x4^2)^2"] * 2),
        "metric_base": diag(["4/(1+y1^2+y2^2)^2"] * 2),
        "map": ["x3", "x4"],
        "points": [[0.2, -0.3, 0.5, 0.1]],
        "theorems": [],
    },
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for e in ENTRIES:
        (OUT / f"{e['name']}.json").write_text(json.dumps(e, indent=2) + "\n")
        print("wrote", e["name"])


if __name__ == "__main__":
    main()
