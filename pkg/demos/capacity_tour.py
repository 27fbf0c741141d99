"""Tour of the information-side toolkit.

Walks the capacity surface C(q, v), finds the optimal composition for a
concrete search instance, and shows the psi / a_eta machinery that feeds
the adaptive upper bound.

Run:  python3 demos/capacity_tour.py
"""

import numpy as np

from searchlab import (
    bawgn_capacity,
    new_config,
    optimal_composition,
    psi,
    solve_a_eta,
)


def main():
    print("=== capacity of the binary-input AWGN channel ===")
    print(f"{'q':>6} {'v=0.125':>10} {'v=0.25':>10} {'v=0.5':>10} {'v=1.0':>10}")
    for q in (0.05, 0.1, 0.25, 0.5):
        row = [bawgn_capacity(q, v) for v in (0.125, 0.25, 0.5, 1.0)]
        print(f"{q:>6} " + " ".join(f"{c:>10.5f}" for c in row))
    print()

    # Measurement noise grows with the probed fraction, so the best
    # composition is far below 1/2 once variance is per-unit-width.
    cfg = new_config(16, 1, 0.25, 1e-4)
    q_star, c1 = optimal_composition(cfg)
    print(f"config B={cfg.B} delta={cfg.delta} sigma2={cfg.sigma2}: "
          f"M={cfg.M} cells")
    print(f"optimal composition q* = {q_star}  (probe {round(q_star * cfg.M)}"
          f" of {cfg.M} cells)")
    print(f"per-probe capacity C1 = {c1:.6f} bits")
    print()

    print("=== drift slack: psi and a_eta ===")
    print("psi(a) is the worst-case expected clipped log-likelihood step;")
    print("a_eta is the clipping level with guaranteed residual drift eta.")
    for a in (0.0, 1.0, 3.0, 7.0, 15.0):
        print(f"  psi({a:>4}) = {psi(a, cfg): .6e}")
    eta = 0.1 * c1
    res = solve_a_eta(eta, cfg)
    print(f"eta = 0.1 * C1 = {eta:.6f}  ->  a_eta = {res.value:.6f}"
          f"{'  (clamped)' if res.clamped else ''}")


if __name__ == "__main__":
    main()
