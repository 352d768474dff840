"""Rate-outage probability vs density and transmission capacity vs alpha.

Documentation artifact. Top panel: q(lambda) for two target rates; the
higher target hits the layering ceiling at a finite density, where the
curve jumps to 1. Bottom panel: transmission capacity c(eps) against the
path-loss exponent, nondecreasing in alpha and decreasing in the target
rate.
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from bcastnet import NetworkParams, capacity


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--epsilon", type=float, default=0.05)
    parser.add_argument("--out", default="capacity.png")
    args = parser.parse_args()

    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.4, 7.0))

    lam_grid = np.geomspace(1e-3, 1.0, 300)
    for xi, style in ((0.1, "C0-"), (1.0, "C1--")):
        q_vals = [capacity.rate_outage(
            NetworkParams(density=float(lam), r0=1.0, alpha=4.0,
                          power=1.0, noise=0.0), xi)
            for lam in lam_grid]
        top.plot(lam_grid, q_vals, style, label=f"target rate {xi:g}")
    top.axhline(args.epsilon, color="k", lw=0.8, ls=":",
                label=f"eps = {args.epsilon:g}")
    top.set_xscale("log")
    top.set_xlabel("transmitter density")
    top.set_ylabel("rate-outage probability")
    top.set_title("Rate outage vs density, alpha = 4")
    top.legend()

    alpha_grid = np.linspace(2.5, 6.0, 36)
    for xi, style in ((0.1, "C0-"), (1.0, "C1--")):
        c_vals = [capacity.transmission_capacity(
            capacity.CapacityQuery(xi=xi, epsilon=args.epsilon, r0=1.0,
                                   alpha=float(alpha), power=1.0)).c
            for alpha in alpha_grid]
        bottom.plot(alpha_grid, c_vals, style, label=f"target rate {xi:g}")
    bottom.set_xlabel("path-loss exponent")
    bottom.set_ylabel("transmission capacity (nats per unit area)")
    bottom.set_title(f"Capacity vs alpha, eps = {args.epsilon:g}")
    bottom.legend()

    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
