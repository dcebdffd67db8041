"""Measured width bifurcation at the energy crossing for equal widths and imaginary coupling."""

import argparse

import numpy as np

from ep_lab.ep_locator import eps_imaginary_coupling
from ep_lab.scenario import Affine, ComplexAffine, Grid, ScenarioConfig
from ep_lab.sweep import run_sweep


def parse_args(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--omega-i", type=float, default=0.055)
    p.add_argument("--gamma", type=float, default=-0.1, help="common full width")
    p.add_argument("--count", type=int, default=601)
    return p.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    w = args.omega_i
    # e1 = 1 - a/2, e2 = a cross at a = 2/3, the midpoint of [0, 4/3]
    cfg = ScenarioConfig(
        "loss_only", Affine(1, -0.5), Affine(0, 1), args.gamma, args.gamma, ComplexAffine(1j * w), Grid(0, 4 / 3, args.count)
    )
    res = run_sweep(cfg)
    diff = np.abs(2 * (res.half_widths[:, 0] - res.half_widths[:, 1]))
    i = int(np.argmax(diff))
    print(f"max |Gamma1 - Gamma2| = {diff[i]:.12f} at a = {res.a[i]:.12f}")
    print(f"from 2Z at e1 = e2:     4 omega_i = {4 * w:.12f}")
    print(f"quoted constant:        |Gamma1/2 - Gamma2/2| = 4 omega_i, i.e. {8 * w:.12f}")
    print(f"measured / quoted = {diff[i] / (8 * w):.6f}")
    eps = eps_imaginary_coupling(cfg.e1, cfg.e2, args.gamma, w, (0, 4 / 3))
    print("EPs at a = " + ", ".join(f"{s.params['a']:.12f}" for s in eps))


if __name__ == "__main__":
    main()
