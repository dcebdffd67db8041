"""Eigenvector diagnostics on the approach to the fig1_left EP."""

import argparse

import numpy as np

from ep_lab.eigensystem import coalescence_metric, eigenvectors, norm_ratio
from ep_lab.ep_locator import ep_newton
from ep_lab.scenario import preset
from ep_lab.spectral import discriminant


def parse_args(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--min-exp", type=float, default=-2.0)
    p.add_argument("--max-exp", type=float, default=-9.0)
    p.add_argument("--steps", type=int, default=8)
    return p.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    cfg = preset("fig1_left")
    sol = ep_newton(cfg)
    a_ep = sol.params["a"]
    print(f"EP from Newton: a = {a_ep!r}, omega_r = {sol.params['omega_r']!r}, |Z| = {sol.residual:.3e}")
    print(f"{'distance':>10} {'|Z|':>11} {'|r_1|':>10} {'v^dag v':>10} {'coalesc':>9} {'v2/v1':>22}")
    for d in np.logspace(args.min_exp, args.max_exp, args.steps):
        sys = cfg.system_at(a_ep + d)
        pair = eigenvectors(sys)
        v = pair.v1
        ratio = v[1] / v[0]
        print(
            f"{d:10.1e} {abs(discriminant(sys)):11.3e} {abs(pair.rigidity1):10.3e} "
            f"{norm_ratio(v):10.1f} {coalescence_metric(pair):9.6f} {ratio.real:+10.6f}{ratio.imag:+10.6f}i"
        )
    # v^dagger v grows like distance**(-1/2); the 1e3 mark needs a distance near 4e-8
    res = cfg.grid()
    i = int(np.argmin(np.abs(res - 2 / 3)))
    pair = eigenvectors(cfg.system_at(res[i]))
    print(
        f"nearest 601-grid point a = {res[i]:.6f}: coalescence {coalescence_metric(pair):.4f}, "
        f"|r| = {abs(pair.rigidity1):.4f}"
    )


if __name__ == "__main__":
    main()
