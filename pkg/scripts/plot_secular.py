#!/usr/bin/env python3
"""Plot the secular function of an instance over its pole-free interval.

By default uses the built-in three-root example; pass an instance JSON file
to inspect your own problem.  The zero crossings with negative slope are the
candidate local-nonglobal minimizers of the convex-normalized problem.

    python scripts/plot_secular.py [--input FILE] [--out secular.png]
"""
import argparse

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lngm import (Branch, branch_interval, build_transform, corpus,
                  detect_joint_definiteness, psi_eval, read_instance,
                  spectral_decompose)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--input", help="instance JSON (default: built-in example)")
    ap.add_argument("--branch", default="psi1", choices=[b.value for b in Branch])
    ap.add_argument("--out", default="secular.png")
    args = ap.parse_args()

    inst = read_instance(args.input) if args.input else corpus()["psi-roots-eq"].instance
    det = detect_joint_definiteness(inst.A0, inst.A1)
    if not det.is_definite:
        raise SystemExit("instance is not jointly definite; nothing to plot")
    _, TP = build_transform(inst, det)
    ctx = branch_interval(spectral_decompose(TP), Branch(args.branch))
    lo, hi = ctx.pole_lo, ctx.pole_hi
    if not np.isfinite(lo):
        lo = hi - 10.0
    pad = 0.02 * (hi - lo)
    etas = np.linspace(lo + pad, hi - pad, 2000)
    values = np.array([psi_eval(ctx, float(e)) for e in etas])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    clipped = np.clip(values, -100, 100)
    ax.plot(etas, clipped, lw=1.5)
    ax.axhline(0.0, color="red", ls="--", lw=1)
    ax.axvspan(lo, ctx.U1, color="gray", alpha=0.15, label="below admissible range")
    ax.set_xlabel("eta")
    ax.set_ylabel(f"{ctx.branch.value}(eta)  (clipped to [-100, 100])")
    ax.set_title(f"secular function, admissible interval ({ctx.U1:.4g}, {ctx.U2:.4g})")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(args.out, dpi=130)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
