#!/usr/bin/env python3
"""Plot a series CSV produced by `jdhedge simulate` or `jdhedge hedge`.

Usage: plot_series.py series.csv [out.png]
"""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> None:
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    path = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else path.rsplit(".", 1)[0] + ".png"
    df = pd.read_csv(path)

    fig, axes = plt.subplots(4, 1, figsize=(10, 11), sharex=True)

    axes[0].plot(df.t, df.s, label="jump-diffusion price S", lw=1.2)
    axes[0].plot(df.t, df.s_bs, label="shadow gBm price S_BS", lw=1.0, ls="--")
    axes[0].set_ylabel("price")
    axes[0].legend(loc="best")

    axes[1].plot(df.t, df.bs_price, label="call value on shadow", lw=1.0)
    axes[1].plot(df.t, df.v_pi_n, label="discrete strategy value", lw=1.0)
    axes[1].set_ylabel("value")
    axes[1].legend(loc="best")

    axes[2].step(df.t, df.pi_n, where="post", label="discrete holding pi_N")
    axes[2].plot(df.t, df.bs_delta, label="continuous hedge ratio", lw=0.8, ls="--")
    axes[2].set_ylabel("holding")
    axes[2].legend(loc="best")

    axes[3].plot(df.t, df.w, label="Brownian path W", lw=0.8)
    axes[3].step(df.t, df.n_jumps, where="post", label="jump count N", color="tab:red")
    axes[3].set_ylabel("noise / jumps")
    axes[3].set_xlabel("months")
    axes[3].legend(loc="best")

    fig.tight_layout()
    fig.savefig(out, dpi=130)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
