#!/usr/bin/env python3
"""Quick-look plots for eval / compare / feasibility CSVs (not a tested surface)."""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path):
    with open(path) as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.startswith("#"))]
    return rows[0], rows[1:]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    header, rows = read_rows(args.csv)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if header == ["realization", "iteration", "method", "value_db"]:
        series = defaultdict(lambda: defaultdict(list))
        for r, t, m, v in rows:
            series[m][int(t)].append(float(v))
        for method, by_t in sorted(series.items()):
            ts = sorted(by_t)
            means = [sum(by_t[t]) / len(by_t[t]) for t in ts]
            if len(ts) == 1:
                ax.axhline(means[0], ls="--", lw=1, label=method)
            else:
                ax.plot(ts, means, marker=".", label=method)
        ax.set_ylabel("mean min-SNR [dB]")
    elif header == ["method", "iteration", "mean_loss", "frac_feasible"]:
        series = defaultdict(list)
        for m, t, loss, _ in rows:
            series[m].append((int(t), float(loss)))
        for method, pts in sorted(series.items()):
            pts.sort()
            ax.semilogy([t for t, _ in pts], [max(l, 1e-17) for _, l in pts], label=method)
        ax.set_ylabel("mean feasibility loss")
    else:  # eval CSV: realization, iteration, feasibility_loss, min_snr_db
        by_t = defaultdict(list)
        for _, t, _, v in rows:
            by_t[int(t)].append(float(v))
        ts = sorted(by_t)
        ax.plot(ts, [sum(by_t[t]) / len(by_t[t]) for t in ts], marker=".")
        ax.set_ylabel("mean min-SNR [dB]")
    ax.set_xlabel("iteration")
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize=8)
    out = args.out or args.csv.rsplit(".", 1)[0] + ".png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
