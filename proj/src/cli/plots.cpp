#include "abcd/cli/commands.hpp"

namespace abcd::cli {

// Scripts are run from inside the output directory: `python3 plot_region.py`.

std::string plot_script_region() {
    return R"(import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open("atlas_region.csv")))
adm = [(float(r["nu"]), float(r["b"])) for r in rows if r["admissible"] == "1" and r["dispersion_like"] == "0"]
disp = [(float(r["nu"]), float(r["b"])) for r in rows if r["dispersion_like"] == "1"]
fig, ax = plt.subplots(figsize=(6, 5))
if adm:
    ax.scatter(*zip(*adm), s=1, c="0.7", label="admissible")
if disp:
    ax.scatter(*zip(*disp), s=1, c="tab:blue", label="dispersion-like")
ax.axhline(2 / 9, color="k", lw=0.6, ls="--")
ax.set_xlabel("nu")
ax.set_ylabel("b")
ax.legend(markerscale=8)
fig.tight_layout()
fig.savefig("region.png", dpi=150)
)";
}

std::string plot_script_bands() {
    return R"(import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = [r for r in csv.DictReader(open("atlas_bands.csv")) if r["a"] == r["c"]]
a = [float(r["a"]) for r in rows]
fig, ax = plt.subplots(figsize=(6, 4))
for lo, hi, name in (("A2_lo", "A2_hi", "A2"), ("A3_lo", "A3_hi", "A3")):
    ax.fill_between(a, [float(r[lo]) for r in rows], [float(r[hi]) for r in rows], alpha=0.3, label=name)
ax.fill_between(a, -0.5, 0.5, alpha=0.2, label="A4")
ax.plot(a, [float(r["intersect_lo"]) for r in rows], "k-", lw=0.8)
ax.plot(a, [float(r["intersect_hi"]) for r in rows], "k-", lw=0.8)
ax.set_xlabel("a = c")
ax.set_ylabel("beta - alpha")
ax.legend()
fig.tight_layout()
fig.savefig("bands.png", dpi=150)
)";
}

std::string plot_script_diagnostics() {
    return R"(import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open("diagnostics.csv")))
t = [float(r["t"]) for r in rows]
col = lambda k: [float(r[k]) for r in rows]
fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
axes[0, 0].plot(t, col("E"), label="E")
axes[0, 0].plot(t, col("P"), label="P")
axes[0, 0].legend()
axes[0, 1].plot(t, col("H"), label="H")
axes[0, 1].plot(t, col("E_loc"), label="E_loc")
axes[0, 1].legend()
axes[1, 0].plot(t, col("Q"), label="Q")
axes[1, 0].plot(t, col("SQ"), label="SQ")
axes[1, 0].plot(t, col("NQ"), label="NQ")
axes[1, 0].legend()
axes[1, 1].semilogy(t, col("localH1"), label="local H1")
axes[1, 1].legend()
for ax in axes[1]:
    ax.set_xlabel("t")
fig.tight_layout()
fig.savefig("diagnostics.png", dpi=150)
)";
}

std::string plot_script_dispersion() {
    return R"(import csv
from collections import defaultdict
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

series = defaultdict(list)
for r in csv.DictReader(open("dispersion_table.csv")):
    series[r["label"]].append((float(r["k"]), float(r["omega"]), float(r["group_velocity"])))
fig, (a1, a2) = plt.subplots(1, 2, figsize=(10, 4))
for label, pts in series.items():
    k, w, g = zip(*pts)
    a1.plot(k, w, label=label)
    a2.plot(k, g, label=label)
a1.set_xlabel("k")
a1.set_ylabel("omega")
a2.set_xlabel("k")
a2.set_ylabel("|w'(k)|")
a2.legend()
fig.tight_layout()
fig.savefig("dispersion.png", dpi=150)
)";
}

}  // namespace abcd::cli
