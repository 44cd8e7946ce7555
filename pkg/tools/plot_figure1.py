import numpy as np
import matplotlib.pyplot as plt
import argparse
import json

parser = argparse.ArgumentParser(
    description="Plot F(xi) against the level 1/S(V) from `nonlocal-momentum figure1`"
)
parser.add_argument("filename", help="JSON output of the figure1 command")
parser.add_argument("--ylim", nargs=2, type=float, default=[-6.0, 6.0])
parser.add_argument(
    "--figsize", nargs=2, type=float, default=[8, 5], help="figsize in inches"
)
parser.add_argument("--output", help="output file")
args = parser.parse_args()

with open(args.filename) as fp:
    doc = json.load(fp)

xi = np.array(doc["xi"])
F = np.array([np.nan if f is None else f for f in doc["F"]])

fig, ax = plt.subplots(figsize=args.figsize)
ax.plot(xi, F, color="k", lw=1, label="F(xi)")
for pole in doc["poles"]:
    ax.axvline(pole, color="grey", ls=":", lw=0.8)

if doc["inverse_S"] is not None:
    level = doc["inverse_S"]
    ax.axhline(level, color="tab:red", lw=1, label=f"1/S = {level:.4g}")
    crossings = np.array(doc["intersections"])
    ax.plot(crossings, np.full(crossings.shape, level), "o", color="tab:red")
else:
    # S = 0: eigenvalues are the poles of F
    ax.set_title("S(V) = 0")

V = complex(*doc["V"])
ax.set_xlabel("xi = 2 lambda / pi")
ax.set_ylabel("F")
ax.set_ylim(*args.ylim)
ax.set_xlim(xi[0], xi[-1])
ax.legend(title=f"V = {V:.4g}")
plt.tight_layout()

if args.output:
    plt.savefig(args.output)
else:
    plt.show()
