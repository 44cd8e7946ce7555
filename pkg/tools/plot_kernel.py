import numpy as np
import matplotlib.pyplot as plt
import argparse
import json
import cmocean

parser = argparse.ArgumentParser(
    description="Plot a resolvent kernel from `nonlocal-momentum kernel`"
)
parser.add_argument("filenames", nargs="+", help="JSON outputs of the kernel command")
parser.add_argument(
    "--part",
    default="abs",
    choices=["abs", "re", "im", "phase"],
    help="which part of the kernel to show",
)
parser.add_argument("--cmap", help="matplotlib colormap")
parser.add_argument("--colorbar", action="store_true", help="add colorbar")
parser.add_argument(
    "--figsize", nargs=2, type=float, default=[6, 5], help="figsize in inches"
)
parser.add_argument("--save", action="store_true", help="save to <inname>.png")
args = parser.parse_args()


def kernel_part(doc, part):
    values = np.array(doc["re"]) + 1j * np.array(doc["im"])
    if part == "re":
        return values.real, cmocean.cm.balance
    if part == "im":
        return values.imag, cmocean.cm.balance
    if part == "phase":
        return np.angle(values), cmocean.cm.phase
    return np.absolute(values), cmocean.cm.deep


def plot(filename):
    with open(filename) as fp:
        doc = json.load(fp)
    data, cmap = kernel_part(doc, args.part)
    if args.cmap:
        cmap = args.cmap
    x, y = np.array(doc["x"]), np.array(doc["y"])

    if args.part in ["re", "im"]:
        vmax = np.absolute(data).max()
        vmin = -vmax
    else:
        vmax, vmin = data.max(), data.min()

    fig, ax = plt.subplots(figsize=args.figsize)
    img = ax.imshow(
        data.T,
        origin="lower",
        extent=[x[0], x[-1], y[0], y[-1]],
        cmap=cmap,
        vmax=vmax,
        vmin=vmin,
    )
    if args.colorbar:
        plt.colorbar(img)
    z = complex(*doc["z"])
    ax.set_title(f"{doc['provenance']}, z = {z:.3g}, rank {doc['correction_rank']}")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    plt.tight_layout()

    if args.save:
        plt.savefig(filename + ".png")
    else:
        plt.show()
    plt.close()


if __name__ == "__main__":
    for filename in args.filenames:
        print(filename)
        plot(filename)
