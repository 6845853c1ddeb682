"""Plot photon-number curves exported by `qkaleido curve`.

    cargo run -p qkaleido -- curve --n 4 --s 0 --out s0.csv
    cargo run -p qkaleido -- curve --n 4 --s 1 --out s1.csv
    python docs/plot_photon.py s0.csv s1.csv -o quartet.png
"""

import argparse
import csv

import matplotlib.pyplot as plt


def read_curve(path):
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        xs, ys = [], []
        for x, y in reader:
            xs.append(float(x))
            ys.append(float(y))
    return header[1], xs, ys


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv", nargs="+")
    parser.add_argument("-o", "--output", default="photon.png")
    args = parser.parse_args()

    fig, ax = plt.subplots(figsize=(6, 4))
    xmax = 0.0
    for path in args.csv:
        label, xs, ys = read_curve(path)
        ax.plot(xs, ys, label=label.replace("expectation_", ""))
        xmax = max(xmax, xs[-1])
    ax.plot([0, xmax], [0, xmax], "k:", linewidth=0.8, label="|alpha|^2")
    ax.set_xlabel("|alpha|^2")
    ax.set_ylabel("<s|N|s>")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
