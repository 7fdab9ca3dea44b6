#!/usr/bin/env python3
"""Writes the controller networks used by the test fixtures.

The docking controller is a 2x16 tanh network fitted to a braking law that
steers the velocity towards -0.0054 * position. The benchmark controllers are
small random networks standing in for trained ones, which are not published.
Output is deterministic.
"""

import argparse
import pathlib

import numpy as np

# Braking gain of the docking controller. Larger gains feed remainder growth
# through the closed loop.
GAIN = 1.5


def fmt(x):
    x = float(x)
    if x == 0.0:
        return "0"
    return repr(x)


def write_net(path, layers):
    """layers: list of (W, b, activation)."""
    lines = [str(layers[0][0].shape[1]), str(layers[-1][0].shape[0]), str(len(layers) - 1)]
    lines += [str(W.shape[0]) for W, _, _ in layers[:-1]]
    lines += [act for _, _, act in layers]
    for W, b, _ in layers:
        for i in range(W.shape[0]):
            lines += [fmt(w) for w in W[i]]
            lines.append(fmt(b[i]))
    path.write_text("\n".join(lines) + "\n")


def docking_features(s):
    x, y, vx, vy = s.T
    vsafe = 0.2 + 0.002054 * np.sqrt(x**2 + y**2)
    return np.stack([x / 1000, y / 1000, 2 * vx, 2 * vy, np.sqrt(vx**2 + vy**2), vsafe], axis=1)


def docking_target(s):
    x, y, vx, vy = s.T
    fx = np.clip(GAIN * (-0.0054 * x - vx), -0.9, 0.9)
    fy = np.clip(GAIN * (-0.0054 * y - vy), -0.9, 0.9)
    return np.arctanh(np.stack([fx, fy], axis=1))


def fit_docking(rng, steps=4000):
    n = 4096
    s = np.stack(
        [rng.uniform(-5, 40, n), rng.uniform(-5, 40, n), rng.uniform(-0.3, 0.1, n), rng.uniform(-0.3, 0.1, n)],
        axis=1,
    )
    z, t = docking_features(s), docking_target(s)
    mu, sd = z.mean(0), z.std(0) + 1e-9
    zn = (z - mu) / sd
    sizes = [6, 16, 16, 2]
    params = []
    for a, b in zip(sizes[:-1], sizes[1:]):
        params.append([rng.normal(0, 1 / np.sqrt(a), (b, a)), np.zeros(b)])
    m = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
    v = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
    lr, b1, b2 = 3e-3, 0.9, 0.999
    for it in range(1, steps + 1):
        acts = [zn]
        for li, (W, b) in enumerate(params):
            h = acts[-1] @ W.T + b
            acts.append(np.tanh(h) if li < len(params) - 1 else h)
        g = 2 * (acts[-1] - t) / len(zn)
        for li in reversed(range(len(params))):
            W, b = params[li]
            gW, gb = g.T @ acts[li], g.sum(0)
            if li > 0:
                g = (g @ W) * (1 - acts[li] ** 2)
            for k, grad in enumerate((gW, gb)):
                m[li][k] = b1 * m[li][k] + (1 - b1) * grad
                v[li][k] = b2 * v[li][k] + (1 - b2) * grad**2
                mh = m[li][k] / (1 - b1**it)
                vh = v[li][k] / (1 - b2**it)
                params[li][k] = params[li][k] - lr * mh / (np.sqrt(vh) + 1e-8)
    # Fold the input normalization into the first layer.
    W0, b0 = params[0]
    params[0] = [W0 / sd, b0 - (W0 / sd) @ mu]
    acts = ["tanh", "tanh", "affine"]
    return [(W, b, a) for (W, b), a in zip(params, acts)]


def random_net(rng, n_in, n_out, hidden, act, scale):
    layers = []
    sizes = [n_in] + hidden + [n_out]
    for i, (a, b) in enumerate(zip(sizes[:-1], sizes[1:])):
        W = np.round(rng.normal(0, scale / np.sqrt(a), (b, a)), 6)
        bias = np.round(rng.normal(0, 0.1, b), 6)
        layers.append((W, bias, act if i < len(sizes) - 2 else "affine"))
    return layers


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir", type=pathlib.Path)
    args = ap.parse_args()
    out = args.outdir
    (out / "benchmarks").mkdir(parents=True, exist_ok=True)

    write_net(out / "docking_controller.nn", fit_docking(np.random.default_rng(7)))

    one = [(np.zeros((1, 1)), np.zeros(1), "ReLU"), (np.zeros((1, 1)), np.zeros(1), "affine")]
    write_net(out / "zero.nn", one)

    rng = np.random.default_rng(11)
    specs = {
        "b1": (2, 1, [10, 10], "sigmoid"),
        "b2": (2, 1, [10, 10], "ReLU"),
        "b3": (2, 1, [10, 10], "tanh"),
        "b4": (3, 1, [10, 10], "ReLU"),
        "b5": (3, 1, [10, 10], "sigmoid"),
        "b6": (4, 1, [10, 10], "tanh"),
    }
    for name, (n_in, n_out, hidden, act) in specs.items():
        write_net(out / "benchmarks" / f"{name}.nn", random_net(rng, n_in, n_out, hidden, act, 0.8))


if __name__ == "__main__":
    main()
