"""Time the numba kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--epoch]

Kernel timings use MNIST-sized activations of the default backbone. With
--epoch, one training epoch on 2000 MNIST-shaped synthetic images is also
timed under each backend in a fresh interpreter (the backend is fixed at
import time by EXITPRUNE_NO_NUMBA).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from exitprune import _kernels as K

# (name, batch, channels, side, kernel) for the three convolutions of the default backbone
CONV_SHAPES = [("conv1", 64, 1, 28, 3), ("conv2", 64, 8, 14, 3), ("conv3", 64, 16, 7, 3)]
POOL_SHAPES = [("pool1", 64, 8, 28), ("pool2", 64, 16, 14)]

EPOCH_SNIPPET = """
import time
import exitprune
from exitprune import exitnet as en, tensorcore as tc
from exitprune.datasets import synthetic_blobs
data = synthetic_blobs(classes=10, per_class=200, image_side=28, seed=0)
net = en.build_network(en.default_config(), 0)
opt = tc.SGD(0.05, 0.9)
en.train_epoch(net, data.subset(range(64)), opt, batch_size=64)  # warm up / compile
t = time.perf_counter()
en.train_epoch(net, data, opt, batch_size=64)
print(exitprune.BACKEND, time.perf_counter() - t)
"""


def best_of(fn, repeat):
    fn()  # compile on first call
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for name, n, c, side, k in CONV_SHAPES:
        xp = rng.normal(size=(n, c, side + 2, side + 2))
        cols = K.im2col_numpy(xp, k, 1, side, side)
        for kernel, fa, fb in (
            ("im2col", lambda: K.im2col_numpy(xp, k, 1, side, side),
             lambda: K.im2col_numba(xp, k, 1, side, side)),
            ("col2im", lambda: K.col2im_numpy(cols, n, c, side + 2, side + 2, k, 1, side, side),
             lambda: K.col2im_numba(cols, n, c, side + 2, side + 2, k, 1, side, side)),
        ):
            rows.append((f"{kernel} {name}", best_of(fa, repeat), best_of(fb, repeat)))
    for name, n, c, side in POOL_SHAPES:
        x = rng.normal(size=(n, c, side, side))
        _, idx = K.maxpool2_forward_numpy(x)
        dout = rng.normal(size=(n, c, side // 2, side // 2))
        rows.append((f"maxpool fwd {name}", best_of(lambda: K.maxpool2_forward_numpy(x), repeat),
                     best_of(lambda: K.maxpool2_forward_numba(x), repeat)))
        rows.append((f"maxpool bwd {name}",
                     best_of(lambda: K.maxpool2_backward_numpy(dout, idx, side, side), repeat),
                     best_of(lambda: K.maxpool2_backward_numba(dout, idx, side, side), repeat)))
    return rows


def epoch_time(no_numba):
    env = dict(os.environ)
    env.pop("EXITPRUNE_NO_NUMBA", None)
    if no_numba:
        env["EXITPRUNE_NO_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", EPOCH_SNIPPET], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--epoch", action="store_true", help="also time a full training epoch")
    args = parser.parse_args(argv)
    if not K.HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    print(f"{'kernel':<22}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, t_np, t_nb in kernel_rows(args.repeat):
        print(f"{name:<22}{t_np * 1e3:>10.3f}{t_nb * 1e3:>10.3f}{t_np / t_nb:>8.2f}x")
    if args.epoch:
        (_, t_nb), (_, t_np) = epoch_time(False), epoch_time(True)
        print(f"{'epoch (2000 images)':<22}{t_np * 1e3:>10.0f}{t_nb * 1e3:>10.0f}{t_np / t_nb:>8.2f}x")


if __name__ == "__main__":
    main()
