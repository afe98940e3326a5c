"""Numba kernels vs their numpy fallbacks.

Times each hot kernel in both variants on the shapes the MNIST MLP and a small
CNN actually hit, then runs a few training steps in two subprocesses, one with
``HBNN_DISABLE_NUMBA=1``, to show the end-to-end effect.

    python benchmarks/bench_kernels.py [--repeat 20] [--steps 20]
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from hbnn import kernels
from hbnn._jit import USE_NUMBA


def best_of(fn, repeat):
    fn()  # warm-up (triggers compilation)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_cases(rng):
    acts = np.where(rng.random((256, 784)) < 0.5, -1, 1).astype(np.int8)
    wts = np.where(rng.random((256, 784)) < 0.5, -1, 1).astype(np.int8)
    pa, pw = kernels.pack_rows_np(acts), kernels.pack_rows_np(wts)
    mask = kernels.tail_mask(784)
    x = rng.standard_normal((64, 16, 14, 14))
    cols = kernels.im2col_np(x, 3, 1, 1)
    return {
        "pack_rows 256x784": (lambda: kernels.pack_rows_np(acts), lambda: kernels.pack_rows_nb(acts)),
        "xnor_gemm 256x256x784": (lambda: kernels.xnor_gemm_np(pa, pw, 784, mask),
                                  lambda: kernels.xnor_gemm_nb(pa, pw, 784, mask)),
        "im2col 64x16x14x14 k3": (lambda: kernels.im2col_np(x, 3, 1, 1), lambda: kernels.im2col_nb(x, 3, 1, 1)),
        "col2im 64x16x14x14 k3": (lambda: kernels.col2im_np(cols, x.shape, 3, 1, 1),
                                  lambda: kernels.col2im_nb(cols, *x.shape, 3, 1, 1)),
    }


STEP_SCRIPT = """
import json, sys, time
import numpy as np
from hbnn import data, nn, trainer as tr
arch, steps, packed, batch = sys.argv[1], int(sys.argv[2]), sys.argv[3] == "1", int(sys.argv[4])
shape = tuple(nn.load_arch(arch)["input_shape"])
ds = data.gen_synthetic("gaussian-blobs", 8 * batch, 0, n_features=int(np.prod(shape)), n_classes=10)
ds.images = ds.images.reshape((-1,) + shape)
cfg = tr.TrainConfig(batch_size=batch, max_steps=steps + 2, selection_period=100)
model = tr.build(cfg, arch, packed=packed)
tr.fit(model, ds, None, cfg, stop_at=2)
t = time.perf_counter()
tr.fit(model, ds, None, cfg)
print(json.dumps({"per_step": (time.perf_counter() - t) / steps}))
"""

def step_time(disable, arch, steps, packed, batch):
    env = dict(os.environ, HBNN_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", STEP_SCRIPT, arch, str(steps), "1" if packed else "0", str(batch)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])["per_step"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--skip-training", action="store_true")
    args = ap.parse_args(argv)

    if not USE_NUMBA:
        print("numba is disabled in this process; kernel timings compare two numpy paths")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<26} {'numpy (ms)':>11} {'numba (ms)':>11} {'speedup':>8}")
    for name, (f_np, f_nb) in kernel_cases(rng).items():
        t_np, t_nb = best_of(f_np, args.repeat), best_of(f_nb, args.repeat)
        print(f"{name:<26} {1e3 * t_np:>11.3f} {1e3 * t_nb:>11.3f} {t_np / t_nb:>7.1f}x")

    if args.skip_training:
        return 0
    print(f"\n{'training step':<26} {'numpy (ms)':>11} {'numba (ms)':>11} {'speedup':>8}")
    for arch, packed, batch in (("mlp", False, 256), ("mlp", True, 256), ("cnn-small", False, 32)):
        label = f"{arch}{' packed' if packed else ''} (batch {batch})"
        t_np = step_time(True, arch, args.steps, packed, batch)
        t_nb = step_time(False, arch, args.steps, packed, batch)
        print(f"{label:<26} {1e3 * t_np:>11.1f} {1e3 * t_nb:>11.1f} {t_np / t_nb:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
